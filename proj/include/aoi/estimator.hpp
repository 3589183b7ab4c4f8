#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "aoi/simulator.hpp"

namespace aoi {

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

struct LstPoint {
    double s = 0.0;
    double value = 0.0;
    double se = 0.0;
};

struct EstimatorOptions {
    std::vector<double> s_grid;  // points with s > 0
    std::vector<double> x_grid;  // ascending; empty selects the default grid
    int batches = 32;
};

/// Per-batch numerators and elapsed time; the unit that replications pool.
struct BatchSums {
    std::vector<double> time;
    std::vector<std::vector<double>> num;  // num[stat][batch]

    Estimate ratio(std::size_t stat) const;
};

/// Moments of the AoI from one path, computed two ways: time integrals of
/// A_t over complete segments, and the peak/delay power sums scaled by the
/// estimated informative rate.
struct AoiMoments {
    std::array<double, 3> direct{};
    std::array<double, 3> from_peaks{};
    std::array<double, 3> gap_bound{};  // 2 max(A_peak)^(k+1) / ((k+1) T)
};

struct AoiEmpirical {
    Estimate mean;
    Estimate second_moment;
    Estimate third_moment;
    Estimate lambda_dag;
    std::array<double, 3> moments_from_peaks{};
    std::array<double, 3> moment_gap_bound{};
    std::vector<LstPoint> lst_grid;
    std::vector<double> cdf_x;
    std::vector<double> cdf;         // time average of 1{A_t <= x}
    std::vector<double> cdf_lemma2;  // from the delay and peak frequency distributions
    double cdf_gap_bound = 0.0;      // 2 max(A_peak) / T
    double peak_mean = 0.0;
    double delay_mean = 0.0;
    double peak_max = 0.0;
    double horizon = 0.0;
    std::uint64_t segments = 0;
    bool nonstationary = false;
    BatchSums batches;  // stats: count, A, A^2, A^3, then one per s_grid point
};

// 512-point grid on [0, 99.9th percentile of the peaks].
std::vector<double> default_x_grid(const SamplePath& path);

AoiEmpirical aoi_time_average(const SamplePath& path, const EstimatorOptions& opt = {});
AoiMoments aoi_moments(const SamplePath& path);
std::vector<LstPoint> aoi_lst(const SamplePath& path, const std::vector<double>& s_grid,
                              int batches = 32);

// Time average of f(A_t); f nondecreasing with f(0) = 0.
double penalty_integral(const SamplePath& path, const std::function<double(double)>& f);

// Pools replications: batches are concatenated, CDFs and the peak-based
// moments are averaged with weights T. All inputs must share their grids.
AoiEmpirical merge(const std::vector<AoiEmpirical>& parts);

// CSV sections: a moments row, then the LST grid, then the CDF grid.
void write_empirical_csv(std::ostream& os, const AoiEmpirical& e);

}  // namespace aoi
