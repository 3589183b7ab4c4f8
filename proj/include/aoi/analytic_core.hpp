#pragma once

#include <array>
#include <functional>
#include <optional>

#include "aoi/distributions.hpp"

namespace aoi {

using ScalarFn = std::function<double(double)>;

/// Stationary AoI of one model: LST, first two moments, optional CDF and
/// informative departure rate.
struct AoiAnalytic {
    ScalarFn lst;
    double mean = 0.0;
    std::optional<double> second_moment;
    ScalarFn cdf;  // empty when no closed form is known
    double lambda_dag = 0.0;

    bool has_cdf() const { return static_cast<bool>(cdf); }
    std::optional<double> sd() const;
};

/// Delay D and peak AoI of informative packets. Third moments may be NaN,
/// in which case the AoI second moment is left unset.
struct DelayPeakPair {
    ScalarFn d_lst;
    ScalarFn apeak_lst;
    std::array<double, 3> d_moments{};
    std::array<double, 3> apeak_moments{};
};

AoiAnalytic general_aoi(const DelayPeakPair& dp);

// Below this s the LST is evaluated from its moment expansion.
inline constexpr double kTaylorCutoff = 1e-4;

double taylor_lst(double s, double mean, const std::optional<double>& m2);

// Root in (0,1) of x = g*(mu - mu x). Throws Unstable if rho >= 1.
double solve_gamma(const DistSpec& g, double mu);

struct Bounds {
    double lower;
    double upper;
};

// Mean-AoI bracket for the FCFS GI/GI/1 queue given its mean delay.
Bounds fcfs_mean_bounds(const DistSpec& g, const DistSpec& h, double mean_delay);

// Mean-delay bracket for the FCFS GI/GI/1 queue from G and H alone.
Bounds kingman_delay_bounds(const DistSpec& g, const DistSpec& h);

// E[max(0, H - G)^2] for independent H and G.
double expected_positive_part_sq(const DistSpec& h, const DistSpec& g);

// E[A^2] of a LST with known mean, by Richardson extrapolation of
// 2 (a(s) - 1 + m1 s) / s^2 towards s = 0.
double second_moment_from_lst(const ScalarFn& lst, double mean);

}  // namespace aoi
