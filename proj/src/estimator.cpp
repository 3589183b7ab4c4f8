#include "aoi/estimator.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

constexpr int kFixedStats = 4;  // count, A, A^2, A^3

std::size_t segment_count(const SamplePath& path) {
    if (path.betas.size() < 2) throw InsufficientPath("need at least two informative departures");
    return path.betas.size() - 1;
}

// Sum over points a_i (weight w_i) of w_i (x - a_i)^+ at every grid x.
class RampSum {
public:
    explicit RampSum(const std::vector<double>& grid)
        : grid_(grid), cnt_(grid.size() + 1, 0.0), sum_(grid.size() + 1, 0.0) {}

    void add(double a, double w) {
        const std::size_t k = std::lower_bound(grid_.begin(), grid_.end(), a) - grid_.begin();
        cnt_[k] += w;
        sum_[k] += w * a;
    }

    std::vector<double> values(double scale) const {
        std::vector<double> out(grid_.size());
        double c = 0.0;
        double s = 0.0;
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            c += cnt_[j];
            s += sum_[j];
            out[j] = (c * grid_[j] - s) * scale;
        }
        return out;
    }

private:
    const std::vector<double>& grid_;
    std::vector<double> cnt_;
    std::vector<double> sum_;
};

double lst_segment(double s, double x, double ap) {
    // (e^{-s x} - e^{-s ap}) / s = e^{-s x} (1 - e^{-s (ap - x)}) / s
    return std::exp(-s * x) * -std::expm1(-s * (ap - x)) / s;
}

}  // namespace

Estimate BatchSums::ratio(std::size_t stat) const {
    const std::size_t b = time.size();
    double num_total = 0.0;
    double den_total = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        num_total += num[stat][i];
        den_total += time[i];
    }
    Estimate e;
    e.value = num_total / den_total;
    if (b < 2) return e;
    double ss = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
        const double r = num[stat][i] - e.value * time[i];
        ss += r * r;
    }
    e.se = std::sqrt(ss * b / (b - 1.0)) / den_total;
    return e;
}

std::vector<double> default_x_grid(const SamplePath& path) {
    if (path.peaks.empty()) throw InsufficientPath("empty path");
    std::vector<double> p = path.peaks;
    const std::size_t k = std::min(p.size() - 1, static_cast<std::size_t>(0.999 * p.size()));
    std::nth_element(p.begin(), p.begin() + k, p.end());
    const double top = p[k];
    std::vector<double> grid(512);
    for (int i = 0; i < 512; ++i) grid[i] = top * i / 511.0;
    return grid;
}

AoiMoments aoi_moments(const SamplePath& path) {
    const std::size_t m = segment_count(path);
    const std::size_t n = m + 1;
    const double T = path.horizon;
    AoiMoments out;
    std::array<double, 3> seg{}, peak{}, delay{};
    double ap_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = path.delays[i];
        const double ap = path.peaks[i];
        ap_max = std::max(ap_max, ap);
        double xp = x, ap_p = ap;
        for (int k = 0; k < 3; ++k) {
            xp *= x;
            ap_p *= ap;
            delay[k] += xp;
            peak[k] += ap_p;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        const double x = path.delays[i];
        const double ap = path.peaks[i + 1];
        double xp = x, ap_p = ap;
        for (int k = 0; k < 3; ++k) {
            xp *= x;
            ap_p *= ap;
            seg[k] += ap_p - xp;
        }
    }
    const double lambda_hat = static_cast<double>(m) / T;
    double ap_pow = ap_max;
    for (int k = 0; k < 3; ++k) {
        ap_pow *= ap_max;
        out.direct[k] = seg[k] / ((k + 2) * T);
        out.from_peaks[k] = lambda_hat * (peak[k] - delay[k]) / (n * (k + 2.0));
        out.gap_bound[k] = 2.0 * ap_pow / ((k + 2) * T);
    }
    return out;
}

AoiEmpirical aoi_time_average(const SamplePath& path, const EstimatorOptions& opt) {
    const std::size_t m = segment_count(path);
    const std::size_t n = m + 1;
    const double T = path.horizon;
    if (!(T > 0.0)) throw InsufficientPath("zero-length horizon");
    for (double s : opt.s_grid)
        if (!(s > 0.0)) throw InvalidParameter("LST grid points must be positive");

    AoiEmpirical e;
    e.horizon = T;
    e.segments = m;
    e.nonstationary = path.nonstationary;
    e.cdf_x = opt.x_grid.empty() ? default_x_grid(path) : opt.x_grid;
    if (!std::is_sorted(e.cdf_x.begin(), e.cdf_x.end()))
        throw InvalidParameter("x grid must be ascending");

    const std::size_t ns = opt.s_grid.size();
    const std::size_t nb = std::max<std::size_t>(1, std::min<std::size_t>(opt.batches, m));
    auto& bs = e.batches;
    bs.time.assign(nb, 0.0);
    bs.num.assign(kFixedStats + ns, std::vector<double>(nb, 0.0));

    RampSum direct(e.cdf_x);
    for (std::size_t i = 0; i < m; ++i) {
        const double x = path.delays[i];
        const double ap = path.peaks[i + 1];
        const std::size_t b = i * nb / m;
        bs.time[b] += path.betas[i + 1] - path.betas[i];
        bs.num[0][b] += 1.0;
        double xp = x, ap_p = ap;
        for (int k = 0; k < 3; ++k) {
            xp *= x;
            ap_p *= ap;
            bs.num[1 + k][b] += (ap_p - xp) / (k + 2);
        }
        for (std::size_t j = 0; j < ns; ++j) bs.num[kFixedStats + j][b] += lst_segment(opt.s_grid[j], x, ap);
        direct.add(x, 1.0);
        direct.add(ap, -1.0);
    }
    e.cdf = direct.values(1.0 / T);

    RampSum lemma(e.cdf_x);
    double peak_sum = 0.0, delay_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lemma.add(path.delays[i], 1.0);
        lemma.add(path.peaks[i], -1.0);
        peak_sum += path.peaks[i];
        delay_sum += path.delays[i];
        e.peak_max = std::max(e.peak_max, path.peaks[i]);
    }
    const double lambda_hat = static_cast<double>(m) / T;
    e.cdf_lemma2 = lemma.values(lambda_hat / n);
    e.cdf_gap_bound = 2.0 * e.peak_max / T;
    e.peak_mean = peak_sum / n;
    e.delay_mean = delay_sum / n;

    const AoiMoments mo = aoi_moments(path);
    e.moments_from_peaks = mo.from_peaks;
    e.moment_gap_bound = mo.gap_bound;

    e.lambda_dag = bs.ratio(0);
    e.mean = bs.ratio(1);
    e.second_moment = bs.ratio(2);
    e.third_moment = bs.ratio(3);
    for (std::size_t j = 0; j < ns; ++j) {
        const Estimate v = bs.ratio(kFixedStats + j);
        e.lst_grid.push_back({opt.s_grid[j], v.value, v.se});
    }
    return e;
}

std::vector<LstPoint> aoi_lst(const SamplePath& path, const std::vector<double>& s_grid, int batches) {
    EstimatorOptions opt;
    opt.s_grid = s_grid;
    opt.x_grid = {0.0};
    opt.batches = batches;
    return aoi_time_average(path, opt).lst_grid;
}

double penalty_integral(const SamplePath& path, const std::function<double(double)>& f) {
    const std::size_t m = segment_count(path);
    using Gauss = boost::math::quadrature::gauss<double, 32>;
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += Gauss::integrate(f, path.delays[i], path.peaks[i + 1]);
    return total / path.horizon;
}

AoiEmpirical merge(const std::vector<AoiEmpirical>& parts) {
    if (parts.empty()) throw InvalidParameter("nothing to merge");
    AoiEmpirical out = parts.front();
    if (parts.size() == 1) return out;
    const std::size_t stats = out.batches.num.size();
    double T = 0.0;
    for (const auto& p : parts) {
        if (p.cdf_x != out.cdf_x || p.lst_grid.size() != out.lst_grid.size() ||
            p.batches.num.size() != stats)
            throw InvalidParameter("cannot merge estimates on different grids");
        T += p.horizon;
    }
    out.batches.time.clear();
    for (auto& v : out.batches.num) v.clear();
    std::fill(out.cdf.begin(), out.cdf.end(), 0.0);
    std::fill(out.cdf_lemma2.begin(), out.cdf_lemma2.end(), 0.0);
    out.moments_from_peaks = {};
    out.moment_gap_bound = {};
    out.cdf_gap_bound = 0.0;
    out.peak_mean = out.delay_mean = out.peak_max = 0.0;
    out.segments = 0;
    out.nonstationary = false;
    for (const auto& p : parts) {
        const double w = p.horizon / T;
        out.batches.time.insert(out.batches.time.end(), p.batches.time.begin(), p.batches.time.end());
        for (std::size_t k = 0; k < stats; ++k)
            out.batches.num[k].insert(out.batches.num[k].end(), p.batches.num[k].begin(),
                                      p.batches.num[k].end());
        for (std::size_t j = 0; j < out.cdf.size(); ++j) {
            out.cdf[j] += w * p.cdf[j];
            out.cdf_lemma2[j] += w * p.cdf_lemma2[j];
        }
        for (int k = 0; k < 3; ++k) {
            out.moments_from_peaks[k] += w * p.moments_from_peaks[k];
            out.moment_gap_bound[k] += w * p.moment_gap_bound[k];
        }
        out.cdf_gap_bound += w * p.cdf_gap_bound;
        out.peak_mean += w * p.peak_mean;
        out.delay_mean += w * p.delay_mean;
        out.peak_max = std::max(out.peak_max, p.peak_max);
        out.segments += p.segments;
        out.nonstationary = out.nonstationary || p.nonstationary;
    }
    out.horizon = T;
    const auto& bs = out.batches;
    out.lambda_dag = bs.ratio(0);
    out.mean = bs.ratio(1);
    out.second_moment = bs.ratio(2);
    out.third_moment = bs.ratio(3);
    for (std::size_t j = 0; j < out.lst_grid.size(); ++j) {
        const Estimate v = bs.ratio(kFixedStats + j);
        out.lst_grid[j].value = v.value;
        out.lst_grid[j].se = v.se;
    }
    return out;
}

void write_empirical_csv(std::ostream& os, const AoiEmpirical& e) {
    char buf[256];
    os << "section,key,value,std_err\n";
    auto row = [&](const char* key, double v, double se) {
        std::snprintf(buf, sizeof buf, "moments,%s,%.12g,%.12g\n", key, v, se);
        os << buf;
    };
    row("mean", e.mean.value, e.mean.se);
    row("second_moment", e.second_moment.value, e.second_moment.se);
    row("third_moment", e.third_moment.value, e.third_moment.se);
    row("lambda_dag", e.lambda_dag.value, e.lambda_dag.se);
    row("peak_mean", e.peak_mean, 0.0);
    row("delay_mean", e.delay_mean, 0.0);
    row("horizon", e.horizon, 0.0);
    for (const auto& p : e.lst_grid) {
        std::snprintf(buf, sizeof buf, "lst,%.12g,%.12g,%.12g\n", p.s, p.value, p.se);
        os << buf;
    }
    for (std::size_t j = 0; j < e.cdf_x.size(); ++j) {
        std::snprintf(buf, sizeof buf, "cdf,%.12g,%.12g,\n", e.cdf_x[j], e.cdf[j]);
        os << buf;
    }
}

}  // namespace aoi
