#include "aoi/analytic_core.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "aoi/errors.hpp"
#include "aoi/model.hpp"
#include "aoi/quadrature.hpp"

namespace aoi {

namespace {

double traffic(const DistSpec& g, const DistSpec& h) { return mean(h) / mean(g); }

void require_stable(double rho) {
    if (!(rho < 1.0)) throw Unstable("rho >= 1");
}

// E[(H - y)^+ ^2] for one H, closed form per family.
double positive_part_sq_at(const DistSpec& h, double y) {
    if (h.is_deterministic()) {
        const double d = h.as<Deterministic>().value - y;
        return d > 0.0 ? d * d : 0.0;
    }
    if (std::isinf(y)) return 0.0;
    if (y <= 0.0) return moment(h, 2) - 2.0 * y * mean(h) + y * y;
    auto gamma_term = [y](double k, double r) {
        using boost::math::gamma_q;
        const double m2 = k * (k + 1.0) / (r * r) * gamma_q(k + 2.0, r * y);
        const double m1 = k / r * gamma_q(k + 1.0, r * y);
        return m2 - 2.0 * y * m1 + y * y * gamma_q(k, r * y);
    };
    if (h.is<Gamma>()) return gamma_term(h.as<Gamma>().shape, h.as<Gamma>().rate);
    if (h.is<Exponential>()) {
        const double r = h.as<Exponential>().rate;
        return 2.0 * std::exp(-r * y) / (r * r);
    }
    const auto& x = h.as<HyperExp2>();
    return 2.0 * (x.p1 * std::exp(-x.rate1 * y) / (x.rate1 * x.rate1) +
                  x.p2 * std::exp(-x.rate2 * y) / (x.rate2 * x.rate2));
}

double against_exp_arrivals(const DistSpec& h, double lambda) {
    return moment(h, 2) - 2.0 * mean(h) / lambda + 2.0 * one_minus_lst(h, lambda) / (lambda * lambda);
}

}  // namespace

std::optional<double> AoiAnalytic::sd() const {
    if (!second_moment) return std::nullopt;
    return std::sqrt(std::max(0.0, *second_moment - mean * mean));
}

double taylor_lst(double s, double m1, const std::optional<double>& m2) {
    double v = 1.0 - m1 * s;
    if (m2) v += *m2 * s * s / 2.0;
    return v;
}

AoiAnalytic general_aoi(const DelayPeakPair& dp) {
    const double gap = dp.apeak_moments[0] - dp.d_moments[0];
    if (!(gap > 0.0)) throw DegenerateThroughput("E[A_peak] <= E[D]");
    AoiAnalytic out;
    out.lambda_dag = 1.0 / gap;
    out.mean = out.lambda_dag * (dp.apeak_moments[1] - dp.d_moments[1]) / 2.0;
    const double m2 = out.lambda_dag * (dp.apeak_moments[2] - dp.d_moments[2]) / 3.0;
    if (std::isfinite(m2)) out.second_moment = m2;
    out.lst = [d = dp.d_lst, a = dp.apeak_lst, ld = out.lambda_dag, m1 = out.mean,
               sm = out.second_moment](double s) {
        if (s < kTaylorCutoff) return taylor_lst(s, m1, sm);
        return ld * (d(s) - a(s)) / s;
    };
    return out;
}

double solve_gamma(const DistSpec& g, double mu) {
    if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
    require_stable(1.0 / (mean(g) * mu));
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (lst(g, mu - mu * mid) - mid > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

Bounds fcfs_mean_bounds(const DistSpec& g, const DistSpec& h, double mean_delay) {
    require_stable(traffic(g, h));
    const double eg = mean(g);
    const double residual = (1.0 + scv(g)) / 2.0 * eg;
    return {mean_delay * prob_at_least(g, eg) + residual, mean_delay + residual};
}

Bounds kingman_delay_bounds(const DistSpec& g, const DistSpec& h) {
    reject_dd(g, h);
    const double rho = traffic(g, h);
    require_stable(rho);
    const double eg = mean(g);
    const double eh = mean(h);
    const double upper =
        eh + eg / (2.0 * (1.0 - rho)) * (rho * (2.0 - rho) * scv(g) + rho * rho * scv(h));
    const double lower = eh + expected_positive_part_sq(h, g) / (2.0 * (eg - eh));
    return {lower, upper};
}

double expected_positive_part_sq(const DistSpec& h, const DistSpec& g) {
    if (g.is<Exponential>()) return against_exp_arrivals(h, g.as<Exponential>().rate);
    if (g.is<HyperExp2>()) {
        const auto& x = g.as<HyperExp2>();
        return x.p1 * against_exp_arrivals(h, x.rate1) + x.p2 * against_exp_arrivals(h, x.rate2);
    }
    if (h.is<Exponential>()) {
        const double mu = h.as<Exponential>().rate;
        return 2.0 * lst(g, mu) / (mu * mu);
    }
    if (h.is<HyperExp2>()) {
        const auto& x = h.as<HyperExp2>();
        return 2.0 * (x.p1 * lst(g, x.rate1) / (x.rate1 * x.rate1) +
                      x.p2 * lst(g, x.rate2) / (x.rate2 * x.rate2));
    }
    if (g.is_deterministic()) return positive_part_sq_at(h, g.as<Deterministic>().value);
    // G is gamma: average over its quantile function.
    auto f = [&](double u) {
        if (u <= 0.0) return positive_part_sq_at(h, 0.0);
        if (u >= 1.0) return 0.0;
        return positive_part_sq_at(h, quantile(g, u));
    };
    return adaptive_simpson(f, 0.0, 1.0, 1e-10);
}

double second_moment_from_lst(const ScalarFn& a, double m1) {
    constexpr int kLevels = 5;
    const double h = 0.02 / m1;
    std::vector<double> x(kLevels), t(kLevels);
    for (int k = 0; k < kLevels; ++k) {
        const double s = h / std::ldexp(1.0, k);
        x[k] = s;
        t[k] = 2.0 * (a(s) - 1.0 + m1 * s) / (s * s);
    }
    // Neville's scheme evaluated at s = 0.
    for (int level = 1; level < kLevels; ++level)
        for (int k = kLevels - 1; k >= level; --k)
            t[k] = (x[k - level] * t[k] - x[k] * t[k - 1]) / (x[k - level] - x[k]);
    return t[kLevels - 1];
}

}  // namespace aoi
