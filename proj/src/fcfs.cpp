#include "aoi/fcfs.hpp"

#include <algorithm>
#include <cmath>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

void require_stable(double rho) {
    if (!(rho < 1.0)) throw Unstable("FCFS needs rho < 1");
}

}  // namespace

double fcfs_mg1_delay_lst(const DistSpec& h, double lambda, double s) {
    const double rho = lambda * mean(h);
    return (1.0 - rho) * lst(h, s) / (1.0 - rho * residual_lst(h, s));
}

AoiAnalytic fcfs_mg1(const DistSpec& h, double lambda) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    const double eh = mean(h);
    const double rho = lambda * eh;
    require_stable(rho);
    const double h2 = moment(h, 2);
    const double h3 = moment(h, 3);
    const double hl = lst(h, lambda);
    const double dhl = -lst_deriv(h, 1, lambda);
    const double rh = rho * hl;

    AoiAnalytic out;
    out.lambda_dag = lambda;
    out.mean = lambda * h2 / (2.0 * (1.0 - rho)) + eh + (1.0 - rho) * eh / rh;
    out.second_moment = 2.0 * (1.0 - rho) * (1.0 + rh - lambda * dhl) * eh * eh / (rh * rh) +
                        lambda * h3 / (3.0 * (1.0 - rho)) +
                        (lambda * h2) * (lambda * h2) / (2.0 * (1.0 - rho) * (1.0 - rho)) +
                        h2 / (1.0 - rho);
    out.lst = [h, lambda, rho, m1 = out.mean, m2 = out.second_moment](double s) {
        if (s < kTaylorCutoff) return taylor_lst(s, m1, m2);
        const double hs = lst(h, s);
        return fcfs_mg1_delay_lst(h, lambda, s) -
               (1.0 - rho) * s * hs / (s + lambda * lst(h, s + lambda));
    };
    if (h.is_exponential()) out.cdf = fcfs_mm1_cdf(lambda, h.as<Exponential>().rate);
    return out;
}

AoiAnalytic fcfs_gm1(const DistSpec& g, double mu) {
    if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
    const double eg = mean(g);
    const double rho = 1.0 / (eg * mu);
    require_stable(rho);
    const double gamma = solve_gamma(g, mu);
    const double eh = 1.0 / mu;
    const double x = mu - mu * gamma;
    const double dg = -lst_deriv(g, 1, x);
    const double ddg = lst_deriv(g, 2, x);

    AoiAnalytic out;
    out.lambda_dag = 1.0 / eg;
    out.mean = moment(g, 2) / (2.0 * eg) + eh + rho / (1.0 - gamma) * dg;
    out.second_moment = moment(g, 3) / (3.0 * eg) + rho * moment(g, 2) + 2.0 * eh * eh +
                        rho / (1.0 - gamma) *
                            (ddg + 2.0 * (1.0 + 1.0 / (1.0 - gamma)) * dg * eh);
    out.lst = [g, mu, rho, x, m1 = out.mean, m2 = out.second_moment](double s) {
        if (s < kTaylorCutoff) return taylor_lst(s, m1, m2);
        const double ds = x / (s + x);
        return (rho * ds + residual_lst(g, s) - residual_lst(g, s + x)) * mu / (s + mu);
    };
    if (g.is_exponential()) out.cdf = fcfs_mm1_cdf(g.as<Exponential>().rate, mu);
    return out;
}

ScalarFn fcfs_mm1_cdf(double lambda, double mu) {
    const double rho = lambda / mu;
    require_stable(rho);
    return [lambda, mu, rho](double x) {
        if (x <= 0.0) return 0.0;
        const double v = -std::expm1(-(1.0 - rho) * mu * x) +
                         (1.0 / (1.0 - rho) + rho * mu * x) * std::exp(-mu * x) -
                         std::exp(-lambda * x) / (1.0 - rho);
        return std::min(1.0, std::max(0.0, v));
    };
}

double fcfs_mm1_mean(double rho, double eh) {
    require_stable(rho);
    return (1.0 / (1.0 - rho) + 1.0 / rho - rho) * eh;
}

double fcfs_mm1_second_moment(double rho, double eh) {
    require_stable(rho);
    const double q = 1.0 - rho;
    return 2.0 * (1.0 / (q * q) - 2.0 * rho + 1.0 / rho + 1.0 / (rho * rho)) * eh * eh;
}

double fcfs_md1_mean(double rho, double eh) {
    require_stable(rho);
    return (1.0 / (2.0 * (1.0 - rho)) + 0.5 + (1.0 - rho) * std::exp(rho) / rho) * eh;
}

double fcfs_md1_second_moment(double rho, double eh) {
    require_stable(rho);
    const double q = 1.0 - rho;
    return (1.0 / (2.0 * q * q) + 1.0 / (3.0 * q) + 1.0 / 6.0 +
            2.0 * q * std::exp(2.0 * rho) / (rho * rho)) *
           eh * eh;
}

double fcfs_dm1_mean(double rho, double eh) {
    require_stable(rho);
    const double gamma = solve_gamma(DistSpec::deterministic(eh / rho), 1.0 / eh);
    return (1.0 / (2.0 * rho) + 1.0 / (1.0 - gamma)) * eh;
}

double fcfs_dm1_second_moment(double rho, double eh) {
    require_stable(rho);
    const double gamma = solve_gamma(DistSpec::deterministic(eh / rho), 1.0 / eh);
    const double q = 1.0 - gamma;
    return (2.0 / (q * q) + 1.0 / (q * rho) + 1.0 / (3.0 * rho * rho)) * eh * eh;
}

OptimalRho fcfs_dm1_optimal_rho() {
    auto sd = [](double rho) {
        const double m = fcfs_dm1_mean(rho);
        return std::sqrt(fcfs_dm1_second_moment(rho) - m * m);
    };
    return {golden_min([](double rho) { return fcfs_dm1_mean(rho); }, 0.01, 0.99, 1e-7),
            golden_min(sd, 0.01, 0.99, 1e-7)};
}

double fcfs_md1_optimal_rho() {
    return golden_min([](double rho) { return fcfs_md1_mean(rho); }, 0.01, 0.99, 1e-7);
}

}  // namespace aoi
