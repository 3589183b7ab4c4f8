#include "aoi/lcfs.hpp"

#include <cmath>
#include <limits>

#include "aoi/errors.hpp"
#include "aoi/fcfs.hpp"
#include "aoi/model.hpp"
#include "aoi/quadrature.hpp"

namespace aoi {

namespace {

constexpr double kQuadTol = 1e-10;

DistSpec exp_of(double rate) { return DistSpec::exponential(rate); }

// Mixture split for hyperexponential arguments: f(G) = p1 f(Exp1) + p2 f(Exp2).
template <class F>
double mix(const DistSpec& d, const F& f) {
    const auto& x = d.as<HyperExp2>();
    return x.p1 * f(exp_of(x.rate1)) + x.p2 * f(exp_of(x.rate2));
}

double quantile_or_edge(const DistSpec& d, double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return std::numeric_limits<double>::infinity();
    return quantile(d, u);
}

// E[exp(-sX) 1{X < Y}] for X, Y each Det or Gamma (Exp counts as Gamma).
double first_of_pair(const DistSpec& x, const DistSpec& y, double s) {
    if (y.is_deterministic()) return partial_lst(x, s, y.as<Deterministic>().value);
    if (x.is_deterministic()) {
        const double c = x.as<Deterministic>().value;
        return std::exp(-s * c) * survival(y, c);
    }
    if (y.is_exponential()) return lst(x, s + y.as<Exponential>().rate);
    if (x.is_exponential()) {
        const double mu = x.as<Exponential>().rate;
        return mu * one_minus_lst(y, s + mu) / (s + mu);
    }
    auto f = [&](double u) { return partial_lst(x, s, quantile_or_edge(y, u)); };
    return adaptive_simpson(f, 0.0, 1.0, kQuadTol);
}

// E[X 1{X < Y}] for the same family pairs.
double first_mean_of_pair(const DistSpec& x, const DistSpec& y) {
    if (y.is_deterministic()) return partial_mean(x, y.as<Deterministic>().value);
    if (x.is_deterministic()) {
        const double c = x.as<Deterministic>().value;
        return c * survival(y, c);
    }
    if (y.is_exponential()) return -lst_deriv(x, 1, y.as<Exponential>().rate);
    if (x.is_exponential()) {
        const double mu = x.as<Exponential>().rate;
        return (one_minus_lst(y, mu) + mu * lst_deriv(y, 1, mu)) / mu;
    }
    auto f = [&](double u) { return partial_mean(x, quantile_or_edge(y, u)); };
    return adaptive_simpson(f, 0.0, 1.0, kQuadTol);
}

double first(const DistSpec& x, const DistSpec& y, double s) {
    if (x.is<HyperExp2>()) return mix(x, [&](const DistSpec& c) { return first(c, y, s); });
    if (y.is<HyperExp2>()) return mix(y, [&](const DistSpec& c) { return first(x, c, s); });
    return first_of_pair(x, y, s);
}

double first_mean(const DistSpec& x, const DistSpec& y) {
    if (x.is<HyperExp2>()) return mix(x, [&](const DistSpec& c) { return first_mean(c, y); });
    if (y.is<HyperExp2>()) return mix(y, [&](const DistSpec& c) { return first_mean(x, c); });
    return first_mean_of_pair(x, y);
}

void require_stable(double rho, const char* what) {
    if (!(rho < 1.0)) throw Unstable(what);
}

AoiAnalytic with_fd_second_moment(AoiAnalytic a) {
    a.second_moment = second_moment_from_lst(a.lst, a.mean);
    return a;
}

}  // namespace

double race_h_first(const DistSpec& g, const DistSpec& h, double s) { return first(h, g, s); }

double race_g_first(const DistSpec& g, const DistSpec& h, double s) { return first(g, h, s); }

ConditionalPair conditional_pair(const DistSpec& g, const DistSpec& h) {
    if (g.is_deterministic() && h.is_deterministic())
        throw DegenerateRace("deterministic G and H share an atom");
    const double zeta = race_g_first(g, h, 0.0);
    const double other = race_h_first(g, h, 0.0);
    if (std::abs(zeta + other - 1.0) > 1e-8) throw DegenerateRace("Pr(G = H) > 0");
    if (!(zeta > 0.0 && zeta < 1.0)) throw DegenerateRace("Pr(G < H) must lie in (0,1)");
    ConditionalPair cp;
    cp.zeta = zeta;
    cp.lst_h_lt_g = [g, h, zeta](double s) { return race_h_first(g, h, s) / (1.0 - zeta); };
    cp.lst_g_lt_h = [g, h, zeta](double s) { return race_g_first(g, h, s) / zeta; };
    cp.lst_g_gt_h = [g, h, zeta](double s) {
        return (lst(g, s) - race_g_first(g, h, s)) / (1.0 - zeta);
    };
    cp.mean_h_lt_g = first_mean(h, g) / (1.0 - zeta);
    cp.mean_g_lt_h = first_mean(g, h) / zeta;
    return cp;
}

AoiAnalytic plcfs_gigi1(const DistSpec& g, const DistSpec& h) {
    const ConditionalPair cp = conditional_pair(g, h);
    const double zeta = cp.zeta;
    AoiAnalytic out;
    out.lambda_dag = (1.0 - zeta) / mean(g);
    out.mean = cp.mean_h_lt_g + moment(g, 2) / (2.0 * mean(g)) +
               zeta / (1.0 - zeta) * cp.mean_g_lt_h;
    out.lst = [g, h](double s) {
        return race_h_first(g, h, s) * residual_lst(g, s) / (1.0 - race_g_first(g, h, s));
    };
    return out;
}

AoiAnalytic plcfs_mg1(const DistSpec& h, double lambda) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    const double hl = lst(h, lambda);
    AoiAnalytic out;
    out.lambda_dag = lambda * hl;
    out.mean = 1.0 / (lambda * hl);
    out.second_moment = 2.0 * (1.0 + lambda * lst_deriv(h, 1, lambda)) * out.mean * out.mean;
    out.lst = [h, lambda](double s) {
        const double v = lambda * lst(h, s + lambda);
        return v / (s + v);
    };
    return out;
}

double plcfs_gm1_moment(const DistSpec& g, double mu, int n) {
    const double eg = mean(g);
    const double eh = 1.0 / mu;
    double total = 0.0;
    double nfact = 1.0;
    for (int i = 2; i <= n; ++i) nfact *= i;
    double mfact = 1.0;  // (m+1)!
    for (int m = 0; m <= n; ++m) {
        mfact *= (m + 1);
        total += nfact * moment(g, m + 1) * std::pow(eh, n - m) / (mfact * eg);
    }
    return total;
}

AoiAnalytic plcfs_gm1(const DistSpec& g, double mu) {
    if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
    AoiAnalytic out;
    out.lambda_dag = one_minus_lst(g, mu) / mean(g);
    out.mean = plcfs_gm1_moment(g, mu, 1);
    out.second_moment = plcfs_gm1_moment(g, mu, 2);
    out.lst = [g, mu](double s) { return residual_lst(g, s) * mu / (s + mu); };
    return out;
}

LimitValue plcfs_high_rate_limit(const DistSpec& h) {
    const PdfAtZero p = pdf_at_zero(h);
    if (p.infinite) return {false, 0.0};
    if (p.value == 0.0) return {true, std::numeric_limits<double>::infinity()};
    return {false, 1.0 / p.value};
}

AoiAnalytic nplcfs_mg1_discard(const DistSpec& h, double lambda) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    const double eh = mean(h);
    const double rho = lambda * eh;
    const double hl = lst(h, lambda);
    const double dhl = -lst_deriv(h, 1, lambda);
    AoiAnalytic out;
    out.lambda_dag = lambda / (rho + hl);
    out.mean = (lambda * moment(h, 2) / 2.0 + hl / lambda + dhl) / (rho + hl) +
               one_minus_lst(h, lambda) / lambda - dhl + eh;
    out.lst = [h, lambda, rho, hl](double s) {
        const double hsl = lst(h, s + lambda);
        return (hl + rho * residual_lst(h, s + lambda)) * lst(h, s) *
               (rho * residual_lst(h, s) + hsl * lambda / (s + lambda)) / (rho + hl);
    };
    return with_fd_second_moment(std::move(out));
}

AoiAnalytic nplcfs_gm1_discard(const DistSpec& g, double mu) {
    if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
    const double eg = mean(g);
    const double rho = 1.0 / (eg * mu);
    const double gm = lst(g, mu);
    const double dgm = -lst_deriv(g, 1, mu);
    const double ddgm = lst_deriv(g, 2, mu);
    const double denom = 1.0 - mu * dgm;
    AoiAnalytic out;
    // Informative departures: a service start finds the waiting room full
    // (p_e is the fraction of such starts) or empty.
    const double a = one_minus_lst(g, mu);
    const double b = a - mu * dgm;
    const double p_e = b / (1.0 - a + b);
    out.lambda_dag = (p_e + (1.0 - p_e) * a) / eg;
    out.mean = 1.0 / mu + moment(g, 2) / (2.0 * eg) + rho * (dgm + mu * gm * ddgm / denom);
    out.lst = [g, mu, rho, gm, denom](double s) {
        const double x = s + mu;
        const double inner = lst(g, x) - gm * (1.0 + mu * lst_deriv(g, 1, x)) / denom;
        return (residual_lst(g, s) + rho * mu / x * inner) * mu / x;
    };
    return with_fd_second_moment(std::move(out));
}

AoiAnalytic nplcfs_mg1_keep(const DistSpec& h, double lambda) {
    if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
    const double eh = mean(h);
    const double rho = lambda * eh;
    require_stable(rho, "NP-LCFS without discarding needs rho < 1");
    const double hl = lst(h, lambda);
    AoiAnalytic out;
    out.lambda_dag = lambda * (2.0 - rho - hl);
    out.mean = lambda * moment(h, 2) / 2.0 + ((1.0 - rho) * (1.0 - rho) / (rho * hl) + 2.0) * eh;
    out.lst = [h, lambda, rho](double s) {
        const double hs = lst(h, s);
        const double hsl = lst(h, s + lambda);
        return lambda / (s + lambda) * hs *
               (rho * residual_lst(h, s) +
                (1.0 - rho) * (s + lambda) * (one_minus_lst(h, s) + hsl) / (s + lambda * hsl));
    };
    return with_fd_second_moment(std::move(out));
}

AoiAnalytic nplcfs_gm1_keep(const DistSpec& g, double mu) {
    if (!(mu > 0.0)) throw InvalidParameter("mu must be positive");
    const double eg = mean(g);
    const double rho = 1.0 / (eg * mu);
    require_stable(rho, "NP-LCFS without discarding needs rho < 1");
    const double gamma = solve_gamma(g, mu);
    const double x = mu - mu * gamma;
    AoiAnalytic out;
    out.lambda_dag = (1.0 - gamma * lst(g, mu)) / eg;
    out.mean = 1.0 / mu + moment(g, 2) / (2.0 * eg) - rho * lst_deriv(g, 1, x);
    out.lst = [g, mu, rho, gamma, x](double s) {
        const double f = mu / (s + mu);
        return (residual_lst(g, s) + rho * (lst(g, s + x) - gamma) * f) * f;
    };
    return with_fd_second_moment(std::move(out));
}

double plcfs_mm1_mean(double rho, double eh) { return (1.0 + 1.0 / rho) * eh; }

double plcfs_md1_mean(double rho, double eh) { return std::exp(rho) / rho * eh; }

double plcfs_md1_second_moment(double rho, double eh) {
    const double m = std::exp(rho) / rho;
    return 2.0 * (m - 1.0) * m * eh * eh;
}

double nplcfs_mm1_discard_mean(double rho, double eh) {
    const double r1 = 1.0 + rho;
    return eh / (1.0 + rho + rho * rho) *
           (2.0 * rho * rho + 3.0 * rho + 1.0 / rho + 3.0 / r1 - 1.0 / (r1 * r1));
}

double nplcfs_md1_discard_mean(double rho, double eh) {
    const double e = std::exp(rho);
    return (1.0 / (1.0 + rho * e) * (0.5 + 1.0 / rho) + (e - 1.0 - rho) / (rho * e) + 1.5) * eh;
}

double nplcfs_mm1_keep_mean(double rho, double eh) {
    require_stable(rho, "NP-LCFS without discarding needs rho < 1");
    return (rho * rho + 1.0 + 1.0 / rho) * eh;
}

double nplcfs_mm1_keep_second_moment(double rho, double eh) {
    require_stable(rho, "NP-LCFS without discarding needs rho < 1");
    return 2.0 * (3.0 * rho * rho + 1.0 + 1.0 / rho + 1.0 / (rho * rho)) * eh * eh;
}

double nplcfs_md1_keep_mean(double rho, double eh) {
    require_stable(rho, "NP-LCFS without discarding needs rho < 1");
    return (rho / 2.0 + 2.0 + (1.0 - rho) * (1.0 - rho) * std::exp(rho) / rho) * eh;
}

double nplcfs_dm1_keep_mean(double rho, double eh) {
    require_stable(rho, "NP-LCFS without discarding needs rho < 1");
    const double gamma = solve_gamma(DistSpec::deterministic(eh / rho), 1.0 / eh);
    return eh / (2.0 * rho) + (1.0 + gamma) * eh;
}

DisciplineComparison compare_disciplines(QueueFamily family, const DistSpec& dist, double rate) {
    DisciplineComparison c;
    if (family == QueueFamily::MGI1) {
        c.fcfs = fcfs_mg1(dist, rate).mean;
        c.plcfs = plcfs_mg1(dist, rate).mean;
        c.np_discard = nplcfs_mg1_discard(dist, rate).mean;
        c.np_keep = nplcfs_mg1_keep(dist, rate).mean;
        c.chain_holds = c.np_discard <= c.np_keep && c.np_keep <= c.fcfs;
        const double rho = rate * mean(dist);
        c.v_condition = rho < 2.0 - std::sqrt(2.0) && scv(dist) <= v_rho(rho);
    } else {
        c.fcfs = fcfs_gm1(dist, rate).mean;
        c.plcfs = plcfs_gm1(dist, rate).mean;
        c.np_discard = nplcfs_gm1_discard(dist, rate).mean;
        c.np_keep = nplcfs_gm1_keep(dist, rate).mean;
        c.chain_holds = c.plcfs <= c.np_discard && c.np_discard <= c.np_keep && c.np_keep <= c.fcfs;
    }
    c.plcfs_ge_fcfs = c.plcfs >= c.fcfs;
    return c;
}

double v_rho(double rho) {
    if (!(rho > 0.0 && rho < 2.0 - std::sqrt(2.0)))
        throw InvalidParameter("v(rho) is defined on (0, 2 - sqrt 2)");
    const double r2 = rho * rho;
    const double t = r2 * ((2.0 - rho) * (2.0 - rho) - 2.0);
    // sqrt(1 + t) - 1 without cancellation.
    return t / (std::sqrt(1.0 + t) + 1.0) / r2;
}

double rho_hat_star() {
    auto f = [](double r) { return 2.0 * (1.0 - r) * std::exp(r) + r - 2.0; };
    double lo = 0.1;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(mid) > 0.0) == (f(lo) > 0.0))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace aoi
