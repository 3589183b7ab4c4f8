#include "aoi/distributions.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "aoi/errors.hpp"

namespace aoi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParameter(what);
}

// Rising factorial a (a+1) ... (a+n-1).
double rising(double a, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= a + i;
    return r;
}

double factorial(int n) { return rising(1.0, n); }

double gamma_lst(double shape, double rate, double s) {
    if (s == 0.0) return 1.0;
    return std::exp(-shape * std::log1p(s / rate));
}

double gamma_partial_lst(double shape, double rate, double s, double y) {
    if (y <= 0.0) return 0.0;
    if (std::isinf(y)) return gamma_lst(shape, rate, s);
    return gamma_lst(shape, rate, s) * boost::math::gamma_p(shape, (rate + s) * y);
}

double gamma_partial_mean(double shape, double rate, double y) {
    if (y <= 0.0) return 0.0;
    if (std::isinf(y)) return shape / rate;
    return shape / rate * boost::math::gamma_p(shape + 1.0, rate * y);
}

}  // namespace

DistSpec::DistSpec(Deterministic d) : kind_(d) {
    require(positive_finite(d.value), "deterministic value must be positive and finite");
}

DistSpec::DistSpec(Exponential e) : kind_(e) {
    require(positive_finite(e.rate), "exponential rate must be positive and finite");
}

DistSpec::DistSpec(Gamma g) : kind_(g) {
    require(positive_finite(g.shape), "gamma shape must be positive and finite");
    require(positive_finite(g.rate), "gamma rate must be positive and finite");
}

DistSpec::DistSpec(HyperExp2 h) : kind_(h) {
    require(h.p1 > 0.0 && h.p1 < 1.0, "hyperexp2 p1 must lie in (0,1)");
    require(h.p2 > 0.0 && h.p2 < 1.0, "hyperexp2 p2 must lie in (0,1)");
    require(std::abs(h.p1 + h.p2 - 1.0) <= 1e-12, "hyperexp2 probabilities must sum to 1");
    require(positive_finite(h.rate1) && positive_finite(h.rate2),
            "hyperexp2 rates must be positive and finite");
}

bool operator==(const DistSpec& a, const DistSpec& b) {
    if (a.kind_.index() != b.kind_.index()) return false;
    return std::visit(
        Overloaded{
            [&](const Deterministic& x) { return x.value == b.as<Deterministic>().value; },
            [&](const Exponential& x) { return x.rate == b.as<Exponential>().rate; },
            [&](const Gamma& x) {
                const auto& y = b.as<Gamma>();
                return x.shape == y.shape && x.rate == y.rate;
            },
            [&](const HyperExp2& x) {
                const auto& y = b.as<HyperExp2>();
                return x.p1 == y.p1 && x.p2 == y.p2 && x.rate1 == y.rate1 && x.rate2 == y.rate2;
            },
        },
        a.kind_);
}

DistSpec from_mean_cv(Family family, double m, double c) {
    require(positive_finite(m), "mean must be positive and finite");
    require(std::isfinite(c) && c >= 0.0, "cv must be nonnegative and finite");
    if (c == 0.0) return DistSpec::deterministic(m);
    const double c2 = c * c;
    if (family == Family::Gamma || c < 1.0) {
        const double shape = 1.0 / c2;
        return DistSpec::gamma(shape, shape / m);
    }
    if (c == 1.0) return DistSpec::exponential(1.0 / m);
    const double p1 = 0.5 * (1.0 + std::sqrt((c2 - 1.0) / (c2 + 1.0)));
    const double p2 = 1.0 - p1;
    return DistSpec::hyperexp2(p1, 2.0 * p1 / m, p2, 2.0 * p2 / m);
}

double lst(const DistSpec& d, double s) {
    if (s == 0.0) return 1.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& x) { return std::exp(-s * x.value); },
            [&](const Exponential& x) { return x.rate / (x.rate + s); },
            [&](const Gamma& x) { return gamma_lst(x.shape, x.rate, s); },
            [&](const HyperExp2& x) {
                return x.p1 * x.rate1 / (x.rate1 + s) + x.p2 * x.rate2 / (x.rate2 + s);
            },
        },
        d.kind());
}

double lst_deriv(const DistSpec& d, int n, double s) {
    if (n < 0) throw InvalidParameter("derivative order must be nonnegative");
    if (n == 0) return lst(d, s);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& x) {
                return sign * std::pow(x.value, n) * std::exp(-s * x.value);
            },
            [&](const Exponential& x) {
                return sign * factorial(n) * x.rate / std::pow(x.rate + s, n + 1);
            },
            [&](const Gamma& x) {
                return sign * rising(x.shape, n) / std::pow(x.rate + s, n) *
                       gamma_lst(x.shape, x.rate, s);
            },
            [&](const HyperExp2& x) {
                return sign * factorial(n) *
                       (x.p1 * x.rate1 / std::pow(x.rate1 + s, n + 1) +
                        x.p2 * x.rate2 / std::pow(x.rate2 + s, n + 1));
            },
        },
        d.kind());
}

double one_minus_lst(const DistSpec& d, double s) {
    if (s == 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& x) { return -std::expm1(-s * x.value); },
            [&](const Exponential& x) { return s / (x.rate + s); },
            [&](const Gamma& x) { return -std::expm1(-x.shape * std::log1p(s / x.rate)); },
            [&](const HyperExp2& x) { return x.p1 * s / (x.rate1 + s) + x.p2 * s / (x.rate2 + s); },
        },
        d.kind());
}

double residual_lst(const DistSpec& d, double s) {
    if (s == 0.0) return 1.0;
    return one_minus_lst(d, s) / (s * mean(d));
}

double moment(const DistSpec& d, int k) {
    if (k < 0) throw InvalidParameter("moment order must be nonnegative");
    if (k == 0) return 1.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& x) { return std::pow(x.value, k); },
            [&](const Exponential& x) { return factorial(k) / std::pow(x.rate, k); },
            [&](const Gamma& x) { return rising(x.shape, k) / std::pow(x.rate, k); },
            [&](const HyperExp2& x) {
                return factorial(k) * (x.p1 / std::pow(x.rate1, k) + x.p2 / std::pow(x.rate2, k));
            },
        },
        d.kind());
}

double mean(const DistSpec& d) { return moment(d, 1); }

double variance(const DistSpec& d) {
    if (d.is_deterministic()) return 0.0;
    if (d.is<Gamma>()) {
        const auto& g = d.as<Gamma>();
        return g.shape / (g.rate * g.rate);
    }
    const double m = mean(d);
    return moment(d, 2) - m * m;
}

double scv(const DistSpec& d) {
    const double m = mean(d);
    return variance(d) / (m * m);
}

double cv(const DistSpec& d) { return std::sqrt(scv(d)); }

double cdf(const DistSpec& d, double x) {
    if (x < 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& v) { return x >= v.value ? 1.0 : 0.0; },
            [&](const Exponential& v) { return -std::expm1(-v.rate * x); },
            [&](const Gamma& v) {
                if (std::isinf(x)) return 1.0;
                return boost::math::gamma_p(v.shape, v.rate * x);
            },
            [&](const HyperExp2& v) {
                return -v.p1 * std::expm1(-v.rate1 * x) - v.p2 * std::expm1(-v.rate2 * x);
            },
        },
        d.kind());
}

double survival(const DistSpec& d, double x) {
    if (x < 0.0) return 1.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& v) { return x < v.value ? 1.0 : 0.0; },
            [&](const Exponential& v) { return std::exp(-v.rate * x); },
            [&](const Gamma& v) {
                if (std::isinf(x)) return 0.0;
                return boost::math::gamma_q(v.shape, v.rate * x);
            },
            [&](const HyperExp2& v) {
                return v.p1 * std::exp(-v.rate1 * x) + v.p2 * std::exp(-v.rate2 * x);
            },
        },
        d.kind());
}

double prob_at_least(const DistSpec& d, double x) {
    if (d.is_deterministic()) return x <= d.as<Deterministic>().value ? 1.0 : 0.0;
    return survival(d, x);
}

double pdf(const DistSpec& d, double x) {
    if (d.is_deterministic()) throw NotAbsolutelyContinuous("deterministic distribution has no density");
    if (x < 0.0) return 0.0;
    if (x == 0.0) {
        const PdfAtZero p = pdf_at_zero(d);
        return p.infinite ? kInf : p.value;
    }
    return std::visit(
        Overloaded{
            [&](const Deterministic&) { return 0.0; },
            [&](const Exponential& v) { return v.rate * std::exp(-v.rate * x); },
            [&](const Gamma& v) {
                return v.rate * boost::math::gamma_p_derivative(v.shape, v.rate * x);
            },
            [&](const HyperExp2& v) {
                return v.p1 * v.rate1 * std::exp(-v.rate1 * x) +
                       v.p2 * v.rate2 * std::exp(-v.rate2 * x);
            },
        },
        d.kind());
}

PdfAtZero pdf_at_zero(const DistSpec& d) {
    return std::visit(
        Overloaded{
            [&](const Deterministic&) -> PdfAtZero {
                throw NotAbsolutelyContinuous("deterministic distribution has no density");
            },
            [&](const Exponential& v) { return PdfAtZero{false, v.rate}; },
            [&](const Gamma& v) {
                if (v.shape < 1.0) return PdfAtZero{true, kInf};
                if (v.shape == 1.0) return PdfAtZero{false, v.rate};
                return PdfAtZero{false, 0.0};
            },
            [&](const HyperExp2& v) { return PdfAtZero{false, v.p1 * v.rate1 + v.p2 * v.rate2}; },
        },
        d.kind());
}

double partial_lst(const DistSpec& d, double s, double y) {
    if (y <= 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& v) { return v.value < y ? std::exp(-s * v.value) : 0.0; },
            [&](const Exponential& v) { return gamma_partial_lst(1.0, v.rate, s, y); },
            [&](const Gamma& v) { return gamma_partial_lst(v.shape, v.rate, s, y); },
            [&](const HyperExp2& v) {
                return v.p1 * gamma_partial_lst(1.0, v.rate1, s, y) +
                       v.p2 * gamma_partial_lst(1.0, v.rate2, s, y);
            },
        },
        d.kind());
}

double partial_mean(const DistSpec& d, double y) {
    if (y <= 0.0) return 0.0;
    return std::visit(
        Overloaded{
            [&](const Deterministic& v) { return v.value < y ? v.value : 0.0; },
            [&](const Exponential& v) { return gamma_partial_mean(1.0, v.rate, y); },
            [&](const Gamma& v) { return gamma_partial_mean(v.shape, v.rate, y); },
            [&](const HyperExp2& v) {
                return v.p1 * gamma_partial_mean(1.0, v.rate1, y) +
                       v.p2 * gamma_partial_mean(1.0, v.rate2, y);
            },
        },
        d.kind());
}

double quantile(const DistSpec& d, double u) {
    if (!(u > 0.0 && u < 1.0)) throw InvalidParameter("quantile level must lie in (0,1)");
    return std::visit(
        Overloaded{
            [&](const Deterministic& v) { return v.value; },
            [&](const Exponential& v) { return -std::log1p(-u) / v.rate; },
            [&](const Gamma& v) { return boost::math::gamma_p_inv(v.shape, u) / v.rate; },
            [&](const HyperExp2& v) {
                // Bracket between the component quantiles, then bisect.
                double lo = -std::log1p(-u) / std::max(v.rate1, v.rate2);
                double hi = -std::log1p(-u) / std::min(v.rate1, v.rate2);
                for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    if (cdf(d, mid) >= u)
                        hi = mid;
                    else
                        lo = mid;
                }
                return hi;
            },
        },
        d.kind());
}

double sample(const DistSpec& d, RngStream& rng) {
    return std::visit(
        Overloaded{
            [&](const Deterministic& v) { return v.value; },
            [&](const Exponential& v) { return -std::log(rng.uniform_open()) / v.rate; },
            [&](const Gamma& v) {
                std::gamma_distribution<double> dist(v.shape, 1.0 / v.rate);
                return dist(rng);
            },
            [&](const HyperExp2& v) {
                const double rate = rng.uniform_open() < v.p1 ? v.rate1 : v.rate2;
                return -std::log(rng.uniform_open()) / rate;
            },
        },
        d.kind());
}

std::string describe(const DistSpec& d) {
    char buf[160];
    std::visit(
        Overloaded{
            [&](const Deterministic& v) { std::snprintf(buf, sizeof buf, "Det(%.12g)", v.value); },
            [&](const Exponential& v) { std::snprintf(buf, sizeof buf, "Exp(rate=%.12g)", v.rate); },
            [&](const Gamma& v) {
                std::snprintf(buf, sizeof buf, "Gamma(shape=%.12g,rate=%.12g)", v.shape, v.rate);
            },
            [&](const HyperExp2& v) {
                std::snprintf(buf, sizeof buf, "H2(p1=%.12g,rate1=%.12g,rate2=%.12g)", v.p1,
                              v.rate1, v.rate2);
            },
        },
        d.kind());
    return buf;
}

}  // namespace aoi
