#pragma once

#include <string>
#include <variant>

#include "aoi/rng.hpp"

namespace aoi {

struct Deterministic {
    double value;
};

struct Exponential {
    double rate;
};

struct Gamma {
    double shape;
    double rate;
};

// Two-phase hyperexponential: with probability p1 an Exp(rate1) draw,
// otherwise Exp(rate2).
struct HyperExp2 {
    double p1;
    double rate1;
    double p2;
    double rate2;
};

/// A parametric nonnegative distribution. Construction validates the
/// parameters, so every DistSpec value has a finite positive mean.
class DistSpec {
public:
    using Kind = std::variant<Deterministic, Exponential, Gamma, HyperExp2>;

    DistSpec(Deterministic d);
    DistSpec(Exponential e);
    DistSpec(Gamma g);
    DistSpec(HyperExp2 h);

    static DistSpec deterministic(double value) { return DistSpec(Deterministic{value}); }
    static DistSpec exponential(double rate) { return DistSpec(Exponential{rate}); }
    static DistSpec gamma(double shape, double rate) { return DistSpec(Gamma{shape, rate}); }
    static DistSpec hyperexp2(double p1, double rate1, double p2, double rate2) {
        return DistSpec(HyperExp2{p1, rate1, p2, rate2});
    }

    const Kind& kind() const { return kind_; }

    template <class T>
    bool is() const {
        return std::holds_alternative<T>(kind_);
    }
    template <class T>
    const T& as() const {
        return std::get<T>(kind_);
    }

    bool is_deterministic() const { return is<Deterministic>(); }
    bool is_exponential() const { return is<Exponential>(); }

    friend bool operator==(const DistSpec& a, const DistSpec& b);

private:
    Kind kind_;
};

enum class Family { Auto, Gamma };

/// Builds a distribution with the requested mean and coefficient of
/// variation. Auto picks Deterministic (cv = 0), Gamma (0 < cv < 1),
/// Exponential (cv = 1) or balanced-means HyperExp2 (cv > 1). Family::Gamma
/// forces a gamma fit for any cv > 0.
DistSpec from_mean_cv(Family family, double mean, double cv);
inline DistSpec from_mean_cv(double mean, double cv) { return from_mean_cv(Family::Auto, mean, cv); }

// E[exp(-sX)], s >= 0.
double lst(const DistSpec& d, double s);

// n-th derivative of the LST, (-1)^n E[X^n exp(-sX)].
double lst_deriv(const DistSpec& d, int n, double s);

// 1 - lst(d, s) without cancellation for small s.
double one_minus_lst(const DistSpec& d, double s);

// LST of the stationary residual (forward recurrence) time,
// (1 - x*(s)) / (s E[X]); equals 1 at s = 0.
double residual_lst(const DistSpec& d, double s);

double moment(const DistSpec& d, int k);
double mean(const DistSpec& d);
double variance(const DistSpec& d);
double scv(const DistSpec& d);  // squared coefficient of variation
double cv(const DistSpec& d);

// Pr(X <= x); right-continuous.
double cdf(const DistSpec& d, double x);
// Pr(X > x).
double survival(const DistSpec& d, double x);
// Pr(X >= x).
double prob_at_least(const DistSpec& d, double x);

// Density for absolutely continuous kinds. Throws NotAbsolutelyContinuous
// for Deterministic.
double pdf(const DistSpec& d, double x);

struct PdfAtZero {
    bool infinite = false;
    double value = 0.0;  // meaningful when !infinite
};
PdfAtZero pdf_at_zero(const DistSpec& d);

// E[exp(-sX) 1{X < y}].
double partial_lst(const DistSpec& d, double s, double y);
// E[X 1{X < y}].
double partial_mean(const DistSpec& d, double y);

// Smallest x with cdf(x) >= u, u in (0, 1).
double quantile(const DistSpec& d, double u);

double sample(const DistSpec& d, RngStream& rng);

std::string describe(const DistSpec& d);

}  // namespace aoi
