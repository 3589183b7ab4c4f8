#pragma once

#include <cmath>

namespace aoi {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b] with absolute tolerance tol. The interval is
// first split into `panels` equal pieces so narrow features are not missed.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol = 1e-10, int panels = 16,
                        int max_depth = 40) {
    const double w = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * w;
        const double hi = (i + 1 == panels) ? b : lo + w;
        const double fa = f(lo);
        const double fb = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::simpson_step(f, lo, hi, fa, fm, fb, whole, tol / panels, max_depth);
    }
    return total;
}

}  // namespace aoi
