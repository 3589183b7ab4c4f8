#pragma once

#include "aoi/analytic_core.hpp"
#include "aoi/distributions.hpp"

namespace aoi {

// FCFS M/GI/1 with Poisson(lambda) arrivals.
AoiAnalytic fcfs_mg1(const DistSpec& h, double lambda);

// FCFS GI/M/1 with exponential(mu) service.
AoiAnalytic fcfs_gm1(const DistSpec& g, double mu);

// LST of the M/GI/1 system delay.
double fcfs_mg1_delay_lst(const DistSpec& h, double lambda, double s);

ScalarFn fcfs_mm1_cdf(double lambda, double mu);

// Closed forms in units of E[H].
double fcfs_mm1_mean(double rho, double eh = 1.0);
double fcfs_mm1_second_moment(double rho, double eh = 1.0);
double fcfs_md1_mean(double rho, double eh = 1.0);
double fcfs_md1_second_moment(double rho, double eh = 1.0);
double fcfs_dm1_mean(double rho, double eh = 1.0);
double fcfs_dm1_second_moment(double rho, double eh = 1.0);

struct OptimalRho {
    double mean;  // argmin of E[A]
    double sd;    // argmin of SD[A]
};

// Golden-section minimizers over rho in (0.01, 0.99) with E[H] = 1.
OptimalRho fcfs_dm1_optimal_rho();
double fcfs_md1_optimal_rho();

// Golden-section search for a unimodal f on [a, b].
template <class F>
double golden_min(const F& f, double a, double b, double tol = 1e-9);

}  // namespace aoi

#include <cmath>

template <class F>
double aoi::golden_min(const F& f, double a, double b, double tol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}
