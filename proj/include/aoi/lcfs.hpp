#pragma once

#include "aoi/analytic_core.hpp"
#include "aoi/distributions.hpp"

namespace aoi {

/// Race between an interarrival time G and a service time H, split into
/// the conditional laws used by the preemptive LCFS results.
struct ConditionalPair {
    double zeta = 0.0;  // Pr(G < H)
    ScalarFn lst_h_lt_g;  // LST of H given H < G
    ScalarFn lst_g_lt_h;  // LST of G given G < H
    ScalarFn lst_g_gt_h;  // LST of G given G > H
    double mean_h_lt_g = 0.0;
    double mean_g_lt_h = 0.0;
};

// Throws DegenerateRace when zeta is 0 or 1 or G and H share an atom.
ConditionalPair conditional_pair(const DistSpec& g, const DistSpec& h);

// E[exp(-sH) 1{H < G}] and E[exp(-sG) 1{G < H}].
double race_h_first(const DistSpec& g, const DistSpec& h, double s);
double race_g_first(const DistSpec& g, const DistSpec& h, double s);

AoiAnalytic plcfs_gigi1(const DistSpec& g, const DistSpec& h);
AoiAnalytic plcfs_mg1(const DistSpec& h, double lambda);
AoiAnalytic plcfs_gm1(const DistSpec& g, double mu);

// n-th moment of the preemptive LCFS GI/M/1 AoI.
double plcfs_gm1_moment(const DistSpec& g, double mu, int n);

struct LimitValue {
    bool infinite = false;
    double value = 0.0;
};

// Mean AoI of the preemptive LCFS M/GI/1 queue as lambda grows without
// bound: 1/h(0).
LimitValue plcfs_high_rate_limit(const DistSpec& h);

AoiAnalytic nplcfs_mg1_discard(const DistSpec& h, double lambda);
AoiAnalytic nplcfs_gm1_discard(const DistSpec& g, double mu);
AoiAnalytic nplcfs_mg1_keep(const DistSpec& h, double lambda);
AoiAnalytic nplcfs_gm1_keep(const DistSpec& g, double mu);

// Appendix-style closed forms in units of E[H].
double plcfs_mm1_mean(double rho, double eh = 1.0);
double plcfs_md1_mean(double rho, double eh = 1.0);
double plcfs_md1_second_moment(double rho, double eh = 1.0);
double nplcfs_mm1_discard_mean(double rho, double eh = 1.0);
double nplcfs_md1_discard_mean(double rho, double eh = 1.0);
double nplcfs_mm1_keep_mean(double rho, double eh = 1.0);
double nplcfs_mm1_keep_second_moment(double rho, double eh = 1.0);
double nplcfs_md1_keep_mean(double rho, double eh = 1.0);
double nplcfs_dm1_keep_mean(double rho, double eh = 1.0);

enum class QueueFamily { MGI1, GIM1 };

struct DisciplineComparison {
    double fcfs = 0.0;
    double plcfs = 0.0;
    double np_discard = 0.0;
    double np_keep = 0.0;
    bool chain_holds = false;  // the ordering chain for the family
    bool v_condition = false;  // rho < 2 - sqrt 2 and Cv[H]^2 <= v(rho); M/GI/1 only
    bool plcfs_ge_fcfs = false;
};

// For MGI1 `dist` is the service law and `rate` is lambda; for GIM1 `dist`
// is the interarrival law and `rate` is mu. Requires rho < 1.
DisciplineComparison compare_disciplines(QueueFamily family, const DistSpec& dist, double rate);

// Boundary of the region rho < 2 - sqrt 2, Cv[H]^2 <= v(rho).
double v_rho(double rho);

// Positive root of 2 (1 - rho) e^rho + rho - 2.
double rho_hat_star();

}  // namespace aoi
