#include <cmath>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "aoi/errors.hpp"
#include "aoi/fcfs.hpp"
#include "aoi/lcfs.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace aoi;

namespace {

// E[phi(X) 1{X < Y}] by double-exponential quadrature against the density
// of X, or a point evaluation when X is deterministic.
template <class Phi>
double race_oracle(const DistSpec& x, const DistSpec& y, Phi phi) {
    if (x.is_deterministic()) {
        const double c = x.as<Deterministic>().value;
        return phi(c) * survival(y, c);
    }
    auto f = [&](double u) { return phi(u) * survival(y, u) * pdf(x, u); };
    if (y.is_deterministic()) {
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate(f, 0.0, y.as<Deterministic>().value);
    }
    boost::math::quadrature::exp_sinh<double> es;
    return es.integrate(f, 0.0, INFINITY);
}

std::vector<std::pair<DistSpec, DistSpec>> race_pairs() {
    return {
        {DistSpec::gamma(2.0, 1.5), DistSpec::gamma(3.0, 2.0)},
        {DistSpec::deterministic(1.2), DistSpec::gamma(2.0, 1.5)},
        {DistSpec::gamma(2.0, 1.0), DistSpec::deterministic(1.3)},
        {from_mean_cv(1.0, 2.0), DistSpec::gamma(4.0, 4.0)},
        {DistSpec::gamma(0.5, 0.5), from_mean_cv(0.7, 1.5)},
        {DistSpec::exponential(0.8), DistSpec::gamma(2.0, 2.0)},
        {DistSpec::gamma(2.0, 2.0), DistSpec::exponential(1.3)},
    };
}

}  // namespace

TEST_CASE("race between G and H") {
    CHECK(conditional_pair(DistSpec::exponential(1.0), DistSpec::exponential(2.0)).zeta ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const DistSpec h = DistSpec::gamma(2.0, 2.0);
    CHECK(conditional_pair(DistSpec::deterministic(1.0), h).zeta == doctest::Approx(1.0 - cdf(h, 1.0)));

    for (const auto& [g, hh] : race_pairs()) {
        const ConditionalPair cp = conditional_pair(g, hh);
        const double zeta = race_oracle(g, hh, [](double) { return 1.0; });
        CHECK(cp.zeta == doctest::Approx(zeta).epsilon(1e-9));
        for (double s : {0.3, 1.0, 2.5}) {
            auto e = [s](double x) { return std::exp(-s * x); };
            CHECK(cp.lst_h_lt_g(s) * (1 - cp.zeta) == doctest::Approx(race_oracle(hh, g, e)).epsilon(1e-9));
            CHECK(cp.lst_g_lt_h(s) * cp.zeta == doctest::Approx(race_oracle(g, hh, e)).epsilon(1e-9));
            const double identity = cp.zeta * cp.lst_g_lt_h(s) + (1 - cp.zeta) * cp.lst_g_gt_h(s);
            CHECK(std::abs(identity - lst(g, s)) < 1e-8);
        }
        auto id = [](double x) { return x; };
        CHECK(cp.mean_h_lt_g * (1 - cp.zeta) == doctest::Approx(race_oracle(hh, g, id)).epsilon(1e-9));
        CHECK(cp.mean_g_lt_h * cp.zeta == doctest::Approx(race_oracle(g, hh, id)).epsilon(1e-9));
    }
}

TEST_CASE("degenerate races are rejected") {
    CHECK_THROWS_AS(conditional_pair(DistSpec::deterministic(1.0), DistSpec::deterministic(2.0)), DegenerateRace);
    CHECK_THROWS_AS(conditional_pair(DistSpec::deterministic(1e4), DistSpec::exponential(1.0)), DegenerateRace);
    CHECK_THROWS_AS(plcfs_gigi1(DistSpec::deterministic(1.0), DistSpec::deterministic(1.0)), DegenerateRace);
}

TEST_CASE("preemptive GI/GI/1 specializes correctly") {
    for (double rho : {0.3, 1.0, 2.0}) {
        for (const DistSpec& h : {DistSpec::deterministic(1.0), DistSpec::gamma(3.0, 3.0), from_mean_cv(1.0, 2.0)}) {
            const AoiAnalytic a = plcfs_gigi1(DistSpec::exponential(rho), h);
            const AoiAnalytic b = plcfs_mg1(h, rho);
            CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-8));
            CHECK(a.lambda_dag == doctest::Approx(b.lambda_dag).epsilon(1e-8));
            for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) CHECK(a.lst(s) == doctest::Approx(b.lst(s)).epsilon(1e-8));
        }
        for (const DistSpec& g : {DistSpec::deterministic(1.0 / rho), DistSpec::gamma(0.5, 0.5 * rho),
                                  from_mean_cv(1.0 / rho, 2.0)}) {
            const AoiAnalytic a = plcfs_gigi1(g, DistSpec::exponential(1.0));
            const AoiAnalytic b = plcfs_gm1(g, 1.0);
            CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-8));
            CHECK(a.lambda_dag == doctest::Approx(b.lambda_dag).epsilon(1e-8));
            for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) CHECK(a.lst(s) == doctest::Approx(b.lst(s)).epsilon(1e-8));
        }
    }
}

TEST_CASE("preemptive GI/GI/1 decomposition") {
    for (const auto& [g, h] : race_pairs()) {
        const AoiAnalytic a = plcfs_gigi1(g, h);
        const ConditionalPair cp = conditional_pair(g, h);
        const double zeta = race_oracle(g, h, [](double) { return 1.0; });
        const double mhg = race_oracle(h, g, [](double x) { return x; }) / (1 - zeta);
        const double mgh = race_oracle(g, h, [](double x) { return x; }) / zeta;
        CHECK(a.mean == doctest::Approx(mhg + moment(g, 2) / (2 * mean(g)) + zeta / (1 - zeta) * mgh).epsilon(1e-6));
        CHECK(a.lambda_dag == doctest::Approx((1 - zeta) / mean(g)).epsilon(1e-9));
        for (double s : {0.2, 1.0, 3.0}) {
            const double z = (1 - cp.zeta) / (1 - cp.zeta * cp.lst_g_lt_h(s));
            CHECK(a.lst(s) == doctest::Approx(cp.lst_h_lt_g(s) * residual_lst(g, s) * z).epsilon(1e-10));
        }
        CHECK(a.lst(1e-6) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(oracle::mean_from_lst(a.lst, oracle::fd_step(a.mean)) == doctest::Approx(a.mean).epsilon(1e-5));
    }
}

TEST_CASE("preemptive M/GI/1") {
    CHECK(plcfs_mg1(DistSpec::exponential(1.0), 1.0).mean == doctest::Approx(2.0));
    CHECK(plcfs_mg1(DistSpec::deterministic(1.0), 1.0).mean == doctest::Approx(std::exp(1.0)));
    for (double rho : {0.2, 0.8, 1.5}) {
        CHECK(plcfs_mg1(DistSpec::exponential(1.0), rho).mean == doctest::Approx(plcfs_mm1_mean(rho)));
        const AoiAnalytic d = plcfs_mg1(DistSpec::deterministic(1.0), rho);
        CHECK(d.mean == doctest::Approx(plcfs_md1_mean(rho)));
        CHECK(*d.second_moment == doctest::Approx(plcfs_md1_second_moment(rho)));
        CHECK(oracle::second_moment_from_lst(d.lst, d.mean, oracle::fd_step(d.mean)) ==
              doctest::Approx(*d.second_moment).epsilon(1e-5));
    }
    double prev = INFINITY;
    for (double c : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0}) {
        const double m = plcfs_mg1(from_mean_cv(1.0, c), 0.8).mean;
        CHECK(m <= prev);
        prev = m;
    }
}

TEST_CASE("preemptive GI/M/1") {
    CHECK(plcfs_gm1(DistSpec::deterministic(3.0), 1.0).mean == doctest::Approx(1.5 + 1.0));
    CHECK(plcfs_gm1(DistSpec::exponential(1.0), 1.0).mean == doctest::Approx(2.0));
    for (const DistSpec& g : {DistSpec::deterministic(2.0), DistSpec::gamma(2.0, 1.0), from_mean_cv(1.5, 2.0)}) {
        const AoiAnalytic a = plcfs_gm1(g, 1.3);
        const double eh = 1 / 1.3;
        CHECK(*a.second_moment == doctest::Approx(moment(g, 3) / (3 * mean(g)) + 2 * eh * a.mean));
        const double m3 = plcfs_gm1_moment(g, 1.3, 3);
        // Third moment from the product of independent residual G and Exp(mu).
        const double r1 = moment(g, 2) / (2 * mean(g)), r2 = moment(g, 3) / (3 * mean(g)),
                     r3 = moment(g, 4) / (4 * mean(g));
        CHECK(m3 == doctest::Approx(r3 + 3 * r2 * eh + 3 * r1 * 2 * eh * eh + 6 * eh * eh * eh));
    }
}

TEST_CASE("high arrival rate limit") {
    const LimitValue e = plcfs_high_rate_limit(DistSpec::exponential(2.0));
    CHECK_FALSE(e.infinite);
    CHECK(e.value == doctest::Approx(0.5));
    CHECK(plcfs_high_rate_limit(DistSpec::gamma(4.0, 4.0)).infinite);
    CHECK(plcfs_high_rate_limit(DistSpec::gamma(0.5, 0.5)).value == 0.0);
    CHECK_THROWS_AS(plcfs_high_rate_limit(DistSpec::deterministic(1.0)), NotAbsolutelyContinuous);
    CHECK(std::abs(plcfs_mg1(DistSpec::exponential(1.0), 1e3).mean - 1.0) < 0.01);
}

TEST_CASE("non-preemptive closed forms") {
    CHECK(nplcfs_mg1_discard(DistSpec::exponential(1.0), 1.0).mean == doctest::Approx(7.25 / 3.0).epsilon(1e-12));
    CHECK(nplcfs_mg1_keep(DistSpec::deterministic(1.0), 0.5).mean ==
          doctest::Approx(0.25 + 2 + 0.5 * std::exp(0.5)).epsilon(1e-12));
    for (double rho = 0.05; rho < 0.96; rho += 0.05) {
        const DistSpec m = DistSpec::exponential(1.0), d = DistSpec::deterministic(1.0);
        CHECK(nplcfs_mg1_discard(m, rho).mean == doctest::Approx(nplcfs_mm1_discard_mean(rho)).epsilon(1e-10));
        CHECK(nplcfs_mg1_discard(d, rho).mean == doctest::Approx(nplcfs_md1_discard_mean(rho)).epsilon(1e-10));
        CHECK(nplcfs_gm1_discard(DistSpec::exponential(rho), 1.0).mean ==
              doctest::Approx(nplcfs_mm1_discard_mean(rho)).epsilon(1e-10));
        const AoiAnalytic k = nplcfs_mg1_keep(m, rho);
        CHECK(k.mean == doctest::Approx(nplcfs_mm1_keep_mean(rho)).epsilon(1e-10));
        CHECK(*k.second_moment == doctest::Approx(nplcfs_mm1_keep_second_moment(rho)).epsilon(1e-6));
        CHECK(nplcfs_gm1_keep(DistSpec::exponential(rho), 1.0).mean ==
              doctest::Approx(nplcfs_mm1_keep_mean(rho)).epsilon(1e-10));
        CHECK(nplcfs_mg1_keep(d, rho).mean == doctest::Approx(nplcfs_md1_keep_mean(rho)).epsilon(1e-10));
        const AoiAnalytic dk = nplcfs_gm1_keep(DistSpec::deterministic(1.0 / rho), 1.0);
        const double gamma = solve_gamma(DistSpec::deterministic(1.0 / rho), 1.0);
        CHECK(dk.mean == doctest::Approx(0.5 / rho + 1 + gamma).epsilon(1e-10));
        CHECK(dk.mean == doctest::Approx(nplcfs_dm1_keep_mean(rho)).epsilon(1e-10));
    }
}

TEST_CASE("non-preemptive M/M/1 from both sides agree on the transform") {
    for (double rho : {0.3, 0.7, 0.95}) {
        const AoiAnalytic a = nplcfs_mg1_discard(DistSpec::exponential(1.0), rho);
        const AoiAnalytic b = nplcfs_gm1_discard(DistSpec::exponential(rho), 1.0);
        const AoiAnalytic c = nplcfs_mg1_keep(DistSpec::exponential(1.0), rho);
        const AoiAnalytic d = nplcfs_gm1_keep(DistSpec::exponential(rho), 1.0);
        CHECK(a.lambda_dag == doctest::Approx(b.lambda_dag).epsilon(1e-12));
        CHECK(c.lambda_dag == doctest::Approx(d.lambda_dag).epsilon(1e-10));
        for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            CHECK(a.lst(s) == doctest::Approx(b.lst(s)).epsilon(1e-10));
            CHECK(c.lst(s) == doctest::Approx(d.lst(s)).epsilon(1e-9));
        }
    }
}

TEST_CASE("every transform is normalized, monotone and reproduces its mean") {
    std::vector<AoiAnalytic> all;
    for (double rho : {0.2, 0.6, 0.9}) {
        for (const DistSpec& h : {DistSpec::deterministic(1.0), DistSpec::gamma(4.0, 4.0), from_mean_cv(1.0, 2.0)}) {
            all.push_back(plcfs_mg1(h, rho));
            all.push_back(nplcfs_mg1_discard(h, rho));
            all.push_back(nplcfs_mg1_keep(h, rho));
        }
        for (const DistSpec& g : {DistSpec::deterministic(1 / rho), from_mean_cv(1 / rho, 0.5), from_mean_cv(1 / rho, 2.0)}) {
            all.push_back(plcfs_gm1(g, 1.0));
            all.push_back(nplcfs_gm1_discard(g, 1.0));
            all.push_back(nplcfs_gm1_keep(g, 1.0));
        }
    }
    all.push_back(nplcfs_mg1_discard(DistSpec::gamma(2.0, 2.0), 2.5));
    all.push_back(nplcfs_gm1_discard(DistSpec::gamma(2.0, 5.0), 1.0));
    for (const AoiAnalytic& a : all) {
        CHECK(a.lst(1e-6) == doctest::Approx(1.0).epsilon(1e-4));
        double prev = 1.0;
        for (double s = 0.05; s <= 5.0; s += 0.05) {
            const double v = a.lst(s);
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        const double h = oracle::fd_step(a.mean);
        CHECK(oracle::mean_from_lst(a.lst, h) == doctest::Approx(a.mean).epsilon(1e-5));
        REQUIRE(a.second_moment);
        CHECK(*a.second_moment >= a.mean * a.mean);
        CHECK(oracle::second_moment_from_lst(a.lst, a.mean, 2 * h) == doctest::Approx(*a.second_moment).epsilon(1e-4));
    }
}

TEST_CASE("keep variants need stability") {
    CHECK_THROWS_AS(nplcfs_mg1_keep(DistSpec::exponential(1.0), 1.0), Unstable);
    CHECK_THROWS_AS(nplcfs_gm1_keep(DistSpec::deterministic(0.9), 1.0), Unstable);
    CHECK_NOTHROW(nplcfs_mg1_discard(DistSpec::exponential(1.0), 2.0));
    CHECK_NOTHROW(nplcfs_gm1_discard(DistSpec::deterministic(0.5), 1.0));
}

TEST_CASE("discipline comparison") {
    const DisciplineComparison c = compare_disciplines(QueueFamily::GIM1, from_mean_cv(1 / 0.7, 2.0), 1.0);
    CHECK(c.chain_holds);
    CHECK(c.plcfs <= c.np_discard);
    CHECK(c.np_discard <= c.np_keep);
    CHECK(c.np_keep <= c.fcfs);

    CHECK(v_rho(0.1) < 1.0);
    CHECK(v_rho(1e-4) == doctest::Approx(1.0).epsilon(1e-3));
    double prev = 1.0;
    for (double r = 0.01; r < 2 - std::sqrt(2.0); r += 0.01) {
        CHECK(v_rho(r) < prev);
        prev = v_rho(r);
    }
    CHECK_THROWS_AS(v_rho(0.6), InvalidParameter);
    CHECK(std::abs(rho_hat_star() - 0.643798) < 1e-5);

    for (double rho = 0.02; rho < 1.0; rho += 0.02) {
        const DisciplineComparison d = compare_disciplines(QueueFamily::MGI1, DistSpec::deterministic(1.0), rho);
        CHECK(d.plcfs >= d.np_keep);
        if (rho <= rho_hat_star()) CHECK(d.plcfs_ge_fcfs);
        if (rho > rho_hat_star() + 1e-3) CHECK_FALSE(d.plcfs_ge_fcfs);
    }
}
