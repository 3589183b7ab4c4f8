#include <cmath>
#include <sstream>

#include "aoi/analyze.hpp"
#include "aoi/errors.hpp"
#include "aoi/estimator.hpp"
#include "aoi/experiment.hpp"
#include "aoi/fcfs.hpp"
#include "aoi/lcfs.hpp"
#include "doctest.h"

using namespace aoi;

namespace {

SamplePath hand_path(std::vector<double> betas, std::vector<double> delays) {
    SamplePath p;
    p.betas = std::move(betas);
    p.delays = std::move(delays);
    p.peaks.resize(p.betas.size());
    for (std::size_t i = 1; i < p.betas.size(); ++i) p.peaks[i] = p.betas[i] - p.betas[i - 1] + p.delays[i - 1];
    p.peaks[0] = p.peaks.size() > 1 ? p.peaks[1] : p.delays[0];
    p.horizon = p.betas.back() - p.betas.front();
    p.n_informative = p.n_total = p.betas.size();
    return p;
}

SamplePath mm1(Discipline d, double lambda, double mu, std::uint64_t n = 1'000'000, std::uint64_t seed = 1) {
    SimConfig c{Model{DistSpec::exponential(lambda), DistSpec::exponential(mu), d}};
    c.horizon_arrivals = n + 100'000;
    c.seed = seed;
    return simulate(c);
}

}  // namespace

TEST_CASE("hand-made paths") {
    EstimatorOptions opt;
    opt.x_grid = {0.0, 0.25, 0.5, 1.0, 2.0};
    const AoiEmpirical two = aoi_time_average(hand_path({0, 1, 2}, {0, 0, 0}), opt);
    CHECK(two.cdf[2] == doctest::Approx(0.5));
    CHECK(two.cdf[1] == doctest::Approx(0.25));
    CHECK(two.cdf[4] == doctest::Approx(1.0));
    CHECK(two.mean.value == doctest::Approx(0.5));

    opt.s_grid = {50.0};
    const SamplePath cp = hand_path({0, 1, 2, 3, 4, 5}, {1, 1, 1, 1, 1, 1});
    const AoiEmpirical c = aoi_time_average(cp, opt);
    CHECK(c.mean.value == doctest::Approx(1.5));
    CHECK(c.second_moment.value == doctest::Approx(7.0 / 3.0));
    CHECK(c.lst_grid[0].value < std::exp(-50.0));
    CHECK(c.lst_grid[0].value > 0.0);
    CHECK(c.lambda_dag.value == doctest::Approx(1.0));
    CHECK(penalty_integral(cp, [](double x) { return x; }) == doctest::Approx(1.5));
    CHECK(penalty_integral(cp, [](double x) { return x * x; }) == doctest::Approx(7.0 / 3.0));
    CHECK(penalty_integral(cp, [](double x) { return 1 - std::exp(-x); }) ==
          doctest::Approx(1 - (std::exp(-1.0) - std::exp(-2.0))));

    CHECK_THROWS_AS(aoi_time_average(hand_path({0}, {0})), InsufficientPath);
    opt.s_grid = {0.0};
    CHECK_THROWS_AS(aoi_time_average(cp, opt), InvalidParameter);
    opt.s_grid = {};
    opt.x_grid = {1.0, 0.0};
    CHECK_THROWS_AS(aoi_time_average(cp, opt), InvalidParameter);
}

TEST_CASE("FCFS M/M/1 distribution and moments") {
    const SamplePath p = mm1(Discipline::FCFS, 0.5, 1.0);
    EstimatorOptions opt;
    opt.s_grid = {0.001, 0.5};
    const AoiEmpirical e = aoi_time_average(p, opt);
    const ScalarFn mm1_cdf = fcfs_mm1_cdf(0.5, 1.0);
    double sup = 0.0;
    for (std::size_t j = 0; j < e.cdf_x.size(); ++j) {
        sup = std::max(sup, std::abs(e.cdf[j] - mm1_cdf(e.cdf_x[j])));
        CHECK(std::abs(e.cdf[j] - e.cdf_lemma2[j]) <= e.cdf_gap_bound);
    }
    CHECK(sup < 0.01);
    CHECK(std::abs(e.mean.value - 3.5) < 3 * e.mean.se);
    CHECK(std::abs(e.second_moment.value - fcfs_mm1_second_moment(0.5, 1.0)) < 3 * e.second_moment.se);
    const double direct[3] = {e.mean.value, e.second_moment.value, e.third_moment.value};
    for (int k = 0; k < 3; ++k) CHECK(std::abs(direct[k] - e.moments_from_peaks[k]) <= e.moment_gap_bound[k]);
    const double fd = (1.0 - e.lst_grid[0].value) / 0.001;
    CHECK(fd == doctest::Approx(e.mean.value).epsilon(0.01));
    CHECK(e.delay_mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(e.peak_mean == doctest::Approx(2.0 + 2.0).epsilon(0.02));

    const AoiMoments mo = aoi_moments(p);
    CHECK(mo.direct[0] == doctest::Approx(e.mean.value).epsilon(1e-9));
    CHECK(mo.from_peaks[1] == doctest::Approx(e.moments_from_peaks[1]));
}

TEST_CASE("preemptive LCFS transform and mean") {
    const SamplePath p = mm1(Discipline::PLCFS, 1.0, 1.0);
    const auto lst = aoi_lst(p, {1.0});
    CHECK(std::abs(lst[0].value - 0.25) < 3 * lst[0].se);

    SimConfig c{Model{DistSpec::exponential(1.0), DistSpec::deterministic(1.0), Discipline::PLCFS}};
    c.horizon_arrivals = 1'100'000;
    const AoiEmpirical e = aoi_time_average(simulate(c));
    CHECK(std::abs(e.mean.value - std::exp(1.0)) < 3 * e.mean.se);
}

TEST_CASE("merging replications") {
    EstimatorOptions opt;
    opt.s_grid = {0.5};
    opt.x_grid = {0.0, 1.0, 2.0, 4.0, 8.0};
    const AoiEmpirical a = aoi_time_average(mm1(Discipline::NPLCFSKeep, 0.5, 1.0, 100'000, 1), opt);
    const AoiEmpirical b = aoi_time_average(mm1(Discipline::NPLCFSKeep, 0.5, 1.0, 100'000, 2), opt);
    const AoiEmpirical m = merge({a, b});
    const double T = a.horizon + b.horizon;
    CHECK(m.horizon == doctest::Approx(T));
    CHECK(m.segments == a.segments + b.segments);
    CHECK(m.batches.time.size() == a.batches.time.size() + b.batches.time.size());
    CHECK(m.mean.value == doctest::Approx((a.mean.value * a.horizon + b.mean.value * b.horizon) / T));
    CHECK(m.cdf[2] == doctest::Approx((a.cdf[2] * a.horizon + b.cdf[2] * b.horizon) / T));
    CHECK(m.mean.se < std::max(a.mean.se, b.mean.se));
    CHECK(merge({a}).mean.value == a.mean.value);
    CHECK_THROWS_AS(merge({}), InvalidParameter);

    EstimatorOptions other = opt;
    other.x_grid = {0.0, 1.0};
    const AoiEmpirical c = aoi_time_average(mm1(Discipline::NPLCFSKeep, 0.5, 1.0, 10'000, 3), other);
    CHECK_THROWS_AS(merge({a, c}), InvalidParameter);
}

TEST_CASE("empirical CSV") {
    EstimatorOptions opt;
    opt.s_grid = {1.0, 2.0};
    opt.x_grid = {0.0, 1.0, 2.0};
    const AoiEmpirical e = aoi_time_average(hand_path({0, 1, 2}, {0, 0, 0}), opt);
    std::ostringstream os;
    write_empirical_csv(os, e);
    const std::string s = os.str();
    CHECK(s.rfind("section,key,value,std_err\nmoments,mean,0.5,", 0) == 0);
    CHECK(s.find("\nlst,1,") != std::string::npos);
    CHECK(s.find("\ncdf,2,1,\n") != std::string::npos);
}

TEST_CASE("closed forms against simulation") {
    SimSettings s;
    s.arrivals = 300'000;
    s.warmup = 30'000;
    s.replications = 2;
    const std::vector<double> s_grid = {0.5, 1.0};
    auto check = [&](const Model& m) {
        INFO(kendall(m), " ", discipline_name(m.discipline), " rho=", m.rho());
        const AoiAnalytic a = analyze(m);
        const AoiEmpirical e = simulate_model(m, s, s_grid, {}).merged;
        CHECK(std::abs(e.mean.value - a.mean) <= 3 * e.mean.se);
        if (a.second_moment) CHECK(std::abs(e.second_moment.value - *a.second_moment) <= 3 * e.second_moment.se);
        CHECK(std::abs(e.lambda_dag.value - a.lambda_dag) <= 3 * e.lambda_dag.se);
        // Informative rate from the peak and delay means.
        CHECK(e.lambda_dag.value == doctest::Approx(1.0 / (e.peak_mean - e.delay_mean)).epsilon(1e-3));
        double prev = 1.0;
        for (const LstPoint& p : e.lst_grid) {
            CHECK(p.value > 0.0);
            CHECK(p.value <= prev);
            prev = p.value;
        }
    };
    for (double rho : {0.3, 0.7}) {
        check(Model{DistSpec::exponential(rho), DistSpec::exponential(1.0), Discipline::FCFS});
        check(Model{DistSpec::exponential(rho), DistSpec::deterministic(1.0), Discipline::FCFS});
        check(Model{DistSpec::deterministic(1 / rho), DistSpec::exponential(1.0), Discipline::FCFS});
    }
    check(Model{DistSpec::deterministic(1.0), from_mean_cv(1.0, 0.5), Discipline::PLCFS});
    check(Model{DistSpec::deterministic(0.5), from_mean_cv(1.0, 0.5), Discipline::PLCFS});
}
