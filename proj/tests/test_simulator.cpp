#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aoi/errors.hpp"
#include "aoi/lcfs.hpp"
#include "aoi/simulator.hpp"
#include "doctest.h"

using namespace aoi;

namespace {

SimConfig config(DistSpec g, DistSpec h, Discipline d, std::uint64_t n = 200'000, std::uint64_t warm = 20'000) {
    SimConfig c{Model{g, h, d}};
    c.horizon_arrivals = n;
    c.warmup_arrivals = warm;
    return c;
}

double average(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST_CASE("FCFS sample path") {
    const SamplePath p = simulate(config(DistSpec::exponential(0.5), DistSpec::exponential(1.0), Discipline::FCFS, 500'000));
    CHECK(p.n_informative == p.n_total);
    CHECK(p.n_informative == 500'000 - 20'000);
    CHECK(p.n_arrivals == 500'000);
    CHECK(average(p.delays) == doctest::Approx(2.0).epsilon(0.01));
    CHECK(p.horizon == doctest::Approx(p.betas.back() - p.betas.front()));
    // Service times implied by the path: H_i = beta_i - max(beta_{i-1}, alpha_i).
    double h_sum = 0.0;
    for (std::size_t i = 1; i < p.betas.size(); ++i) {
        const double alpha = p.betas[i] - p.delays[i], alpha_prev = p.betas[i - 1] - p.delays[i - 1];
        REQUIRE(alpha >= alpha_prev);
        const double h = p.betas[i] - std::max(p.betas[i - 1], alpha);
        REQUIRE(h > 0.0);
        h_sum += h;
        // A peak is the departure time minus the previous informative arrival.
        REQUIRE(p.peaks[i] == doctest::Approx(p.betas[i] - alpha_prev));
    }
    CHECK(h_sum / (p.betas.size() - 1) == doctest::Approx(1.0).epsilon(0.01));
    CHECK_FALSE(p.nonstationary);
}

TEST_CASE("preemptive LCFS keeps a 1 - zeta fraction") {
    const DistSpec g = DistSpec::exponential(1.0), h = DistSpec::exponential(2.0);
    const SamplePath p = simulate(config(g, h, Discipline::PLCFS));
    const double frac = static_cast<double>(p.n_informative) / p.n_total;
    CHECK(std::abs(frac - 2.0 / 3.0) < 0.005);
    CHECK(static_cast<double>(p.n_informative) / p.horizon ==
          doctest::Approx(plcfs_mg1(h, 1.0).lambda_dag).epsilon(0.01));
    for (std::size_t i = 0; i < p.delays.size(); ++i) REQUIRE(p.peaks[i] >= p.delays[i]);
}

TEST_CASE("non-preemptive disciplines") {
    const DistSpec g = DistSpec::exponential(0.7), h = DistSpec::exponential(1.0);
    const SamplePath d = simulate(config(g, h, Discipline::NPLCFSDiscard));
    CHECK(static_cast<double>(d.n_informative) / d.horizon ==
          doctest::Approx(nplcfs_mg1_discard(h, 0.7).lambda_dag).epsilon(0.01));
    CHECK(d.n_informative < d.n_total);

    const SamplePath k = simulate(config(g, h, Discipline::NPLCFSKeep));
    const SamplePath f = simulate(config(g, h, Discipline::FCFS));
    CHECK(k.keep_rule_mismatches == 0);
    CHECK(static_cast<double>(k.n_informative) / k.horizon ==
          doctest::Approx(nplcfs_mg1_keep(h, 0.7).lambda_dag).epsilon(0.01));
    // Both are work conserving on the same input, so the busy periods coincide.
    CHECK(k.busy_time == doctest::Approx(f.busy_time).epsilon(1e-12));
    CHECK(k.last_departure == doctest::Approx(f.last_departure).epsilon(1e-12));
    CHECK(k.n_total == f.n_total);
}

TEST_CASE("stability flag") {
    const DistSpec g = DistSpec::exponential(1.2), h = DistSpec::exponential(1.0);
    CHECK(simulate(config(g, h, Discipline::FCFS, 20'000, 1'000)).nonstationary);
    CHECK(simulate(config(g, h, Discipline::NPLCFSKeep, 20'000, 1'000)).nonstationary);
    CHECK_FALSE(simulate(config(g, h, Discipline::PLCFS, 20'000, 1'000)).nonstationary);
    CHECK_FALSE(simulate(config(g, h, Discipline::NPLCFSDiscard, 20'000, 1'000)).nonstationary);
}

TEST_CASE("determinism and replication") {
    SimConfig c = config(DistSpec::gamma(2.0, 2.0), from_mean_cv(0.6, 2.0), Discipline::NPLCFSKeep, 50'000, 5'000);
    c.seed = 42;
    c.replications = 4;
    const SamplePath a = simulate(c, 1), b = simulate(c, 1), other = simulate(c, 2);
    CHECK(a.betas == b.betas);
    CHECK(a.delays == b.delays);
    CHECK(a.betas != other.betas);

    const auto par = replicate_parallel(c, 4);
    const auto seq = replicate_parallel(c, 1);
    REQUIRE(par.size() == 4);
    for (unsigned i = 0; i < 4; ++i) {
        std::ostringstream x, y;
        write_path_csv(x, par[i]);
        write_path_csv(y, seq[i]);
        CHECK(x.str() == y.str());
        CHECK(par[i].betas == simulate(c, i).betas);
    }

    c.replications = 1;
    CHECK(replicate_parallel(c).front().betas == simulate(c).betas);
}

TEST_CASE("replication streams are uncorrelated") {
    RngStream a(7, 0), b(7, 1);
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    const int n = 10'000;
    for (int i = 0; i < n; ++i) {
        const double x = a.uniform_open() - 0.5, y = b.uniform_open() - 0.5;
        sa += x, sb += y, sab += x * y, saa += x * x, sbb += y * y;
    }
    const double r = (sab - sa * sb / n) / std::sqrt((saa - sa * sa / n) * (sbb - sb * sb / n));
    CHECK(std::abs(r) < 4.0 / std::sqrt(double(n)));
}

TEST_CASE("invalid configurations") {
    SimConfig c = config(DistSpec::exponential(1.0), DistSpec::exponential(2.0), Discipline::FCFS, 100, 100);
    CHECK_THROWS_AS(simulate(c), InvalidConfig);
    c.warmup_arrivals = 10;
    c.replications = 0;
    CHECK_THROWS_AS(replicate_parallel(c), InvalidConfig);
    c.replications = 1;
    c.horizon_arrivals = 1;
    c.warmup_arrivals = 0;
    CHECK_THROWS_AS(simulate(c), InvalidConfig);
    CHECK_THROWS_AS(simulate(config(DistSpec::deterministic(1.0), DistSpec::deterministic(0.5), Discipline::PLCFS)),
                    InvalidConfig);
}

TEST_CASE("path CSV") {
    const SamplePath p = simulate(config(DistSpec::exponential(1.0), DistSpec::exponential(2.0), Discipline::FCFS, 30, 10));
    std::ostringstream os;
    write_path_csv(os, p);
    const std::string s = os.str();
    CHECK(s.rfind("n,beta,delay,peak\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(p.betas.size() + 1));
}
