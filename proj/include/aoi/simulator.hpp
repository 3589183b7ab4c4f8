#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <thread>
#include <vector>

#include "aoi/model.hpp"

namespace aoi {

struct SimConfig {
    Model model;
    std::uint64_t horizon_arrivals = 1'000'000;  // includes the warm-up arrivals
    std::uint64_t warmup_arrivals = 100'000;
    std::uint64_t seed = 1;
    std::uint32_t replications = 1;
};

// Throws InvalidConfig when the config violates its invariants.
void validate(const SimConfig& cfg);

/// Informative departures of one run, in departure order.
struct SamplePath {
    std::vector<double> betas;   // departure times
    std::vector<double> delays;  // system delay of each informative packet
    std::vector<double> peaks;   // AoI just before each informative departure
    double horizon = 0.0;        // betas.back() - betas.front()
    std::uint64_t n_informative = 0;
    std::uint64_t n_total = 0;  // post-warm-up packets that left, served or dropped
    std::uint64_t n_arrivals = 0;
    double busy_time = 0.0;       // total service work performed
    double last_departure = 0.0;  // time the system empties after the last arrival
    bool nonstationary = false;   // rho >= 1 under a discipline that needs rho < 1
    // NP-LCFS-keep: departures where "newest time-stamp so far" and "newest
    // arrival at service start" disagree on informativeness.
    std::uint64_t keep_rule_mismatches = 0;
};

// One replication with the RNG stream for `replication`.
SamplePath simulate(const SimConfig& cfg, std::uint32_t replication = 0);

// Applies f(path, replication) to replications first..replications-1 and
// returns the results in replication order. Replications run on up to
// hardware_concurrency threads; results do not depend on the thread count.
template <class F>
auto replicate_map(const SimConfig& cfg, F f, unsigned max_threads = 0, unsigned first = 0)
    -> std::vector<decltype(f(std::declval<const SamplePath&>(), 0u))> {
    validate(cfg);
    using R = decltype(f(std::declval<const SamplePath&>(), 0u));
    const unsigned n = cfg.replications > first ? cfg.replications - first : 0;
    std::vector<R> out(n);
    unsigned threads = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max(n, 1u));
    std::atomic<unsigned> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto worker = [&] {
        for (unsigned i = next++; i < n; i = next++) {
            try {
                out[i] = f(simulate(cfg, first + i), first + i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<SamplePath> replicate_parallel(const SimConfig& cfg, unsigned max_threads = 0);

// CSV with columns n,beta,delay,peak.
void write_path_csv(std::ostream& os, const SamplePath& path);

}  // namespace aoi
