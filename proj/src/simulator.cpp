#include "aoi/simulator.hpp"

#include <cstdio>
#include <limits>
#include <ostream>

#include "aoi/errors.hpp"
#include "aoi/rng.hpp"

namespace aoi {

namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

struct Packet {
    double arrival;
    double service;
    std::uint64_t index;
};

// Arrival stream: for every packet the interarrival time is drawn first and
// its service time second, whatever the discipline.
class Source {
public:
    Source(const SimConfig& cfg, std::uint32_t replication)
        : g_(cfg.model.arrival), h_(cfg.model.service), rng_(cfg.seed, replication),
          total_(cfg.horizon_arrivals) {}

    bool next(Packet& p) {
        if (count_ == total_) return false;
        clock_ += sample(g_, rng_);
        p = {clock_, sample(h_, rng_), count_++};
        return true;
    }

private:
    DistSpec g_;
    DistSpec h_;
    RngStream rng_;
    std::uint64_t total_;
    std::uint64_t count_ = 0;
    double clock_ = 0.0;
};

// Records departures; packets that arrived during warm-up are not reported,
// but the AoI bookkeeping still sees them.
class Recorder {
public:
    Recorder(SamplePath& path, std::uint64_t warmup) : path_(path), warmup_(warmup) {}

    void depart(const Packet& p, double when, bool informative) {
        const bool kept = p.index >= warmup_ && have_prev_;
        if (kept) ++path_.n_total;
        if (!informative) return;
        if (kept) {
            path_.betas.push_back(when);
            path_.delays.push_back(when - p.arrival);
            path_.peaks.push_back(when - prev_arrival_);
        }
        prev_arrival_ = p.arrival;
        have_prev_ = true;
    }

    // Packet removed without service (preempted or displaced).
    void drop(const Packet& p) {
        if (p.index >= warmup_ && have_prev_) ++path_.n_total;
    }

private:
    SamplePath& path_;
    std::uint64_t warmup_;
    double prev_arrival_ = 0.0;
    bool have_prev_ = false;
};

void run_fcfs(Source& src, Recorder& rec, SamplePath& path) {
    Packet p;
    double free_at = 0.0;
    while (src.next(p)) {
        free_at = std::max(free_at, p.arrival) + p.service;
        path.busy_time += p.service;
        rec.depart(p, free_at, true);
    }
    path.last_departure = free_at;
}

void run_plcfs(Source& src, Recorder& rec, SamplePath& path) {
    Packet cur;
    if (!src.next(cur)) return;
    Packet nxt;
    while (true) {
        const bool more = src.next(nxt);
        const double done = cur.arrival + cur.service;
        if (!more || done <= nxt.arrival) {
            path.busy_time += cur.service;
            rec.depart(cur, done, true);
            path.last_departure = done;
        } else {
            path.busy_time += nxt.arrival - cur.arrival;
            rec.drop(cur);
        }
        if (!more) break;
        cur = nxt;
    }
}

void run_np_discard(Source& src, Recorder& rec, SamplePath& path) {
    Packet in_service{};
    Packet waiting{};
    bool busy = false;
    bool has_waiting = false;
    double free_at = kNever;

    auto finish_until = [&](double t) {
        while (busy && free_at <= t) {
            rec.depart(in_service, free_at, true);
            path.last_departure = free_at;
            if (has_waiting) {
                in_service = waiting;
                has_waiting = false;
                path.busy_time += in_service.service;
                free_at += in_service.service;
            } else {
                busy = false;
                free_at = kNever;
            }
        }
    };

    Packet p;
    while (src.next(p)) {
        finish_until(p.arrival);
        if (!busy) {
            in_service = p;
            busy = true;
            free_at = p.arrival + p.service;
            path.busy_time += p.service;
        } else {
            if (has_waiting) rec.drop(waiting);
            waiting = p;
            has_waiting = true;
        }
    }
    finish_until(kNever);
}

void run_np_keep(Source& src, Recorder& rec, SamplePath& path) {
    std::vector<Packet> stack;
    Packet in_service{};
    bool busy = false;
    double free_at = kNever;
    std::uint64_t latest_arrival = 0;     // index of the newest arrival so far
    bool in_service_was_latest = false;   // at its service start
    bool any_delivered = false;
    std::uint64_t newest_delivered = 0;   // index of the newest delivered packet

    auto start = [&](const Packet& p, double t) {
        in_service = p;
        in_service_was_latest = p.index == latest_arrival;
        busy = true;
        free_at = t + p.service;
        path.busy_time += p.service;
    };

    auto finish_until = [&](double t) {
        while (busy && free_at <= t) {
            const bool newer = !any_delivered || in_service.index > newest_delivered;
            if (newer != in_service_was_latest) ++path.keep_rule_mismatches;
            if (newer) {
                newest_delivered = in_service.index;
                any_delivered = true;
            }
            rec.depart(in_service, free_at, newer);
            path.last_departure = free_at;
            const double now = free_at;
            if (!stack.empty()) {
                const Packet top = stack.back();
                stack.pop_back();
                start(top, now);
            } else {
                busy = false;
                free_at = kNever;
            }
        }
    };

    Packet p;
    while (src.next(p)) {
        finish_until(p.arrival);
        latest_arrival = p.index;
        if (!busy)
            start(p, p.arrival);
        else
            stack.push_back(p);
    }
    finish_until(kNever);
}

}  // namespace

void validate(const SimConfig& cfg) {
    if (cfg.horizon_arrivals < 2) throw InvalidConfig("horizon must contain at least two arrivals");
    if (cfg.warmup_arrivals >= cfg.horizon_arrivals)
        throw InvalidConfig("warmup_arrivals must be smaller than horizon_arrivals");
    if (cfg.replications < 1) throw InvalidConfig("replications must be at least 1");
    if (cfg.model.arrival.is_deterministic() && cfg.model.service.is_deterministic())
        throw InvalidConfig("deterministic arrivals with deterministic service are not supported");
}

SamplePath simulate(const SimConfig& cfg, std::uint32_t replication) {
    validate(cfg);
    SamplePath path;
    path.n_arrivals = cfg.horizon_arrivals;
    path.nonstationary = needs_stability(cfg.model.discipline) && !(cfg.model.rho() < 1.0);
    const std::size_t expect = cfg.horizon_arrivals - cfg.warmup_arrivals;
    path.betas.reserve(expect);
    path.delays.reserve(expect);
    path.peaks.reserve(expect);

    Source src(cfg, replication);
    Recorder rec(path, cfg.warmup_arrivals);
    switch (cfg.model.discipline) {
        case Discipline::FCFS: run_fcfs(src, rec, path); break;
        case Discipline::PLCFS: run_plcfs(src, rec, path); break;
        case Discipline::NPLCFSDiscard: run_np_discard(src, rec, path); break;
        case Discipline::NPLCFSKeep: run_np_keep(src, rec, path); break;
    }
    path.n_informative = path.betas.size();
    if (path.n_informative >= 2) path.horizon = path.betas.back() - path.betas.front();
    return path;
}

std::vector<SamplePath> replicate_parallel(const SimConfig& cfg, unsigned max_threads) {
    return replicate_map(cfg, [](const SamplePath& p, unsigned) { return p; }, max_threads);
}

void write_path_csv(std::ostream& os, const SamplePath& path) {
    os << "n,beta,delay,peak\n";
    char buf[128];
    for (std::size_t i = 0; i < path.betas.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g,%.12g\n", i + 1, path.betas[i],
                      path.delays[i], path.peaks[i]);
        os << buf;
    }
}

}  // namespace aoi
