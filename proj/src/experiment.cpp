#include "aoi/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "aoi/analyze.hpp"
#include "aoi/errors.hpp"

namespace aoi {

namespace {

// FCFS and NP-LCFS-keep relax slowly near saturation.
constexpr double kSlowMixingRho = 0.95;
constexpr std::uint64_t kSlowMixingFactor = 4;

const char* letter(const DistSpec& d) {
    if (d.is_deterministic()) return "D";
    if (d.is_exponential()) return "M";
    if (d.is<Gamma>()) return "Gamma";
    return "H2";
}

std::vector<std::string> model_cells(const Model& m) {
    return {kendall(m), describe(m.arrival), describe(m.service), discipline_name(m.discipline), fmt(m.rho())};
}

std::vector<std::string> model_header() { return {"model", "arrival", "service", "discipline", "rho"}; }

// Status for an analytic failure; rows are kept, values left empty.
template <class F>
std::string guarded(F f) {
    try {
        f();
        return "ok";
    } catch (const Unstable&) {
        return "unstable";
    } catch (const DegenerateRace&) {
        return "degenerate";
    } catch (const DegenerateThroughput&) {
        return "degenerate";
    } catch (const Unsupported&) {
        return "unsupported";
    } catch (const InvalidParameter&) {
        return "invalid";
    }
}

bool slow_mixing(const Model& m) {
    return needs_stability(m.discipline) && m.rho() >= kSlowMixingRho && m.rho() < 1.0;
}

void write_out(RunResult& r, const char* mode, std::size_t models) {
    std::ostringstream os;
    os << mode << ": " << models << " model(s), " << r.table.rows().size() << " row(s)";
    if (r.failures) os << ", " << r.failures << " failed";
    r.summary = os.str();
}

}  // namespace

std::string kendall(const Model& m) { return std::string(letter(m.arrival)) + "/" + letter(m.service) + "/1"; }

std::string fmt(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvTable::add(std::vector<std::string> row) {
    row.resize(header_.size());
    rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) throw InvalidParameter("no column " + name);
    return it - header_.begin();
}

void CsvTable::write(std::ostream& os) const {
    auto line = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os << ',';
            const std::string& c = cells[i];
            if (c.find_first_of(",\"\r\n") == std::string::npos) {
                os << c;
                continue;
            }
            os << '"';
            for (char ch : c) {
                if (ch == '"') os << '"';
                os << ch;
            }
            os << '"';
        }
        os << "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

std::string CsvTable::str() const {
    std::ostringstream os;
    write(os);
    return os.str();
}

SimResult simulate_model(const Model& m, const SimSettings& sim, const std::vector<double>& s_grid,
                         const std::vector<double>& x_grid) {
    SimResult res;
    SimConfig cfg{m};
    std::uint64_t arrivals = sim.arrivals;
    std::uint64_t warmup = sim.warmup;
    if (slow_mixing(m)) {
        arrivals *= kSlowMixingFactor;
        warmup *= kSlowMixingFactor;
        res.extended = true;
    }
    cfg.horizon_arrivals = arrivals + warmup;
    cfg.warmup_arrivals = warmup;
    cfg.seed = sim.seed;
    cfg.replications = sim.replications;

    EstimatorOptions opt;
    opt.s_grid = s_grid;
    opt.x_grid = x_grid;
    opt.batches = sim.batches;

    struct Part {
        AoiEmpirical e;
        double cdf_ratio = 0.0;
        std::array<double, 2> moment_ratio{};
    };
    auto estimate = [&opt](const SamplePath& p, unsigned) {
        Part r;
        r.e = aoi_time_average(p, opt);
        for (std::size_t j = 0; j < r.e.cdf.size(); ++j)
            r.cdf_ratio = std::max(r.cdf_ratio, std::abs(r.e.cdf[j] - r.e.cdf_lemma2[j]) / r.e.cdf_gap_bound);
        const double direct[2] = {r.e.mean.value, r.e.second_moment.value};
        for (int k = 0; k < 2; ++k)
            r.moment_ratio[k] = std::abs(direct[k] - r.e.moments_from_peaks[k]) / r.e.moment_gap_bound[k];
        return r;
    };

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Part> parts;
    unsigned first = 0;
    if (opt.x_grid.empty()) {
        validate(cfg);
        parts.push_back(estimate(simulate(cfg, 0), 0));
        opt.x_grid = parts.front().e.cdf_x;
        first = 1;
    }
    for (auto& p : replicate_map(cfg, estimate, sim.threads, first)) parts.push_back(std::move(p));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.seconds_per_path = secs / parts.size();

    std::vector<AoiEmpirical> es;
    for (const Part& p : parts) {
        es.push_back(p.e);
        res.cdf_gap_ratio = std::max(res.cdf_gap_ratio, p.cdf_ratio);
        for (int k = 0; k < 2; ++k) res.moment_gap_ratio[k] = std::max(res.moment_gap_ratio[k], p.moment_ratio[k]);
    }
    res.merged = merge(es);
    return res;
}

RunResult run_analytic(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<std::string> header = model_header();
    for (const char* c : {"mean", "second_moment", "sd", "lambda_dag"}) header.push_back(c);
    for (double s : cfg.s_grid) header.push_back("lst_" + fmt(s));
    header.push_back("status");

    RunResult r;
    r.table = CsvTable(header);
    const auto models = expand_models(cfg);
    for (const Model& m : models) {
        std::vector<std::string> row = model_cells(m);
        std::vector<std::string> vals;
        bool finite = true;
        auto put = [&](double v) {
            finite = finite && std::isfinite(v);
            vals.push_back(fmt(v));
        };
        std::string status = guarded([&] {
            const AoiAnalytic a = analyze(m);
            put(a.mean);
            if (a.second_moment) {
                put(*a.second_moment);
                put(*a.sd());
            } else {
                vals.insert(vals.end(), 2, "");
            }
            put(a.lambda_dag);
            for (double s : cfg.s_grid) put(a.lst(s));
        });
        if (status == "ok" && !finite) status = "non_finite";
        if (status == "ok" || status == "non_finite") row.insert(row.end(), vals.begin(), vals.end());
        row.resize(header.size() - 1);
        row.push_back(status);
        r.table.add(row);
    }
    write_out(r, "analytic", models.size());
    return r;
}

RunResult run_simulate(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<std::string> header = model_header();
    for (const char* c : {"section", "key", "value", "std_err", "status"}) header.push_back(c);

    RunResult r;
    r.table = CsvTable(header);
    const auto models = expand_models(cfg);
    for (const Model& m : models) {
        const SimResult sr = simulate_model(m, cfg.sim, cfg.s_grid, cfg.x_grid);
        const AoiEmpirical& e = sr.merged;
        const std::string status = e.nonstationary ? "nonstationary" : sr.extended ? "slow_mixing" : "ok";
        auto emit = [&](const char* section, const std::string& key, double v, const std::string& se) {
            std::vector<std::string> row = model_cells(m);
            row.insert(row.end(), {section, key, fmt(v), se, status});
            r.table.add(row);
        };
        emit("moments", "mean", e.mean.value, fmt(e.mean.se));
        emit("moments", "second_moment", e.second_moment.value, fmt(e.second_moment.se));
        emit("moments", "third_moment", e.third_moment.value, fmt(e.third_moment.se));
        emit("moments", "lambda_dag", e.lambda_dag.value, fmt(e.lambda_dag.se));
        emit("moments", "peak_mean", e.peak_mean, "");
        emit("moments", "delay_mean", e.delay_mean, "");
        emit("moments", "horizon", e.horizon, "");
        for (const LstPoint& p : e.lst_grid) emit("lst", fmt(p.s), p.value, fmt(p.se));
        for (std::size_t j = 0; j < e.cdf_x.size(); ++j) emit("cdf", fmt(e.cdf_x[j]), e.cdf[j], "");
        r.cdf_gap_ratio = std::max(r.cdf_gap_ratio, sr.cdf_gap_ratio);
        for (int k = 0; k < 2; ++k) r.moment_gap_ratio[k] = std::max(r.moment_gap_ratio[k], sr.moment_gap_ratio[k]);
        r.max_seconds_per_path = std::max(r.max_seconds_per_path, sr.seconds_per_path);
    }
    write_out(r, "simulate", models.size());
    return r;
}

RunResult run_compare(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<std::string> header = model_header();
    for (const char* c : {"quantity", "analytic", "simulated", "std_err", "z_score", "pass", "status"})
        header.push_back(c);

    RunResult r;
    r.table = CsvTable(header);
    const auto models = expand_models(cfg);
    for (const Model& m : models) {
        std::optional<AoiAnalytic> a;
        std::string status = guarded([&] { a = analyze(m); });
        if (!a) {
            std::vector<std::string> row = model_cells(m);
            row.resize(header.size() - 1);
            row.push_back(status);
            r.table.add(row);
            continue;
        }
        const SimResult sr = simulate_model(m, cfg.sim, cfg.s_grid, cfg.x_grid);
        const AoiEmpirical& e = sr.merged;
        if (sr.extended) status = "slow_mixing";
        auto emit = [&](const std::string& q, double av, const Estimate& sv) {
            const double z = (sv.value - av) / sv.se;
            const bool pass = std::abs(sv.value - av) <= 3.0 * sv.se;
            if (!pass) ++r.failures;
            std::vector<std::string> row = model_cells(m);
            row.insert(row.end(), {q, fmt(av), fmt(sv.value), fmt(sv.se), fmt(z), pass ? "true" : "false", status});
            r.table.add(row);
        };
        emit("mean", a->mean, e.mean);
        if (a->second_moment) emit("second_moment", *a->second_moment, e.second_moment);
        for (const LstPoint& p : e.lst_grid) emit("lst_" + fmt(p.s), a->lst(p.s), {p.value, p.se});
        r.cdf_gap_ratio = std::max(r.cdf_gap_ratio, sr.cdf_gap_ratio);
        for (int k = 0; k < 2; ++k) r.moment_gap_ratio[k] = std::max(r.moment_gap_ratio[k], sr.moment_gap_ratio[k]);
        r.max_seconds_per_path = std::max(r.max_seconds_per_path, sr.seconds_per_path);
    }
    write_out(r, "compare", models.size());
    return r;
}

RunResult run(const ExperimentConfig& cfg) {
    switch (cfg.mode) {
        case Mode::Analytic: return run_analytic(cfg);
        case Mode::Simulate: return run_simulate(cfg);
        case Mode::Compare: return run_compare(cfg);
        case Mode::Reproduce:
            validate(cfg);
            return run_reproduce(cfg.figure);
    }
    throw InvalidConfig("unknown mode");
}

}  // namespace aoi
