#include <cmath>

#include "aoi/errors.hpp"
#include "aoi/experiment.hpp"
#include "json.hpp"

namespace aoi {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw InvalidConfig(where + ": missing \"" + key + "\"");
    return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
    const json& v = require(j, key, where);
    if (!v.is_number()) throw InvalidConfig(where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

std::uint64_t count(const json& v, const std::string& what) {
    if (!v.is_number()) throw InvalidConfig(what + " must be a number");
    const double x = v.get<double>();
    if (!(x >= 0.0) || x != std::floor(x) || x > 9.0e15)
        throw InvalidConfig(what + " must be a nonnegative integer");
    return static_cast<std::uint64_t>(x);
}

std::vector<double> grid(const json& v, const std::string& what) {
    if (!v.is_array()) throw InvalidConfig(what + " must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw InvalidConfig(what + " must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

DistSpec parse_dist(const json& j, const std::string& where) {
    if (!j.is_object()) throw InvalidConfig(where + " must be an object");
    try {
        if (j.contains("family")) {
            const std::string fam = j.at("family").get<std::string>();
            Family f;
            if (fam == "auto")
                f = Family::Auto;
            else if (fam == "gamma")
                f = Family::Gamma;
            else
                throw InvalidConfig(where + ": unknown family \"" + fam + "\"");
            return from_mean_cv(f, number(j, "mean", where), number(j, "cv", where));
        }
        const std::string kind = require(j, "kind", where).get<std::string>();
        if (kind == "deterministic") return DistSpec::deterministic(number(j, "value", where));
        if (kind == "exponential") {
            if (j.contains("mean")) return DistSpec::exponential(1.0 / number(j, "mean", where));
            return DistSpec::exponential(number(j, "rate", where));
        }
        if (kind == "gamma") return DistSpec::gamma(number(j, "shape", where), number(j, "rate", where));
        if (kind == "hyperexp2") {
            const double p1 = number(j, "p1", where);
            const double p2 = j.contains("p2") ? number(j, "p2", where) : 1.0 - p1;
            return DistSpec::hyperexp2(p1, number(j, "rate1", where), p2, number(j, "rate2", where));
        }
        throw InvalidConfig(where + ": unknown kind \"" + kind + "\"");
    } catch (const InvalidParameter& e) {
        throw InvalidConfig(where + ": " + e.what());
    } catch (const json::exception& e) {
        throw InvalidConfig(where + ": " + e.what());
    }
}

std::vector<Discipline> disciplines(const json& j, const std::string& where) {
    std::vector<Discipline> out;
    if (j.contains("discipline")) out.push_back(discipline_from_name(j.at("discipline").get<std::string>()));
    if (j.contains("disciplines")) {
        if (!j.at("disciplines").is_array()) throw InvalidConfig(where + ": disciplines must be an array");
        for (const auto& d : j.at("disciplines")) out.push_back(discipline_from_name(d.get<std::string>()));
    }
    return out;
}

SweepFamily sweep_family(const std::string& s) {
    if (s == "mgi1") return SweepFamily::MGI1;
    if (s == "gim1") return SweepFamily::GIM1;
    if (s == "dgi1") return SweepFamily::DGI1;
    throw InvalidConfig("sweep: unknown family \"" + s + "\" (mgi1, gim1, dgi1)");
}

}  // namespace

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Analytic: return "analytic";
        case Mode::Simulate: return "simulate";
        case Mode::Compare: return "compare";
        case Mode::Reproduce: return "reproduce";
    }
    return "?";
}

Mode mode_from_name(const std::string& name) {
    for (Mode m : {Mode::Analytic, Mode::Simulate, Mode::Compare, Mode::Reproduce})
        if (name == mode_name(m)) return m;
    throw InvalidConfig("unknown mode \"" + name + "\"");
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidConfig("config must be a JSON object");

    ExperimentConfig cfg;
    try {
        cfg.schema_version = static_cast<int>(count(require(j, "schema_version", "config"), "schema_version"));
        if (cfg.schema_version != 1)
            throw InvalidConfig("unsupported schema_version " + std::to_string(cfg.schema_version));
        if (j.contains("mode")) cfg.mode = mode_from_name(j.at("mode").get<std::string>());

        if (j.contains("models")) {
            const json& ms = j.at("models");
            if (!ms.is_array()) throw InvalidConfig("models must be an array");
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const std::string where = "models[" + std::to_string(i) + "]";
                const DistSpec g = parse_dist(require(ms[i], "arrival", where), where + ".arrival");
                const DistSpec h = parse_dist(require(ms[i], "service", where), where + ".service");
                auto ds = disciplines(ms[i], where);
                if (ds.empty()) ds.push_back(Discipline::FCFS);
                for (Discipline d : ds) cfg.models.push_back(Model{g, h, d});
            }
        }

        if (j.contains("sweep")) {
            const json& s = j.at("sweep");
            SweepSpec sw;
            sw.family = sweep_family(require(s, "family", "sweep").get<std::string>());
            sw.rho_grid = grid(require(s, "rho_grid", "sweep"), "sweep.rho_grid");
            sw.cv_grid = s.contains("cv_grid") ? grid(s.at("cv_grid"), "sweep.cv_grid") : std::vector<double>{1.0};
            if (s.contains("mean_service")) sw.mean_service = number(s, "mean_service", "sweep");
            auto ds = disciplines(s, "sweep");
            if (!ds.empty()) sw.disciplines = ds;
            cfg.sweep = sw;
        }

        if (j.contains("sim")) {
            const json& s = j.at("sim");
            if (s.contains("arrivals")) cfg.sim.arrivals = count(s.at("arrivals"), "sim.arrivals");
            if (s.contains("warmup")) cfg.sim.warmup = count(s.at("warmup"), "sim.warmup");
            if (s.contains("seed")) cfg.sim.seed = count(s.at("seed"), "sim.seed");
            if (s.contains("replications"))
                cfg.sim.replications = static_cast<std::uint32_t>(count(s.at("replications"), "sim.replications"));
            if (s.contains("batches")) cfg.sim.batches = static_cast<int>(count(s.at("batches"), "sim.batches"));
            if (s.contains("threads")) cfg.sim.threads = static_cast<unsigned>(count(s.at("threads"), "sim.threads"));
        }
        if (j.contains("s_grid")) cfg.s_grid = grid(j.at("s_grid"), "s_grid");
        if (j.contains("x_grid")) cfg.x_grid = grid(j.at("x_grid"), "x_grid");
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
        if (j.contains("figure")) {
            const json& f = j.at("figure");
            cfg.figure = f.is_number() ? std::to_string(f.get<int>()) : f.get<std::string>();
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config: ") + e.what());
    }
    return cfg;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.schema_version != 1) throw InvalidConfig("unsupported schema_version");
    if (cfg.mode == Mode::Reproduce) {
        if (cfg.figure.empty()) throw InvalidConfig("reproduce mode needs a figure");
        return;
    }
    if (cfg.s_grid.empty()) throw InvalidConfig("s_grid must not be empty");
    for (double s : cfg.s_grid)
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidConfig("s_grid points must be positive");
    for (std::size_t i = 1; i < cfg.x_grid.size(); ++i)
        if (!(cfg.x_grid[i] > cfg.x_grid[i - 1])) throw InvalidConfig("x_grid must be strictly increasing");
    if (cfg.sweep) {
        const SweepSpec& s = *cfg.sweep;
        if (s.rho_grid.empty() || s.cv_grid.empty()) throw InvalidConfig("sweep grids must not be empty");
        if (s.disciplines.empty()) throw InvalidConfig("sweep needs at least one discipline");
        if (!(s.mean_service > 0.0)) throw InvalidConfig("sweep.mean_service must be positive");
        bool stable_only = false;
        for (Discipline d : s.disciplines) stable_only = stable_only || needs_stability(d);
        for (double r : s.rho_grid) {
            if (!(r > 0.0) || !std::isfinite(r)) throw InvalidConfig("rho grid points must be positive");
            if (stable_only && r >= 1.0)
                throw InvalidConfig("rho grid must lie in (0, 1) for fcfs and np-lcfs-keep");
        }
        for (double c : s.cv_grid)
            if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidConfig("cv grid points must be nonnegative");
    }
    if (cfg.mode == Mode::Simulate || cfg.mode == Mode::Compare) {
        if (cfg.sim.arrivals < 2) throw InvalidConfig("sim.arrivals must be at least 2");
        if (cfg.sim.replications < 1) throw InvalidConfig("sim.replications must be at least 1");
        if (cfg.sim.batches < 2) throw InvalidConfig("sim.batches must be at least 2");
        for (const Model& m : expand_models(cfg))
            if (m.arrival.is_deterministic() && m.service.is_deterministic())
                throw InvalidConfig("deterministic arrivals with deterministic service cannot be simulated");
    }
}

std::vector<Model> validation_matrix(double rho, double mean_service) {
    const DistSpec m_arr = DistSpec::exponential(rho / mean_service);
    const DistSpec d_arr = DistSpec::deterministic(mean_service / rho);
    const DistSpec m_svc = DistSpec::exponential(1.0 / mean_service);
    const DistSpec d_svc = DistSpec::deterministic(mean_service);
    std::vector<Model> out;
    for (Discipline d : {Discipline::FCFS, Discipline::PLCFS, Discipline::NPLCFSDiscard, Discipline::NPLCFSKeep}) {
        out.push_back({m_arr, m_svc, d});
        out.push_back({m_arr, d_svc, d});
        out.push_back({d_arr, m_svc, d});
    }
    return out;
}

std::vector<Model> expand_models(const ExperimentConfig& cfg) {
    std::vector<Model> out = cfg.models;
    if (cfg.sweep) {
        const SweepSpec& s = *cfg.sweep;
        const double eh = s.mean_service;
        for (double cv : s.cv_grid) {
            for (double rho : s.rho_grid) {
                const double eg = eh / rho;
                DistSpec g = DistSpec::exponential(1.0 / eg);
                DistSpec h = DistSpec::exponential(1.0 / eh);
                switch (s.family) {
                    case SweepFamily::MGI1: h = from_mean_cv(eh, cv); break;
                    case SweepFamily::GIM1: g = from_mean_cv(eg, cv); break;
                    case SweepFamily::DGI1:
                        g = DistSpec::deterministic(eg);
                        h = from_mean_cv(eh, cv);
                        break;
                }
                for (Discipline d : s.disciplines) out.push_back(Model{g, h, d});
            }
        }
    }
    if (out.empty() && !cfg.sweep) out = validation_matrix(0.5);
    return out;
}

}  // namespace aoi
