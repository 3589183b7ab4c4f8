#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "aoi/errors.hpp"
#include "aoi/experiment.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationFailure = 1;
constexpr int kInvalidConfig = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw aoi::InvalidConfig("cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age of information: closed forms, simulation and figure curves"};
    std::string config_path, mode, out, figure;
    std::optional<std::uint64_t> seed, arrivals, warmup;
    std::optional<std::uint32_t> reps;
    app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--mode", mode, "analytic | simulate | compare | reproduce");
    app.add_option("--seed", seed, "base RNG seed");
    app.add_option("--arrivals", arrivals, "arrivals per replication after the warm-up");
    app.add_option("--warmup", warmup, "warm-up arrivals per replication");
    app.add_option("--reps", reps, "replications per model");
    app.add_option("--out", out, "CSV output path (default: stdout)");
    app.add_option("--figure", figure, "3, 4, 5a, 5b, 6, 7, 8, 9 or all");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        aoi::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = aoi::parse_config(slurp(config_path));
        if (!figure.empty()) {
            cfg.figure = figure;
            if (mode.empty()) cfg.mode = aoi::Mode::Reproduce;
        }
        if (!mode.empty()) cfg.mode = aoi::mode_from_name(mode);
        if (seed) cfg.sim.seed = *seed;
        if (arrivals) cfg.sim.arrivals = *arrivals;
        if (warmup) cfg.sim.warmup = *warmup;
        if (reps) cfg.sim.replications = *reps;
        if (!out.empty()) cfg.out = out;

        const aoi::RunResult r = aoi::run(cfg);
        if (cfg.out.empty()) {
            r.table.write(std::cout);
            std::cerr << r.summary << '\n';
        } else {
            std::ofstream os(cfg.out, std::ios::binary);
            if (!os) throw aoi::InvalidConfig("cannot write " + cfg.out);
            r.table.write(os);
            std::cout << r.summary << "; wrote " << cfg.out << '\n';
        }
        return r.failures ? kValidationFailure : kOk;
    } catch (const aoi::InvalidConfig& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return kInvalidConfig;
    } catch (const aoi::UnknownFigure& e) {
        std::cerr << e.what() << '\n';
        return kInvalidConfig;
    }
}
