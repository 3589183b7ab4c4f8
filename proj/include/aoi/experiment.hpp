#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aoi/estimator.hpp"
#include "aoi/model.hpp"

namespace aoi {

enum class Mode { Analytic, Simulate, Compare, Reproduce };

const char* mode_name(Mode m);
Mode mode_from_name(const std::string& name);  // throws InvalidConfig

// Which side of the queue a sweep varies by Cv; the other side is
// exponential (MGI1, GIM1) or deterministic (DGI1 arrivals).
enum class SweepFamily { MGI1, GIM1, DGI1 };

struct SweepSpec {
    SweepFamily family = SweepFamily::MGI1;
    std::vector<double> rho_grid;
    std::vector<double> cv_grid;
    double mean_service = 1.0;
    std::vector<Discipline> disciplines = {Discipline::FCFS, Discipline::PLCFS,
                                           Discipline::NPLCFSDiscard, Discipline::NPLCFSKeep};
};

struct SimSettings {
    std::uint64_t arrivals = 1'000'000;  // reported arrivals, after the warm-up
    std::uint64_t warmup = 100'000;
    std::uint64_t seed = 1;
    std::uint32_t replications = 8;
    int batches = 32;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct ExperimentConfig {
    int schema_version = 1;
    Mode mode = Mode::Analytic;
    std::vector<Model> models;
    std::optional<SweepSpec> sweep;
    SimSettings sim;
    std::vector<double> s_grid = {0.25, 0.5, 1.0, 2.0};
    std::vector<double> x_grid;  // empty: default grid of the first replication
    std::string out;             // empty: CSV to stdout
    std::string figure;
};

// JSON config, schema_version 1. Throws InvalidConfig.
ExperimentConfig parse_config(const std::string& json_text);
void validate(const ExperimentConfig& cfg);

// Explicit models followed by the sweep; the validation matrix at rho = 0.5
// when neither is given.
std::vector<Model> expand_models(const ExperimentConfig& cfg);

// Four disciplines x {M/M/1, M/D/1, D/M/1}.
std::vector<Model> validation_matrix(double rho, double mean_service = 1.0);

std::string kendall(const Model& m);  // e.g. "M/D/1"

// Twelve significant digits; empty for non-finite values.
std::string fmt(double v);

// RFC 4180 table with a mandatory header row.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row);
    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    std::size_t column(const std::string& name) const;

    void write(std::ostream& os) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Pooled estimate for one model plus the sample-path identity checks of
/// every replication.
struct SimResult {
    AoiEmpirical merged;
    bool extended = false;  // slow-mixing horizon extension applied
    // Largest |cdf - cdf_lemma2| / cdf_gap_bound over all paths and grid points.
    double cdf_gap_ratio = 0.0;
    // Same for the first two moments against their gap bounds.
    std::array<double, 2> moment_gap_ratio{};
    double seconds_per_path = 0.0;
};

SimResult simulate_model(const Model& m, const SimSettings& sim, const std::vector<double>& s_grid,
                         const std::vector<double>& x_grid);

struct RunResult {
    CsvTable table{{}};
    int failures = 0;  // compare rows outside 3 standard errors
    double cdf_gap_ratio = 0.0;
    std::array<double, 2> moment_gap_ratio{};
    double max_seconds_per_path = 0.0;
    std::string summary;
};

RunResult run_analytic(const ExperimentConfig& cfg);
RunResult run_simulate(const ExperimentConfig& cfg);
RunResult run_compare(const ExperimentConfig& cfg);
// Long format: figure,series,x_name,x,y_name,y,status. "all" concatenates
// every figure. Throws UnknownFigure.
RunResult run_reproduce(const std::string& figure);
RunResult run(const ExperimentConfig& cfg);

const std::vector<std::string>& figure_ids();

}  // namespace aoi
