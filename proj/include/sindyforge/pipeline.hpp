#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sindyforge/arx.hpp"
#include "sindyforge/config.hpp"
#include "sindyforge/metrics.hpp"
#include "sindyforge/search.hpp"

namespace sindyforge {

/// A generated benchmark dataset: observed record (noise applied), clean
/// hidden ground-truth channels, the split, and resolved generator
/// parameters.
struct BenchmarkData {
    Trajectory full;
    Eigen::MatrixXd hidden;
    std::vector<std::string> hidden_names;
    SplitSpec split;
    nlohmann::json params;
};

BenchmarkData generate_benchmark(const DataConfig& cfg, std::uint64_t master_seed);

/// Per-arm outcome: search trace, refit model, test score, and the series
/// needed to re-plot without rerunning.
struct ArmReport {
    std::string name;
    std::string strategy;
    Point best_point;
    double best_validation_rmse = 0.0;
    std::vector<TrialRecord> trials;
    nlohmann::json model_doc;
    std::string equations;
    std::optional<Score> test_score;  // absent when the test simulation diverged
    bool diverged = false;
    std::size_t divergence_index = 0;
    std::vector<double> t;
    std::vector<double> y_measured;
    std::vector<double> y_simulated;
    std::optional<double> ic_estimate;       // hidden tank level at test start
    std::optional<HysteresisLoop> loop;      // quasi-static probe, hysteretic arms
};

struct ExperimentReport {
    nlohmann::json config_echo;
    std::string version;
    std::uint64_t seed = 0;
    std::vector<ArmReport> arms;
    std::optional<HysteresisLoop> truth_loop;  // from generator parameters, when known

    nlohmann::json to_json() const;
};

/// Full experiment: acquire data, split, search each arm by validation RMSE,
/// refit the best point on the training segment, simulate the test segment,
/// and score. Deterministic given config + seed.
ExperimentReport run_pipeline(const ExperimentConfig& cfg);

/// Search stage only: trials and best points, no test simulation.
ExperimentReport run_search_stage(const ExperimentConfig& cfg);

/// Writes report.json and the plot-data CSV (t, y_measured, one simulated
/// column per arm) into cfg.out_dir.
void write_report_files(const ExperimentReport& report, const ExperimentConfig& cfg);

/// Writes train/valid/test CSVs, the ground-truth sidecar, and params.json.
/// Returns the file names written.
std::vector<std::string> write_generated_files(const BenchmarkData& data, const std::string& out_dir);

} // namespace sindyforge
