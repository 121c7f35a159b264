#pragma once

#include <cstdint>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sindyforge/benchmarks.hpp"
#include "sindyforge/search.hpp"
#include "sindyforge/strategies.hpp"
#include "sindyforge/timeseries.hpp"

namespace sindyforge {

/// Where the experiment data comes from: a benchmark generator or CSV files.
struct DataConfig {
    std::string source = "generate";  // "generate" | "csv"

    // generate
    std::string system;               // "boucwen" | "tanks" | "pickplace"
    std::string preset = "paper";
    nlohmann::json params = nlohmann::json::object();  // overrides onto the preset
    std::optional<double> dt;
    std::optional<ExcitationSpec> excitation;
    double snr_db = std::numeric_limits<double>::infinity();
    std::optional<SplitSpec> split;

    // csv: either one file with a three-way split, or train/test files with
    // the validation segment taken from the train file tail.
    std::string file;
    std::string train_file;
    std::string test_file;
    CsvSchema schema;
    Eigen::Index valid_len = 0;
};

/// One experiment arm: a strategy, its candidate library, fixed
/// hyperparameters, and the search space over the rest.
struct ArmConfig {
    std::string name;
    StrategyKind strategy = StrategyKind::Naive;

    std::string library_kind = "polynomial";  // "polynomial" | "sqrt_augmented" | "boucwen"
    int degree = 2;
    bool include_constant = false;
    std::vector<std::string> sqrt_channels;

    std::string diff_method = "smoothed";
    std::map<std::string, double> fixed;  // lambda, lambda_d, m_L, k1, na, ...
    bool normalize = true;                // route fits through the unit-RMS scaling step

    GridSpec ic_grid{0.0, 10.0, 200};
    double x1_max = 10.0;
    std::map<std::string, std::pair<double, double>> bounds;  // physical-parameter search intervals
    std::optional<std::pair<double, double>> clip_y;          // known output saturation range, if any

    SearchSpace search;  // seed assigned per arm by the pipeline
};

struct ExperimentConfig {
    std::string name = "experiment";
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int substeps = 10;
    int jobs = 1;
    DataConfig data;
    std::vector<ArmConfig> arms;
    nlohmann::json raw;  // verbatim echo for the report

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig from_file(const std::string& path);

    void validate() const;
};

} // namespace sindyforge
