#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "sindyforge/config.hpp"
#include "sindyforge/pipeline.hpp"
#include "sindyforge/util.hpp"
#include "sindyforge/version.hpp"

namespace sf = sindyforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct GenerateArgs {
    std::string system;
    std::string preset = "paper";
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    double dt = 0.0;
};

int cmd_generate(const GenerateArgs& args) {
    sf::DataConfig data;
    if (!args.config_path.empty()) {
        const sf::ExperimentConfig cfg = sf::ExperimentConfig::from_file(args.config_path);
        data = cfg.data;
    }
    if (!args.system.empty()) data.system = args.system;
    data.preset = args.preset;
    if (args.dt > 0.0) data.dt = args.dt;
    if (data.system.empty()) throw sf::ConfigError("generate: --system required");

    const sf::BenchmarkData bench = sf::generate_benchmark(data, args.seed);
    const auto files = sf::write_generated_files(bench, args.out_dir);
    for (const auto& f : files) std::cout << f << '\n';
    return kExitOk;
}

struct FitArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    int jobs = 0;
    bool render = false;
};

int cmd_fit(const FitArgs& args, bool search_only) {
    sf::ExperimentConfig cfg = sf::ExperimentConfig::from_file(args.config_path);
    if (args.seed) cfg.seed = *args.seed;
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.jobs > 0) cfg.jobs = args.jobs;

    const sf::ExperimentReport report = search_only ? sf::run_search_stage(cfg) : sf::run_pipeline(cfg);
    sf::write_report_files(report, cfg);
    std::cout << cfg.out_dir << "/report.json" << '\n';

    if (args.render || search_only) {
        for (const auto& arm : report.arms) {
            std::cout << "# " << arm.name << " (validation rmse " << sf::format_double(arm.best_validation_rmse)
                      << ")\n";
            if (!arm.equations.empty()) std::cout << arm.equations << '\n';
        }
    }
    return kExitOk;
}

struct ScoreArgs {
    std::string measured_path;
    std::string simulated_path;
    std::string column;
    double dt = 0.0;
};

sf::Trajectory load_score_file(const std::string& path, const std::string& column, double dt) {
    std::ifstream in(path);
    if (!in) throw sf::ConfigError("cannot open csv file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw sf::ConfigError("empty file: " + path);
    if (!header.empty() && header.back() == '\r') header.pop_back();

    std::vector<std::string> columns;
    std::string cell;
    std::stringstream ss(header);
    while (std::getline(ss, cell, ',')) columns.push_back(cell);

    std::string target = column;
    bool has_time = !columns.empty() && columns.front() == "t";
    if (target.empty()) {
        for (const auto& c : columns)
            if (c != "t") {
                target = c;
                break;
            }
    }
    if (target.empty()) throw sf::ConfigError("no data column in " + path);

    sf::CsvSchema schema;
    if (has_time) schema.time_column = "t";
    else {
        schema.time_column.reset();
        schema.dt = dt > 0.0 ? dt : 1.0;
    }
    schema.state_columns = {target};
    // score only needs the output column; reuse it as a dummy input to
    // satisfy the record shape.
    schema.input_columns = {target};
    return sf::load_csv(path, schema);
}

int cmd_score(const ScoreArgs& args) {
    sf::Trajectory measured, simulated;
    try {
        measured = load_score_file(args.measured_path, args.column, args.dt);
        simulated = load_score_file(args.simulated_path, args.column, args.dt);
    } catch (const sf::DataError& e) {
        throw sf::ConfigError(e.what());  // unusable input files are a usage error here
    }
    if (measured.rows() != simulated.rows())
        throw sf::ConfigError("score: records have different lengths (" + std::to_string(measured.rows()) +
                              " vs " + std::to_string(simulated.rows()) + ")");

    const sf::Score s = sf::score(measured.states.col(0), simulated.states.col(0));
    nlohmann::json out = {{"bfr", s.bfr}, {"rmse", s.rmse}, {"n_samples", s.n_samples}};
    std::cout << out.dump() << '\n';
    return kExitOk;
}

struct RenderArgs {
    std::string model_path;
    int precision = 6;
};

int cmd_render(const RenderArgs& args) {
    std::ifstream in(args.model_path);
    if (!in) throw sf::ConfigError("cannot open model file: " + args.model_path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw sf::ConfigError(std::string("model parse error: ") + e.what());
    }
    const sf::SparseModel model = sf::model_from_json(doc);
    std::cout << sf::render(model, args.precision) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sindyforge - sparse nonlinear system identification toolkit"};
    app.set_version_flag("--version", std::string("sindyforge ") + sf::kVersion);
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "simulate a benchmark system and write csv datasets");
    generate->add_option("--system", gen.system, "boucwen | tanks | pickplace");
    generate->add_option("--preset", gen.preset, "parameter preset (default: paper)");
    generate->add_option("--config", gen.config_path, "experiment config supplying the data section");
    generate->add_option("--seed", gen.seed, "master seed");
    generate->add_option("--out", gen.out_dir, "output directory");
    generate->add_option("--dt", gen.dt, "sample time override");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "run the full identification pipeline from a config");
    fit_cmd->add_option("--config", fit.config_path, "experiment config (json)")->required();
    std::uint64_t fit_seed = 0;
    auto* fit_seed_opt = fit_cmd->add_option("--seed", fit_seed, "master seed override");
    fit_cmd->add_option("--out", fit.out_dir, "output directory override");
    fit_cmd->add_option("--jobs", fit.jobs, "parallel trial workers");
    fit_cmd->add_flag("--render", fit.render, "print fitted equations");

    FitArgs search_args;
    auto* search_cmd = app.add_subcommand("search", "run only the hyperparameter search stage");
    search_cmd->add_option("--config", search_args.config_path, "experiment config (json)")->required();
    std::uint64_t search_seed = 0;
    auto* search_seed_opt = search_cmd->add_option("--seed", search_seed, "master seed override");
    search_cmd->add_option("--out", search_args.out_dir, "output directory override");
    search_cmd->add_option("--jobs", search_args.jobs, "parallel trial workers");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "score a simulated csv against a measured csv");
    score_cmd->add_option("--measured", score_args.measured_path, "measured csv")->required();
    score_cmd->add_option("--simulated", score_args.simulated_path, "simulated csv")->required();
    score_cmd->add_option("--column", score_args.column, "output column (default: first non-t column)");
    score_cmd->add_option("--dt", score_args.dt, "sample time when files have no t column");

    RenderArgs render_args;
    auto* render_cmd = app.add_subcommand("render", "print the closed-form equations of a model file");
    render_cmd->add_option("--model", render_args.model_path, "model json file")->required();
    render_cmd->add_option("--precision", render_args.precision, "coefficient digits (default 6)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (fit_cmd->parsed()) {
            if (fit_seed_opt->count() > 0) fit.seed = fit_seed;
            return cmd_fit(fit, false);
        }
        if (search_cmd->parsed()) {
            if (search_seed_opt->count() > 0) search_args.seed = search_seed;
            return cmd_fit(search_args, true);
        }
        if (score_cmd->parsed()) return cmd_score(score_args);
        if (render_cmd->parsed()) return cmd_render(render_args);
    } catch (const sf::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
