#include "sindyforge/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "sindyforge/differentiation.hpp"
#include "sindyforge/util.hpp"
#include "sindyforge/version.hpp"

namespace sindyforge {

namespace {

// ---------------------------------------------------------------------------
// Benchmark presets and parameter (de)serialization
// ---------------------------------------------------------------------------

BoucWenParams boucwen_params_from_json(const nlohmann::json& j) {
    BoucWenParams p;
    p.m_L = j.value("m_L", p.m_L);
    p.c_L = j.value("c_L", p.c_L);
    p.k_L = j.value("k_L", p.k_L);
    p.alpha = j.value("alpha", p.alpha);
    p.beta = j.value("beta", p.beta);
    p.gamma = j.value("gamma", p.gamma);
    p.delta = j.value("delta", p.delta);
    return p;
}

nlohmann::json boucwen_params_to_json(const BoucWenParams& p) {
    return {{"m_L", p.m_L},   {"c_L", p.c_L},   {"k_L", p.k_L},    {"alpha", p.alpha},
            {"beta", p.beta}, {"gamma", p.gamma}, {"delta", p.delta}};
}

TanksParams tanks_params_from_json(const nlohmann::json& j) {
    TanksParams p;
    p.k1 = j.value("k1", p.k1);
    p.k2 = j.value("k2", p.k2);
    p.k3 = j.value("k3", p.k3);
    p.k4 = j.value("k4", p.k4);
    p.x1_max = j.value("x1_max", p.x1_max);
    p.x2_max = j.value("x2_max", p.x2_max);
    p.overflow_fraction = j.value("overflow_fraction", p.overflow_fraction);
    return p;
}

nlohmann::json tanks_params_to_json(const TanksParams& p) {
    return {{"k1", p.k1},         {"k2", p.k2},         {"k3", p.k3},
            {"k4", p.k4},         {"x1_max", p.x1_max}, {"x2_max", p.x2_max},
            {"overflow_fraction", p.overflow_fraction}};
}

PickPlaceParams pickplace_params_from_json(const nlohmann::json& j) {
    PickPlaceParams p;
    p.free_stiffness = j.value("free_stiffness", p.free_stiffness);
    p.free_damping = j.value("free_damping", p.free_damping);
    p.gain = j.value("gain", p.gain);
    p.impact_stiffness = j.value("impact_stiffness", p.impact_stiffness);
    p.impact_damping = j.value("impact_damping", p.impact_damping);
    p.y_lo = j.value("y_lo", p.y_lo);
    p.y_hi = j.value("y_hi", p.y_hi);
    p.impact_depth = j.value("impact_depth", p.impact_depth);
    return p;
}

nlohmann::json pickplace_params_to_json(const PickPlaceParams& p) {
    return {{"free_stiffness", p.free_stiffness},
            {"free_damping", p.free_damping},
            {"gain", p.gain},
            {"impact_stiffness", p.impact_stiffness},
            {"impact_damping", p.impact_damping},
            {"y_lo", p.y_lo},
            {"y_hi", p.y_hi},
            {"impact_depth", p.impact_depth}};
}

struct Preset {
    double dt = 0.0;
    ExcitationSpec excitation;
    SplitSpec split;
    Eigen::Vector3d boucwen_x0 = Eigen::Vector3d::Zero();
    Eigen::Vector2d tanks_x0 = Eigen::Vector2d::Zero();
};

Preset preset_for(const std::string& system, const std::string& name) {
    if (name != "paper" && name != "reference")
        throw ConfigError("generate: unknown preset '" + name + "'");

    Preset p;
    if (system == "boucwen") {
        p.dt = 1.0 / 750.0;
        p.excitation = {ExcitationKind::Multisine, 150.0, 0.0, 0.5, 8.0, 5999.0 / 750.0, 0};
        p.split = {4000, 1000, 1000};
    } else if (system == "tanks") {
        p.dt = 0.01;
        p.excitation = {ExcitationKind::Multisine, 2.2, 2.8, 0.2, 2.0, 12.79, 0};
        p.split = {768, 256, 256};
        p.tanks_x0 << 5.0, 5.0;
    } else if (system == "pickplace") {
        p.dt = 1.0 / 400.0;
        p.excitation = {ExcitationKind::FilteredRandom, 4.0, 0.4, 0.0, 3.0, 5999.0 / 400.0, 0};
        p.split = {3840, 960, 1200};
    } else {
        throw ConfigError("generate: unknown system '" + system + "'");
    }
    return p;
}

} // namespace

BenchmarkData generate_benchmark(const DataConfig& cfg, std::uint64_t master_seed) {
    const Preset preset = preset_for(cfg.system, cfg.preset);
    const double dt = cfg.dt.value_or(preset.dt);
    ExcitationSpec excitation = cfg.excitation.value_or(preset.excitation);
    excitation.seed = derive_seed(master_seed, "excitation");

    BenchmarkData data;
    BenchmarkRecord rec;
    nlohmann::json params;
    if (cfg.system == "boucwen") {
        const BoucWenParams p = boucwen_params_from_json(cfg.params);
        rec = simulate_boucwen(p, excitation, dt, preset.boucwen_x0);
        params = boucwen_params_to_json(p);
    } else if (cfg.system == "tanks") {
        const TanksParams p = tanks_params_from_json(cfg.params);
        rec = simulate_tanks(p, excitation, dt, preset.tanks_x0);
        params = tanks_params_to_json(p);
    } else {
        const PickPlaceParams p = pickplace_params_from_json(cfg.params);
        rec = simulate_pickplace(p, excitation, dt);
        params = pickplace_params_to_json(p);
    }

    data.full = add_noise(rec.traj, cfg.snr_db, derive_seed(master_seed, "noise"));
    data.hidden = rec.hidden;
    data.hidden_names = rec.hidden_names;
    data.split = cfg.split.value_or(preset.split);
    data.split.validate(data.full.rows());

    data.params["system"] = cfg.system;
    data.params["dt"] = dt;
    data.params["params"] = params;
    data.params["excitation"] = {{"kind", excitation_kind_to_string(excitation.kind)},
                                 {"amplitude", excitation.amplitude},
                                 {"offset", excitation.offset},
                                 {"f_lo", excitation.f_lo},
                                 {"f_hi", excitation.f_hi},
                                 {"duration", excitation.duration},
                                 {"seed", excitation.seed}};
    data.params["snr_db"] = std::isfinite(cfg.snr_db) ? nlohmann::json(cfg.snr_db) : nlohmann::json();
    data.params["split"] = {{"train", data.split.train_len}, {"valid", data.split.valid_len},
                            {"test", data.split.test_len}};
    return data;
}

namespace {

// ---------------------------------------------------------------------------
// Data acquisition
// ---------------------------------------------------------------------------

struct DataBundle {
    Trajectory train, valid, test;
    std::string system;          // generator system name, empty for csv data
    nlohmann::json gen_params;   // resolved generator parameters, empty for csv
};

DataBundle acquire_data(const ExperimentConfig& cfg) {
    DataBundle bundle;
    if (cfg.data.source == "generate") {
        BenchmarkData data = generate_benchmark(cfg.data, cfg.seed);
        std::tie(bundle.train, bundle.valid, bundle.test) = split(data.full, data.split);
        bundle.system = cfg.data.system;
        bundle.gen_params = data.params;
    } else {
        if (!cfg.data.file.empty()) {
            const Trajectory full = load_csv(cfg.data.file, cfg.data.schema);
            if (!cfg.data.split) throw ConfigError("csv data: single-file source needs a split");
            std::tie(bundle.train, bundle.valid, bundle.test) = split(full, *cfg.data.split);
        } else {
            if (cfg.data.train_file.empty()) throw ConfigError("csv data: need 'file' or 'train_file'");
            const Trajectory train_full = load_csv(cfg.data.train_file, cfg.data.schema);
            const Eigen::Index valid_len = cfg.data.valid_len;
            if (valid_len < 0 || valid_len >= train_full.rows())
                throw ConfigError("csv data: valid_len out of range");
            SplitSpec s{train_full.rows() - valid_len, valid_len, 0};
            auto [train, valid, unused] = split(train_full, s);
            bundle.train = std::move(train);
            bundle.valid = std::move(valid);
            if (!cfg.data.test_file.empty()) bundle.test = load_csv(cfg.data.test_file, cfg.data.schema);
        }
    }
    bundle.train.validate();
    return bundle;
}

// ---------------------------------------------------------------------------
// Arm fitting
// ---------------------------------------------------------------------------

double arm_param(const Point& point, const ArmConfig& arm, const std::string& key, double fallback) {
    auto it = point.find(key);
    if (it != point.end()) return it->second;
    auto fx = arm.fixed.find(key);
    if (fx != arm.fixed.end()) return fx->second;
    return fallback;
}

DiffSpec make_diff_spec(const Point& point, const ArmConfig& arm) {
    DiffSpec d;
    if (arm.diff_method == "central") d.method = DiffMethod::Central;
    else if (arm.diff_method == "smoothed") d.method = DiffMethod::Smoothed;
    else throw ConfigError("arm '" + arm.name + "': unknown diff method '" + arm.diff_method + "'");
    d.lambda_d = arm_param(point, arm, "lambda_d", 0.0);
    return d;
}

StlsSpec make_stls_spec(const Point& point, const ArmConfig& arm) {
    StlsSpec s;
    s.lambda = arm_param(point, arm, "lambda", 0.1);
    s.normalize_columns = arm.normalize;
    return s;
}

// Simulation options for one arm: global substeps, the arm's known output
// saturation range on state 0, and the hidden-level clamp for tank models.
SimOptions arm_sim_options(const ArmConfig& arm, const SimOptions& base, std::size_t n_states) {
    SimOptions opts = base;
    if (arm.strategy == StrategyKind::TanksHidden) opts = tanks_sim_options(base, arm.x1_max);
    if (arm.clip_y) {
        if (opts.clip.empty()) opts.clip.assign(n_states, std::nullopt);
        opts.clip[0] = arm.clip_y;
    }
    return opts;
}

double train_channel_max(const Trajectory& train, const std::string& name) {
    for (Eigen::Index i = 0; i < train.n_states(); ++i)
        if (train.state_name(i) == name) return train.states.col(i).maxCoeff();
    for (Eigen::Index j = 0; j < train.n_inputs(); ++j)
        if (train.input_name(j) == name) return train.inputs.col(j).maxCoeff();
    throw ConfigError("sqrt channel '" + name + "' not found in the training record");
}

FeatureLibrary build_arm_library(const ArmConfig& arm, const Trajectory& train) {
    int n = 0, m = static_cast<int>(train.n_inputs());
    std::vector<std::string> names;
    switch (arm.strategy) {
        case StrategyKind::Naive:
            n = static_cast<int>(train.n_states());
            names = train.channel_names;
            break;
        case StrategyKind::SecondOrder:
            n = 2;
            names.push_back(train.state_name(0));
            names.push_back(train.state_name(0) + "dot");
            for (Eigen::Index j = 0; j < train.n_inputs(); ++j) names.push_back(train.input_name(j));
            break;
        case StrategyKind::TanksHidden:
            n = 2;
            names.push_back(train.state_name(0));
            names.push_back("x1");
            for (Eigen::Index j = 0; j < train.n_inputs(); ++j) names.push_back(train.input_name(j));
            break;
        case StrategyKind::BoucwenHidden:
        case StrategyKind::Arx:
            throw ConfigError("internal: no user library for this strategy");
    }

    FeatureLibrary lib = polynomial_library(n, m, arm.degree, names);
    if (arm.library_kind == "polynomial") return lib;
    if (arm.library_kind != "sqrt_augmented")
        throw ConfigError("arm '" + arm.name + "': library kind '" + arm.library_kind +
                          "' not usable with this strategy");

    std::vector<int> channels;
    std::vector<std::pair<double, double>> guards;
    for (const auto& channel : arm.sqrt_channels) {
        auto it = std::find(names.begin(), names.end(), channel);
        if (it == names.end()) throw ConfigError("sqrt channel '" + channel + "' is not a library channel");
        channels.push_back(static_cast<int>(it - names.begin()));
        // Hidden tank level: physical bound. Measured channels: observed
        // training maximum with 25% headroom.
        if (arm.strategy == StrategyKind::TanksHidden && channel == "x1")
            guards.emplace_back(0.0, arm.x1_max);
        else
            guards.emplace_back(0.0, 1.25 * train_channel_max(train, channel));
    }
    return sqrt_augmented_library(lib, channels, guards);
}

struct FitOutcome {
    std::optional<SparseModel> model;
    std::optional<ArxModel> arx;
    double validation_rmse = std::numeric_limits<double>::infinity();
};

double arx_validation_rmse(const ArxModel& model, const Trajectory& valid) {
    const int k0 = model.start_index();
    if (valid.rows() <= k0) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd yhat = simulate_arx(model, valid.states.col(0).head(k0), valid.inputs.col(0));
    if (!yhat.allFinite()) return std::numeric_limits<double>::infinity();
    return rmse(valid.states.col(0), yhat);
}

FitOutcome evaluate_arm_point(const ArmConfig& arm, const FeatureLibrary* lib, const Trajectory& train,
                              const Trajectory& valid, const Point& point, const SimOptions& opts) {
    FitOutcome out;
    const DiffSpec diff = make_diff_spec(point, arm);
    const StlsSpec stls = make_stls_spec(point, arm);

    switch (arm.strategy) {
        case StrategyKind::Naive: {
            StrategyResult res = naive_fit(train, *lib, stls, diff);
            const SimOptions sopts = arm_sim_options(arm, opts, res.model.state_names.size());
            out.validation_rmse =
                simulate_and_score(res.model, StrategyKind::Naive, valid, sopts).rmse_or_inf();
            out.model = std::move(res.model);
            break;
        }
        case StrategyKind::SecondOrder: {
            StrategyResult res = second_order_fit(train, *lib, stls, diff);
            const SimOptions sopts = arm_sim_options(arm, opts, res.model.state_names.size());
            out.validation_rmse =
                simulate_and_score(res.model, StrategyKind::SecondOrder, valid, sopts).rmse_or_inf();
            out.model = std::move(res.model);
            break;
        }
        case StrategyKind::BoucwenHidden: {
            HiddenStateGuess guess;
            guess.params["m_L"] = arm_param(point, arm, "m_L", 1.0);
            guess.params["k_L"] = arm_param(point, arm, "k_L", 1.0);
            guess.params["c_L"] = arm_param(point, arm, "c_L", 1.0);
            StrategyResult res = boucwen_hidden_fit(train, valid, guess, stls, diff, opts);
            out.validation_rmse = res.validation_rmse;
            out.model = std::move(res.model);
            break;
        }
        case StrategyKind::TanksHidden: {
            HiddenStateGuess guess;
            guess.params["k1"] = arm_param(point, arm, "k1", 1.0);
            guess.params["k2"] = arm_param(point, arm, "k2", 1.0);
            guess.params["x1_0"] = arm_param(point, arm, "x1_0", 0.0);
            StrategyResult res =
                tanks_hidden_fit(train, valid, guess, *lib, stls, diff, opts, arm.ic_grid, arm.x1_max);
            out.validation_rmse = res.validation_rmse;
            out.model = std::move(res.model);
            break;
        }
        case StrategyKind::Arx: {
            const int na = static_cast<int>(std::lround(arm_param(point, arm, "na", 2)));
            const int nb = static_cast<int>(std::lround(arm_param(point, arm, "nb", 2)));
            const int nk = static_cast<int>(std::lround(arm_param(point, arm, "nk", 1)));
            ArxModel model = fit_arx(train, na, nb, nk);
            out.validation_rmse = arx_validation_rmse(model, valid);
            out.arx = std::move(model);
            break;
        }
    }
    return out;
}

// Single-period sine probe for hysteretic arms: simulate from rest and
// return the displacement-force loop.
std::optional<HysteresisLoop> hysteresis_probe(const SparseModel& model, double dt, double freq,
                                               double amplitude) {
    const auto period_samples = static_cast<Eigen::Index>(std::llround(1.0 / (freq * dt)));
    if (period_samples < 8) return std::nullopt;

    Eigen::MatrixXd u(period_samples, 1);
    for (Eigen::Index k = 0; k < period_samples; ++k)
        u(k, 0) = amplitude * std::sin(2.0 * M_PI * freq * static_cast<double>(k) * dt);

    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.state_names.size()));
    try {
        const Trajectory sim = simulate(model, x0, u, dt, 0.0, SimOptions{}, {"u"});
        return hysteresis_loop(sim);
    } catch (const DivergenceError&) {
        return std::nullopt;
    }
}

std::optional<HysteresisLoop> truth_hysteresis_loop(const nlohmann::json& gen_params, double freq,
                                                    double amplitude) {
    if (!gen_params.contains("params")) return std::nullopt;
    const BoucWenParams p = boucwen_params_from_json(gen_params["params"]);
    const double dt = gen_params.value("dt", 1.0 / 750.0);
    const auto period_samples = static_cast<Eigen::Index>(std::llround(1.0 / (freq * dt)));

    ExcitationSpec probe{ExcitationKind::Sine, amplitude, 0.0, freq, freq,
                         static_cast<double>(period_samples - 1) * dt, 0};
    const BenchmarkRecord rec = simulate_boucwen(p, probe, dt, Eigen::Vector3d::Zero());
    return hysteresis_loop(rec.traj);
}

nlohmann::json point_to_json(const Point& p) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

nlohmann::json loop_to_json(const HysteresisLoop& loop) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& [y, u] : loop.points) points.push_back({y, u});
    return {{"area", loop.area}, {"points", points}};
}

ExperimentReport run_internal(const ExperimentConfig& cfg, bool with_test_stage) {
    ExperimentReport report;
    report.config_echo = cfg.raw;
    report.version = kVersion;
    report.seed = cfg.seed;

    DataBundle data;
    try {
        data = acquire_data(cfg);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("data stage: ") + e.what());
    }
    if (data.valid.rows() < 4) throw ConfigError("pipeline: validation segment too short (need >= 4 samples)");

    SimOptions opts;
    opts.substeps = cfg.substeps;

    for (const auto& arm : cfg.arms) {
        log_info("arm '" + arm.name + "': searching " + std::to_string(arm.search.budget) + " trials");
        ArmReport ar;
        ar.name = arm.name;
        ar.strategy = strategy_kind_to_string(arm.strategy);

        std::optional<FeatureLibrary> lib;
        if (arm.strategy == StrategyKind::Naive || arm.strategy == StrategyKind::SecondOrder ||
            arm.strategy == StrategyKind::TanksHidden)
            lib = build_arm_library(arm, data.train);

        SearchSpace space = arm.search;
        space.seed = derive_seed(cfg.seed, "arm:" + arm.name);
        const auto objective = [&](const Point& point) {
            return evaluate_arm_point(arm, lib ? &*lib : nullptr, data.train, data.valid, point, opts)
                .validation_rmse;
        };
        const SearchResult sr = search(space, objective, cfg.jobs);
        ar.best_point = sr.best;
        ar.best_validation_rmse = sr.best_rmse;
        ar.trials = sr.trials;

        // Refit the winning point (deterministic, so this reproduces the
        // best trial's model exactly).
        const FitOutcome best =
            evaluate_arm_point(arm, lib ? &*lib : nullptr, data.train, data.valid, sr.best, opts);

        if (best.model) {
            ar.model_doc = model_to_json(*best.model);
            ar.equations = render(*best.model, 6);
        } else if (best.arx) {
            ar.model_doc = arx_to_json(*best.arx);
        }

        if (with_test_stage && data.test.rows() >= 2) {
            if (best.model) {
                const SimOptions test_opts = arm_sim_options(arm, opts, best.model->state_names.size());
                const SimScore ts =
                    simulate_and_score(*best.model, arm.strategy, data.test, test_opts, &arm.ic_grid);
                ar.test_score = ts.score;
                ar.diverged = ts.diverged;
                ar.divergence_index = ts.divergence_index;
                if (arm.strategy == StrategyKind::TanksHidden) {
                    const double ydot0 = endpoint_first_derivative(data.test.states.col(0), data.test.dt);
                    ar.ic_estimate = estimate_initial_hidden(*best.model, data.test.states(0, 0), ydot0,
                                                             data.test.inputs(0, 0), arm.ic_grid);
                }
                for (Eigen::Index k = 0; k < data.test.rows(); ++k) {
                    ar.t.push_back(data.test.time(k));
                    ar.y_measured.push_back(data.test.states(k, 0));
                    if (!ts.diverged) ar.y_simulated.push_back(ts.sim.states(k, 0));
                }
            } else if (best.arx) {
                const int k0 = best.arx->start_index();
                if (data.test.rows() > k0) {
                    const Eigen::VectorXd yhat =
                        simulate_arx(*best.arx, data.test.states.col(0).head(k0), data.test.inputs.col(0));
                    if (yhat.allFinite()) {
                        ar.test_score = score(data.test.states.col(0), yhat);
                    } else {
                        ar.diverged = true;
                    }
                    for (Eigen::Index k = 0; k < data.test.rows(); ++k) {
                        ar.t.push_back(data.test.time(k));
                        ar.y_measured.push_back(data.test.states(k, 0));
                        if (!ar.diverged) ar.y_simulated.push_back(yhat(k));
                    }
                }
            }

            if (data.system == "boucwen" && best.model)
                ar.loop = hysteresis_probe(*best.model, data.test.dt, 0.75, 150.0);
        }
        report.arms.push_back(std::move(ar));
    }

    if (with_test_stage && data.system == "boucwen")
        report.truth_loop = truth_hysteresis_loop(data.gen_params, 0.75, 150.0);
    return report;
}

} // namespace

ExperimentReport run_pipeline(const ExperimentConfig& cfg) { return run_internal(cfg, true); }

ExperimentReport run_search_stage(const ExperimentConfig& cfg) { return run_internal(cfg, false); }

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json doc;
    doc["version"] = version;
    doc["seed"] = seed;
    doc["config"] = config_echo;
    if (truth_loop) doc["truth_loop"] = loop_to_json(*truth_loop);

    nlohmann::json arms_doc = nlohmann::json::array();
    for (const auto& arm : arms) {
        nlohmann::json a;
        a["name"] = arm.name;
        a["strategy"] = arm.strategy;
        a["best_point"] = point_to_json(arm.best_point);
        a["best_validation_rmse"] = arm.best_validation_rmse;

        nlohmann::json trials = nlohmann::json::array();
        for (const auto& tr : arm.trials) {
            trials.push_back({{"trial_id", tr.trial_id},
                              {"point", point_to_json(tr.point)},
                              {"validation_rmse",
                               std::isfinite(tr.validation_rmse) ? nlohmann::json(tr.validation_rmse)
                                                                 : nlohmann::json("inf")},
                              {"wall_time", tr.wall_time},
                              {"status", tr.status}});
        }
        a["trials"] = trials;
        a["model"] = arm.model_doc;
        a["equations"] = arm.equations;
        if (arm.test_score)
            a["score"] = {{"bfr", arm.test_score->bfr},
                          {"rmse", arm.test_score->rmse},
                          {"n_samples", arm.test_score->n_samples}};
        else
            a["score"] = nullptr;
        a["diverged"] = arm.diverged;
        if (arm.diverged) a["divergence_index"] = arm.divergence_index;
        a["series"] = {{"t", arm.t}, {"y_measured", arm.y_measured}, {"y_simulated", arm.y_simulated}};
        if (arm.ic_estimate) a["ic_estimate"] = *arm.ic_estimate;
        if (arm.loop) a["loop"] = loop_to_json(*arm.loop);
        arms_doc.push_back(std::move(a));
    }
    doc["arms"] = arms_doc;
    return doc;
}

void write_report_files(const ExperimentReport& report, const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string report_path = cfg.out_dir + "/report.json";
    std::ofstream out(report_path);
    if (!out) throw Error("cannot write " + report_path);
    out << report.to_json().dump(2) << '\n';

    // Plot data: one measured column, one simulated column per arm.
    const std::string plot_path = cfg.out_dir + "/plot.csv";
    std::ofstream plot(plot_path);
    if (!plot) throw Error("cannot write " + plot_path);

    const ArmReport* base = nullptr;
    for (const auto& arm : report.arms)
        if (!arm.t.empty()) {
            base = &arm;
            break;
        }
    if (base == nullptr) return;

    plot << "t,y_measured";
    for (const auto& arm : report.arms) plot << ",y_sim_" << arm.name;
    plot << '\n';
    for (std::size_t k = 0; k < base->t.size(); ++k) {
        plot << format_double(base->t[k]) << ',' << format_double(base->y_measured[k]);
        for (const auto& arm : report.arms) {
            plot << ',';
            if (k < arm.y_simulated.size()) plot << format_double(arm.y_simulated[k]);
            else plot << "nan";
        }
        plot << '\n';
    }
}

std::vector<std::string> write_generated_files(const BenchmarkData& data, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto [train, valid, test] = split(data.full, data.split);

    std::vector<std::string> written;
    auto emit = [&](const Trajectory& traj, const std::string& name) {
        if (traj.rows() < 2) return;
        const std::string path = out_dir + "/" + name;
        save_csv(traj, path);
        written.push_back(path);
    };
    emit(train, "train.csv");
    emit(valid, "valid.csv");
    emit(test, "test.csv");

    const std::string truth_path = out_dir + "/truth.csv";
    {
        std::ofstream out(truth_path);
        if (!out) throw Error("cannot write " + truth_path);
        out << "t";
        for (const auto& name : data.hidden_names) out << ',' << name;
        out << '\n';
        for (Eigen::Index k = 0; k < data.hidden.rows(); ++k) {
            out << format_double(data.full.time(k));
            for (Eigen::Index c = 0; c < data.hidden.cols(); ++c) out << ',' << format_double(data.hidden(k, c));
            out << '\n';
        }
    }
    written.push_back(truth_path);

    const std::string params_path = out_dir + "/params.json";
    {
        std::ofstream out(params_path);
        if (!out) throw Error("cannot write " + params_path);
        out << data.params.dump(2) << '\n';
    }
    written.push_back(params_path);
    return written;
}

} // namespace sindyforge
