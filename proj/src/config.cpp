#include "sindyforge/config.hpp"

#include <fstream>

namespace sindyforge {

namespace {

ExcitationSpec excitation_from_json(const nlohmann::json& j, const ExcitationSpec& defaults) {
    ExcitationSpec e = defaults;
    if (j.contains("kind")) e.kind = excitation_kind_from_string(j["kind"].get<std::string>());
    e.amplitude = j.value("amplitude", e.amplitude);
    e.offset = j.value("offset", e.offset);
    e.f_lo = j.value("f_lo", e.f_lo);
    e.f_hi = j.value("f_hi", e.f_hi);
    e.duration = j.value("duration", e.duration);
    return e;
}

SplitSpec split_from_json(const nlohmann::json& j) {
    SplitSpec s;
    s.train_len = j.value("train", 0);
    s.valid_len = j.value("valid", 0);
    s.test_len = j.value("test", 0);
    return s;
}

Dimension dimension_from_json(const nlohmann::json& j) {
    Dimension d;
    d.name = j.at("name").get<std::string>();
    const std::string kind = j.value("kind", "uniform");
    if (kind == "uniform") d.kind = DimKind::Uniform;
    else if (kind == "log_uniform") d.kind = DimKind::LogUniform;
    else if (kind == "categorical") d.kind = DimKind::Categorical;
    else throw ConfigError("search dimension '" + d.name + "': unknown kind '" + kind + "'");
    d.lo = j.value("lo", 0.0);
    d.hi = j.value("hi", 1.0);
    if (j.contains("categories")) d.categories = j["categories"].get<std::vector<double>>();
    return d;
}

DataConfig data_from_json(const nlohmann::json& j) {
    DataConfig d;
    d.source = j.value("source", "generate");
    if (d.source == "generate") {
        d.system = j.value("system", "");
        if (d.system.empty()) throw ConfigError("data: generate source needs a 'system'");
        d.preset = j.value("preset", "paper");
        if (j.contains("params")) d.params = j["params"];
        if (j.contains("dt")) d.dt = j["dt"].get<double>();
        if (j.contains("excitation")) d.excitation = excitation_from_json(j["excitation"], ExcitationSpec{});
        if (j.contains("snr_db") && !j["snr_db"].is_null()) d.snr_db = j["snr_db"].get<double>();
        if (j.contains("split")) d.split = split_from_json(j["split"]);
    } else if (d.source == "csv") {
        d.file = j.value("file", "");
        d.train_file = j.value("train_file", "");
        d.test_file = j.value("test_file", "");
        d.valid_len = j.value("valid_len", 0);
        if (j.contains("split")) d.split = split_from_json(j["split"]);
        const auto& schema = j.at("schema");
        if (schema.contains("time") && !schema["time"].is_null())
            d.schema.time_column = schema["time"].get<std::string>();
        else
            d.schema.time_column.reset();
        if (schema.contains("dt") && !schema["dt"].is_null()) d.schema.dt = schema["dt"].get<double>();
        d.schema.state_columns = schema.at("states").get<std::vector<std::string>>();
        d.schema.input_columns = schema.at("inputs").get<std::vector<std::string>>();
    } else {
        throw ConfigError("data: unknown source '" + d.source + "'");
    }
    return d;
}

ArmConfig arm_from_json(const nlohmann::json& j) {
    ArmConfig a;
    a.name = j.at("name").get<std::string>();

    const auto& strat = j.at("strategy");
    a.strategy = strategy_kind_from_string(strat.at("kind").get<std::string>());
    if (strat.contains("ic_grid")) {
        const auto& g = strat["ic_grid"];
        a.ic_grid.lo = g.value("lo", 0.0);
        a.ic_grid.hi = g.value("hi", 10.0);
        a.ic_grid.steps = g.value("steps", 200);
    }
    a.x1_max = strat.value("x1_max", 10.0);
    if (strat.contains("bounds"))
        for (const auto& [key, interval] : strat["bounds"].items())
            a.bounds[key] = {interval.at(0).get<double>(), interval.at(1).get<double>()};
    if (strat.contains("clip_y"))
        a.clip_y = std::make_pair(strat["clip_y"].at(0).get<double>(), strat["clip_y"].at(1).get<double>());
    a.normalize = strat.value("normalize", true);

    if (j.contains("library")) {
        const auto& lib = j["library"];
        a.library_kind = lib.value("kind", "polynomial");
        a.degree = lib.value("degree", 2);
        a.include_constant = lib.value("include_constant", false);
        if (lib.contains("channels")) a.sqrt_channels = lib["channels"].get<std::vector<std::string>>();
    }

    if (j.contains("diff")) {
        a.diff_method = j["diff"].value("method", "smoothed");
        if (j["diff"].contains("lambda_d")) a.fixed["lambda_d"] = j["diff"]["lambda_d"].get<double>();
    }
    if (j.contains("lambda")) a.fixed["lambda"] = j["lambda"].get<double>();
    if (j.contains("fixed"))
        for (const auto& [key, value] : j["fixed"].items()) a.fixed[key] = value.get<double>();

    if (j.contains("search")) {
        const auto& s = j["search"];
        a.search.budget = s.value("budget", 32);
        if (s.contains("dims"))
            for (const auto& dim : s["dims"]) a.search.dims.push_back(dimension_from_json(dim));
    }
    // Physical-parameter bounds become search dimensions unless the config
    // already spells them out (x1_0 may start at zero, so it stays uniform).
    for (const auto& [key, interval] : a.bounds) {
        bool present = false;
        for (const auto& dim : a.search.dims) present = present || dim.name == key;
        if (present || a.fixed.count(key)) continue;
        Dimension dim;
        dim.name = key;
        dim.kind = key == "x1_0" ? DimKind::Uniform : DimKind::LogUniform;
        dim.lo = interval.first;
        dim.hi = interval.second;
        a.search.dims.push_back(std::move(dim));
    }
    return a;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    ExperimentConfig cfg;
    cfg.raw = doc;
    cfg.name = doc.value("name", "experiment");
    cfg.seed = doc.value("seed", 0ULL);
    cfg.out_dir = doc.value("out_dir", ".");
    cfg.substeps = doc.value("substeps", 10);
    cfg.jobs = doc.value("jobs", 1);
    cfg.data = data_from_json(doc.at("data"));
    if (!doc.contains("arms") || doc["arms"].empty()) throw ConfigError("config: at least one arm required");
    for (const auto& arm : doc["arms"]) cfg.arms.push_back(arm_from_json(arm));
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return from_json(doc);
}

void ExperimentConfig::validate() const {
    if (substeps < 1) throw ConfigError("config: substeps must be at least 1");
    if (jobs < 1) throw ConfigError("config: jobs must be at least 1");
    std::vector<std::string> seen;
    for (const auto& arm : arms) {
        if (arm.name.empty()) throw ConfigError("config: arm without a name");
        for (const auto& s : seen)
            if (s == arm.name) throw ConfigError("config: duplicate arm name '" + arm.name + "'");
        seen.push_back(arm.name);
        arm.search.validate();
        if (arm.strategy == StrategyKind::TanksHidden) arm.ic_grid.validate();
    }
}

} // namespace sindyforge
