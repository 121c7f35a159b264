// End-to-end checks of the command-line tool: exit codes, file outputs,
// determinism, and report-schema conformance.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string kCli = SINDYFORGE_CLI_PATH;
const std::string kSchemaPath = SINDYFORGE_SCHEMA_PATH;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "sf_cli_stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + out.string() + " 2> /dev/null";
    const int status = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    res.stdout_text = ss.str();
    return res;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Validates a document against the subset of JSON Schema the report schema
// uses: type / required / properties / items.
bool matches_type(const nlohmann::json& value, const nlohmann::json& type_spec) {
    auto one = [&](const std::string& t) {
        if (t == "object") return value.is_object();
        if (t == "array") return value.is_array();
        if (t == "string") return value.is_string();
        if (t == "number") return value.is_number();
        if (t == "boolean") return value.is_boolean();
        if (t == "null") return value.is_null();
        return false;
    };
    if (type_spec.is_string()) return one(type_spec.get<std::string>());
    for (const auto& t : type_spec)
        if (one(t.get<std::string>())) return true;
    return false;
}

void validate_schema(const nlohmann::json& value, const nlohmann::json& schema, const std::string& where,
                     std::vector<std::string>& errors) {
    if (schema.contains("type") && !matches_type(value, schema["type"])) {
        errors.push_back(where + ": wrong type");
        return;
    }
    if (value.is_null()) return;  // allowed by the type check above
    if (schema.contains("required") && value.is_object())
        for (const auto& key : schema["required"])
            if (!value.contains(key.get<std::string>()))
                errors.push_back(where + ": missing required key '" + key.get<std::string>() + "'");
    if (schema.contains("properties") && value.is_object())
        for (const auto& [key, sub] : schema["properties"].items())
            if (value.contains(key)) validate_schema(value[key], sub, where + "." + key, errors);
    if (schema.contains("items") && value.is_array())
        for (std::size_t i = 0; i < value.size(); ++i)
            validate_schema(value[i], schema["items"], where + "[" + std::to_string(i) + "]", errors);
}

void write_tiny_config(const fs::path& path, const fs::path& out_dir) {
    nlohmann::json doc = {
        {"name", "cli_smoke"},
        {"seed", 3},
        {"out_dir", out_dir.string()},
        {"data",
         {{"source", "generate"},
          {"system", "tanks"},
          {"preset", "paper"},
          {"excitation",
           {{"kind", "multisine"}, {"amplitude", 2.2}, {"offset", 2.8}, {"f_lo", 0.2}, {"f_hi", 2.0},
            {"duration", 4.0}}},
          {"split", {{"train", 240}, {"valid", 80}, {"test", 80}}}}},
        {"arms",
         {{{"name", "naive_poly"},
           {"strategy", {{"kind", "naive"}}},
           {"library", {{"kind", "polynomial"}, {"degree", 2}}},
           {"diff", {{"method", "central"}}},
           {"search",
            {{"budget", 4},
             {"dims", {{{"name", "lambda"}, {"kind", "log_uniform"}, {"lo", 1e-3}, {"hi", 1.0}}}}}}}}}};
    std::ofstream out(path);
    out << doc.dump(2);
}

} // namespace

TEST_CASE("generate writes five files and is byte-deterministic") {
    const fs::path dir_a = fresh_dir("sf_gen_a");
    const fs::path dir_b = fresh_dir("sf_gen_b");

    const RunResult a = run_cli("generate --system boucwen --preset paper --seed 7 --out " + dir_a.string());
    REQUIRE(a.exit_code == 0);
    const std::vector<std::string> names = {"train.csv", "valid.csv", "test.csv", "truth.csv", "params.json"};
    int count = 0;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        (void)entry;
        ++count;
    }
    CHECK(count == 5);
    for (const auto& n : names) CHECK(fs::exists(dir_a / n));

    const RunResult b = run_cli("generate --system boucwen --preset paper --seed 7 --out " + dir_b.string());
    REQUIRE(b.exit_code == 0);
    for (const auto& n : names) CHECK(slurp(dir_a / n) == slurp(dir_b / n));
}

TEST_CASE("generate rejects an unknown system with exit code 2") {
    const RunResult res = run_cli("generate --system warp_drive --out /tmp/sf_nowhere");
    CHECK(res.exit_code == 2);
}

TEST_CASE("score on identical files reports a perfect fit") {
    const fs::path dir = fresh_dir("sf_score");
    const fs::path csv = dir / "a.csv";
    {
        std::ofstream out(csv);
        out << "t,y\n0,1\n0.1,2\n0.2,3\n";
    }
    const RunResult res = run_cli("score --measured " + csv.string() + " --simulated " + csv.string());
    REQUIRE(res.exit_code == 0);
    const auto doc = nlohmann::json::parse(res.stdout_text);
    CHECK(doc["bfr"].get<double>() == 100.0);
    CHECK(doc["rmse"].get<double>() == 0.0);
}

TEST_CASE("score reproduces the hand-computed 50% / sqrtapprox case") {
    const fs::path dir = fresh_dir("sf_score2");
    const fs::path measured = dir / "measured.csv";
    const fs::path simulated = dir / "simulated.csv";
    {
        std::ofstream m(measured), s(simulated);
        m << "t,y\n0,1\n0.1,2\n0.2,3\n";
        s << "t,y\n0,1\n0.1,2\n0.2,4\n";
    }
    const RunResult res =
        run_cli("score --measured " + measured.string() + " --simulated " + simulated.string());
    REQUIRE(res.exit_code == 0);
    const auto doc = nlohmann::json::parse(res.stdout_text);
    CHECK(std::abs(doc["bfr"].get<double>() - 50.0) < 1e-12);
    CHECK(std::abs(doc["rmse"].get<double>() - std::sqrt(1.0 / 3.0)) < 1e-12);
}

TEST_CASE("score rejects unusable inputs with exit code 2") {
    const fs::path dir = fresh_dir("sf_score3");
    const fs::path empty = dir / "empty.csv";
    { std::ofstream out(empty); }
    const fs::path good = dir / "good.csv";
    {
        std::ofstream out(good);
        out << "t,y\n0,1\n0.1,2\n0.2,3\n";
    }
    CHECK(run_cli("score --measured " + empty.string() + " --simulated " + good.string()).exit_code == 2);

    const fs::path longer = dir / "longer.csv";
    {
        std::ofstream out(longer);
        out << "t,y\n0,1\n0.1,2\n0.2,3\n0.3,4\n";
    }
    CHECK(run_cli("score --measured " + good.string() + " --simulated " + longer.string()).exit_code == 2);
}

TEST_CASE("fit with a missing data file exits with code 2") {
    const fs::path dir = fresh_dir("sf_fit_missing");
    const fs::path cfg = dir / "cfg.json";
    nlohmann::json doc = {
        {"name", "missing"},
        {"seed", 1},
        {"out_dir", (dir / "out").string()},
        {"data",
         {{"source", "csv"},
          {"file", (dir / "does_not_exist.csv").string()},
          {"split", {{"train", 10}, {"valid", 4}, {"test", 4}}},
          {"schema", {{"time", "t"}, {"states", {"y"}}, {"inputs", {"u"}}}}}},
        {"arms",
         {{{"name", "naive"},
           {"strategy", {{"kind", "naive"}}},
           {"search", {{"budget", 2}, {"dims", nlohmann::json::array()}}}}}}};
    {
        std::ofstream out(cfg);
        out << doc.dump(2);
    }
    CHECK(run_cli("fit --config " + cfg.string()).exit_code == 2);
    CHECK(run_cli("fit --config " + (dir / "nope.json").string()).exit_code == 2);
}

TEST_CASE("fit produces a schema-conformant report and plot data") {
    const fs::path dir = fresh_dir("sf_fit_ok");
    const fs::path cfg = dir / "cfg.json";
    const fs::path out_dir = dir / "out";
    write_tiny_config(cfg, out_dir);

    const RunResult res = run_cli("fit --config " + cfg.string() + " --render");
    REQUIRE(res.exit_code == 0);
    CHECK(res.stdout_text.find("dy/dt") != std::string::npos);
    REQUIRE(fs::exists(out_dir / "report.json"));
    REQUIRE(fs::exists(out_dir / "plot.csv"));

    const auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
    const auto schema = nlohmann::json::parse(slurp(kSchemaPath));
    std::vector<std::string> errors;
    validate_schema(report, schema, "$", errors);
    for (const auto& e : errors) MESSAGE(e);
    CHECK(errors.empty());

    // Plot data has a time column, a measured column, one column per arm.
    std::ifstream plot(out_dir / "plot.csv");
    std::string header;
    std::getline(plot, header);
    CHECK(header == "t,y_measured,y_sim_naive_poly");
}

TEST_CASE("render prints equations from a model document written by fit") {
    const fs::path dir = fresh_dir("sf_render");
    const fs::path cfg = dir / "cfg.json";
    const fs::path out_dir = dir / "out";
    write_tiny_config(cfg, out_dir);
    REQUIRE(run_cli("fit --config " + cfg.string()).exit_code == 0);

    const auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
    const fs::path model_file = dir / "model.json";
    {
        std::ofstream out(model_file);
        out << report["arms"][0]["model"].dump(2);
    }
    const RunResult res = run_cli("render --model " + model_file.string() + " --precision 3");
    REQUIRE(res.exit_code == 0);
    CHECK(res.stdout_text.find("dy/dt = ") != std::string::npos);

    CHECK(run_cli("render --model " + (dir / "missing.json").string()).exit_code == 2);
}

TEST_CASE("search runs the search stage only and prints best points") {
    const fs::path dir = fresh_dir("sf_search");
    const fs::path cfg = dir / "cfg.json";
    const fs::path out_dir = dir / "out";
    write_tiny_config(cfg, out_dir);

    const RunResult res = run_cli("search --config " + cfg.string());
    REQUIRE(res.exit_code == 0);
    CHECK(res.stdout_text.find("naive_poly") != std::string::npos);
    const auto report = nlohmann::json::parse(slurp(out_dir / "report.json"));
    CHECK(report["arms"][0]["trials"].size() == 4);
    CHECK(report["arms"][0]["score"].is_null());  // no test stage ran
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("frobnicate").exit_code == 2);
    CHECK(run_cli("fit").exit_code == 2);  // --config is required
}
