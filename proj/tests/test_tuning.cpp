#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "sindyforge/arx.hpp"
#include "sindyforge/pipeline.hpp"
#include "sindyforge/search.hpp"
#include "sindyforge/util.hpp"

using namespace sindyforge;

TEST_CASE("a budget of one returns that single point") {
    SearchSpace space;
    space.dims = {{"x", DimKind::Uniform, 0.0, 10.0, {}}};
    space.budget = 1;
    space.seed = 3;
    const SearchResult res = search(space, [](const Point& p) { return p.at("x"); });
    CHECK(res.trials.size() == 1);
    CHECK(res.best_trial == 0);
    CHECK(res.best.at("x") == res.trials[0].point.at("x"));
}

TEST_CASE("random search localizes a convex 1-d objective") {
    SearchSpace space;
    space.dims = {{"x", DimKind::Uniform, 0.0, 10.0, {}}};
    space.budget = 200;
    space.seed = 5;
    const SearchResult res = search(space, [](const Point& p) {
        const double d = p.at("x") - 3.0;
        return d * d;
    });
    CHECK(std::abs(res.best.at("x") - 3.0) <= 0.2);
}

TEST_CASE("identical seed and space reproduce the trial log exactly") {
    SearchSpace space;
    space.dims = {{"a", DimKind::LogUniform, 1e-3, 1e2, {}}, {"b", DimKind::Uniform, -1.0, 1.0, {}}};
    space.budget = 40;
    space.seed = 17;
    auto objective = [](const Point& p) { return p.at("a") + p.at("b") * p.at("b"); };
    const SearchResult r1 = search(space, objective);
    const SearchResult r2 = search(space, objective);
    REQUIRE(r1.trials.size() == r2.trials.size());
    for (std::size_t i = 0; i < r1.trials.size(); ++i) {
        CHECK(r1.trials[i].point == r2.trials[i].point);
        CHECK(r1.trials[i].validation_rmse == r2.trials[i].validation_rmse);
    }
    CHECK(r1.best_trial == r2.best_trial);
}

TEST_CASE("the reported best equals the minimum over the trial log") {
    SearchSpace space;
    space.dims = {{"x", DimKind::Uniform, -4.0, 4.0, {}}};
    space.budget = 64;
    space.seed = 9;
    const SearchResult res = search(space, [](const Point& p) { return std::cos(p.at("x")) + p.at("x") * 0.1; });
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& t : res.trials) lowest = std::min(lowest, t.validation_rmse);
    CHECK(res.best_rmse == lowest);
}

TEST_CASE("an all-divergent objective is a hard error") {
    SearchSpace space;
    space.dims = {{"x", DimKind::Uniform, 0.0, 1.0, {}}};
    space.budget = 8;
    const auto inf = [](const Point&) { return std::numeric_limits<double>::infinity(); };
    CHECK_THROWS_AS(search(space, inf), Error);
}

TEST_CASE("objective exceptions mark trials as errors without aborting the search") {
    SearchSpace space;
    space.dims = {{"x", DimKind::Uniform, 0.0, 1.0, {}}};
    space.budget = 10;
    space.seed = 2;
    const SearchResult res = search(space, [](const Point& p) -> double {
        if (p.at("x") < 0.5) throw DataError("bad region");
        return p.at("x");
    });
    int errors = 0;
    for (const auto& t : res.trials) errors += t.status == "error";
    CHECK(errors > 0);
    CHECK(res.best.at("x") >= 0.5);
}

TEST_CASE("parallel evaluation returns the same trials as sequential") {
    SearchSpace space;
    space.dims = {{"x", DimKind::Uniform, 0.0, 1.0, {}}};
    space.budget = 32;
    space.seed = 21;
    auto objective = [](const Point& p) { return std::abs(p.at("x") - 0.25); };
    const SearchResult seq = search(space, objective, 1);
    const SearchResult par = search(space, objective, 4);
    REQUIRE(seq.trials.size() == par.trials.size());
    for (std::size_t i = 0; i < seq.trials.size(); ++i) {
        CHECK(seq.trials[i].point == par.trials[i].point);
        CHECK(seq.trials[i].validation_rmse == par.trials[i].validation_rmse);
    }
    CHECK(seq.best_trial == par.best_trial);
}

TEST_CASE("budget zero is a validation error") {
    SearchSpace space;
    space.budget = 0;
    CHECK_THROWS_AS(space.validate(), ConfigError);
}

TEST_CASE("arx recovers a known difference equation") {
    Trajectory traj;
    traj.dt = 1.0;
    const Eigen::Index T = 400;
    traj.states.resize(T, 1);
    traj.inputs.resize(T, 1);
    std::mt19937_64 rng(6);
    traj.states(0, 0) = 0.0;
    traj.inputs(0, 0) = uniform01(rng) - 0.5;
    for (Eigen::Index k = 1; k < T; ++k) {
        traj.inputs(k, 0) = uniform01(rng) - 0.5;
        traj.states(k, 0) = 0.5 * traj.states(k - 1, 0) + 1.0 * traj.inputs(k - 1, 0);
    }
    traj.channel_names = {"y", "u"};

    const ArxModel model = fit_arx(traj, 1, 1, 1);
    CHECK(model.a(0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(model.b(0) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("arx one-step residuals are orthogonal to the regressors") {
    // Noisy data, so the residual is well away from rounding level.
    Trajectory traj;
    traj.dt = 1.0;
    const Eigen::Index T = 500;
    traj.states.resize(T, 1);
    traj.inputs.resize(T, 1);
    std::mt19937_64 rng(14);
    traj.states(0, 0) = 0.0;
    traj.inputs(0, 0) = gaussian01(rng);
    for (Eigen::Index k = 1; k < T; ++k) {
        traj.inputs(k, 0) = gaussian01(rng);
        traj.states(k, 0) =
            0.7 * traj.states(k - 1, 0) + 0.8 * traj.inputs(k - 1, 0) + 0.1 * gaussian01(rng);
    }
    traj.channel_names = {"y", "u"};

    const ArxModel model = fit_arx(traj, 1, 1, 1);
    const int k0 = model.start_index();
    const Eigen::Index rows = T - k0;
    Eigen::MatrixXd reg(rows, 2);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        reg(r, 0) = traj.states(k0 + r - 1, 0);
        reg(r, 1) = traj.inputs(k0 + r - 1, 0);
        target(r) = traj.states(k0 + r, 0);
    }
    Eigen::VectorXd coef(2);
    coef << model.a(0), model.b(0);
    const Eigen::VectorXd resid = target - reg * coef;
    const double rel = (reg.transpose() * resid).norm() / (reg.norm() * resid.norm() + 1e-300);
    CHECK(rel < 1e-8);
}

TEST_CASE("arx on constant data survives through the ridge path") {
    Trajectory traj;
    traj.dt = 1.0;
    traj.states = Eigen::MatrixXd::Constant(50, 1, 2.0);
    traj.inputs = Eigen::MatrixXd::Constant(50, 1, 1.0);
    traj.channel_names = {"y", "u"};
    const ArxModel model = fit_arx(traj, 1, 1, 1);
    CHECK(std::isfinite(model.a(0)));
    CHECK(std::isfinite(model.b(0)));
    const Eigen::VectorXd yhat = simulate_arx(model, traj.states.col(0).head(1), traj.inputs.col(0));
    CHECK(yhat.allFinite());
}

TEST_CASE("arx simulation feeds back its own predictions") {
    ArxModel model;
    model.na = 1;
    model.nb = 1;
    model.nk = 1;
    model.a = Eigen::VectorXd::Constant(1, 0.5);
    model.b = Eigen::VectorXd::Constant(1, 1.0);
    model.dt = 1.0;

    Eigen::VectorXd u = Eigen::VectorXd::Zero(5);
    u(0) = 1.0;
    Eigen::VectorXd y0 = Eigen::VectorXd::Zero(1);
    const Eigen::VectorXd yhat = simulate_arx(model, y0, u);
    CHECK(yhat(0) == 0.0);
    CHECK(yhat(1) == 1.0);   // b*u(0)
    CHECK(yhat(2) == 0.5);   // a*yhat(1)
    CHECK(yhat(3) == 0.25);
}

namespace {

ExperimentConfig tiny_tanks_config(std::uint64_t seed) {
    nlohmann::json doc = {
        {"name", "tanks_tiny"},
        {"seed", seed},
        {"substeps", 10},
        {"data",
         {{"source", "generate"},
          {"system", "tanks"},
          {"preset", "paper"},
          {"excitation",
           {{"kind", "multisine"}, {"amplitude", 2.2}, {"offset", 2.8}, {"f_lo", 0.2}, {"f_hi", 2.0},
            {"duration", 6.39}}},
          {"split", {{"train", 384}, {"valid", 128}, {"test", 128}}}}},
        {"arms",
         {{{"name", "naive_poly"},
           {"strategy", {{"kind", "naive"}}},
           {"library", {{"kind", "polynomial"}, {"degree", 2}}},
           {"diff", {{"method", "central"}}},
           {"search",
            {{"budget", 6},
             {"dims", {{{"name", "lambda"}, {"kind", "log_uniform"}, {"lo", 1e-3}, {"hi", 1.0}}}}}}},
          {{"name", "hidden_sqrt"},
           {"strategy",
            {{"kind", "tanks_hidden"},
             {"x1_max", 10.0},
             {"ic_grid", {{"lo", 0.0}, {"hi", 10.0}, {"steps", 100}}},
             {"bounds", {{"k1", {20.0, 90.0}}, {"k2", {15.0, 70.0}}, {"x1_0", {0.0, 10.0}}}}}},
           {"library", {{"kind", "sqrt_augmented"}, {"degree", 2}, {"channels", {"y", "x1"}}}},
           {"diff", {{"method", "central"}}},
           {"search",
            {{"budget", 24},
             {"dims", {{{"name", "lambda"}, {"kind", "log_uniform"}, {"lo", 1e-2}, {"hi", 3.0}}}}}}}}}};
    return ExperimentConfig::from_json(doc);
}

nlohmann::json normalized_report(const ExperimentReport& report) {
    nlohmann::json doc = report.to_json();
    for (auto& arm : doc["arms"])
        for (auto& trial : arm["trials"]) trial["wall_time"] = 0.0;
    return doc;
}

} // namespace

TEST_CASE("tanks pipeline smoke: hidden arm beats the naive arm") {
    const ExperimentConfig cfg = tiny_tanks_config(11);
    const ExperimentReport report = run_pipeline(cfg);
    REQUIRE(report.arms.size() == 2);
    REQUIRE(report.arms[0].test_score.has_value());
    REQUIRE(report.arms[1].test_score.has_value());
    CHECK(report.arms[1].test_score->bfr > report.arms[0].test_score->bfr);
    for (const auto& arm : report.arms) {
        CHECK(std::isfinite(arm.best_validation_rmse));
        CHECK(arm.trials.size() == (arm.name == "naive_poly" ? 6 : 24));
    }
    CHECK(report.arms[1].ic_estimate.has_value());
}

TEST_CASE("boucwen pipeline smoke: hidden arm's test rmse is strictly lower") {
    nlohmann::json doc = {
        {"name", "boucwen_tiny"},
        {"seed", 5},
        {"data",
         {{"source", "generate"},
          {"system", "boucwen"},
          {"preset", "paper"},
          {"excitation",
           {{"kind", "multisine"}, {"amplitude", 150.0}, {"f_lo", 0.5}, {"f_hi", 8.0}, {"duration", 3.332}}},
          {"split", {{"train", 1500}, {"valid", 500}, {"test", 500}}}}},
        {"arms",
         {{{"name", "naive"},
           {"strategy", {{"kind", "second_order"}}},
           {"library", {{"kind", "polynomial"}, {"degree", 1}}},
           {"diff", {{"method", "central"}}},
           {"search",
            {{"budget", 8},
             {"dims", {{{"name", "lambda"}, {"kind", "log_uniform"}, {"lo", 1e-2}, {"hi", 10.0}}}}}}},
          {{"name", "hidden"},
           {"strategy",
            {{"kind", "boucwen_hidden"},
             {"bounds", {{"m_L", {1.0, 4.0}}, {"k_L", {2e4, 1e5}}, {"c_L", {2.0, 40.0}}}}}},
           {"library", {{"kind", "boucwen"}}},
           {"diff", {{"method", "central"}}},
           {"search",
            {{"budget", 48},
             {"dims", {{{"name", "lambda"}, {"kind", "log_uniform"}, {"lo", 1.0}, {"hi", 300.0}}}}}}}}}};

    const ExperimentReport report = run_pipeline(ExperimentConfig::from_json(doc));
    REQUIRE(report.arms.size() == 2);
    REQUIRE(report.arms[0].test_score.has_value());
    REQUIRE(report.arms[1].test_score.has_value());
    CHECK(report.arms[1].test_score->rmse < report.arms[0].test_score->rmse);
    CHECK(report.truth_loop.has_value());           // generator parameters known
    CHECK(report.arms[1].loop.has_value());          // hysteretic arm gets a probe loop
}

TEST_CASE("pipeline reruns are byte-identical up to timing fields") {
    const ExperimentConfig cfg = tiny_tanks_config(23);
    const std::string a = normalized_report(run_pipeline(cfg)).dump();
    const std::string b = normalized_report(run_pipeline(cfg)).dump();
    CHECK(a == b);
}

TEST_CASE("generated benchmark files are deterministic in memory") {
    DataConfig data;
    data.source = "generate";
    data.system = "boucwen";
    data.preset = "paper";
    ExcitationSpec exc{ExcitationKind::Multisine, 150.0, 0.0, 0.5, 8.0, 1.0, 0};
    data.excitation = exc;
    data.split = SplitSpec{400, 200, 151};
    const BenchmarkData a = generate_benchmark(data, 7);
    const BenchmarkData b = generate_benchmark(data, 7);
    CHECK((a.full.states - b.full.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.hidden - b.hidden).cwiseAbs().maxCoeff() == 0.0);

    const BenchmarkData c = generate_benchmark(data, 8);
    CHECK((a.full.states - c.full.states).cwiseAbs().maxCoeff() > 0.0);
}
