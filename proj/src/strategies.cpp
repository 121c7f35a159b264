#include "sindyforge/strategies.hpp"

#include <cmath>

#include "sindyforge/differentiation.hpp"
#include "sindyforge/util.hpp"

namespace sindyforge {

StrategyKind strategy_kind_from_string(const std::string& s) {
    if (s == "naive") return StrategyKind::Naive;
    if (s == "second_order") return StrategyKind::SecondOrder;
    if (s == "boucwen_hidden") return StrategyKind::BoucwenHidden;
    if (s == "tanks_hidden") return StrategyKind::TanksHidden;
    if (s == "arx") return StrategyKind::Arx;
    throw ConfigError("strategy: unknown kind '" + s + "'");
}

std::string strategy_kind_to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::Naive: return "naive";
        case StrategyKind::SecondOrder: return "second_order";
        case StrategyKind::BoucwenHidden: return "boucwen_hidden";
        case StrategyKind::TanksHidden: return "tanks_hidden";
        case StrategyKind::Arx: return "arx";
    }
    return "?";
}

double endpoint_first_derivative(const Eigen::VectorXd& y, double dt) {
    if (y.size() < 3) throw DataError("endpoint derivative: need at least 3 samples");
    return (-3.0 * y(0) + 4.0 * y(1) - y(2)) / (2.0 * dt);
}

double endpoint_second_derivative(const Eigen::VectorXd& y, double dt) {
    if (y.size() < 4) throw DataError("endpoint second derivative: need at least 4 samples");
    return (2.0 * y(0) - 5.0 * y(1) + 4.0 * y(2) - y(3)) / (dt * dt);
}

Trajectory second_order_augment(const Trajectory& traj, const DiffSpec& diff_spec) {
    traj.validate();
    if (traj.n_states() != 1) throw ConfigError("second-order augmentation: expects a single observed output");

    const Trajectory d1 = differentiate(traj, diff_spec);
    const Trajectory d2 = derivative_of_derivative(d1, diff_spec);

    Trajectory aug;
    aug.t0 = traj.t0;
    aug.dt = traj.dt;
    aug.states.resize(traj.rows(), 2);
    aug.states.col(0) = traj.states.col(0);
    aug.states.col(1) = d1.derivatives->col(0);  // ydot_hat as a state
    Eigen::MatrixXd derivs(traj.rows(), 2);
    derivs.col(0) = d1.derivatives->col(0);
    derivs.col(1) = d2.derivatives->col(0);  // yddot_hat
    aug.derivatives = std::move(derivs);
    aug.inputs = traj.inputs;
    aug.channel_names.push_back(traj.state_name(0));
    aug.channel_names.push_back(traj.state_name(0) + "dot");
    for (Eigen::Index j = 0; j < traj.n_inputs(); ++j) aug.channel_names.push_back(traj.input_name(j));
    return aug;
}

StrategyResult naive_fit(const Trajectory& train, const FeatureLibrary& lib, const StlsSpec& stls_spec,
                         const DiffSpec& diff_spec) {
    StrategyResult res{fit(train, lib, stls_spec, diff_spec), {}, std::numeric_limits<double>::quiet_NaN(), {}};
    return res;
}

StrategyResult second_order_fit(const Trajectory& train, const FeatureLibrary& lib, const StlsSpec& stls_spec,
                                const DiffSpec& diff_spec) {
    const Trajectory aug = second_order_augment(train, diff_spec);
    if (lib.state_dim() != 2 || lib.input_dim() != aug.n_inputs())
        throw ConfigError("second-order fit: library must span (y, ydot, inputs)");

    const std::string ydot_name = aug.state_name(1);
    const auto ydot_idx = lib.index_of(ydot_name);
    if (!ydot_idx) throw ConfigError("second-order fit: library must contain the plain '" + ydot_name + "' term");

    const Eigen::MatrixXd phi = evaluate(lib, aug.states, aug.inputs);
    const StlsResult z_eq = stls_solve(phi, aug.derivatives->col(1), stls_spec);

    SparseModel model{lib, Eigen::MatrixXd::Zero(lib.size(), 2), {aug.state_name(0), ydot_name}, {}};
    model.theta(*ydot_idx, 0) = 1.0;  // dy/dt = ydot, exact
    model.theta.col(1) = z_eq.theta;
    model.spec_hash = "so-" + format_double(stls_spec.lambda);

    StrategyResult res{std::move(model), {}, std::numeric_limits<double>::quiet_NaN(), {}};
    res.diagnostics.push_back("second_order: zdot support size " + std::to_string(z_eq.support.size()) +
                              ", iterations " + std::to_string(z_eq.iterations));
    return res;
}

namespace {

// Composite Bouc-Wen model library over channels (y, ydot, z | u): linear
// terms for the fixed observed-state equation plus the hidden-state product
// terms. Returns the library and, for each member of the product library
// used in the zdot regression, its index in the composite basis.
std::pair<FeatureLibrary, std::vector<int>> boucwen_full_library(const std::string& y_name,
                                                                 const std::string& u_name,
                                                                 bool include_constant) {
    const std::string yd_name = y_name + "dot";
    const std::vector<std::string> names = {y_name, yd_name, "z", u_name};
    const AbsFactor z{2, false}, az{2, true}, yd{1, false}, ayd{1, true};

    std::vector<BasisFunction> basis;
    basis.push_back(BasisFunction::monomial({1, 0, 0, 0}, names));
    basis.push_back(BasisFunction::monomial({0, 1, 0, 0}, names));
    basis.push_back(BasisFunction::monomial({0, 0, 1, 0}, names));
    basis.push_back(BasisFunction::monomial({0, 0, 0, 1}, names));

    std::vector<int> zlib_to_composite;
    if (include_constant) {
        basis.push_back(BasisFunction::constant());
        zlib_to_composite.push_back(static_cast<int>(basis.size()) - 1);
    }
    // Order mirrors boucwen_library(): ydot, z, |ydot|, |z|, z|ydot|,
    // |z|ydot, |z||ydot|, z*ydot, z^2, ydot^2.
    zlib_to_composite.push_back(1);
    zlib_to_composite.push_back(2);
    const std::vector<std::vector<AbsFactor>> products = {
        {ayd}, {az}, {z, ayd}, {az, yd}, {az, ayd}, {z, yd}, {z, z}, {yd, yd},
    };
    for (const auto& f : products) {
        basis.push_back(BasisFunction::abs_product(f, names));
        zlib_to_composite.push_back(static_cast<int>(basis.size()) - 1);
    }
    return {FeatureLibrary(3, 1, names, std::move(basis)), std::move(zlib_to_composite)};
}

} // namespace

StrategyResult boucwen_hidden_fit(const Trajectory& train, const Trajectory& valid, const HiddenStateGuess& guess,
                                  const StlsSpec& stls_spec, const DiffSpec& diff_spec, const SimOptions& opts) {
    train.validate();
    if (train.n_states() != 1 || train.n_inputs() != 1)
        throw ConfigError("boucwen hidden fit: expects one output and one input channel");
    const double m_L = guess.at("m_L");
    const double k_L = guess.at("k_L");
    const double c_L = guess.at("c_L");
    if (!(m_L > 0.0 && k_L > 0.0 && c_L > 0.0))
        throw ConfigError("boucwen hidden fit: guessed parameters must be positive");

    // Estimated output derivatives, then the hidden state from the residual
    // of the guessed observed-state equation.
    const Trajectory aug = second_order_augment(train, diff_spec);
    const Eigen::VectorXd& y = train.states.col(0);
    const Eigen::VectorXd& u = train.inputs.col(0);
    const Eigen::VectorXd ydot = aug.states.col(1);
    const Eigen::VectorXd yddot = aug.derivatives->col(1);
    const Eigen::VectorXd z_hat = u - c_L * ydot - k_L * y - m_L * yddot;

    // zdot target by differentiating the reconstructed z.
    Trajectory z_rec;
    z_rec.t0 = train.t0;
    z_rec.dt = train.dt;
    z_rec.states.resize(train.rows(), 2);
    z_rec.states.col(0) = z_hat;
    z_rec.states.col(1) = ydot;
    z_rec.inputs.resize(train.rows(), 0);
    z_rec.channel_names = {"z", "ydot"};
    const Trajectory z_diff = differentiate(z_rec, diff_spec);

    const FeatureLibrary z_lib = boucwen_library();
    const Eigen::MatrixXd phi_z = evaluate(z_lib, z_rec.states, z_rec.inputs);
    const StlsResult z_eq = stls_solve(phi_z, z_diff.derivatives->col(0), stls_spec);

    auto [full_lib, z_map] = boucwen_full_library(train.state_name(0), train.input_name(0), false);
    SparseModel model{std::move(full_lib), {}, {}, {}};
    model.theta = Eigen::MatrixXd::Zero(model.library.size(), 3);
    model.state_names = {train.state_name(0), train.state_name(0) + "dot", "z"};

    model.theta(1, 0) = 1.0;  // dy/dt = ydot
    // Guessed equation held fixed: yddot = (u - c*ydot - k*y - z)/m.
    model.theta(0, 1) = -k_L / m_L;
    model.theta(1, 1) = -c_L / m_L;
    model.theta(2, 1) = -1.0 / m_L;
    model.theta(3, 1) = 1.0 / m_L;
    for (int i = 0; i < z_lib.size(); ++i) model.theta(z_map[static_cast<std::size_t>(i)], 2) = z_eq.theta(i);
    model.spec_hash = "bw-" + format_double(stls_spec.lambda);

    StrategyResult res{std::move(model), guess, std::numeric_limits<double>::infinity(), {}};
    res.diagnostics.push_back("boucwen_hidden: zdot support size " + std::to_string(z_eq.support.size()) +
                              ", iterations " + std::to_string(z_eq.iterations));

    if (valid.rows() >= 4) {
        const SimScore vs = simulate_and_score(res.model, StrategyKind::BoucwenHidden, valid, opts);
        res.validation_rmse = vs.rmse_or_inf();
        res.diagnostics.push_back(vs.diverged
                                      ? "validation: diverged at sample " + std::to_string(vs.divergence_index)
                                      : "validation: rmse " + format_double(vs.score->rmse));
    }
    return res;
}

StrategyResult tanks_hidden_fit(const Trajectory& train, const Trajectory& valid, const HiddenStateGuess& guess,
                                const FeatureLibrary& lib, const StlsSpec& stls_spec, const DiffSpec& diff_spec,
                                const SimOptions& opts, const GridSpec& ic_grid, double x1_max) {
    train.validate();
    if (train.n_states() != 1 || train.n_inputs() != 1)
        throw ConfigError("tanks hidden fit: expects one output and one input channel");
    if (lib.state_dim() != 2 || lib.input_dim() != 1)
        throw ConfigError("tanks hidden fit: library must span (y, x1, u)");
    const double k1 = guess.at("k1");
    const double k2 = guess.at("k2");
    const double x1_0 = guess.at("x1_0");
    if (!(k1 > 0.0 && k2 > 0.0)) throw ConfigError("tanks hidden fit: k1, k2 must be positive");
    if (x1_0 < 0.0 || x1_0 > x1_max) throw ConfigError("tanks hidden fit: x1_0 outside [0, x1_max]");

    const Eigen::VectorXd x1_hat =
        simulate_upper_tank(k1, k2, x1_max, x1_0, train.inputs.col(0), train.dt, opts.substeps);

    Eigen::MatrixXd states(train.rows(), 2);
    states.col(0) = train.states.col(0);
    states.col(1) = x1_hat;
    const Eigen::MatrixXd phi = evaluate(lib, states, train.inputs);
    const Eigen::VectorXd ydot = differentiate_channel(train.states.col(0), train.dt, diff_spec);
    const StlsResult y_eq = stls_solve(phi, ydot, stls_spec);

    // Composite model: the user's output library plus the terms of the fixed
    // upper-tank equation.
    std::vector<BasisFunction> basis = lib.basis();
    const std::string x1_name = lib.channel_names()[1];
    const std::string u_name = lib.channel_names()[2];
    std::optional<int> sqrt_x1_idx = lib.index_of("sqrt(" + x1_name + ")");
    if (!sqrt_x1_idx) {
        basis.push_back(BasisFunction::sqrt_guarded(1, 0.0, x1_max, x1_name));
        sqrt_x1_idx = static_cast<int>(basis.size()) - 1;
    }
    FeatureLibrary full_lib(2, 1, lib.channel_names(), std::move(basis));
    const auto u_idx = full_lib.index_of(u_name);
    if (!u_idx) throw ConfigError("tanks hidden fit: library must contain the plain input term");

    SparseModel model{std::move(full_lib), {}, {lib.channel_names()[0], x1_name}, {}};
    model.theta = Eigen::MatrixXd::Zero(model.library.size(), 2);
    model.theta.col(0).head(lib.size()) = y_eq.theta;
    model.theta(*sqrt_x1_idx, 1) = -k1;
    model.theta(*u_idx, 1) = k2;
    model.spec_hash = "tk-" + format_double(stls_spec.lambda);

    StrategyResult res{std::move(model), guess, std::numeric_limits<double>::infinity(), {}};
    res.diagnostics.push_back("tanks_hidden: ydot support size " + std::to_string(y_eq.support.size()) +
                              ", iterations " + std::to_string(y_eq.iterations));

    if (valid.rows() >= 3) {
        const SimOptions vopts = tanks_sim_options(opts, x1_max);
        const SimScore vs = simulate_and_score(res.model, StrategyKind::TanksHidden, valid, vopts, &ic_grid);
        res.validation_rmse = vs.rmse_or_inf();
        res.diagnostics.push_back(vs.diverged
                                      ? "validation: diverged at sample " + std::to_string(vs.divergence_index)
                                      : "validation: rmse " + format_double(vs.score->rmse));
    }
    return res;
}

double estimate_initial_hidden(const SparseModel& model, double y0, double ydot0, double u0, const GridSpec& grid) {
    grid.validate();
    Eigen::VectorXd x(2), u(1);
    u(0) = u0;

    double best_x1 = grid.lo;
    double best_obj = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.steps; ++i) {
        const double x1 = grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) / static_cast<double>(grid.steps - 1);
        x(0) = y0;
        x(1) = x1;
        const double pred = rhs(model, x, u)(0);
        const double obj = (ydot0 - pred) * (ydot0 - pred);
        if (obj < best_obj) {  // strict: ties keep the smaller level
            best_obj = obj;
            best_x1 = x1;
        }
    }
    return best_x1;
}

Eigen::VectorXd strategy_initial_state(StrategyKind kind, const SparseModel& model, const Trajectory& record,
                                       const GridSpec* ic_grid) {
    record.validate();
    switch (kind) {
        case StrategyKind::Naive:
            return record.states.row(0).transpose();
        case StrategyKind::SecondOrder: {
            Eigen::VectorXd x0(2);
            x0(0) = record.states(0, 0);
            x0(1) = endpoint_first_derivative(record.states.col(0), record.dt);
            return x0;
        }
        case StrategyKind::BoucwenHidden: {
            // Recover the guessed physical parameters from the fixed
            // observed-state row: yddot = (u - c*ydot - k*y - z)/m.
            const double inv_m = model.theta(3, 1);
            if (inv_m == 0.0) throw StateError("boucwen model: fixed equation has no input coefficient");
            const double m_L = 1.0 / inv_m;
            const double c_L = -model.theta(1, 1) * m_L;
            const double k_L = -model.theta(0, 1) * m_L;
            const double y0 = record.states(0, 0);
            const double u0 = record.inputs(0, 0);
            const double ydot0 = endpoint_first_derivative(record.states.col(0), record.dt);
            const double yddot0 = endpoint_second_derivative(record.states.col(0), record.dt);
            Eigen::VectorXd x0(3);
            x0 << y0, ydot0, u0 - c_L * ydot0 - k_L * y0 - m_L * yddot0;
            return x0;
        }
        case StrategyKind::TanksHidden: {
            if (ic_grid == nullptr) throw ConfigError("tanks simulation: initial-condition grid required");
            const double y0 = record.states(0, 0);
            const double u0 = record.inputs(0, 0);
            const double ydot0 = endpoint_first_derivative(record.states.col(0), record.dt);
            Eigen::VectorXd x0(2);
            x0 << y0, estimate_initial_hidden(model, y0, ydot0, u0, *ic_grid);
            return x0;
        }
        case StrategyKind::Arx:
            throw ConfigError("arx models have no ODE state");
    }
    throw ConfigError("unknown strategy kind");
}

SimScore simulate_and_score(const SparseModel& model, StrategyKind kind, const Trajectory& record,
                            const SimOptions& opts, const GridSpec* ic_grid) {
    SimScore out;
    std::vector<std::string> input_names;
    for (Eigen::Index j = 0; j < record.n_inputs(); ++j) input_names.push_back(record.input_name(j));
    try {
        const Eigen::VectorXd x0 = strategy_initial_state(kind, model, record, ic_grid);
        out.sim = simulate(model, x0, record.inputs, record.dt, record.t0, opts, input_names);
        Score s;
        s.rmse = rmse(record.states.col(0), out.sim.states.col(0));
        s.n_samples = record.rows();
        try {
            s.bfr = bfr(record.states.col(0), out.sim.states.col(0));
        } catch (const DataError&) {
            s.bfr = 0.0;  // constant reference output
        }
        out.score = s;
    } catch (const DivergenceError& e) {
        out.diverged = true;
        out.divergence_index = e.sample_index;
        out.sim = Trajectory{};
    }
    return out;
}

SimOptions tanks_sim_options(const SimOptions& base, double x1_max) {
    SimOptions opts = base;
    opts.clip.assign(2, std::nullopt);
    opts.clip[1] = std::make_pair(0.0, x1_max);
    return opts;
}

} // namespace sindyforge
