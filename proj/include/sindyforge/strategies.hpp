#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sindyforge/benchmarks.hpp"
#include "sindyforge/metrics.hpp"
#include "sindyforge/sindy.hpp"

namespace sindyforge {

/// Guessed physical parameters for a hidden-state strategy, keyed by name
/// ("m_L","k_L","c_L" or "k1","k2","x1_0").
struct HiddenStateGuess {
    std::map<std::string, double> params;

    double at(const std::string& name) const {
        auto it = params.find(name);
        if (it == params.end()) throw ConfigError("guess: missing parameter '" + name + "'");
        return it->second;
    }
};

/// Inclusive 1-D search grid (steps = number of points, >= 2).
struct GridSpec {
    double lo = 0.0;
    double hi = 10.0;
    int steps = 200;

    void validate() const {
        if (lo < 0.0) throw ConfigError("grid: lo must be nonnegative");
        if (!(hi > lo)) throw ConfigError("grid: hi must exceed lo");
        if (steps < 2) throw ConfigError("grid: need at least 2 points");
    }
};

struct StrategyResult {
    SparseModel model;
    HiddenStateGuess guess;
    double validation_rmse = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> diagnostics;
};

enum class StrategyKind { Naive, SecondOrder, BoucwenHidden, TanksHidden, Arx };

StrategyKind strategy_kind_from_string(const std::string& s);
std::string strategy_kind_to_string(StrategyKind k);

/// One-sided second-order endpoint stencils, used wherever a derivative
/// state must be initialized from the first samples of a record.
double endpoint_first_derivative(const Eigen::VectorXd& y, double dt);
double endpoint_second_derivative(const Eigen::VectorXd& y, double dt);

/// Adds the estimated output derivative as a state: states become
/// (y, ydot_hat), derivatives (ydot_hat, yddot_hat). Requires a single
/// observed output channel. The new channel is named "<y>dot".
Trajectory second_order_augment(const Trajectory& traj, const DiffSpec& diff_spec);

/// Plain fit on the observed channels; the baseline arm in every benchmark.
StrategyResult naive_fit(const Trajectory& train, const FeatureLibrary& lib, const StlsSpec& stls_spec,
                         const DiffSpec& diff_spec);

/// Derivative-coordinate strategy: fixes dy/dt = ydot exactly and learns
/// only the second-derivative equation over `lib` (which must span channels
/// (y, ydot, inputs...) and contain the plain ydot monomial).
StrategyResult second_order_fit(const Trajectory& train, const FeatureLibrary& lib, const StlsSpec& stls_spec,
                                const DiffSpec& diff_spec);

/// Hysteretic hidden-state strategy: reconstructs z from the guessed
/// observed-state equation residual, learns zdot over the product library,
/// and assembles the full three-state model with the guessed equation held
/// fixed. validation_rmse is +infinity when the validation simulation
/// diverges.
StrategyResult boucwen_hidden_fit(const Trajectory& train, const Trajectory& valid, const HiddenStateGuess& guess,
                                  const StlsSpec& stls_spec, const DiffSpec& diff_spec, const SimOptions& opts);

/// Cascaded-tanks hidden-state strategy: simulates the upper level from the
/// guessed (k1, k2, x1_0), fits the output equation over `lib` evaluated on
/// (y, x1_hat, u), and assembles the two-state model with the upper-tank
/// equation held fixed at the guess.
StrategyResult tanks_hidden_fit(const Trajectory& train, const Trajectory& valid, const HiddenStateGuess& guess,
                                const FeatureLibrary& lib, const StlsSpec& stls_spec, const DiffSpec& diff_spec,
                                const SimOptions& opts, const GridSpec& ic_grid, double x1_max);

/// Grid search for the hidden initial level that best explains the observed
/// initial output derivative; ties break toward the smaller level.
double estimate_initial_hidden(const SparseModel& model, double y0, double ydot0, double u0, const GridSpec& grid);

/// Initial state vector for simulating `model` against a measured record,
/// following each strategy's convention (derivative states from endpoint
/// stencils, hidden tank level from the grid estimate, hysteretic z from
/// the residual of the fixed equation).
Eigen::VectorXd strategy_initial_state(StrategyKind kind, const SparseModel& model, const Trajectory& record,
                                       const GridSpec* ic_grid = nullptr);

struct SimScore {
    std::optional<Score> score;  // absent when the simulation diverged
    bool diverged = false;
    std::size_t divergence_index = 0;
    Trajectory sim;  // empty when diverged

    /// RMSE with the +infinity divergence sentinel, for search objectives.
    double rmse_or_inf() const {
        return score ? score->rmse : std::numeric_limits<double>::infinity();
    }
};

/// Open-loop simulation of the record's inputs from the strategy's initial
/// state, scored on the first observed channel. Divergence is data, not an
/// error: BFR scores 0 and RMSE becomes the +infinity sentinel.
SimScore simulate_and_score(const SparseModel& model, StrategyKind kind, const Trajectory& record,
                            const SimOptions& opts, const GridSpec* ic_grid = nullptr);

/// Copy of `base` with the hidden tank level clipped to its physical range,
/// matching the clamping used while simulating x1_hat during fitting.
SimOptions tanks_sim_options(const SimOptions& base, double x1_max);

} // namespace sindyforge
