#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sindyforge/differentiation.hpp"
#include "sindyforge/features.hpp"
#include "sindyforge/stls.hpp"
#include "sindyforge/timeseries.hpp"

namespace sindyforge {

/// Fitted sparse model: one coefficient column per state equation over a
/// shared candidate library. Immutable after fit.
struct SparseModel {
    FeatureLibrary library;
    Eigen::MatrixXd theta;  // n_phi x n
    std::vector<std::string> state_names;
    std::string spec_hash;  // digest of the fitting configuration

    void validate() const;
};

/// Fixed-step RK4 settings. Inputs are held constant over each sample
/// interval; optional per-state clipping is applied after every substep.
struct SimOptions {
    int substeps = 10;
    std::vector<std::optional<std::pair<double, double>>> clip;  // per state, optional

    void validate() const {
        if (substeps < 1) throw ConfigError("sim: substeps must be at least 1");
    }
};

/// Sparse regression of the derivative targets on the library features.
/// Derivatives are estimated with `diff_spec` when the record does not
/// already carry them.
SparseModel fit(const Trajectory& traj, const FeatureLibrary& lib, const StlsSpec& stls_spec,
                const DiffSpec& diff_spec);

/// Model right-hand side theta' * phi(x, u).
Eigen::VectorXd rhs(const SparseModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u);

/// Open-loop simulation on the input grid. Throws DivergenceError with the
/// offending sample index if the state leaves the finite range.
Trajectory simulate(const SparseModel& model, const Eigen::VectorXd& x0, const Eigen::MatrixXd& inputs,
                    double dt, double t0, const SimOptions& opts,
                    const std::vector<std::string>& input_names = {});

/// Closed-form equations, one line per state; zero terms omitted, terms in
/// library order, coefficients at fixed precision.
std::string render(const SparseModel& model, int precision);

nlohmann::json model_to_json(const SparseModel& model);
SparseModel model_from_json(const nlohmann::json& doc);

} // namespace sindyforge
