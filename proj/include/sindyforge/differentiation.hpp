#pragma once

#include <Eigen/Dense>

#include "sindyforge/timeseries.hpp"

namespace sindyforge {

enum class DiffMethod { Central, Smoothed };

/// Derivative estimation settings. lambda_d = 0 with Smoothed reproduces the
/// plain central-difference estimate.
struct DiffSpec {
    DiffMethod method = DiffMethod::Central;
    double lambda_d = 0.0;

    void validate() const {
        if (lambda_d < 0.0) throw ConfigError("diff: lambda_d must be nonnegative");
    }
};

/// Derivative of one sampled channel. Second-order central differences in
/// the interior, second-order one-sided rules at both endpoints; Smoothed
/// additionally solves a Tikhonov problem that penalizes the second
/// difference of the derivative signal (scaled by 1/dt^2, so lambda_d
/// transfers across sampling rates).
Eigen::VectorXd differentiate_channel(const Eigen::VectorXd& y, double dt, const DiffSpec& spec);

/// Copy of `traj` with the derivative channels filled per `spec`.
Trajectory differentiate(const Trajectory& traj, const DiffSpec& spec);

/// Differentiates the derivative channels, yielding a record whose states
/// are the first derivatives and whose derivatives are second derivatives.
Trajectory derivative_of_derivative(const Trajectory& traj, const DiffSpec& spec);

} // namespace sindyforge
