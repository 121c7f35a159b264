#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sindyforge/errors.hpp"

namespace sindyforge {

/// Sequential Thresholded Least Squares settings. max_iter defaults to the
/// library size (the finite-convergence bound for full-rank designs).
/// ridge_eps = 0 selects an automatic Tikhonov jitter, applied only when the
/// restricted solve is rank deficient.
///
/// The solver itself never rescales features. normalize_columns routes the
/// call through an explicit pipeline scaling step: the solve runs on the
/// unit-RMS-scaled design (lambda then thresholds per-unit-RMS
/// contributions, which keeps wildly different feature scales comparable)
/// and coefficients are mapped back afterwards.
struct StlsSpec {
    double lambda = 0.0;
    std::optional<int> max_iter;  // nullopt -> number of library columns
    double ridge_eps = 0.0;
    bool normalize_columns = false;

    void validate() const {
        if (lambda < 0.0) throw ConfigError("stls: lambda must be nonnegative");
        if (max_iter && *max_iter < 1) throw ConfigError("stls: max_iter must be at least 1");
        if (ridge_eps < 0.0) throw ConfigError("stls: ridge_eps must be nonnegative");
    }
};

struct StlsResult {
    Eigen::VectorXd theta;             // length n_phi, zero off support
    std::vector<Eigen::Index> support; // ascending indices with |theta| >= lambda
    int iterations = 0;
    bool converged = false;
    double residual_sse = 0.0;
};

/// One sparse regression: alternate restricted least squares (starting from
/// the full support) with hard thresholding at lambda until the support is a
/// fixed point or max_iter is reached. Retention uses |theta_h| >= lambda,
/// so ties at exactly lambda are kept. An empty support is a legal result.
StlsResult stls_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& target, const StlsSpec& spec);

/// Column-wise independent solves; identical to calling stls_solve on each
/// target column in sequence.
std::vector<StlsResult> stls_solve_multi(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& targets,
                                         const StlsSpec& spec);

/// Least squares with column-pivoted QR; falls back to a ridge-jittered
/// normal-equation solve when the design is rank deficient. Shared with the
/// ARX baseline.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double ridge_eps = 0.0);

} // namespace sindyforge
