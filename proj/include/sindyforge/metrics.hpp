#pragma once

#include <Eigen/Dense>

#include "sindyforge/errors.hpp"

namespace sindyforge {

struct Score {
    double bfr = 0.0;          // percent in [0, 100]
    double rmse = 0.0;
    Eigen::Index n_samples = 0;
};

/// Best Fit Ratio in percent. This is the squared-error ratio clipped at
/// zero — max(1 - sum((y-yhat)^2)/sum((y-ybar)^2), 0) * 100, with ybar the
/// mean of the TEST output — rather than the norm-based quantity the same
/// acronym often denotes elsewhere.
double bfr(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

Score score(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat);

} // namespace sindyforge
