#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "sindyforge/timeseries.hpp"

namespace sindyforge {

/// Discrete-time linear predictor y_k = sum a_i y_{k-i} + sum b_j u_{k-nk-j}
/// (i = 1..na, j = 0..nb-1), least-squares fitted.
struct ArxModel {
    int na = 1;
    int nb = 1;
    int nk = 1;
    Eigen::VectorXd a;
    Eigen::VectorXd b;
    double dt = 0.0;

    /// First sample index with a full regressor.
    int start_index() const { return std::max(na, nb - 1 + nk); }
};

ArxModel fit_arx(const Trajectory& traj, int na, int nb, int nk);

/// Simulation-mode response: the first start_index() outputs are taken from
/// `y_init`, everything after is fed back from the model's own predictions.
Eigen::VectorXd simulate_arx(const ArxModel& model, const Eigen::VectorXd& y_init, const Eigen::VectorXd& u);

nlohmann::json arx_to_json(const ArxModel& model);

} // namespace sindyforge
