#include "sindyforge/arx.hpp"

#include <nlohmann/json.hpp>

#include "sindyforge/stls.hpp"

namespace sindyforge {

ArxModel fit_arx(const Trajectory& traj, int na, int nb, int nk) {
    traj.validate();
    if (na < 1 || nb < 1) throw ConfigError("arx: na and nb must be at least 1");
    if (nk < 0) throw ConfigError("arx: nk must be nonnegative");
    if (traj.n_states() < 1 || traj.n_inputs() < 1) throw ConfigError("arx: need an output and an input channel");

    ArxModel model;
    model.na = na;
    model.nb = nb;
    model.nk = nk;
    model.dt = traj.dt;

    const Eigen::VectorXd& y = traj.states.col(0);
    const Eigen::VectorXd& u = traj.inputs.col(0);
    const int k0 = model.start_index();
    const Eigen::Index rows = traj.rows() - k0;
    if (rows < na + nb) throw ConfigError("arx: record too short for the requested orders");

    Eigen::MatrixXd reg(rows, na + nb);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index k = k0 + r;
        for (int i = 1; i <= na; ++i) reg(r, i - 1) = y(k - i);
        for (int j = 0; j < nb; ++j) reg(r, na + j) = u(k - nk - j);
        target(r) = y(k);
    }

    const Eigen::VectorXd coef = least_squares(reg, target);
    model.a = coef.head(na);
    model.b = coef.tail(nb);
    return model;
}

Eigen::VectorXd simulate_arx(const ArxModel& model, const Eigen::VectorXd& y_init, const Eigen::VectorXd& u) {
    const int k0 = model.start_index();
    if (y_init.size() < k0) throw ConfigError("arx simulate: y_init must cover the first " + std::to_string(k0) + " samples");
    const Eigen::Index T = u.size();
    if (T < k0 + 1) throw ConfigError("arx simulate: input record too short");

    Eigen::VectorXd yhat(T);
    yhat.head(k0) = y_init.head(k0);
    for (Eigen::Index k = k0; k < T; ++k) {
        double v = 0.0;
        for (int i = 1; i <= model.na; ++i) v += model.a(i - 1) * yhat(k - i);
        for (int j = 0; j < model.nb; ++j) v += model.b(j) * u(k - model.nk - j);
        yhat(k) = v;
    }
    return yhat;
}

nlohmann::json arx_to_json(const ArxModel& model) {
    nlohmann::json doc;
    doc["type"] = "arx";
    doc["na"] = model.na;
    doc["nb"] = model.nb;
    doc["nk"] = model.nk;
    doc["a"] = std::vector<double>(model.a.data(), model.a.data() + model.a.size());
    doc["b"] = std::vector<double>(model.b.data(), model.b.data() + model.b.size());
    doc["dt"] = model.dt;
    return doc;
}

} // namespace sindyforge
