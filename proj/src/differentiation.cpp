#include "sindyforge/differentiation.hpp"

#include <Eigen/Sparse>
#include <vector>

namespace sindyforge {

namespace {

Eigen::VectorXd central_difference(const Eigen::VectorXd& y, double dt) {
    const Eigen::Index T = y.size();
    Eigen::VectorXd d(T);
    d(0) = (-3.0 * y(0) + 4.0 * y(1) - y(2)) / (2.0 * dt);
    for (Eigen::Index k = 1; k + 1 < T; ++k) d(k) = (y(k + 1) - y(k - 1)) / (2.0 * dt);
    d(T - 1) = (3.0 * y(T - 1) - 4.0 * y(T - 2) + y(T - 3)) / (2.0 * dt);
    return d;
}

// Solves (I + lambda * D2' D2) v = g with D2 the second-difference operator
// scaled by 1/dt^2. The system is pentadiagonal SPD.
Eigen::VectorXd tikhonov_smooth(const Eigen::VectorXd& g, double dt, double lambda) {
    const Eigen::Index T = g.size();
    const double s = 1.0 / (dt * dt);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(9 * T));
    for (Eigen::Index i = 0; i < T; ++i) trip.emplace_back(i, i, 1.0);
    // D2 row r touches columns r, r+1, r+2 with weights s, -2s, s.
    for (Eigen::Index r = 0; r + 2 < T; ++r) {
        const double w[3] = {s, -2.0 * s, s};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) trip.emplace_back(r + a, r + b, lambda * w[a] * w[b]);
    }
    Eigen::SparseMatrix<double> A(T, T);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw Error("derivative smoothing: factorization failed");
    Eigen::VectorXd v = solver.solve(g);
    if (solver.info() != Eigen::Success) throw Error("derivative smoothing: solve failed");
    return v;
}

} // namespace

Eigen::VectorXd differentiate_channel(const Eigen::VectorXd& y, double dt, const DiffSpec& spec) {
    spec.validate();
    if (y.size() < 3) throw DataError("differentiate: need at least 3 samples");
    if (!(dt > 0.0)) throw DataError("differentiate: dt must be positive");

    Eigen::VectorXd g = central_difference(y, dt);
    if (spec.method == DiffMethod::Central || spec.lambda_d == 0.0) return g;
    return tikhonov_smooth(g, dt, spec.lambda_d);
}

Trajectory differentiate(const Trajectory& traj, const DiffSpec& spec) {
    traj.validate();
    if (traj.rows() < 3) throw DataError("differentiate: need at least 3 samples");

    Trajectory out = traj;
    Eigen::MatrixXd d(traj.rows(), traj.n_states());
    for (Eigen::Index i = 0; i < traj.n_states(); ++i)
        d.col(i) = differentiate_channel(traj.states.col(i), traj.dt, spec);
    out.derivatives = std::move(d);
    return out;
}

Trajectory derivative_of_derivative(const Trajectory& traj, const DiffSpec& spec) {
    if (!traj.has_derivatives()) throw StateError("derivative_of_derivative: derivatives not populated");

    Trajectory first;
    first.t0 = traj.t0;
    first.dt = traj.dt;
    first.states = *traj.derivatives;
    first.inputs = traj.inputs;
    first.channel_names.reserve(traj.channel_names.size());
    for (Eigen::Index i = 0; i < traj.n_states(); ++i) first.channel_names.push_back(traj.state_name(i) + "_dot");
    for (Eigen::Index j = 0; j < traj.n_inputs(); ++j) first.channel_names.push_back(traj.input_name(j));
    return differentiate(first, spec);
}

} // namespace sindyforge
