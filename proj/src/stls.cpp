#include "sindyforge/stls.hpp"

#include <cmath>

namespace sindyforge {

Eigen::VectorXd least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, double ridge_eps) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() == a.cols()) return qr.solve(b);

    // Rank deficient (collinear or all-zero columns): jitter the normal
    // equations so the solve stays deterministic and finite.
    double eps = ridge_eps;
    if (eps <= 0.0) {
        const double tr = (a.transpose() * a).trace();
        eps = 1e-10 * tr / static_cast<double>(a.cols());
        if (!(eps > 0.0)) eps = 1e-12;
    }
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += eps;
    return gram.ldlt().solve(a.transpose() * b);
}

namespace {

StlsResult stls_solve_plain(const Eigen::MatrixXd& phi, const Eigen::VectorXd& target, const StlsSpec& spec);

// Explicit scaling step: solve on the unit-RMS design, then map back.
StlsResult stls_solve_scaled(const Eigen::MatrixXd& phi, const Eigen::VectorXd& target, const StlsSpec& spec) {
    const Eigen::Index n_phi = phi.cols();
    Eigen::VectorXd scale(n_phi);
    for (Eigen::Index h = 0; h < n_phi; ++h) {
        const double rms = std::sqrt(phi.col(h).squaredNorm() / static_cast<double>(phi.rows()));
        scale(h) = rms > 0.0 ? rms : 1.0;
    }
    const Eigen::MatrixXd scaled = phi * scale.cwiseInverse().asDiagonal();

    StlsSpec plain = spec;
    plain.normalize_columns = false;
    StlsResult res = stls_solve_plain(scaled, target, plain);
    res.theta = res.theta.cwiseQuotient(scale);
    res.residual_sse = (target - phi * res.theta).squaredNorm();
    return res;
}

} // namespace

StlsResult stls_solve(const Eigen::MatrixXd& phi, const Eigen::VectorXd& target, const StlsSpec& spec) {
    spec.validate();
    if (spec.normalize_columns) return stls_solve_scaled(phi, target, spec);
    return stls_solve_plain(phi, target, spec);
}

namespace {

StlsResult stls_solve_plain(const Eigen::MatrixXd& phi, const Eigen::VectorXd& target, const StlsSpec& spec) {
    const Eigen::Index T = phi.rows();
    const Eigen::Index n_phi = phi.cols();
    if (T < 1 || target.size() != T) throw ConfigError("stls: target length must match phi rows (T >= 1)");
    if (!phi.allFinite() || !target.allFinite()) throw DataError("stls: non-finite entries in regression data");

    const int max_iter = spec.max_iter ? *spec.max_iter : static_cast<int>(n_phi);

    StlsResult res;
    res.theta = Eigen::VectorXd::Zero(n_phi);
    res.support.resize(static_cast<std::size_t>(n_phi));
    for (Eigen::Index h = 0; h < n_phi; ++h) res.support[static_cast<std::size_t>(h)] = h;

    if (n_phi == 0) {
        res.converged = true;
        res.residual_sse = target.squaredNorm();
        return res;
    }

    for (int iter = 1; iter <= max_iter; ++iter) {
        res.iterations = iter;

        Eigen::MatrixXd sub(T, static_cast<Eigen::Index>(res.support.size()));
        for (std::size_t c = 0; c < res.support.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = phi.col(res.support[c]);
        const Eigen::VectorXd coef = least_squares(sub, target, spec.ridge_eps);

        res.theta.setZero();
        std::vector<Eigen::Index> kept;
        kept.reserve(res.support.size());
        for (std::size_t c = 0; c < res.support.size(); ++c) {
            if (std::abs(coef(static_cast<Eigen::Index>(c))) >= spec.lambda) {
                res.theta(res.support[c]) = coef(static_cast<Eigen::Index>(c));
                kept.push_back(res.support[c]);
            }
        }

        if (kept.size() == res.support.size()) {
            res.converged = true;
            break;
        }
        res.support = std::move(kept);
        if (res.support.empty()) {
            res.theta.setZero();
            res.converged = true;
            break;
        }
    }
    // On max_iter exhaustion theta keeps the last thresholded coefficients,
    // so it is zero off the final support and >= lambda on it.
    if (!res.converged) {
        std::vector<Eigen::Index> final_support;
        for (Eigen::Index h = 0; h < n_phi; ++h)
            if (res.theta(h) != 0.0) final_support.push_back(h);
        res.support = std::move(final_support);
    }

    res.residual_sse = (target - phi * res.theta).squaredNorm();
    return res;
}

} // namespace

std::vector<StlsResult> stls_solve_multi(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& targets,
                                         const StlsSpec& spec) {
    if (targets.rows() != phi.rows()) throw ConfigError("stls: target rows must match phi rows");
    std::vector<StlsResult> out;
    out.reserve(static_cast<std::size_t>(targets.cols()));
    for (Eigen::Index c = 0; c < targets.cols(); ++c) out.push_back(stls_solve(phi, targets.col(c), spec));
    return out;
}

} // namespace sindyforge
