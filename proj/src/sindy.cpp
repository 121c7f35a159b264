#include "sindyforge/sindy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "sindyforge/util.hpp"

namespace sindyforge {

void SparseModel::validate() const {
    if (theta.rows() != library.size()) throw ConfigError("model: theta rows must equal library size");
    if (theta.cols() != static_cast<Eigen::Index>(state_names.size()))
        throw ConfigError("model: one state name per theta column required");
    if (theta.cols() != library.state_dim())
        throw ConfigError("model: state count must match library state dimension");
}

SparseModel fit(const Trajectory& traj, const FeatureLibrary& lib, const StlsSpec& stls_spec,
                const DiffSpec& diff_spec) {
    traj.validate();
    if (traj.n_states() != lib.state_dim() || traj.n_inputs() != lib.input_dim())
        throw ConfigError("fit: trajectory channels do not match library dimensions");

    const Trajectory& source = traj;
    Trajectory with_derivs;
    if (!traj.has_derivatives()) {
        with_derivs = differentiate(traj, diff_spec);
    }
    const Trajectory& data = traj.has_derivatives() ? source : with_derivs;

    const Eigen::MatrixXd phi = evaluate(lib, data.states, data.inputs);
    const auto results = stls_solve_multi(phi, *data.derivatives, stls_spec);

    SparseModel model{lib, Eigen::MatrixXd::Zero(lib.size(), traj.n_states()), {}, {}};
    for (Eigen::Index i = 0; i < traj.n_states(); ++i) {
        model.theta.col(i) = results[static_cast<std::size_t>(i)].theta;
        model.state_names.push_back(traj.state_name(i));
    }
    std::string cfg = "lambda=" + format_double(stls_spec.lambda) +
                      ";lambda_d=" + format_double(diff_spec.lambda_d) +
                      ";method=" + (diff_spec.method == DiffMethod::Central ? "central" : "smoothed");
    for (int h = 0; h < lib.size(); ++h) cfg += ";" + lib.at(h).name();
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(fnv1a64(cfg)));
    model.spec_hash = hex;
    return model;
}

Eigen::VectorXd rhs(const SparseModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
    const int n_phi = model.library.size();
    Eigen::VectorXd phi(n_phi);
    for (int h = 0; h < n_phi; ++h) phi(h) = model.library.at(h)(x, u);
    return model.theta.transpose() * phi;
}

Trajectory simulate(const SparseModel& model, const Eigen::VectorXd& x0, const Eigen::MatrixXd& inputs,
                    double dt, double t0, const SimOptions& opts, const std::vector<std::string>& input_names) {
    model.validate();
    opts.validate();
    if (!(dt > 0.0)) throw ConfigError("simulate: dt must be positive");
    const Eigen::Index T = inputs.rows();
    if (T < 1) throw ConfigError("simulate: need at least one input sample");
    if (inputs.cols() != model.library.input_dim()) throw ConfigError("simulate: input dimension mismatch");
    if (x0.size() != static_cast<Eigen::Index>(model.state_names.size()))
        throw ConfigError("simulate: x0 dimension mismatch");
    if (!opts.clip.empty() && opts.clip.size() != model.state_names.size())
        throw ConfigError("simulate: clip must have one entry per state");

    const Eigen::Index n = x0.size();
    Eigen::MatrixXd states(T, n);

    auto apply_clip = [&](Eigen::VectorXd& x) {
        if (opts.clip.empty()) return;
        for (Eigen::Index i = 0; i < n; ++i)
            if (opts.clip[static_cast<std::size_t>(i)]) {
                const auto& [lo, hi] = *opts.clip[static_cast<std::size_t>(i)];
                x(i) = std::clamp(x(i), lo, hi);
            }
    };

    Eigen::VectorXd x = x0;
    apply_clip(x);
    states.row(0) = x.transpose();
    const double h = dt / static_cast<double>(opts.substeps);

    for (Eigen::Index k = 0; k + 1 < T; ++k) {
        const Eigen::VectorXd u = inputs.row(k).transpose();  // zero-order hold
        for (int s = 0; s < opts.substeps; ++s) {
            const Eigen::VectorXd k1 = rhs(model, x, u);
            const Eigen::VectorXd k2 = rhs(model, x + 0.5 * h * k1, u);
            const Eigen::VectorXd k3 = rhs(model, x + 0.5 * h * k2, u);
            const Eigen::VectorXd k4 = rhs(model, x + h * k3, u);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            apply_clip(x);
        }
        if (!x.allFinite())
            throw DivergenceError("simulate: non-finite state at sample " + std::to_string(k + 1),
                                  static_cast<std::size_t>(k + 1));
        states.row(k + 1) = x.transpose();
    }

    Trajectory out;
    out.t0 = t0;
    out.dt = dt;
    out.states = std::move(states);
    out.inputs = inputs;
    out.channel_names = model.state_names;
    if (!input_names.empty()) {
        out.channel_names.insert(out.channel_names.end(), input_names.begin(), input_names.end());
    } else {
        for (Eigen::Index j = 0; j < inputs.cols(); ++j) out.channel_names.push_back("u" + std::to_string(j));
    }
    return out;
}

std::string render(const SparseModel& model, int precision) {
    model.validate();
    std::string out;
    char buf[64];
    for (Eigen::Index i = 0; i < model.theta.cols(); ++i) {
        std::string line = "d" + model.state_names[static_cast<std::size_t>(i)] + "/dt = ";
        bool first = true;
        for (int h = 0; h < model.library.size(); ++h) {
            const double c = model.theta(h, i);
            if (c == 0.0) continue;
            std::snprintf(buf, sizeof(buf), "%.*f", precision, std::abs(c));
            if (first) {
                if (c < 0.0) line += "-";
                first = false;
            } else {
                line += c < 0.0 ? " - " : " + ";
            }
            line += buf;
            const std::string& nm = model.library.at(h).name();
            if (nm != "1") line += "*" + nm;
        }
        if (first) line += "0";
        out += line;
        if (i + 1 < model.theta.cols()) out += "\n";
    }
    return out;
}

nlohmann::json model_to_json(const SparseModel& model) {
    model.validate();
    nlohmann::json doc;
    doc["state_names"] = model.state_names;
    doc["spec_hash"] = model.spec_hash;
    doc["library"] = library_to_json(model.library);

    nlohmann::json coeffs = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.theta.cols(); ++i)
        for (int h = 0; h < model.library.size(); ++h)
            if (model.theta(h, i) != 0.0)
                coeffs.push_back({model.state_names[static_cast<std::size_t>(i)], model.library.at(h).name(),
                                  model.theta(h, i)});
    doc["coefficients"] = coeffs;
    return doc;
}

SparseModel model_from_json(const nlohmann::json& doc) {
    FeatureLibrary lib = library_from_json(doc.at("library"));
    auto state_names = doc.at("state_names").get<std::vector<std::string>>();

    SparseModel model{std::move(lib), Eigen::MatrixXd::Zero(0, 0), std::move(state_names),
                      doc.value("spec_hash", std::string{})};
    model.theta = Eigen::MatrixXd::Zero(model.library.size(), static_cast<Eigen::Index>(model.state_names.size()));

    for (const auto& triplet : doc.at("coefficients")) {
        const auto state = triplet.at(0).get<std::string>();
        const auto basis_name = triplet.at(1).get<std::string>();
        const double value = triplet.at(2).get<double>();
        const auto sit = std::find(model.state_names.begin(), model.state_names.end(), state);
        if (sit == model.state_names.end()) throw ConfigError("model document: unknown state '" + state + "'");
        const auto h = model.library.index_of(basis_name);
        if (!h) throw ConfigError("model document: unknown basis '" + basis_name + "'");
        model.theta(*h, static_cast<Eigen::Index>(sit - model.state_names.begin())) = value;
    }
    model.validate();
    return model;
}

} // namespace sindyforge
