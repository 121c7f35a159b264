#include "sindyforge/features.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>

namespace sindyforge {

namespace {

double channel_value(int channel, const Eigen::VectorXd& state, const Eigen::VectorXd& input) {
    const int n = static_cast<int>(state.size());
    return channel < n ? state(channel) : input(channel - n);
}

std::string power_name(const std::string& base, int exponent) {
    if (exponent == 1) return base;
    return base + "^" + std::to_string(exponent);
}

} // namespace

BasisFunction BasisFunction::constant() {
    BasisFunction f;
    f.kind_ = BasisKind::Constant;
    f.name_ = "1";
    return f;
}

BasisFunction BasisFunction::monomial(std::vector<int> exponents, const std::vector<std::string>& channel_names) {
    if (exponents.size() != channel_names.size())
        throw ConfigError("monomial: exponent count must match channel count");
    BasisFunction f;
    f.kind_ = BasisKind::Monomial;
    f.exponents_ = std::move(exponents);

    std::string name;
    for (std::size_t c = 0; c < f.exponents_.size(); ++c) {
        const int e = f.exponents_[c];
        if (e < 0) throw ConfigError("monomial: negative exponent");
        if (e == 0) continue;
        if (!name.empty()) name += "*";
        name += power_name(channel_names[c], e);
    }
    if (name.empty()) {
        f.kind_ = BasisKind::Constant;
        name = "1";
    }
    f.name_ = std::move(name);
    return f;
}

BasisFunction BasisFunction::abs_product(std::vector<AbsFactor> factors,
                                         const std::vector<std::string>& channel_names) {
    if (factors.empty()) throw ConfigError("abs_product: needs at least one factor");
    BasisFunction f;
    f.kind_ = BasisKind::AbsProduct;
    f.factors_ = std::move(factors);

    std::string name;
    std::size_t i = 0;
    while (i < f.factors_.size()) {
        std::size_t j = i;
        while (j < f.factors_.size() && f.factors_[j] == f.factors_[i]) ++j;
        const auto& fac = f.factors_[i];
        if (fac.channel < 0 || fac.channel >= static_cast<int>(channel_names.size()))
            throw ConfigError("abs_product: channel index out of range");
        std::string base = channel_names[static_cast<std::size_t>(fac.channel)];
        if (fac.absolute) base = "|" + base + "|";
        if (!name.empty()) name += "*";
        name += power_name(base, static_cast<int>(j - i));
        i = j;
    }
    f.name_ = std::move(name);
    return f;
}

BasisFunction BasisFunction::sqrt_guarded(int channel, double lo, double hi, const std::string& channel_name) {
    if (lo < 0.0) throw ConfigError("sqrt term: guard lower bound must be nonnegative");
    if (hi < lo) throw ConfigError("sqrt term: guard upper bound below lower bound");
    BasisFunction f;
    f.kind_ = BasisKind::Sqrt;
    f.sqrt_channel_ = channel;
    f.guard_lo_ = lo;
    f.guard_hi_ = hi;
    f.name_ = "sqrt(" + channel_name + ")";
    return f;
}

BasisFunction BasisFunction::custom(std::string name,
                                    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> fn) {
    BasisFunction f;
    f.kind_ = BasisKind::Custom;
    f.name_ = std::move(name);
    f.fn_ = std::move(fn);
    return f;
}

int BasisFunction::max_channel() const {
    switch (kind_) {
        case BasisKind::Constant:
            return -1;
        case BasisKind::Monomial: {
            int mx = -1;
            for (std::size_t c = 0; c < exponents_.size(); ++c)
                if (exponents_[c] > 0) mx = std::max(mx, static_cast<int>(c));
            return mx;
        }
        case BasisKind::AbsProduct: {
            int mx = -1;
            for (const auto& f : factors_) mx = std::max(mx, f.channel);
            return mx;
        }
        case BasisKind::Sqrt:
            return sqrt_channel_;
        case BasisKind::Custom:
            return -1; // caller's responsibility
    }
    return -1;
}

double BasisFunction::operator()(const Eigen::VectorXd& state, const Eigen::VectorXd& input) const {
    switch (kind_) {
        case BasisKind::Constant:
            return 1.0;
        case BasisKind::Monomial: {
            double v = 1.0;
            for (std::size_t c = 0; c < exponents_.size(); ++c) {
                const int e = exponents_[c];
                if (e == 0) continue;
                const double x = channel_value(static_cast<int>(c), state, input);
                for (int k = 0; k < e; ++k) v *= x;
            }
            return v;
        }
        case BasisKind::AbsProduct: {
            double v = 1.0;
            for (const auto& f : factors_) {
                const double x = channel_value(f.channel, state, input);
                v *= f.absolute ? std::abs(x) : x;
            }
            return v;
        }
        case BasisKind::Sqrt: {
            const double x = channel_value(sqrt_channel_, state, input);
            return std::sqrt(std::clamp(x, guard_lo_, guard_hi_));
        }
        case BasisKind::Custom:
            return fn_(state, input);
    }
    return 0.0;
}

FeatureLibrary::FeatureLibrary(int n, int m, std::vector<std::string> channel_names,
                               std::vector<BasisFunction> basis)
    : n_(n), m_(m), channel_names_(std::move(channel_names)), basis_(std::move(basis)) {
    if (n_ < 0 || m_ < 0) throw ConfigError("library: negative dimension");
    if (static_cast<int>(channel_names_.size()) != n_ + m_)
        throw ConfigError("library: expected one name per channel");
    std::set<std::string> seen;
    for (const auto& f : basis_) {
        if (!seen.insert(f.name()).second) throw ConfigError("library: duplicate basis name '" + f.name() + "'");
        if (f.max_channel() >= n_ + m_)
            throw ConfigError("library: basis '" + f.name() + "' references channel outside n+m");
    }
}

std::optional<int> FeatureLibrary::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i].name() == name) return static_cast<int>(i);
    return std::nullopt;
}

Eigen::MatrixXd evaluate(const FeatureLibrary& lib, const Eigen::MatrixXd& states, const Eigen::MatrixXd& inputs) {
    if (states.cols() != lib.state_dim() || inputs.cols() != lib.input_dim())
        throw ConfigError("evaluate: data dimensions do not match library");
    const Eigen::Index T = states.rows();
    if (T < 1 || inputs.rows() != T) throw ConfigError("evaluate: need T >= 1 with matching state/input rows");

    for (Eigen::Index k = 0; k < T; ++k) {
        if (!states.row(k).allFinite() || !inputs.row(k).allFinite())
            throw DataError("evaluate: non-finite sample at row " + std::to_string(k));
    }

    Eigen::MatrixXd phi(T, lib.size());
    Eigen::VectorXd x(lib.state_dim()), u(lib.input_dim());
    for (Eigen::Index k = 0; k < T; ++k) {
        x = states.row(k).transpose();
        u = inputs.row(k).transpose();
        for (int h = 0; h < lib.size(); ++h) phi(k, h) = lib.at(h)(x, u);
    }
    return phi;
}

namespace {

std::vector<std::string> default_channel_names(int n, int m) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    for (int j = 0; j < m; ++j) names.push_back("u" + std::to_string(j));
    return names;
}

// Exponent vectors of fixed total degree in graded-lexicographic order:
// earlier channels carry the highest powers first.
void enumerate_degree(int channels, int degree, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
    const int c = static_cast<int>(current.size());
    if (c == channels - 1) {
        current.push_back(degree);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int e = degree; e >= 0; --e) {
        current.push_back(e);
        enumerate_degree(channels, degree - e, current, out);
        current.pop_back();
    }
}

} // namespace

FeatureLibrary polynomial_library(int n, int m, int degree, std::vector<std::string> channel_names) {
    if (degree < 1) throw ConfigError("polynomial library: degree must be at least 1");
    if (n < 0 || m < 0 || n + m < 1) throw ConfigError("polynomial library: need at least one channel");
    if (channel_names.empty()) channel_names = default_channel_names(n, m);
    if (static_cast<int>(channel_names.size()) != n + m)
        throw ConfigError("polynomial library: expected one name per channel");

    std::vector<BasisFunction> basis;
    basis.push_back(BasisFunction::constant());
    for (int d = 1; d <= degree; ++d) {
        std::vector<std::vector<int>> exps;
        std::vector<int> current;
        enumerate_degree(n + m, d, current, exps);
        for (auto& e : exps) basis.push_back(BasisFunction::monomial(std::move(e), channel_names));
    }
    return FeatureLibrary(n, m, std::move(channel_names), std::move(basis));
}

FeatureLibrary boucwen_library(bool include_constant) {
    // Channels: state 0 = z (hidden restoring force), state 1 = ydot.
    const std::vector<std::string> names = {"z", "ydot"};
    const AbsFactor z{0, false}, az{0, true}, yd{1, false}, ayd{1, true};

    std::vector<BasisFunction> basis;
    if (include_constant) basis.push_back(BasisFunction::constant());
    const std::vector<std::vector<AbsFactor>> members = {
        {yd},        {z},        {ayd},      {az},      {z, ayd},
        {az, yd},    {az, ayd},  {z, yd},    {z, z},    {yd, yd},
    };
    for (const auto& f : members) basis.push_back(BasisFunction::abs_product(f, names));
    return FeatureLibrary(2, 0, names, std::move(basis));
}

FeatureLibrary sqrt_augmented_library(const FeatureLibrary& base, const std::vector<int>& channels,
                                      const std::vector<std::pair<double, double>>& guards) {
    if (channels.size() != guards.size())
        throw ConfigError("sqrt augmentation: need one (lo,hi) guard per channel");
    std::vector<BasisFunction> basis = base.basis();
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const int c = channels[i];
        if (c < 0 || c >= base.state_dim() + base.input_dim())
            throw ConfigError("sqrt augmentation: channel index out of range");
        basis.push_back(BasisFunction::sqrt_guarded(c, guards[i].first, guards[i].second,
                                                    base.channel_names()[static_cast<std::size_t>(c)]));
    }
    return FeatureLibrary(base.state_dim(), base.input_dim(), base.channel_names(), std::move(basis));
}

nlohmann::json library_to_json(const FeatureLibrary& lib) {
    nlohmann::json doc;
    doc["n"] = lib.state_dim();
    doc["m"] = lib.input_dim();
    doc["channel_names"] = lib.channel_names();
    nlohmann::json basis = nlohmann::json::array();
    for (int h = 0; h < lib.size(); ++h) {
        const BasisFunction& f = lib.at(h);
        nlohmann::json entry;
        switch (f.kind()) {
            case BasisKind::Constant:
                entry["kind"] = "constant";
                break;
            case BasisKind::Monomial:
                entry["kind"] = "monomial";
                entry["exponents"] = f.exponents();
                break;
            case BasisKind::AbsProduct: {
                entry["kind"] = "abs_product";
                nlohmann::json factors = nlohmann::json::array();
                for (const auto& fac : f.factors()) factors.push_back({fac.channel, fac.absolute});
                entry["factors"] = factors;
                break;
            }
            case BasisKind::Sqrt:
                entry["kind"] = "sqrt";
                entry["channel"] = f.sqrt_channel();
                entry["lo"] = f.guard_lo();
                entry["hi"] = f.guard_hi();
                break;
            case BasisKind::Custom:
                throw ConfigError("library serialization: custom basis '" + f.name() + "' has no closed form");
        }
        basis.push_back(std::move(entry));
    }
    doc["basis"] = std::move(basis);
    return doc;
}

FeatureLibrary library_from_json(const nlohmann::json& doc) {
    const int n = doc.at("n").get<int>();
    const int m = doc.at("m").get<int>();
    auto names = doc.at("channel_names").get<std::vector<std::string>>();

    std::vector<BasisFunction> basis;
    for (const auto& entry : doc.at("basis")) {
        const std::string kind = entry.at("kind").get<std::string>();
        if (kind == "constant") {
            basis.push_back(BasisFunction::constant());
        } else if (kind == "monomial") {
            basis.push_back(BasisFunction::monomial(entry.at("exponents").get<std::vector<int>>(), names));
        } else if (kind == "abs_product") {
            std::vector<AbsFactor> factors;
            for (const auto& fac : entry.at("factors"))
                factors.push_back({fac.at(0).get<int>(), fac.at(1).get<bool>()});
            basis.push_back(BasisFunction::abs_product(std::move(factors), names));
        } else if (kind == "sqrt") {
            const int c = entry.at("channel").get<int>();
            if (c < 0 || c >= n + m) throw ConfigError("library document: sqrt channel out of range");
            basis.push_back(BasisFunction::sqrt_guarded(c, entry.at("lo").get<double>(), entry.at("hi").get<double>(),
                                                        names.at(static_cast<std::size_t>(c))));
        } else {
            throw ConfigError("library document: unknown basis kind '" + kind + "'");
        }
    }
    return FeatureLibrary(n, m, std::move(names), std::move(basis));
}

} // namespace sindyforge
