#pragma once

#include <Eigen/Dense>
#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sindyforge/errors.hpp"

namespace sindyforge {

enum class BasisKind { Constant, Monomial, AbsProduct, Sqrt, Custom };

/// One factor of a product term: a channel value, optionally wrapped in |.|.
/// Channel indices address states first, then inputs.
struct AbsFactor {
    int channel = 0;
    bool absolute = false;

    friend bool operator==(const AbsFactor&, const AbsFactor&) = default;
};

/// A single named candidate function of (state, input). Evaluation is pure;
/// the name is a deterministic function of the construction arguments.
class BasisFunction {
public:
    static BasisFunction constant();
    /// exponents has one entry per channel (states then inputs).
    static BasisFunction monomial(std::vector<int> exponents, const std::vector<std::string>& channel_names);
    static BasisFunction abs_product(std::vector<AbsFactor> factors, const std::vector<std::string>& channel_names);
    /// sqrt(clamp(channel, lo, hi)); requires 0 <= lo <= hi.
    static BasisFunction sqrt_guarded(int channel, double lo, double hi, const std::string& channel_name);
    static BasisFunction custom(std::string name,
                                std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> fn);

    const std::string& name() const { return name_; }
    BasisKind kind() const { return kind_; }
    const std::vector<int>& exponents() const { return exponents_; }
    const std::vector<AbsFactor>& factors() const { return factors_; }
    int sqrt_channel() const { return sqrt_channel_; }
    double guard_lo() const { return guard_lo_; }
    double guard_hi() const { return guard_hi_; }

    /// Largest channel index referenced, or -1 for constants.
    int max_channel() const;

    double operator()(const Eigen::VectorXd& state, const Eigen::VectorXd& input) const;

private:
    BasisFunction() = default;

    std::string name_;
    BasisKind kind_ = BasisKind::Constant;
    std::vector<int> exponents_;
    std::vector<AbsFactor> factors_;
    int sqrt_channel_ = -1;
    double guard_lo_ = 0.0;
    double guard_hi_ = 0.0;
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> fn_;
};

/// Ordered candidate library over n state and m input channels. Order is a
/// pure function of the constructor arguments, so coefficient indices are
/// stable across runs and platforms. Immutable after construction.
class FeatureLibrary {
public:
    FeatureLibrary(int n, int m, std::vector<std::string> channel_names, std::vector<BasisFunction> basis);

    int size() const { return static_cast<int>(basis_.size()); }
    int state_dim() const { return n_; }
    int input_dim() const { return m_; }
    const std::vector<std::string>& channel_names() const { return channel_names_; }
    const BasisFunction& at(int i) const { return basis_.at(static_cast<std::size_t>(i)); }
    const std::vector<BasisFunction>& basis() const { return basis_; }

    std::optional<int> index_of(const std::string& name) const;

    double eval_one(int i, const Eigen::VectorXd& state, const Eigen::VectorXd& input) const {
        return at(i)(state, input);
    }

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<std::string> channel_names_;
    std::vector<BasisFunction> basis_;
};

/// Row k of the result is the library evaluated at (states.row(k),
/// inputs.row(k)), in library order. Rejects non-finite input data.
Eigen::MatrixXd evaluate(const FeatureLibrary& lib, const Eigen::MatrixXd& states, const Eigen::MatrixXd& inputs);

/// All monomials of total degree 1..degree over the n+m channels, preceded
/// by the constant term, in graded-lexicographic order.
FeatureLibrary polynomial_library(int n, int m, int degree, std::vector<std::string> channel_names = {});

/// Degree-<=2 products of {ydot, z, |ydot|, |z|} over channels (z, ydot),
/// as used for hysteretic hidden-state regression. No constant term unless
/// requested.
FeatureLibrary boucwen_library(bool include_constant = false);

/// Appends sqrt(clamp(channel, lo, hi)) terms to a copy of `base`.
FeatureLibrary sqrt_augmented_library(const FeatureLibrary& base, const std::vector<int>& channels,
                                      const std::vector<std::pair<double, double>>& guards);

/// Structural serialization: every basis function with its construction
/// parameters, so a library loaded back evaluates identically. Custom basis
/// functions have no closed form and cannot be serialized.
nlohmann::json library_to_json(const FeatureLibrary& lib);
FeatureLibrary library_from_json(const nlohmann::json& doc);

} // namespace sindyforge
