#include "sindyforge/metrics.hpp"

#include <cmath>

namespace sindyforge {

double bfr(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() != yhat.size()) throw ConfigError("bfr: length mismatch");
    if (y.size() < 2) throw ConfigError("bfr: need at least 2 samples");

    const double mean = y.mean();
    const double denom = (y.array() - mean).matrix().squaredNorm();
    if (denom <= 0.0) throw DataError("bfr: constant reference output, denominator is zero");
    const double num = (y - yhat).squaredNorm();
    const double ratio = 1.0 - num / denom;
    return (ratio > 0.0 ? ratio : 0.0) * 100.0;
}

double rmse(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    if (y.size() != yhat.size()) throw ConfigError("rmse: length mismatch");
    if (y.size() < 1) throw ConfigError("rmse: need at least 1 sample");
    return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

Score score(const Eigen::VectorXd& y, const Eigen::VectorXd& yhat) {
    Score s;
    s.bfr = bfr(y, yhat);
    s.rmse = rmse(y, yhat);
    s.n_samples = y.size();
    return s;
}

} // namespace sindyforge
