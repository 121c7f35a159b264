#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sindyforge/errors.hpp"

namespace sindyforge {

enum class DimKind { LogUniform, Uniform, Categorical };

struct Dimension {
    std::string name;
    DimKind kind = DimKind::Uniform;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> categories;

    void validate() const;
};

/// Seeded random-search space. All sample points are drawn up front from the
/// seed, so the trial set does not depend on evaluation order or worker
/// count.
struct SearchSpace {
    std::vector<Dimension> dims;
    int budget = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

using Point = std::map<std::string, double>;

struct TrialRecord {
    int trial_id = 0;
    Point point;
    double validation_rmse = 0.0;
    double wall_time = 0.0;      // seconds; excluded from determinism checks
    std::string status = "ok";   // ok | diverged | error
};

struct SearchResult {
    Point best;
    int best_trial = -1;
    double best_rmse = 0.0;
    std::vector<TrialRecord> trials;
};

/// Evaluates the objective on every pre-drawn point and returns the
/// minimum-RMSE trial (ties to the lower trial id). Objective exceptions
/// mark the trial as "error"; +infinity marks it "diverged". Throws when no
/// trial produced a finite value.
SearchResult search(const SearchSpace& space, const std::function<double(const Point&)>& objective, int jobs = 1);

/// The points the search would evaluate, in trial order.
std::vector<Point> draw_points(const SearchSpace& space);

} // namespace sindyforge
