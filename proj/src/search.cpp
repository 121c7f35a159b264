#include "sindyforge/search.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "sindyforge/util.hpp"

namespace sindyforge {

void Dimension::validate() const {
    if (name.empty()) throw ConfigError("search dimension: empty name");
    switch (kind) {
        case DimKind::Categorical:
            if (categories.empty()) throw ConfigError("search dimension '" + name + "': empty category list");
            break;
        case DimKind::LogUniform:
            if (!(lo > 0.0)) throw ConfigError("search dimension '" + name + "': log-uniform requires lo > 0");
            [[fallthrough]];
        case DimKind::Uniform:
            if (!(lo < hi)) throw ConfigError("search dimension '" + name + "': need lo < hi");
            break;
    }
}

void SearchSpace::validate() const {
    if (budget < 1) throw ConfigError("search: budget must be at least 1");
    for (const auto& d : dims) d.validate();
}

std::vector<Point> draw_points(const SearchSpace& space) {
    space.validate();
    std::mt19937_64 rng(splitmix64(space.seed));
    std::vector<Point> points;
    points.reserve(static_cast<std::size_t>(space.budget));
    for (int t = 0; t < space.budget; ++t) {
        Point p;
        for (const auto& d : space.dims) {
            const double v = uniform01(rng);
            switch (d.kind) {
                case DimKind::Uniform:
                    p[d.name] = d.lo + v * (d.hi - d.lo);
                    break;
                case DimKind::LogUniform:
                    p[d.name] = std::exp(std::log(d.lo) + v * (std::log(d.hi) - std::log(d.lo)));
                    break;
                case DimKind::Categorical: {
                    auto idx = static_cast<std::size_t>(v * static_cast<double>(d.categories.size()));
                    if (idx >= d.categories.size()) idx = d.categories.size() - 1;
                    p[d.name] = d.categories[idx];
                    break;
                }
            }
        }
        points.push_back(std::move(p));
    }
    return points;
}

SearchResult search(const SearchSpace& space, const std::function<double(const Point&)>& objective, int jobs) {
    const std::vector<Point> points = draw_points(space);

    SearchResult result;
    result.trials.resize(points.size());

    auto run_trial = [&](std::size_t i) {
        TrialRecord& rec = result.trials[i];
        rec.trial_id = static_cast<int>(i);
        rec.point = points[i];
        const auto start = std::chrono::steady_clock::now();
        try {
            rec.validation_rmse = objective(points[i]);
            rec.status = std::isfinite(rec.validation_rmse) ? "ok" : "diverged";
        } catch (const std::exception&) {
            rec.validation_rmse = std::numeric_limits<double>::infinity();
            rec.status = "error";
        }
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i) run_trial(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const auto n_workers = static_cast<std::size_t>(std::min<int>(jobs, static_cast<int>(points.size())));
        workers.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) run_trial(i);
            });
        for (auto& w : workers) w.join();
    }

    result.best_rmse = std::numeric_limits<double>::infinity();
    for (const auto& rec : result.trials) {
        if (rec.status == "ok" && rec.validation_rmse < result.best_rmse) {
            result.best_rmse = rec.validation_rmse;
            result.best_trial = rec.trial_id;
            result.best = rec.point;
        }
    }
    if (result.best_trial < 0) throw Error("search: no feasible point (all trials diverged or failed)");
    return result;
}

} // namespace sindyforge
