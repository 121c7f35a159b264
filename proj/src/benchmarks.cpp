#include "sindyforge/benchmarks.hpp"

#include <cmath>
#include <random>

#include "sindyforge/util.hpp"

namespace sindyforge {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double sqrt_nonneg(double x) { return std::sqrt(x > 0.0 ? x : 0.0); }

Eigen::Index sample_count(double duration, double dt) {
    return static_cast<Eigen::Index>(std::llround(duration / dt)) + 1;
}

} // namespace

void ExcitationSpec::validate(double dt) const {
    if (!(duration > 0.0)) throw ConfigError("excitation: duration must be positive");
    if (!(dt > 0.0)) throw ConfigError("excitation: dt must be positive");
    if (amplitude < 0.0) throw ConfigError("excitation: amplitude must be nonnegative");
    if (f_hi < f_lo) throw ConfigError("excitation: f_hi must be >= f_lo");
    const double nyquist = 0.5 / dt;
    if ((kind == ExcitationKind::Sine || kind == ExcitationKind::Multisine || kind == ExcitationKind::SineSweep ||
         kind == ExcitationKind::FilteredRandom) &&
        f_hi > nyquist)
        throw ConfigError("excitation: band exceeds the Nyquist frequency " + format_double(nyquist));
}

ExcitationKind excitation_kind_from_string(const std::string& s) {
    if (s == "sine") return ExcitationKind::Sine;
    if (s == "multisine") return ExcitationKind::Multisine;
    if (s == "sinesweep") return ExcitationKind::SineSweep;
    if (s == "filtered-random" || s == "filtered_random") return ExcitationKind::FilteredRandom;
    if (s == "step") return ExcitationKind::Step;
    throw ConfigError("excitation: unknown kind '" + s + "'");
}

std::string excitation_kind_to_string(ExcitationKind k) {
    switch (k) {
        case ExcitationKind::Sine: return "sine";
        case ExcitationKind::Multisine: return "multisine";
        case ExcitationKind::SineSweep: return "sinesweep";
        case ExcitationKind::FilteredRandom: return "filtered-random";
        case ExcitationKind::Step: return "step";
    }
    return "?";
}

Eigen::VectorXd generate_excitation(const ExcitationSpec& spec, double dt) {
    spec.validate(dt);
    const Eigen::Index T = sample_count(spec.duration, dt);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(T);

    switch (spec.kind) {
        case ExcitationKind::Sine: {
            for (Eigen::Index k = 0; k < T; ++k)
                u(k) = spec.amplitude * std::sin(kTwoPi * spec.f_lo * static_cast<double>(k) * dt);
            break;
        }
        case ExcitationKind::Multisine: {
            // Components on the DFT bin grid of the full record, random
            // phases, peak renormalized to the requested amplitude.
            const double df = 1.0 / (static_cast<double>(T) * dt);
            auto j_lo = static_cast<Eigen::Index>(std::ceil(spec.f_lo / df - 1e-9));
            auto j_hi = static_cast<Eigen::Index>(std::floor(spec.f_hi / df + 1e-9));
            if (j_lo < 1) j_lo = 1;
            if (j_hi > T / 2 - 1) j_hi = T / 2 - 1;
            if (j_hi < j_lo) throw ConfigError("excitation: multisine band contains no DFT bins");
            std::mt19937_64 rng(splitmix64(spec.seed));
            for (Eigen::Index j = j_lo; j <= j_hi; ++j) {
                const double phase = kTwoPi * uniform01(rng);
                for (Eigen::Index k = 0; k < T; ++k)
                    u(k) += std::cos(kTwoPi * static_cast<double>(j) * static_cast<double>(k) /
                                         static_cast<double>(T) +
                                     phase);
            }
            const double peak = u.cwiseAbs().maxCoeff();
            if (peak > 0.0) u *= spec.amplitude / peak;
            break;
        }
        case ExcitationKind::SineSweep: {
            const double rate = (spec.f_hi - spec.f_lo) / (2.0 * spec.duration);
            for (Eigen::Index k = 0; k < T; ++k) {
                const double t = static_cast<double>(k) * dt;
                u(k) = spec.amplitude * std::sin(kTwoPi * (spec.f_lo * t + rate * t * t));
            }
            break;
        }
        case ExcitationKind::FilteredRandom: {
            std::mt19937_64 rng(splitmix64(spec.seed));
            const double a = std::exp(-kTwoPi * spec.f_hi * dt);  // one-pole low-pass at f_hi
            double state = 0.0;
            for (Eigen::Index k = 0; k < T; ++k) {
                state = a * state + (1.0 - a) * gaussian01(rng);
                u(k) = state;
            }
            const double peak = u.cwiseAbs().maxCoeff();
            if (peak > 0.0) u *= spec.amplitude / peak;
            break;
        }
        case ExcitationKind::Step: {
            u.setConstant(spec.amplitude);
            break;
        }
    }
    u.array() += spec.offset;
    return u;
}

namespace {

// Fixed-step RK4 over the sample grid with zero-order-hold input and an
// optional post-substep projection (clamping / overflow bookkeeping).
template <typename Rhs, typename Project>
Eigen::MatrixXd integrate_grid(const Eigen::VectorXd& u, double dt, int substeps, Eigen::VectorXd x,
                               Rhs rhs, Project project) {
    const Eigen::Index T = u.size();
    const Eigen::Index n = x.size();
    Eigen::MatrixXd states(T, n);
    project(x);
    states.row(0) = x.transpose();
    const double h = dt / static_cast<double>(substeps);
    Eigen::VectorXd k1(n), k2(n), k3(n), k4(n);
    for (Eigen::Index k = 0; k + 1 < T; ++k) {
        const double uk = u(k);
        for (int s = 0; s < substeps; ++s) {
            k1 = rhs(x, uk);
            k2 = rhs(x + 0.5 * h * k1, uk);
            k3 = rhs(x + 0.5 * h * k2, uk);
            k4 = rhs(x + h * k3, uk);
            x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            project(x);
        }
        if (!x.allFinite())
            throw DivergenceError("benchmark simulation diverged at sample " + std::to_string(k + 1),
                                  static_cast<std::size_t>(k + 1));
        states.row(k + 1) = x.transpose();
    }
    return states;
}

} // namespace

BenchmarkRecord simulate_boucwen(const BoucWenParams& p, const ExcitationSpec& excitation, double dt,
                                 const Eigen::Vector3d& x0, int substeps) {
    p.validate();
    if (!(dt > 0.0)) throw ConfigError("boucwen: dt must be positive");
    const Eigen::VectorXd u = generate_excitation(excitation, dt);

    auto rhs = [&p](const Eigen::VectorXd& x, double uk) {
        const double ydot = x(1), z = x(2);
        Eigen::VectorXd d(3);
        d(0) = ydot;
        d(1) = (uk - p.c_L * ydot - p.k_L * x(0) - z) / p.m_L;
        d(2) = p.alpha * ydot - p.beta * (p.gamma * std::abs(ydot) * z + p.delta * ydot * std::abs(z));
        return d;
    };
    const Eigen::MatrixXd full = integrate_grid(u, dt, substeps, x0, rhs, [](Eigen::VectorXd&) {});

    BenchmarkRecord rec;
    rec.traj.t0 = 0.0;
    rec.traj.dt = dt;
    rec.traj.states = full.col(0);
    rec.traj.inputs = u;
    rec.traj.channel_names = {"y", "u"};

    rec.hidden.resize(full.rows(), 3);
    rec.hidden.col(0) = full.col(1);  // ydot
    for (Eigen::Index k = 0; k < full.rows(); ++k)
        rec.hidden(k, 1) = (u(k) - p.c_L * full(k, 1) - p.k_L * full(k, 0) - full(k, 2)) / p.m_L;  // yddot
    rec.hidden.col(2) = full.col(2);  // z
    rec.hidden_names = {"ydot", "yddot", "z"};
    return rec;
}

Eigen::VectorXd simulate_upper_tank(double k1, double k2, double x1_max, double x1_0,
                                    const Eigen::VectorXd& inputs, double dt, int substeps) {
    if (!(k1 > 0.0 && k2 > 0.0)) throw ConfigError("upper tank: k1, k2 must be positive");
    if (x1_0 < 0.0 || x1_0 > x1_max) throw ConfigError("upper tank: x1_0 outside [0, x1_max]");

    auto rhs = [k1, k2](const Eigen::VectorXd& x, double uk) {
        Eigen::VectorXd d(1);
        d(0) = -k1 * sqrt_nonneg(x(0)) + k2 * uk;
        return d;
    };
    auto project = [x1_max](Eigen::VectorXd& x) {
        if (x(0) < 0.0) x(0) = 0.0;
        if (x(0) > x1_max) x(0) = x1_max;
    };
    Eigen::VectorXd x(1);
    x(0) = x1_0;
    return integrate_grid(inputs, dt, substeps, x, rhs, project).col(0);
}

BenchmarkRecord simulate_tanks(const TanksParams& p, const ExcitationSpec& excitation, double dt,
                               const Eigen::Vector2d& x0, int substeps) {
    p.validate();
    if (!(dt > 0.0)) throw ConfigError("tanks: dt must be positive");
    if (x0(0) < 0.0 || x0(0) > p.x1_max || x0(1) < 0.0 || x0(1) > p.x2_max)
        throw ConfigError("tanks: initial state outside [0, x_max]");
    const Eigen::VectorXd u = generate_excitation(excitation, dt);

    auto rhs = [&p](const Eigen::VectorXd& x, double uk) {
        Eigen::VectorXd d(2);
        d(0) = -p.k1 * sqrt_nonneg(x(0)) + p.k2 * uk;
        d(1) = p.k3 * sqrt_nonneg(x(0)) - p.k4 * sqrt_nonneg(x(1));
        return d;
    };
    // Upper-tank excess spills into the lower tank before both levels clamp.
    auto project = [&p](Eigen::VectorXd& x) {
        if (x(0) > p.x1_max) {
            x(1) += p.overflow_fraction * (x(0) - p.x1_max);
            x(0) = p.x1_max;
        }
        if (x(0) < 0.0) x(0) = 0.0;
        if (x(1) > p.x2_max) x(1) = p.x2_max;
        if (x(1) < 0.0) x(1) = 0.0;
    };
    const Eigen::MatrixXd full = integrate_grid(u, dt, substeps, x0, rhs, project);

    BenchmarkRecord rec;
    rec.traj.t0 = 0.0;
    rec.traj.dt = dt;
    rec.traj.states = full.col(1);  // y = x2
    rec.traj.inputs = u;
    rec.traj.channel_names = {"y", "u"};
    rec.hidden = full.col(0);
    rec.hidden_names = {"x1"};
    return rec;
}

BenchmarkRecord simulate_pickplace(const PickPlaceParams& p, const ExcitationSpec& excitation, double dt,
                                   int substeps) {
    p.validate();
    if (!(dt > 0.0)) throw ConfigError("pickplace: dt must be positive");
    const Eigen::VectorXd u = generate_excitation(excitation, dt);
    const double y_imp = p.y_lo + p.impact_depth;

    // Contact band above y_lo: extra stiffness anchored at the board surface
    // plus extra damping. The head rests at y_lo when unactuated.
    auto rhs = [&](const Eigen::VectorXd& x, double uk) {
        const double y = x(0), v = x(1);
        double damping = p.free_damping;
        double force = p.gain * uk - p.free_stiffness * y;
        if (y < y_imp) {
            damping += p.impact_damping;
            force -= p.impact_stiffness * (y - p.y_lo);
        }
        Eigen::VectorXd d(2);
        d(0) = v;
        d(1) = force - damping * v;
        return d;
    };
    auto project = [&p](Eigen::VectorXd& x) {
        if (x(0) <= p.y_lo) {
            x(0) = p.y_lo;
            if (x(1) < 0.0) x(1) = 0.0;
        } else if (x(0) >= p.y_hi) {
            x(0) = p.y_hi;
            if (x(1) > 0.0) x(1) = 0.0;
        }
    };

    Eigen::VectorXd x0(2);
    x0 << p.y_lo, 0.0;
    const Eigen::MatrixXd full = integrate_grid(u, dt, substeps, x0, rhs, project);

    BenchmarkRecord rec;
    rec.traj.t0 = 0.0;
    rec.traj.dt = dt;
    rec.traj.states = full.col(0);
    rec.traj.inputs = u;
    rec.traj.channel_names = {"y", "u"};

    rec.hidden.resize(full.rows(), 2);
    rec.hidden.col(0) = full.col(1);  // ydot
    for (Eigen::Index k = 0; k < full.rows(); ++k) {
        const double y = full(k, 0);
        double mode = 1.0;  // free
        if (y <= p.y_lo) mode = 0.0;
        else if (y >= p.y_hi) mode = 3.0;
        else if (y < y_imp) mode = 2.0;
        rec.hidden(k, 1) = mode;
    }
    rec.hidden_names = {"ydot", "mode"};
    return rec;
}

HysteresisLoop hysteresis_loop(const Trajectory& traj) {
    const Eigen::Index T = traj.rows();
    if (T < 3) throw DataError("hysteresis loop: need at least 3 points");
    if (traj.n_states() < 1 || traj.n_inputs() < 1)
        throw ConfigError("hysteresis loop: record needs a state and an input channel");

    HysteresisLoop loop;
    loop.points.reserve(static_cast<std::size_t>(T));
    for (Eigen::Index k = 0; k < T; ++k) loop.points.emplace_back(traj.states(k, 0), traj.inputs(k, 0));

    double twice_area = 0.0;
    for (std::size_t k = 0; k < loop.points.size(); ++k) {
        const auto& [x1, y1] = loop.points[k];
        const auto& [x2, y2] = loop.points[(k + 1) % loop.points.size()];
        twice_area += x1 * y2 - x2 * y1;
    }
    loop.area = 0.5 * twice_area;
    return loop;
}

Trajectory add_noise(const Trajectory& traj, double snr_db, std::uint64_t seed) {
    if (std::isnan(snr_db)) throw ConfigError("add_noise: snr_db must not be NaN");
    if (std::isinf(snr_db) && snr_db > 0.0) return traj;

    traj.validate();
    Trajectory out = traj;
    out.derivatives.reset();  // stale once the states change

    const auto T = static_cast<double>(traj.rows());
    std::mt19937_64 rng(splitmix64(seed));
    for (Eigen::Index i = 0; i < traj.n_states(); ++i) {
        const double mean = traj.states.col(i).mean();
        const double var = (traj.states.col(i).array() - mean).square().sum() / T;
        const double sigma = std::sqrt(var * std::pow(10.0, -snr_db / 10.0));
        for (Eigen::Index k = 0; k < traj.rows(); ++k) out.states(k, i) += sigma * gaussian01(rng);
    }
    return out;
}

} // namespace sindyforge
