#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "sindyforge/timeseries.hpp"

namespace sindyforge {

/// Hysteretic oscillator: m_L*yddot = u - c_L*ydot - k_L*y - z with the
/// restoring-force state z driven by zdot = alpha*ydot - beta*(gamma*|ydot|*z
/// + delta*ydot*|z|).
struct BoucWenParams {
    double m_L = 2.0;       // kg
    double c_L = 10.0;      // N s/m
    double k_L = 50000.0;   // N/m
    double alpha = 59835.845;
    double beta = 570.725;
    double gamma = 442.497 / 570.725;
    double delta = -357.725 / 570.725;

    void validate() const {
        if (!(m_L > 0.0) || !(k_L > 0.0) || c_L < 0.0) throw ConfigError("boucwen params: need m>0, k>0, c>=0");
    }
};

/// Cascaded tanks: x1dot = -k1*sqrt(x1) + k2*u, x2dot = k3*sqrt(x1) -
/// k4*sqrt(x2), y = x2. Levels saturate at x*_max; upper-tank excess spills
/// into the lower tank scaled by overflow_fraction.
struct TanksParams {
    double k1 = 48.204;
    double k2 = 36.012;
    double k3 = 45.0;
    double k4 = 48.0;
    double x1_max = 10.0;
    double x2_max = 10.0;
    double overflow_fraction = 1.0;

    void validate() const {
        if (!(k1 > 0.0 && k2 > 0.0 && k3 > 0.0 && k4 > 0.0))
            throw ConfigError("tanks params: rate constants must be positive");
        if (!(x1_max > 0.0 && x2_max > 0.0)) throw ConfigError("tanks params: saturation levels must be positive");
        if (overflow_fraction < 0.0 || overflow_fraction > 1.0)
            throw ConfigError("tanks params: overflow_fraction must lie in [0,1]");
    }
};

/// Switched second-order surrogate of a vertically actuated mounting head:
/// free dynamics between the travel limits, extra stiffness and damping in a
/// contact band above y_lo, hard position saturation with velocity zeroing
/// at both ends.
struct PickPlaceParams {
    double free_stiffness = 355.0;
    double free_damping = 2.5;
    double gain = 900.0;
    double impact_stiffness = 3000.0;
    double impact_damping = 20.0;
    double y_lo = 0.0;
    double y_hi = 4.0;
    double impact_depth = 0.4;  // contact band is [y_lo, y_lo + impact_depth)

    void validate() const {
        if (!(y_lo < y_hi)) throw ConfigError("pickplace params: need y_lo < y_hi");
        if (!(free_damping > 0.0) || !(free_damping + impact_damping > 0.0))
            throw ConfigError("pickplace params: damping must be positive in both modes");
        if (impact_depth < 0.0) throw ConfigError("pickplace params: impact_depth must be nonnegative");
    }
};

enum class ExcitationKind { Sine, Multisine, SineSweep, FilteredRandom, Step };

/// Sampled excitation signal description. Multisine components sit exactly
/// on the record's DFT bin grid, so their spectrum has no leakage.
struct ExcitationSpec {
    ExcitationKind kind = ExcitationKind::Multisine;
    double amplitude = 1.0;
    double offset = 0.0;
    double f_lo = 0.1;   // Hz
    double f_hi = 1.0;   // Hz
    double duration = 10.0;  // seconds
    std::uint64_t seed = 0;

    void validate(double dt) const;
};

ExcitationKind excitation_kind_from_string(const std::string& s);
std::string excitation_kind_to_string(ExcitationKind k);

/// Signal sampled at t = 0, dt, ..., (T-1)*dt with T = round(duration/dt)+1.
Eigen::VectorXd generate_excitation(const ExcitationSpec& spec, double dt);

/// A simulated benchmark record: the observed trajectory plus ground-truth
/// channels that stay hidden from fitting (oracle/sidecar use only).
struct BenchmarkRecord {
    Trajectory traj;
    Eigen::MatrixXd hidden;
    std::vector<std::string> hidden_names;
};

BenchmarkRecord simulate_boucwen(const BoucWenParams& p, const ExcitationSpec& excitation, double dt,
                                 const Eigen::Vector3d& x0, int substeps = 10);

BenchmarkRecord simulate_tanks(const TanksParams& p, const ExcitationSpec& excitation, double dt,
                               const Eigen::Vector2d& x0, int substeps = 10);

BenchmarkRecord simulate_pickplace(const PickPlaceParams& p, const ExcitationSpec& excitation, double dt,
                                   int substeps = 10);

/// Upper-tank kernel shared with the hidden-state fitting strategy: RK4 on
/// x1dot = -k1*sqrt(x1) + k2*u with per-substep clamping to [0, x1_max].
/// Depends on the inputs only, never on the measured output.
Eigen::VectorXd simulate_upper_tank(double k1, double k2, double x1_max, double x1_0,
                                    const Eigen::VectorXd& inputs, double dt, int substeps = 10);

struct HysteresisLoop {
    std::vector<std::pair<double, double>> points;  // (displacement, force)
    double area = 0.0;                              // signed, shoelace rule
};

/// Displacement-force curve of a record (state 0 vs input 0) and its signed
/// enclosed area. The record should cover an integer number of input
/// periods.
HysteresisLoop hysteresis_loop(const Trajectory& traj);

/// Adds seeded zero-mean Gaussian noise to every state channel, scaled so
/// each channel meets the requested SNR (noise variance = channel variance
/// * 10^(-snr_db/10)). Inputs are left exact; stale derivative channels are
/// dropped. snr_db = +infinity returns the record unchanged.
Trajectory add_noise(const Trajectory& traj, double snr_db, std::uint64_t seed);

} // namespace sindyforge
