#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sindyforge/benchmarks.hpp"

using namespace sindyforge;

namespace {

const double kDtBw = 1.0 / 750.0;

ExcitationSpec zero_input(double duration) {
    return {ExcitationKind::Step, 0.0, 0.0, 0.0, 0.0, duration, 0};
}

} // namespace

TEST_CASE("boucwen stays at the origin without forcing") {
    const auto rec = simulate_boucwen(BoucWenParams{}, zero_input(1.0), kDtBw, Eigen::Vector3d::Zero());
    CHECK(rec.traj.states.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rec.hidden.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("boucwen reference parameters match the ideal linear equation") {
    // yddot = -5 ydot - 25000 y - 0.5 z + 0.5 u  =>  m=2, c=10, k=50000.
    const BoucWenParams p;
    CHECK(p.m_L == 2.0);
    CHECK(p.c_L == 10.0);
    CHECK(p.k_L == 50000.0);
    CHECK(p.alpha == 59835.845);
    CHECK(p.beta * p.gamma == doctest::Approx(442.497).epsilon(1e-12));
    CHECK(p.beta * p.delta == doctest::Approx(-357.725).epsilon(1e-12));
}

TEST_CASE("boucwen settles to the static force balance under constant input") {
    const BoucWenParams p;
    const double U0 = 20.0;
    ExcitationSpec step{ExcitationKind::Step, U0, 0.0, 0.0, 0.0, 10.0, 0};
    const auto rec = simulate_boucwen(p, step, kDtBw, Eigen::Vector3d::Zero());

    const Eigen::Index T = rec.traj.rows();
    const double y_inf = rec.traj.states(T - 1, 0);
    const double z_inf = rec.hidden(T - 1, 2);
    CHECK(std::abs(p.k_L * y_inf + z_inf - U0) < 1e-6 * U0);
    CHECK(std::abs(rec.hidden(T - 1, 0)) < 1e-9);  // ydot ~ 0
}

TEST_CASE("boucwen free decay dissipates mechanical energy in the settled tail") {
    const BoucWenParams p;
    const auto rec = simulate_boucwen(p, zero_input(10.0), kDtBw, Eigen::Vector3d(0.002, 0.0, 0.0));
    const Eigen::Index T = rec.traj.rows();

    auto energy = [&](Eigen::Index k) {
        const double v = rec.hidden(k, 0);
        const double y = rec.traj.states(k, 0);
        return 0.5 * p.m_L * v * v + 0.5 * p.k_L * y * y;
    };
    for (Eigen::Index k = 3 * T / 4; k + 1 < T; ++k) CHECK(energy(k + 1) <= energy(k) + 1e-9);
    CHECK(energy(T - 1) < 0.01 * energy(0));
}

TEST_CASE("hysteresis loop of a static linear relation has zero area") {
    Trajectory traj;
    traj.dt = 0.01;
    const Eigen::Index T = 200;
    traj.states.resize(T, 1);
    traj.inputs.resize(T, 1);
    for (Eigen::Index k = 0; k < T; ++k) {
        const double u = std::sin(2.0 * M_PI * static_cast<double>(k) / static_cast<double>(T));
        traj.inputs(k, 0) = u;
        traj.states(k, 0) = u / 50.0;  // y = u/k, memory-free
    }
    traj.channel_names = {"y", "u"};
    CHECK(std::abs(hysteresis_loop(traj).area) < 1e-12);
}

TEST_CASE("boucwen quasi-static loop enclosing a real area") {
    // One 0.75 Hz period at the reference parameters; the oracle run puts
    // the signed area near -0.0712 N*m.
    const int Np = 1000;
    ExcitationSpec probe{ExcitationKind::Sine, 150.0, 0.0, 0.75, 0.75, (Np - 1) * kDtBw, 0};
    const auto rec = simulate_boucwen(BoucWenParams{}, probe, kDtBw, Eigen::Vector3d::Zero());
    REQUIRE(rec.traj.rows() == Np);
    const HysteresisLoop loop = hysteresis_loop(rec.traj);
    CHECK(std::abs(loop.area) > 0.05);

    // Traversing the same loop twice doubles the signed area.
    Trajectory doubled;
    doubled.dt = rec.traj.dt;
    doubled.states.resize(2 * Np, 1);
    doubled.inputs.resize(2 * Np, 1);
    doubled.states << rec.traj.states, rec.traj.states;
    doubled.inputs << rec.traj.inputs, rec.traj.inputs;
    doubled.channel_names = rec.traj.channel_names;
    CHECK(hysteresis_loop(doubled).area == doctest::Approx(2.0 * loop.area).epsilon(1e-9));
}

TEST_CASE("hysteresis loop needs at least 3 points") {
    Trajectory traj;
    traj.dt = 0.1;
    traj.states = Eigen::MatrixXd::Ones(2, 1);
    traj.inputs = Eigen::MatrixXd::Ones(2, 1);
    traj.channel_names = {"y", "u"};
    CHECK_THROWS_AS(hysteresis_loop(traj), DataError);
}

TEST_CASE("tanks stay empty without input") {
    const auto rec = simulate_tanks(TanksParams{}, zero_input(2.0), 0.01, Eigen::Vector2d::Zero());
    CHECK(rec.traj.states.cwiseAbs().maxCoeff() == 0.0);
    CHECK(rec.hidden.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tanks reach the algebraic fixed point under constant input") {
    const TanksParams p;
    const double U0 = 3.0;
    ExcitationSpec step{ExcitationKind::Step, U0, 0.0, 0.0, 0.0, 2.0, 0};
    const auto rec = simulate_tanks(p, step, 0.01, Eigen::Vector2d(5.0, 5.0));

    const double x1_star = std::pow(p.k2 * U0 / p.k1, 2.0);
    const double x2_star = std::pow(p.k3 / p.k4, 2.0) * x1_star;
    const Eigen::Index T = rec.traj.rows();
    CHECK(std::abs(rec.hidden(T - 1, 0) - x1_star) < 1e-4 * x1_star);
    CHECK(std::abs(rec.traj.states(T - 1, 0) - x2_star) < 1e-4 * x2_star);
}

TEST_CASE("tanks reference rate constants") {
    const TanksParams p;
    CHECK(p.k1 == 48.204);
    CHECK(p.k2 == 36.012);
}

TEST_CASE("tank levels never leave [0, x_max], overflow included") {
    TanksParams p;
    ExcitationSpec exc{ExcitationKind::Multisine, 2.2, 2.8, 0.2, 2.0, 12.79, 7};
    const auto rec = simulate_tanks(p, exc, 0.01, Eigen::Vector2d(5.0, 5.0));
    CHECK(rec.hidden.minCoeff() >= 0.0);
    CHECK(rec.hidden.maxCoeff() <= p.x1_max);
    CHECK(rec.traj.states.minCoeff() >= 0.0);
    CHECK(rec.traj.states.maxCoeff() <= p.x2_max);
    // This excitation actually drives the upper tank into saturation.
    CHECK((rec.hidden.col(0).array() >= p.x1_max - 1e-9).count() > 0);

    CHECK_THROWS_AS(simulate_tanks(p, exc, 0.01, Eigen::Vector2d(12.0, 0.0)), ConfigError);
}

TEST_CASE("pickplace rests at the lower limit without input") {
    const auto rec = simulate_pickplace(PickPlaceParams{}, zero_input(1.0), 1.0 / 400.0);
    CHECK(rec.traj.states.maxCoeff() == PickPlaceParams{}.y_lo);
}

TEST_CASE("pickplace holds the upper limit under strong constant input") {
    const PickPlaceParams p;
    ExcitationSpec step{ExcitationKind::Step, 3.0, 0.0, 0.0, 0.0, 3.0, 0};
    const auto rec = simulate_pickplace(p, step, 1.0 / 400.0);
    const Eigen::Index T = rec.traj.rows();
    for (Eigen::Index k = T - 100; k < T; ++k) CHECK(rec.traj.states(k, 0) == p.y_hi);
}

TEST_CASE("impact-mode ringing is faster than free-mode ringing") {
    const PickPlaceParams p;
    const double dt = 1.0 / 400.0;
    // Small step settles inside the contact band; the moderate step rings
    // around a free-mode equilibrium well above it.
    ExcitationSpec impact_step{ExcitationKind::Step, 0.1, 0.0, 0.0, 0.0, 2.0, 0};
    ExcitationSpec free_step{ExcitationKind::Step, 0.789, 0.0, 0.0, 0.0, 2.0, 0};

    auto peak_hz = [&](const ExcitationSpec& exc, Eigen::Index start, Eigen::Index len) {
        const auto rec = simulate_pickplace(p, exc, dt);
        Eigen::VectorXd y = rec.traj.states.col(0).segment(start, len);
        y.array() -= y.mean();
        const double df = 1.0 / (static_cast<double>(len) * dt);
        return static_cast<double>(oracles::dominant_bin(y)) * df;
    };
    // Impact ringing decays fast: inspect the first half second. Free-mode
    // ringing is inspected after the band transit has finished.
    const double impact_hz = peak_hz(impact_step, 0, 200);
    const double free_hz = peak_hz(free_step, 120, 400);
    CHECK(impact_hz > free_hz);
}

TEST_CASE("multisine spectral content stays inside the requested band") {
    ExcitationSpec exc{ExcitationKind::Multisine, 1.0, 0.0, 2.0, 10.0, 10.23, 3};
    const Eigen::VectorXd u = generate_excitation(exc, 0.01);
    const Eigen::Index N = u.size();
    const double df = 1.0 / (static_cast<double>(N) * 0.01);

    double in_band_peak = 0.0, out_band_peak = 0.0;
    for (Eigen::Index bin = 1; bin <= N / 2; ++bin) {
        const double f = static_cast<double>(bin) * df;
        const double mag = oracles::dft_magnitude(u, bin);
        if (f >= 2.0 - df && f <= 10.0 + df) in_band_peak = std::max(in_band_peak, mag);
        else out_band_peak = std::max(out_band_peak, mag);
    }
    REQUIRE(in_band_peak > 0.0);
    CHECK(20.0 * std::log10(out_band_peak / in_band_peak) < -60.0);
}

TEST_CASE("excitation rejects bands beyond Nyquist") {
    ExcitationSpec exc{ExcitationKind::Multisine, 1.0, 0.0, 2.0, 80.0, 10.0, 0};
    CHECK_THROWS_AS(generate_excitation(exc, 0.01), ConfigError);
}

TEST_CASE("add_noise meets the requested snr and is reproducible") {
    Trajectory traj;
    traj.dt = 0.01;
    const Eigen::Index T = 10000;
    traj.states.resize(T, 1);
    for (Eigen::Index k = 0; k < T; ++k) traj.states(k, 0) = std::sin(0.013 * static_cast<double>(k));
    traj.inputs = Eigen::MatrixXd::Zero(T, 1);
    traj.channel_names = {"y", "u"};

    const double snr_db = 20.0;
    const Trajectory noisy = add_noise(traj, snr_db, 99);
    const Eigen::VectorXd noise = noisy.states.col(0) - traj.states.col(0);
    const double sig_var = (traj.states.col(0).array() - traj.states.col(0).mean()).square().mean();
    const double measured = 10.0 * std::log10(sig_var / noise.array().square().mean());
    CHECK(std::abs(measured - snr_db) < 0.5);

    const Trajectory again = add_noise(traj, snr_db, 99);
    CHECK((again.states - noisy.states).cwiseAbs().maxCoeff() == 0.0);

    const Trajectory untouched = add_noise(traj, std::numeric_limits<double>::infinity(), 1);
    CHECK((untouched.states - traj.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK(noisy.inputs == traj.inputs);
}

TEST_CASE("simulators are deterministic given identical arguments") {
    ExcitationSpec exc{ExcitationKind::Multisine, 150.0, 0.0, 0.5, 8.0, 2.0, 5};
    const auto a = simulate_boucwen(BoucWenParams{}, exc, kDtBw, Eigen::Vector3d::Zero());
    const auto b = simulate_boucwen(BoucWenParams{}, exc, kDtBw, Eigen::Vector3d::Zero());
    CHECK((a.traj.states - b.traj.states).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.hidden - b.hidden).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("upper-tank kernel ignores everything but the inputs") {
    Eigen::VectorXd u(50);
    for (Eigen::Index k = 0; k < 50; ++k) u(k) = 2.0 + std::sin(0.3 * static_cast<double>(k));
    const Eigen::VectorXd a = simulate_upper_tank(48.204, 36.012, 10.0, 4.0, u, 0.01);
    const Eigen::VectorXd b = simulate_upper_tank(48.204, 36.012, 10.0, 4.0, u, 0.01);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.maxCoeff() <= 10.0);
}
