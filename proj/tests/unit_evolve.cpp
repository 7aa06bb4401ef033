#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"
#include "thinfilm/evolve.hpp"

using namespace thinfilm;
using thinfilm::test::random_real_field;
using thinfilm::test::rel_field_diff;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dealiased-product oracle: direct convolution over the retained band,
// O(n^4) in total. Exact for inputs supported inside the band.
FourierField direct_nonlinear(const FourierField& u, double fraction) {
    const SpectralGrid& g = u.grid();
    const int cut = static_cast<int>(std::floor(fraction * (g.n / 2.0) + 1e-9));
    FourierField out(g);
    for (int k1 = -g.n / 2; k1 < g.n / 2; ++k1)
        for (int k2 = -g.n / 2; k2 < g.n / 2; ++k2) {
            if (std::max(std::abs(k1), std::abs(k2)) > cut) continue;
            Complex sum = 0.0;
            for (int j1 = -cut; j1 <= cut; ++j1)
                for (int j2 = -cut; j2 <= cut; ++j2) {
                    const int m1 = k1 - j1, m2 = k2 - j2;
                    if (std::max(std::abs(m1), std::abs(m2)) > cut) continue;
                    sum += u(j1, j2) * u(m1, m2);
                }
            out(k1, k2) = Complex(0.0, -0.5 * g.xi1(g.at(k1, k2))) * sum;
        }
    out.coeffs()[0] = 0.0;
    return out;
}
}  // namespace

TEST_CASE("nonlinear term of sin(x1) is a single output pair at (+-2, 0)") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    FourierField u(g);
    u(1, 0) = Complex{0.0, -0.5};
    u(-1, 0) = Complex{0.0, 0.5};
    const FourierField n = nonlinear_term(u, StepperConfig{});
    // -1/2 d/dx1 (sin^2 x1) = -1/2 sin(2 x1): coefficients +- i/4.
    CHECK(std::abs(n(2, 0) - Complex{0.0, 0.25}) < 1e-15);
    CHECK(std::abs(n(-2, 0) - Complex{0.0, -0.25}) < 1e-15);
    double off = 0.0;
    for (int k1 = -g.n / 2; k1 < g.n / 2; ++k1)
        for (int k2 = -g.n / 2; k2 < g.n / 2; ++k2)
            if (!(k2 == 0 && std::abs(k1) == 2)) off = std::max(off, std::abs(n(k1, k2)));
    CHECK(off < 1e-15);
    CHECK(n(0, 0) == Complex{0.0, 0.0});
}

TEST_CASE("nonlinear term kills constants and x2-only fields") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    FourierField c(g);
    c(0, 0) = 4.2;
    CHECK(nonlinear_term(c, StepperConfig{}).max_abs() < 1e-15);

    FourierField s2(g);
    s2(0, 1) = Complex{0.0, -0.5};
    s2(0, -1) = Complex{0.0, 0.5};
    CHECK(nonlinear_term(s2, StepperConfig{}).max_abs() < 1e-15);
}

TEST_CASE("dealiased product equals the direct convolution for banded input") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    const StepperConfig cfg;
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const FourierField u = random_real_field(g, 5, 0.0, 1.0, seed);  // band <= n/6
        const FourierField fast = nonlinear_term(u, cfg);
        const FourierField slow = direct_nonlinear(u, cfg.dealias_fraction);
        CHECK(rel_field_diff(fast, slow) < 1e-12);
    }
}

TEST_CASE("phi functions are smooth across the series switch") {
    CHECK(phi1(0.0) == doctest::Approx(1.0));
    CHECK(phi2(0.0) == doctest::Approx(0.5));
    CHECK(phi1(1.0) == doctest::Approx(std::numbers::e - 1.0));
    for (double z : {9.9e-5, 1.01e-4, -9.9e-5, -1.01e-4}) {
        CHECK(phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-12));
        CHECK(phi2(z) == doctest::Approx((std::expm1(z) - z) / (z * z)).epsilon(1e-10));
    }
}

TEST_CASE("etd_step fixes the zero solution and validates dt") {
    const SpectralGrid g = make_grid(kTwoPi, 16);
    const FourierField z(g);
    CHECK(etd_step(z, 0.1, PhysicalParams::limit_point(), StepperConfig{}).max_abs() == 0.0);
    CHECK_THROWS_AS(etd_step(z, 1.5, PhysicalParams::limit_point(), StepperConfig{}),
                    std::invalid_argument);
}

TEST_CASE("a mode outside the dealias band evolves purely linearly") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    const PhysicalParams p{0.8, 0.3, 0.5};
    FourierField u(g);
    u(12, 0) = 0.7;   // beyond the 2/3 cutoff: the quadratic term never sees it
    u(-12, 0) = 0.7;
    StepperConfig cfg{.dt = 1.0 / 64};
    const Trajectory traj = evolve(u, 0.25, p, cfg);
    const double expect = 0.7 * std::exp(-symbol_f(12.0, 0.0, p) * 0.25);
    CHECK(traj.states.back()(12, 0).real() == doctest::Approx(expect).epsilon(1e-13));
    CHECK(std::abs(traj.states.back()(12, 0).imag()) < 1e-18);
}

TEST_CASE("etd_step shows second-order self convergence") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    const PhysicalParams p{1.5, 0.5, 1.0};
    const FourierField u0 = random_real_field(g, 5, 0.0, 0.5, 2023);
    const double T = 0.25;
    auto terminal = [&](double dt) {
        StepperConfig cfg{.dt = dt, .save_every = 1 << 20};
        return evolve(u0, T, p, cfg).states.back();
    };
    // Coarse steps sit in the stiff order-reduction regime; the asymptotic
    // order shows from dt = T/64 down.
    const FourierField a = terminal(T / 64.0);
    const FourierField b = terminal(T / 128.0);
    const FourierField c = terminal(T / 256.0);
    double e1 = 0.0, e2 = 0.0;
    {
        FourierField d1(g), d2(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            d1.coeffs()[i] = a.coeffs()[i] - b.coeffs()[i];
            d2.coeffs()[i] = b.coeffs()[i] - c.coeffs()[i];
        }
        e1 = lebesgue2_norm(d1);
        e2 = lebesgue2_norm(d2);
    }
    const double order = std::log2(e1 / e2);
    CHECK(order > 1.7);
    CHECK(order < 2.3);
}

TEST_CASE("local existence time formula") {
    CHECK(local_existence_time(1.0, 0.0, std::nullopt, 1.0) == doctest::Approx(1.0 / 64));
    CHECK(local_existence_time(1e-9, 0.0, std::nullopt, 1.0) == 1.0);
    CHECK(local_existence_time(0.0, -1.0, std::nullopt, 2.0) == 1.0);
    CHECK(local_existence_time(1.0, 2.0, -1.0, 1.0) == doctest::Approx(1.0 / 4096));
    CHECK_THROWS_AS(local_existence_time(1.0, -2.0, std::nullopt, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(local_existence_time(1.0, 2.0, std::nullopt, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(local_existence_time(1.0, 2.0, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("evolve conserves the mean mode") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    FourierField u0 = random_real_field(g, 6, 0.0, 0.8, 31);
    u0(0, 0) = 0.37;
    StepperConfig cfg{.dt = 1.0 / 128, .save_every = 16};
    const Trajectory traj = evolve(u0, 0.5, PhysicalParams{1.5, 0.5, 1.0}, cfg);
    for (const auto& state : traj.states)
        CHECK(std::abs(state(0, 0) - Complex{0.37, 0.0}) < 1e-12);
}

TEST_CASE("L2 norm decays when every active mode is dissipative") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    FourierField u0(g);
    u0(4, 1) = Complex{0.2, 0.1};
    u0(-4, -1) = std::conj(u0(4, 1));
    u0(1, 4) = Complex{-0.15, 0.05};
    u0(-1, -4) = std::conj(u0(1, 4));
    StepperConfig cfg{.dt = 1.0 / 128, .save_every = 4};
    EnergyLog log;
    evolve(u0, 0.25, PhysicalParams::limit_point(), cfg, &log);
    for (std::size_t i = 1; i < log.l2sq.size(); ++i)
        CHECK(log.l2sq[i] <= log.l2sq[i - 1] * (1.0 + 1e-10));
}

TEST_CASE("blow-up is reported with the first bad time") {
    const SpectralGrid g = make_grid(kTwoPi, 16);
    FourierField u0(g);
    u0(1, 0) = 1e200;
    u0(-1, 0) = 1e200;
    StepperConfig cfg{.dt = 1.0 / 16};
    CHECK_THROWS_AS(evolve(u0, 0.5, PhysicalParams::limit_point(), cfg), BlowupError);
}

TEST_CASE("energy_check accepts decaying runs and the zero solution") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    const PhysicalParams p{1.5, 0.5, 1.0};
    const HighFreqBound bound = high_freq_bound(g, p, 1.0);

    EnergyLog log;
    StepperConfig cfg{.dt = 1.0 / 128, .save_every = 8};
    FourierField mode(g);
    mode(0, 3) = 0.5;  // f(0, 3) > 0: pure decay
    mode(0, -3) = 0.5;
    evolve(mode, 0.5, p, cfg, &log);
    const ExperimentReport rep = energy_check(log, bound);
    CHECK(rep.pass);
    CHECK(rep.rows.back()[3] > 0.0);  // decays strictly inside the bound

    EnergyLog zero_log;
    evolve(FourierField(g), 0.25, p, cfg, &zero_log);
    CHECK(energy_check(zero_log, bound).pass);
    CHECK_THROWS_AS(energy_check(EnergyLog{}, bound), std::invalid_argument);
}

TEST_CASE("energy_check passes on randomized small-data runs") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    const PhysicalParams p{1.5, 0.5, 1.0};
    const HighFreqBound bound = high_freq_bound(g, p, 1.0);
    StepperConfig cfg{.dt = 1.0 / 128, .save_every = 8};
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const FourierField u0 = random_real_field(g, 8, 0.0, 0.1, seed);
        EnergyLog log;
        evolve(u0, 0.5, p, cfg, &log);
        CHECK(energy_check(log, bound).pass);
    }
}

TEST_CASE("picard fixes zero data immediately") {
    const SpectralGrid g = make_grid(kTwoPi, 16);
    StepperConfig cfg{.dt = 1.0 / 32};
    const Trajectory traj = picard_solve(FourierField(g), 0.25, PhysicalParams::limit_point(), cfg);
    for (const auto& s : traj.states) CHECK(s.max_abs() == 0.0);
}

TEST_CASE("picard on a tiny neutral mode converges in a few sweeps") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    FourierField u0(g);
    u0(1, 0) = 5e-7;
    u0(-1, 0) = 5e-7;  // cos(x1) * 1e-6
    StepperConfig cfg{.dt = 1.0 / 64, .picard_tol = 1e-13};
    PicardStats stats;
    const Trajectory traj =
        picard_solve(u0, 0.25, PhysicalParams::limit_point(), cfg, {}, &stats);
    CHECK(stats.converged);
    CHECK(stats.sweeps <= 3);  // the first correction is already O(|u0|^2)
    // The quadratic correction is O(|u0|^2) = O(1e-12); the linear flow of the
    // neutral mode is constant, so the solution stays within that of u0.
    for (const auto& state : traj.states)
        CHECK(std::abs(state(1, 0) - Complex{5e-7, 0.0}) < 1e-11);
}

TEST_CASE("picard enforces the existence horizon unless overridden") {
    const SpectralGrid g = make_grid(kTwoPi, 16);
    FourierField u0(g);
    u0(1, 0) = 0.5;
    u0(-1, 0) = 0.5;  // ||u0||_{L2} = 2 pi / sqrt 2 > 1: T0 well below 0.5
    StepperConfig cfg{.dt = 1.0 / 64};
    CHECK_THROWS_AS(picard_solve(u0, 0.5, PhysicalParams::limit_point(), cfg),
                    std::invalid_argument);
    PicardOptions opts;
    opts.allow_long_horizon = true;
    CHECK_NOTHROW(picard_solve(u0, 0.5, PhysicalParams::limit_point(), cfg, opts));
}

TEST_CASE("picard agrees with the composed exponential integrator") {
    const SpectralGrid g = make_grid(kTwoPi, 32);
    const PhysicalParams o = PhysicalParams::limit_point();
    const FourierField u0 = random_real_field(g, 5, 2.0, 0.1, 501);
    const double T = 1.0 / 64;
    StepperConfig cfg{.dt = T / 64, .save_every = 8};
    PicardOptions opts;
    opts.s = 2.0;
    opts.s1 = -1.0;
    const Trajectory pic = picard_solve(u0, T, o, cfg, opts);
    const Trajectory etd = evolve(u0, T, o, cfg);
    REQUIRE(pic.size() == etd.size());
    for (std::size_t i = 0; i < pic.size(); ++i) {
        FourierField d(g);
        for (std::size_t j = 0; j < g.size(); ++j)
            d.coeffs()[j] = pic.states[i].coeffs()[j] - etd.states[i].coeffs()[j];
        CHECK(sobolev_norm(d, 2.0) < 1e-5);
    }
}

TEST_CASE("smoothing profile bounded for rough data under the linear flow") {
    const SpectralGrid g = make_grid(kTwoPi, 64);
    const PhysicalParams o = PhysicalParams::limit_point();
    const double s = 0.0, sigma = 2.0;
    FourierField u0(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double q2 = g.xi1(i) * g.xi1(i) + g.xi2(i) * g.xi2(i);
        u0.coeffs()[i] = std::pow(1.0 + q2, -(s + 1.0) / 2.0);
    }
    Trajectory traj;
    traj.push(0.0, u0);
    for (double t : logspace(1e-3, 1.0, 12)) traj.push(t, apply_semigroup(u0, t, o));
    const ExperimentReport rep = smoothing_profile(traj, s, sigma);
    CHECK(rep.pass);
    CHECK(rep.rows.size() == traj.size() - 1);  // t = 0 excluded

    // Smooth data: H^sigma norm itself bounded, profile trivially fine.
    Trajectory smooth;
    const FourierField v0 = random_real_field(g, 4, 2.0, 1.0, 8);
    smooth.push(0.0, v0);
    for (double t : logspace(1e-2, 1.0, 8)) smooth.push(t, apply_semigroup(v0, t, o));
    CHECK(smoothing_profile(smooth, 0.0, 2.0).pass);

    CHECK_THROWS_AS(smoothing_profile(traj, 2.0, 1.0), std::invalid_argument);
}
