#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"
#include "thinfilm/illposed.hpp"

using namespace thinfilm;
using thinfilm::test::rel_field_diff;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const PhysicalParams kLimit = PhysicalParams::limit_point();
}  // namespace

TEST_CASE("illposed config validation") {
    const SpectralGrid g = make_grid(kTwoPi, 64);
    IllposedConfig cfg{.N = 8, .r = 4, .s = -3.0, .t = 0.01};
    CHECK_NOTHROW(cfg.validate(g));

    IllposedConfig bad = cfg;
    bad.s = -2.0;
    CHECK_THROWS_WITH_AS(bad.validate(g), doctest::Contains("s < -2"), std::invalid_argument);
    bad = cfg;
    bad.r = 3;
    CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
    bad = cfg;
    bad.N = 16;  // needs max wavenumber >= 48 but the grid tops out at 32
    CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
    bad = cfg;
    bad.t = 0.0;
    CHECK_THROWS_AS(bad.validate(g), std::invalid_argument);
}

TEST_CASE("indicator data: geometry, height scaling, and near-unit norms") {
    const SpectralGrid g = make_grid(kTwoPi, 192);
    for (double s : {-2.5, -3.0}) {
        for (int N : {8, 16, 32}) {
            IllposedConfig cfg{.N = N, .r = 4, .s = s, .t = 0.01};
            const FourierField v0 = indicator_data(g, cfg, BandRegion::A1);
            const FourierField w0 = indicator_data(g, cfg, BandRegion::A2);
            const double nv = sobolev_norm(v0, s);
            const double nw = sobolev_norm(w0, s);
            // Comparable to 1 across N. The inner band tops out at 4.82 for
            // N = 8 (the low-|xi| corner of A1 carries extra weight), slightly
            // above the nominal [1/4, 4] window.
            CHECK(nv > 0.25);
            CHECK(nv < 5.0);
            CHECK(nw > 0.25);
            CHECK(nw < 5.0);
            if (N >= 16) CHECK(nv < 4.0);
            // Disjoint supports: A1 sits in the third quadrant, A2 in the first.
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(std::abs(v0.coeffs()[i]) * std::abs(w0.coeffs()[i]) == 0.0);
        }
    }
    // Height r^{-1} N^{-s}: doubling N at s = -3 scales it by 8.
    IllposedConfig c8{.N = 8, .r = 4, .s = -3.0, .t = 0.01};
    IllposedConfig c16 = c8;
    c16.N = 16;
    const FourierField a = indicator_data(g, c8, BandRegion::A1);
    const FourierField b = indicator_data(g, c16, BandRegion::A1);
    CHECK(std::abs(b(-16, -16)) / std::abs(a(-8, -8)) == doctest::Approx(8.0));
    // 16 modes per band at r = 4.
    int count = 0;
    for (const Complex& c : a.coeffs())
        if (std::abs(c) > 0.0) ++count;
    CHECK(count == 16);
}

TEST_CASE("closed-form second derivative: support confined to the sumset window") {
    const SpectralGrid g = make_grid(kTwoPi, 192);
    for (int N : {8, 16, 32}) {
        IllposedConfig cfg{.N = N, .r = 4, .s = -3.0, .t = 0.01};
        const FourierField d2 = d2_flow_exact(g, cfg, kLimit);
        double outside_mass = 0.0;
        for (int k1 = -g.n / 2; k1 < g.n / 2; ++k1)
            for (int k2 = -g.n / 2; k2 < g.n / 2; ++k2) {
                const bool in_window = k1 >= cfg.r - 1 && k1 <= 3 * cfg.r + 1 &&
                                       k2 >= cfg.r - 1 && k2 <= 3 * cfg.r + 1;
                if (!in_window) outside_mass += std::abs(d2(k1, k2));
            }
        CHECK(outside_mass == 0.0);
        CHECK(d2.max_abs() > 0.0);
    }
}

TEST_CASE("inflation norms match the independently precomputed eta-sums") {
    // Frozen from a direct scalar-summation oracle (same lattice, L = 2 pi).
    const SpectralGrid g = make_grid(kTwoPi, 192);
    struct Case {
        double s;
        int N;
        double value;
    };
    const Case cases[] = {
        {-3.0, 8, 9.278559728546837e-07},  {-3.0, 16, 6.470066041177734e-06},
        {-3.0, 32, 3.417907887439326e-05}, {-2.5, 8, 2.779837093511306e-07},
        {-2.5, 16, 9.692091613538292e-07}, {-2.5, 32, 2.559995267644908e-06},
    };
    for (const Case& c : cases) {
        IllposedConfig cfg{.N = c.N, .r = 4, .s = c.s, .t = 0.01};
        CHECK(inflation_norm(g, cfg, kLimit) == doctest::Approx(c.value).epsilon(1e-9));
    }
}

TEST_CASE("magnitude tracks e^{-t} N^{-2s-4} within a bounded ratio") {
    const SpectralGrid g = make_grid(kTwoPi, 192);
    for (double s : {-2.5, -3.0}) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int N : {8, 16, 32}) {
            IllposedConfig cfg{.N = N, .r = 4, .s = s, .t = 0.01};
            const double ratio = inflation_norm(g, cfg, kLimit) /
                                 (std::exp(-cfg.t) * std::pow(double(N), -2.0 * s - 4.0));
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(hi / lo < 4.0);
    }
}

TEST_CASE("fitted N-slope matches the oracle value (finite-size offset included)") {
    // The asymptotic exponent is -2s-4; at N/r this small the resonance
    // denominators drift and the measured slope sits ~0.60 above it. The
    // oracle values pin that number; the report honestly fails the +-0.3 gate.
    const SpectralGrid g = make_grid(kTwoPi, 192);
    const int Ns[] = {8, 16, 32};
    {
        FitResult fit;
        IllposedConfig cfg{.N = 8, .r = 4, .s = -3.0, .t = 0.01};
        const ExperimentReport rep = inflation_slope(g, Ns, cfg, kLimit, &fit);
        CHECK(fit.slope == doctest::Approx(2.601534413701).epsilon(1e-6));
        CHECK_FALSE(rep.pass);
        CHECK(rep.rows.size() == 3);
    }
    {
        FitResult fit;
        IllposedConfig cfg{.N = 8, .r = 4, .s = -2.5, .t = 0.01};
        inflation_slope(g, Ns, cfg, kLimit, &fit);
        CHECK(fit.slope == doctest::Approx(1.601534449426).epsilon(1e-6));
    }
    const int two[] = {8, 16};
    IllposedConfig cfg{.N = 8, .r = 4, .s = -3.0, .t = 0.01};
    CHECK_THROWS_AS(inflation_slope(g, two, cfg, kLimit, nullptr), std::invalid_argument);
}

TEST_CASE("bilinear quadrature path: linearity, degeneracy, vanishing horizon") {
    const SpectralGrid g = make_grid(kTwoPi, 64);
    IllposedConfig cfg{.N = 8, .r = 4, .s = -3.0, .t = 0.01};
    const FourierField v0 = indicator_data(g, cfg, BandRegion::A1);
    const FourierField w0 = indicator_data(g, cfg, BandRegion::A2);

    const FourierField b = bilinear_B(v0, w0, cfg.t, kLimit, cfg);
    FourierField v_scaled(g);
    for (std::size_t i = 0; i < g.size(); ++i) v_scaled.coeffs()[i] = 2.5 * v0.coeffs()[i];
    const FourierField b_scaled = bilinear_B(v_scaled, w0, cfg.t, kLimit, cfg);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(std::abs(b_scaled.coeffs()[i] - 2.5 * b.coeffs()[i]) <=
              1e-14 * (1.0 + std::abs(b.coeffs()[i])) * 2.5);

    CHECK(bilinear_B(FourierField(g), w0, cfg.t, kLimit, cfg).max_abs() == 0.0);
    CHECK(bilinear_B(v0, FourierField(g), cfg.t, kLimit, cfg).max_abs() == 0.0);

    // t -> 0+: the integral over a vanishing interval scales linearly in t
    // (both t values sit far below the resonance scale 1/D).
    const double n7 = sobolev_norm(bilinear_B(v0, w0, 1e-7, kLimit, cfg), cfg.s);
    const double n6 = sobolev_norm(bilinear_B(v0, w0, 1e-6, kLimit, cfg), cfg.s);
    CHECK(n7 / n6 == doctest::Approx(0.1).epsilon(0.05));
    CHECK(n7 < n6);
}

TEST_CASE("quadrature and closed-form paths agree") {
    const SpectralGrid g = make_grid(kTwoPi, 64);
    IllposedConfig cfg{.N = 8, .r = 4, .s = -3.0, .t = 0.01};
    const FourierField exact = d2_flow_exact(g, cfg, kLimit);
    const FourierField v0 = indicator_data(g, cfg, BandRegion::A1);
    const FourierField w0 = indicator_data(g, cfg, BandRegion::A2);
    FourierField quad = bilinear_B(v0, w0, cfg.t, kLimit, cfg);
    for (Complex& c : quad.coeffs()) c *= 2.0;
    CHECK(rel_field_diff(exact, quad, cfg.s) < 1e-6);

    // Transform-path roundoff stays far below the in-window signal.
    double outside = 0.0;
    for (int k1 = -g.n / 2; k1 < g.n / 2; ++k1)
        for (int k2 = -g.n / 2; k2 < g.n / 2; ++k2)
            if (std::max(std::abs(k1 - 2 * cfg.r), std::abs(k2 - 2 * cfg.r)) > cfg.r + 1)
                outside = std::max(outside, std::abs(quad(k1, k2)));
    CHECK(outside < 1e-10 * quad.max_abs());
}
