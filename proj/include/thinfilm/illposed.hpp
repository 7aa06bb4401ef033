#pragma once

#include <span>

#include "thinfilm/grid.hpp"
#include "thinfilm/report.hpp"
#include "thinfilm/symbol.hpp"

namespace thinfilm {

/// Frequency-band construction of the norm-inflation experiment. N and r are
/// integer wavenumbers (multiples of the lattice spacing 2*pi/L); the bands
///   A1 = [-N, -N+r) x [-N, -N+r),   A2 = [N+r, N+2r) x [N+r, N+2r)
/// each hold r^2 lattice modes. Requires s < -2, 0 < t, r >= 4 and a grid
/// with max wavenumber >= 2N + 4r.
struct IllposedConfig {
    int N = 8;
    int r = 4;
    double s = -3.0;
    double t = 0.01;
    int quad_nodes = 8;    // Gauss-Legendre nodes per graded interval
    int quad_levels = 50;  // geometric bisection levels toward each endpoint

    void validate(const SpectralGrid& grid) const;
};

enum class BandRegion { A1, A2 };

/// Indicator data v0 (A1) / w0 (A2) with coefficient height r^{-1} N^{-s} in
/// physical frequency units. Complex-valued in physical space: no Hermitian
/// completion, matching the construction.
FourierField indicator_data(const SpectralGrid& grid, const IllposedConfig& cfg,
                            BandRegion which);

/// Polarized Duhamel bilinear form
///   B(v0, w0)(t) = -1/2 int_0^t K(t-tau) * d/dx1 [ (K(tau)*v0)(K(tau)*w0) ] dtau
/// computed by two-sided geometrically graded composite Gauss-Legendre
/// quadrature in tau; the mode convolution at each node is evaluated by
/// transforms on the (band-resolving) grid. The second Frechet derivative of
/// the flow map at the origin is D2_0 S(t) = 2 B.
FourierField bilinear_B(const FourierField& v0, const FourierField& w0, double t,
                        const PhysicalParams& p, const IllposedConfig& cfg);

/// Closed-form D2_0 S(t)(v0, w0) for the indicator bands: per output mode xi,
///   -i xi1 * r^{-2} N^{-2s} * sum_eta (e^{a t} - e^{b t}) / (a - b),
/// a = -f(xi-eta)-f(eta), b = -f(xi), eta running over A2 with xi-eta in A1.
/// The divided difference switches to t e^{bt} phi1((a-b)t) when |a-b| is
/// below 1e-8 * scale. Output support is the lattice sumset A1 + A2.
FourierField d2_flow_exact(const SpectralGrid& grid, const IllposedConfig& cfg,
                           const PhysicalParams& p);

/// ||D2_0 S(t)(v0, w0)||_{H^s} via the closed form.
double inflation_norm(const SpectralGrid& grid, const IllposedConfig& cfg,
                      const PhysicalParams& p);

/// Least-squares slope of log inflation_norm vs log N over the given band
/// centers (each lattice-valid for the grid). Rows:
/// (N, r, s, t, inflation_norm, model_value, ratio) with
/// model_value = e^{-t} N^{-2s-4}; metadata records the fit and the
/// +/- 0.3 comparison against the predicted exponent -2s-4.
ExperimentReport inflation_slope(const SpectralGrid& grid, std::span<const int> Ns,
                                 IllposedConfig cfg, const PhysicalParams& p,
                                 FitResult* fit = nullptr);

}  // namespace thinfilm
