#pragma once

#include <array>
#include <optional>
#include <vector>

#include "thinfilm/grid.hpp"
#include "thinfilm/report.hpp"

namespace thinfilm {

/// Physical parameter vector a = (R, kappa, alpha).
///
/// R is the Reynolds number, kappa = cot(theta) the inclination cotangent and
/// alpha the electric-field strength. The admissible region is
/// Q* = (0, kappa_star+1] x [0, kappa_star] x [0, 2].
struct PhysicalParams {
    double R = 1.0;
    double kappa = 0.0;
    double alpha = 0.0;
    double kappa_star = 1.0;

    /// The vertical-plane limit o = (1, 0, 0).
    static PhysicalParams limit_point(double kappa_star = 1.0) {
        return PhysicalParams{1.0, 0.0, 0.0, kappa_star};
    }

    void validate() const;         // R > 0, kappa >= 0, alpha >= 0
    bool in_qstar() const;
    void validate_qstar() const;   // throws with the violated bound

    std::array<double, 3> as_array() const { return {R, kappa, alpha}; }
    double distance_to(const PhysicalParams& other) const;
};

/// Fourier symbol of the linear operator:
///   f(xi) = -(R-kappa) xi1^2 + kappa xi2^2 - alpha |xi|^3 + |xi|^4.
/// Negative values mark linearly unstable modes; f(0) = 0.
double symbol_f(double xi1, double xi2, const PhysicalParams& p);

/// Semigroup multiplier K^(t, xi) = e^{-f(xi) t}; requires t >= 0.
double kernel_hat(double t, double xi1, double xi2, const PhysicalParams& p);

/// Per-mode multiplication by kernel_hat; exact on the linear flow.
FourierField apply_semigroup(const FourierField& f, double t, const PhysicalParams& p);

/// High/low frequency split certified on a grid lattice.
///
/// M = R + alpha + 1 + margin, eta = 1 - (R+alpha)/M, and
/// C_low = max over |xi| <= M of max(0, -f(xi)). The constructor sweep
/// verifies f(xi) >= eta |xi|^4 on every lattice mode with |xi| > M;
/// `violations` counts failures (a defect if nonzero, not an error return).
struct HighFreqBound {
    double M = 0.0;
    double eta = 0.0;
    double C_low = 0.0;
    std::size_t violations = 0;
    double worst_high_ratio = 0.0;  // max over |xi|>M of eta|xi|^4 / f(xi)
};

HighFreqBound high_freq_bound(const SpectralGrid& grid, const PhysicalParams& p,
                              double margin);

/// Certifies the weighted sup bound sup_xi |xi|^lambda K^(t,xi) <= C e^{eta t}/t^{lambda/4}
/// over the grid for each requested positive time. Report rows are
/// (t, lambda, lhs, weighted_ratio, pass); the certified constant is the
/// empirical max of the weighted ratio and is stored as metadata.
ExperimentReport check_kernel_sup_bound(const SpectralGrid& grid, const PhysicalParams& p,
                                        double lambda, std::span<const double> times,
                                        double margin = 1.0);

/// sup over lattice xi of |xi|^weight_power |K^a(t,xi) - K^o(t,xi)|, with
/// o = (1,0,0) the vertical-plane limit; weight_power is 0 or 1.
double kernel_difference_sup(const SpectralGrid& grid, const PhysicalParams& pa,
                             double t, int weight_power);

}  // namespace thinfilm
