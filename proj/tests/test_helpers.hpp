#pragma once

#include <cmath>

#include "thinfilm/config.hpp"
#include "thinfilm/grid.hpp"

namespace thinfilm::test {

inline double rel_field_diff(const FourierField& a, const FourierField& b, double s = 0.0) {
    FourierField d(a.grid());
    for (std::size_t i = 0; i < a.grid().size(); ++i)
        d.coeffs()[i] = a.coeffs()[i] - b.coeffs()[i];
    const double ref = std::max(sobolev_norm(a, s), sobolev_norm(b, s));
    return ref > 0.0 ? sobolev_norm(d, s) / ref : sobolev_norm(d, s);
}

inline FourierField random_real_field(const SpectralGrid& grid, int band, double norm_s,
                                      double amplitude, std::uint64_t seed,
                                      double profile_pow = 1.0) {
    Rng rng(seed);
    return random_band_field(grid, {band, profile_pow, norm_s, amplitude}, rng);
}

/// Riemann-sum L2 norm on the physical grid, an independent path to Parseval.
inline double physical_l2(const FourierField& f) {
    const auto vals = to_physical(f);
    double sum = 0.0;
    for (const auto& v : vals) sum += std::norm(v);
    const double cell = (f.grid().L / f.grid().n) * (f.grid().L / f.grid().n);
    return std::sqrt(cell * sum);
}

}  // namespace thinfilm::test
