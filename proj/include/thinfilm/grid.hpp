#pragma once

#include <complex>
#include <span>
#include <vector>

namespace thinfilm {

using Complex = std::complex<double>;

/// Fourier lattice on the periodic box [0,L)^2 with n modes per axis.
///
/// Coefficients are stored in FFT layout: index i along an axis maps to the
/// integer wavenumber k = i for i < n/2 and k = i - n otherwise, so the
/// lattice covers k in [-n/2, n/2). Physical wavevectors are xi = (2*pi/L)*k.
struct SpectralGrid {
    double L = 0.0;
    int n = 0;

    double xi_spacing() const { return two_pi() / L; }
    int max_index() const { return n / 2 - 1; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }

    /// Integer wavenumber for a storage index along one axis.
    int index_to_k(int i) const { return i < n / 2 ? i : i - n; }
    /// Storage index for an integer wavenumber in [-n/2, n/2).
    int k_to_index(int k) const { return k >= 0 ? k : k + n; }
    bool holds_k(int k) const { return k >= -n / 2 && k < n / 2; }

    std::size_t at(int k1, int k2) const {
        return static_cast<std::size_t>(k_to_index(k1)) * n + k_to_index(k2);
    }

    double xi1(std::size_t flat) const {
        return xi_spacing() * index_to_k(static_cast<int>(flat / n));
    }
    double xi2(std::size_t flat) const {
        return xi_spacing() * index_to_k(static_cast<int>(flat % n));
    }

    bool operator==(const SpectralGrid&) const = default;

    static constexpr double two_pi() { return 6.283185307179586476925286766559; }
};

/// Throws std::invalid_argument unless n is even, n >= 8 and L > 0.
SpectralGrid make_grid(double L, int n);

/// Fourier-side representation of a field on a SpectralGrid.
///
/// coeffs(k) are Fourier-series coefficients: u(x) = sum_k c_k e^{i xi_k . x}.
/// Fields representing real functions satisfy c(-k) = conj(c(k)); the
/// indicator data of the ill-posedness experiment are complex-valued and
/// exempt from that symmetry.
class FourierField {
public:
    FourierField() = default;
    explicit FourierField(const SpectralGrid& grid)
        : grid_(grid), coeffs_(grid.size(), Complex{0.0, 0.0}) {}
    FourierField(const SpectralGrid& grid, std::vector<Complex> coeffs);

    const SpectralGrid& grid() const { return grid_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    std::span<Complex> coeffs() { return coeffs_; }

    Complex& operator()(int k1, int k2) { return coeffs_[grid_.at(k1, k2)]; }
    Complex operator()(int k1, int k2) const { return coeffs_[grid_.at(k1, k2)]; }

    /// Max |c(-k) - conj(c(k))| over non-Nyquist modes.
    double hermitian_defect() const;
    double max_abs() const;

private:
    SpectralGrid grid_;
    std::vector<Complex> coeffs_;
};

/// Forward transform of physical samples (row-major, index (i,j) is the point
/// x = (i,j)*L/n). Normalized by 1/n^2 so the result holds Fourier-series
/// coefficients. Throws on size mismatch.
FourierField to_fourier(const SpectralGrid& grid, std::span<const Complex> values);
FourierField to_fourier(const SpectralGrid& grid, std::span<const double> values);

/// Inverse transform back to physical samples.
std::vector<Complex> to_physical(const FourierField& f);
/// Real part of the inverse transform; valid for Hermitian-symmetric fields.
std::vector<double> to_physical_real(const FourierField& f);

/// Discrete H^s norm: ( L^2 * sum_k (1+|xi_k|^2)^s |c_k|^2 )^{1/2}.
/// The L^2 weight makes the s = 0 case Parseval-consistent with the
/// physical-space integral over the box.
double sobolev_norm(const FourierField& f, double s);

/// Same as sobolev_norm(f, 0).
double lebesgue2_norm(const FourierField& f);

/// Time-stamped trajectory of Fourier fields sharing one grid.
struct Trajectory {
    std::vector<double> times;
    std::vector<FourierField> states;

    void push(double t, FourierField state);
    void validate() const;  // times strictly increasing from 0, one grid
    std::size_t size() const { return times.size(); }
};

/// Discrete E_T trajectory norm.
///
/// For -2 < s <= 0 (s1 omitted): sup_t ||u||_{H^s} + sup_{t>0} t^{|s|/4} ||u||_{L^2}.
/// For s > 0 a value s1 in (-2, 0] is required and a third term
/// sup_{t>0} t^{|s1|/4} ||u||_{H^{s-s1}} is added, with the L^2 weight also
/// switching to t^{|s1|/4}. Sups run over the stored sample times; t = 0 is
/// excluded from the weighted terms.
double et_norm(const Trajectory& traj, double s);
double et_norm(const Trajectory& traj, double s, double s1);

}  // namespace thinfilm
