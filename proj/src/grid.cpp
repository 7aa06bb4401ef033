#include "thinfilm/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace thinfilm {

SpectralGrid make_grid(double L, int n) {
    if (!(L > 0.0)) throw std::invalid_argument("make_grid: L must be positive");
    if (n < 8) throw std::invalid_argument("make_grid: n must be at least 8");
    if (n % 2 != 0) throw std::invalid_argument("make_grid: n must be even");
    return SpectralGrid{L, n};
}

FourierField::FourierField(const SpectralGrid& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size())
        throw std::invalid_argument("FourierField: coefficient count does not match grid");
}

double FourierField::hermitian_defect() const {
    const int n = grid_.n;
    double worst = 0.0;
    // Nyquist row/column has no mirror partner on an even grid; skip it.
    for (int k1 = -n / 2 + 1; k1 < n / 2; ++k1) {
        for (int k2 = -n / 2 + 1; k2 < n / 2; ++k2) {
            const Complex a = (*this)(k1, k2);
            const Complex b = std::conj((*this)(-k1, -k2));
            worst = std::max(worst, std::abs(a - b));
        }
    }
    return worst;
}

double FourierField::max_abs() const {
    double m = 0.0;
    for (const Complex& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

namespace {

// FFTW plans are not thread-safe to create; execution on caller-owned buffers
// is. Plans are cached per (n, sign) with FFTW_UNALIGNED so any buffer works.
class PlanCache {
public:
    static fftw_plan get(int n, int sign) {
        static PlanCache cache;
        std::scoped_lock lock(cache.mu_);
        auto key = std::pair{n, sign};
        auto it = cache.plans_.find(key);
        if (it != cache.plans_.end()) return it->second;
        std::vector<Complex> in(static_cast<std::size_t>(n) * n);
        std::vector<Complex> out(in.size());
        fftw_plan plan = fftw_plan_dft_2d(
            n, n, reinterpret_cast<fftw_complex*>(in.data()),
            reinterpret_cast<fftw_complex*>(out.data()), sign,
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        cache.plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(int n, int sign, const Complex* in, Complex* out) {
    fftw_plan plan = PlanCache::get(n, sign);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

FourierField to_fourier(const SpectralGrid& grid, std::span<const Complex> values) {
    if (values.size() != grid.size())
        throw std::invalid_argument("to_fourier: sample count does not match grid");
    FourierField f(grid);
    execute(grid.n, FFTW_FORWARD, values.data(), f.coeffs().data());
    const double scale = 1.0 / grid.size();
    for (Complex& c : f.coeffs()) c *= scale;
    return f;
}

FourierField to_fourier(const SpectralGrid& grid, std::span<const double> values) {
    if (values.size() != grid.size())
        throw std::invalid_argument("to_fourier: sample count does not match grid");
    std::vector<Complex> tmp(values.begin(), values.end());
    return to_fourier(grid, tmp);
}

std::vector<Complex> to_physical(const FourierField& f) {
    std::vector<Complex> out(f.grid().size());
    execute(f.grid().n, FFTW_BACKWARD, f.coeffs().data(), out.data());
    return out;
}

std::vector<double> to_physical_real(const FourierField& f) {
    std::vector<Complex> tmp = to_physical(f);
    std::vector<double> out(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
    return out;
}

double sobolev_norm(const FourierField& f, double s) {
    const SpectralGrid& g = f.grid();
    double sum = 0.0;
    std::size_t i = 0;
    for (int a = 0; a < g.n; ++a) {
        const double xi1 = g.xi_spacing() * g.index_to_k(a);
        for (int b = 0; b < g.n; ++b, ++i) {
            const double xi2 = g.xi_spacing() * g.index_to_k(b);
            const double w = std::pow(1.0 + xi1 * xi1 + xi2 * xi2, s);
            sum += w * std::norm(f.coeffs()[i]);
        }
    }
    return g.L * std::sqrt(sum);
}

double lebesgue2_norm(const FourierField& f) {
    double sum = 0.0;
    for (const Complex& c : f.coeffs()) sum += std::norm(c);
    return f.grid().L * std::sqrt(sum);
}

void Trajectory::push(double t, FourierField state) {
    if (!times.empty() && t <= times.back())
        throw std::invalid_argument("Trajectory: times must be strictly increasing");
    times.push_back(t);
    states.push_back(std::move(state));
}

void Trajectory::validate() const {
    if (times.size() != states.size())
        throw std::invalid_argument("Trajectory: times/states size mismatch");
    if (times.empty()) throw std::invalid_argument("Trajectory: empty");
    if (times.front() != 0.0) throw std::invalid_argument("Trajectory: must start at t = 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1])
            throw std::invalid_argument("Trajectory: times must be strictly increasing");
        if (!(states[i].grid() == states[0].grid()))
            throw std::invalid_argument("Trajectory: states must share one grid");
    }
}

namespace {

double et_norm_impl(const Trajectory& traj, double s, std::optional<double> s1) {
    if (!(s > -2.0)) throw std::invalid_argument("et_norm: requires s > -2");
    if (s > 0.0) {
        if (!s1) throw std::invalid_argument("et_norm: s > 0 requires s1 in (-2, 0]");
        if (!(*s1 > -2.0 && *s1 <= 0.0))
            throw std::invalid_argument("et_norm: s1 must lie in (-2, 0]");
    } else if (s1) {
        throw std::invalid_argument("et_norm: s1 only applies when s > 0");
    }
    traj.validate();

    const double weight_exp = s > 0.0 ? -(*s1) / 4.0 : -s / 4.0;
    double sup_hs = 0.0, sup_l2 = 0.0, sup_gap = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        sup_hs = std::max(sup_hs, sobolev_norm(traj.states[i], s));
        if (t > 0.0) {
            const double w = std::pow(t, weight_exp);
            sup_l2 = std::max(sup_l2, w * lebesgue2_norm(traj.states[i]));
            if (s > 0.0)
                sup_gap = std::max(sup_gap, w * sobolev_norm(traj.states[i], s - *s1));
        }
    }
    return sup_hs + sup_l2 + sup_gap;
}

}  // namespace

double et_norm(const Trajectory& traj, double s) { return et_norm_impl(traj, s, std::nullopt); }

double et_norm(const Trajectory& traj, double s, double s1) {
    return et_norm_impl(traj, s, s1);
}

}  // namespace thinfilm
