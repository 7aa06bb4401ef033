#include "thinfilm/symbol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace thinfilm {

void PhysicalParams::validate() const {
    if (!(R > 0.0)) throw std::invalid_argument("PhysicalParams: R must be positive");
    if (!(kappa >= 0.0)) throw std::invalid_argument("PhysicalParams: kappa must be nonnegative");
    if (!(alpha >= 0.0)) throw std::invalid_argument("PhysicalParams: alpha must be nonnegative");
    if (!(kappa_star > 0.0))
        throw std::invalid_argument("PhysicalParams: kappa_star must be positive");
}

bool PhysicalParams::in_qstar() const {
    return R > 0.0 && R <= kappa_star + 1.0 && kappa >= 0.0 && kappa <= kappa_star &&
           alpha >= 0.0 && alpha <= 2.0;
}

void PhysicalParams::validate_qstar() const {
    validate();
    if (!in_qstar()) {
        std::ostringstream os;
        os << "PhysicalParams: (R, kappa, alpha) = (" << R << ", " << kappa << ", " << alpha
           << ") outside the region Q* = (0, kappa_star+1] x [0, kappa_star] x [0, 2]"
           << " with kappa_star = " << kappa_star;
        throw std::invalid_argument(os.str());
    }
}

double PhysicalParams::distance_to(const PhysicalParams& other) const {
    const double d0 = R - other.R;
    const double d1 = kappa - other.kappa;
    const double d2 = alpha - other.alpha;
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

double symbol_f(double xi1, double xi2, const PhysicalParams& p) {
    const double q2 = xi1 * xi1 + xi2 * xi2;
    return -(p.R - p.kappa) * xi1 * xi1 + p.kappa * xi2 * xi2 -
           p.alpha * q2 * std::sqrt(q2) + q2 * q2;
}

double kernel_hat(double t, double xi1, double xi2, const PhysicalParams& p) {
    if (!(t >= 0.0)) throw std::invalid_argument("kernel_hat: t must be nonnegative");
    return std::exp(-symbol_f(xi1, xi2, p) * t);
}

FourierField apply_semigroup(const FourierField& f, double t, const PhysicalParams& p) {
    if (!(t >= 0.0)) throw std::invalid_argument("apply_semigroup: t must be nonnegative");
    const SpectralGrid& g = f.grid();
    FourierField out(g);
    std::size_t i = 0;
    for (int a = 0; a < g.n; ++a) {
        const double xi1 = g.xi_spacing() * g.index_to_k(a);
        for (int b = 0; b < g.n; ++b, ++i) {
            const double xi2 = g.xi_spacing() * g.index_to_k(b);
            out.coeffs()[i] = f.coeffs()[i] * std::exp(-symbol_f(xi1, xi2, p) * t);
        }
    }
    return out;
}

HighFreqBound high_freq_bound(const SpectralGrid& grid, const PhysicalParams& p,
                              double margin) {
    if (!(margin > 0.0)) throw std::invalid_argument("high_freq_bound: margin must be positive");
    p.validate();
    HighFreqBound b;
    b.M = p.R + p.alpha + 1.0 + margin;
    b.eta = 1.0 - (p.R + p.alpha) / b.M;

    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xi1 = grid.xi1(i);
        const double xi2 = grid.xi2(i);
        const double q = std::sqrt(xi1 * xi1 + xi2 * xi2);
        const double f = symbol_f(xi1, xi2, p);
        if (q > b.M) {
            const double q4 = q * q * q * q;
            if (f < b.eta * q4) ++b.violations;
            b.worst_high_ratio = std::max(b.worst_high_ratio, b.eta * q4 / f);
        } else {
            b.C_low = std::max(b.C_low, -f);
        }
    }
    b.C_low = std::max(b.C_low, 0.0);
    return b;
}

ExperimentReport check_kernel_sup_bound(const SpectralGrid& grid, const PhysicalParams& p,
                                        double lambda, std::span<const double> times,
                                        double margin) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("check_kernel_sup_bound: lambda must be nonnegative");
    const HighFreqBound bound = high_freq_bound(grid, p, margin);

    ExperimentReport rep;
    rep.name = "kernel-sup-bound";
    rep.columns = {"t", "lambda_or_power", "lhs", "weighted_ratio", "pass"};
    double worst = 0.0;
    for (double t : times) {
        if (!(t > 0.0))
            throw std::invalid_argument("check_kernel_sup_bound: times must be positive");
        double lhs = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double xi1 = grid.xi1(i);
            const double xi2 = grid.xi2(i);
            const double q = std::sqrt(xi1 * xi1 + xi2 * xi2);
            lhs = std::max(lhs, std::pow(q, lambda) *
                                    std::exp(-symbol_f(xi1, xi2, p) * t));
        }
        const double ratio = std::pow(t, lambda / 4.0) * std::exp(-bound.eta * t) * lhs;
        const bool finite = std::isfinite(ratio);
        worst = std::max(worst, ratio);
        rep.add_row({t, lambda, lhs, ratio, finite ? 1.0 : 0.0});
        rep.pass = rep.pass && finite;
    }
    rep.meta["C_measured"] = std::to_string(worst);
    rep.meta["eta"] = std::to_string(bound.eta);
    rep.meta["M"] = std::to_string(bound.M);
    return rep;
}

double kernel_difference_sup(const SpectralGrid& grid, const PhysicalParams& pa,
                             double t, int weight_power) {
    if (!(t >= 0.0))
        throw std::invalid_argument("kernel_difference_sup: t must be nonnegative");
    if (weight_power != 0 && weight_power != 1)
        throw std::invalid_argument("kernel_difference_sup: weight_power must be 0 or 1");
    const PhysicalParams po = PhysicalParams::limit_point(pa.kappa_star);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xi1 = grid.xi1(i);
        const double xi2 = grid.xi2(i);
        const double q = std::sqrt(xi1 * xi1 + xi2 * xi2);
        const double d = std::abs(std::exp(-symbol_f(xi1, xi2, pa) * t) -
                                  std::exp(-symbol_f(xi1, xi2, po) * t));
        sup = std::max(sup, (weight_power == 1 ? q : 1.0) * d);
    }
    return sup;
}

}  // namespace thinfilm
