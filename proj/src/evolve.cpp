#include "thinfilm/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thinfilm/quadrature.hpp"

namespace thinfilm {

void StepperConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be positive");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
        throw std::invalid_argument("StepperConfig: dealias_fraction must lie in (0, 1]");
    if (!(picard_tol > 0.0))
        throw std::invalid_argument("StepperConfig: picard_tol must be positive");
    if (picard_max_iter < 1)
        throw std::invalid_argument("StepperConfig: picard_max_iter must be at least 1");
    if (duhamel_nodes < 2 || duhamel_nodes > 16)
        throw std::invalid_argument("StepperConfig: duhamel_nodes must lie in [2, 16]");
    if (save_every < 1)
        throw std::invalid_argument("StepperConfig: save_every must be at least 1");
}

BlowupError::BlowupError(double t)
    : std::runtime_error("solution lost finiteness at t = " + std::to_string(t)), time(t) {}

PicardDivergenceError::PicardDivergenceError(double T, double last_diff)
    : std::runtime_error("Picard iteration diverging at horizon T = " + std::to_string(T) +
                         " (last iterate difference " + std::to_string(last_diff) + ")"),
      horizon(T) {}

namespace {

bool mode_kept(const SpectralGrid& g, std::size_t flat, double fraction) {
    const int k1 = g.index_to_k(static_cast<int>(flat / g.n));
    const int k2 = g.index_to_k(static_cast<int>(flat % g.n));
    const double cut = fraction * (g.n / 2.0);
    return std::max(std::abs(k1), std::abs(k2)) <= cut;
}

}  // namespace

FourierField nonlinear_term(const FourierField& u, const StepperConfig& cfg) {
    const SpectralGrid& g = u.grid();
    FourierField trunc(g);
    for (std::size_t i = 0; i < g.size(); ++i)
        trunc.coeffs()[i] = mode_kept(g, i, cfg.dealias_fraction) ? u.coeffs()[i] : 0.0;

    std::vector<Complex> phys = to_physical(trunc);
    for (Complex& v : phys) v *= v;
    FourierField sq = to_fourier(g, phys);

    FourierField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mode_kept(g, i, cfg.dealias_fraction)) continue;
        out.coeffs()[i] = Complex(0.0, -0.5 * g.xi1(i)) * sq.coeffs()[i];
    }
    out.coeffs()[0] = 0.0;  // perfect x1-derivative: the mean is exactly zero
    return out;
}

double phi1(double z) {
    if (std::abs(z) < 1e-4)
        return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-4)
        return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
    return (std::expm1(z) - z) / (z * z);
}

FourierField etd_step(const FourierField& u, double dt, const PhysicalParams& p,
                      const StepperConfig& cfg) {
    if (!(dt > 0.0 && dt <= 1.0))
        throw std::invalid_argument("etd_step: requires 0 < dt <= 1");
    const SpectralGrid& g = u.grid();

    FourierField n0 = nonlinear_term(u, cfg);
    FourierField pred(g), out(g);
    std::vector<double> E(g.size()), w1(g.size()), w2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double z = -symbol_f(g.xi1(i), g.xi2(i), p) * dt;
        E[i] = std::exp(z);
        w1[i] = dt * phi1(z);
        w2[i] = dt * phi2(z);
        pred.coeffs()[i] = E[i] * u.coeffs()[i] + w1[i] * n0.coeffs()[i];
    }
    FourierField n1 = nonlinear_term(pred, cfg);
    for (std::size_t i = 0; i < g.size(); ++i)
        out.coeffs()[i] = E[i] * u.coeffs()[i] + (w1[i] - w2[i]) * n0.coeffs()[i] +
                          w2[i] * n1.coeffs()[i];
    return out;
}

namespace {

void check_finite(const FourierField& u, double t) {
    for (const Complex& c : u.coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw BlowupError(t);
}

}  // namespace

Trajectory evolve(const FourierField& u0, double T, const PhysicalParams& p,
                  const StepperConfig& cfg, EnergyLog* log) {
    if (!(T > 0.0)) throw std::invalid_argument("evolve: T must be positive");
    cfg.validate();
    p.validate();

    const int nsteps = std::max(1, static_cast<int>(std::ceil(T / cfg.dt - 1e-12)));
    Trajectory traj;
    traj.push(0.0, u0);

    FourierField u = u0;
    double t = 0.0;
    for (int i = 1; i <= nsteps; ++i) {
        const double target = i == nsteps ? T : i * cfg.dt;
        u = etd_step(u, target - t, p, cfg);
        t = target;
        check_finite(u, t);
        if (i % cfg.save_every == 0 || i == nsteps) traj.push(t, u);
    }

    if (log) {
        log->times = traj.times;
        log->l2sq.resize(traj.size());
        log->dl2sq_dt.assign(traj.size(), 0.0);
        for (std::size_t i = 0; i < traj.size(); ++i) {
            const double nrm = lebesgue2_norm(traj.states[i]);
            log->l2sq[i] = nrm * nrm;
        }
        for (std::size_t i = 1; i < traj.size(); ++i)
            log->dl2sq_dt[i] = (log->l2sq[i] - log->l2sq[i - 1]) /
                               (log->times[i] - log->times[i - 1]);
        log->C_low = high_freq_bound(u0.grid(), p, 1.0).C_low;
    }
    return traj;
}

double local_existence_time(double u0_norm, double s, std::optional<double> s1, double C) {
    if (!(s > -2.0)) throw std::invalid_argument("local_existence_time: requires s > -2");
    if (!(C > 0.0)) throw std::invalid_argument("local_existence_time: C must be positive");
    double exponent_base;
    if (s > 0.0) {
        if (!s1 || !(*s1 > -2.0 && *s1 <= 0.0))
            throw std::invalid_argument(
                "local_existence_time: s > 0 requires s1 in (-2, 0]");
        exponent_base = *s1 + 2.0;
    } else {
        exponent_base = s + 2.0;
    }
    if (!(u0_norm > 0.0)) return 1.0;
    return std::min(1.0, std::pow(8.0 * C * u0_norm, -4.0 / exponent_base));
}

Trajectory picard_solve(const FourierField& u0, double T, const PhysicalParams& p,
                        const StepperConfig& cfg, const PicardOptions& opts,
                        PicardStats* stats) {
    if (!(T > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
    cfg.validate();
    p.validate();

    const double T0 = local_existence_time(sobolev_norm(u0, opts.s), opts.s, opts.s1, opts.C);
    if (T > T0 && !opts.allow_long_horizon) {
        std::ostringstream os;
        os << "picard_solve: horizon T = " << T << " exceeds the existence time T0 = " << T0
           << " (pass allow_long_horizon to override)";
        throw std::invalid_argument(os.str());
    }

    const SpectralGrid& g = u0.grid();
    const int nint = std::max(1, static_cast<int>(std::ceil(T / cfg.dt - 1e-12)));
    std::vector<double> mesh(nint + 1);
    for (int i = 0; i <= nint; ++i) mesh[i] = T * i / nint;

    const auto [gl_x, gl_w] = gauss_legendre(cfg.duhamel_nodes);

    // Precomputed per-mode symbol.
    std::vector<double> f(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = symbol_f(g.xi1(i), g.xi2(i), p);

    std::vector<FourierField> iter(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) iter[i] = apply_semigroup(u0, mesh[i], p);

    auto difference_norm = [&](const std::vector<FourierField>& a,
                               const std::vector<FourierField>& b) {
        Trajectory d;
        for (std::size_t i = 0; i < mesh.size(); ++i) {
            FourierField df(g);
            for (std::size_t j = 0; j < g.size(); ++j)
                df.coeffs()[j] = a[i].coeffs()[j] - b[i].coeffs()[j];
            d.push(i == 0 ? 0.0 : mesh[i], std::move(df));
        }
        return opts.s > 0.0 ? et_norm(d, opts.s, *opts.s1) : et_norm(d, opts.s);
    };

    double prev_diff = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    int sweeps = 0;
    for (; sweeps < cfg.picard_max_iter; ++sweeps) {
        // Nonlinear samples of the current iterate on the mesh.
        std::vector<FourierField> nhat(mesh.size());
        for (std::size_t i = 0; i < mesh.size(); ++i) nhat[i] = nonlinear_term(iter[i], cfg);

        // Cubic Lagrange interpolation of N^ at an off-mesh time.
        auto nhat_at = [&](double tau) {
            const double h = mesh[1] - mesh[0];
            int j0 = static_cast<int>(std::floor(tau / h)) - 1;
            j0 = std::clamp(j0, 0, static_cast<int>(mesh.size()) - 4);
            double lag[4];
            for (int a = 0; a < 4; ++a) {
                lag[a] = 1.0;
                for (int b = 0; b < 4; ++b)
                    if (a != b) lag[a] *= (tau - mesh[j0 + b]) / (mesh[j0 + a] - mesh[j0 + b]);
            }
            FourierField out(g);
            for (std::size_t m = 0; m < g.size(); ++m)
                out.coeffs()[m] = lag[0] * nhat[j0].coeffs()[m] + lag[1] * nhat[j0 + 1].coeffs()[m] +
                                  lag[2] * nhat[j0 + 2].coeffs()[m] + lag[3] * nhat[j0 + 3].coeffs()[m];
            return out;
        };

        // March the Duhamel integral: I(t_i) = K(h) I(t_{i-1}) + local GL panel.
        std::vector<FourierField> next(mesh.size());
        next[0] = u0;
        FourierField integral(g);
        for (std::size_t i = 1; i < mesh.size(); ++i) {
            const double t0 = mesh[i - 1], t1 = mesh[i];
            const double h = t1 - t0;
            for (std::size_t m = 0; m < g.size(); ++m)
                integral.coeffs()[m] *= std::exp(-f[m] * h);
            for (int q = 0; q < cfg.duhamel_nodes; ++q) {
                const double tau = t0 + h * 0.5 * (gl_x[q] + 1.0);
                const double w = h * 0.5 * gl_w[q];
                FourierField ntau = nhat_at(tau);
                for (std::size_t m = 0; m < g.size(); ++m)
                    integral.coeffs()[m] += w * std::exp(-f[m] * (t1 - tau)) * ntau.coeffs()[m];
            }
            next[i] = FourierField(g);
            for (std::size_t m = 0; m < g.size(); ++m)
                next[i].coeffs()[m] =
                    std::exp(-f[m] * t1) * u0.coeffs()[m] + integral.coeffs()[m];
            check_finite(next[i], t1);
        }

        const double diff = difference_norm(next, iter);
        iter = std::move(next);
        if (stats) {
            stats->sweeps = sweeps + 1;
            stats->last_diff = diff;
            stats->converged = diff < cfg.picard_tol;
        }
        if (diff < cfg.picard_tol) break;
        if (diff > prev_diff) {
            if (++growth_streak >= 3) throw PicardDivergenceError(T, diff);
        } else {
            growth_streak = 0;
        }
        prev_diff = diff;
    }

    Trajectory traj;
    for (std::size_t i = 0; i < mesh.size(); ++i)
        if (i == 0 || i % cfg.save_every == 0 || i + 1 == mesh.size())
            traj.push(mesh[i], iter[i]);
    return traj;
}

ExperimentReport energy_check(const EnergyLog& log, const HighFreqBound& bound) {
    if (log.times.empty()) throw std::invalid_argument("energy_check: empty log");
    ExperimentReport rep;
    rep.name = "energy-check";
    rep.columns = {"t", "l2sq", "dl2sq_dt", "bound_margin"};
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < log.times.size(); ++j) {
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < j; ++i) {
            const double cap = std::exp(2.0 * bound.C_low * (log.times[j] - log.times[i])) *
                               log.l2sq[i];
            const double scale = std::max(cap, 1e-300);
            margin = std::min(margin, (cap - log.l2sq[j]) / scale);
        }
        if (j == 0) margin = 0.0;
        worst = std::min(worst, margin);
        rep.add_row({log.times[j], log.l2sq[j], log.dl2sq_dt[j], margin});
        if (margin < 0.0) rep.pass = false;
    }
    rep.meta["C_low"] = std::to_string(bound.C_low);
    rep.meta["worst_margin"] = std::to_string(worst);
    return rep;
}

ExperimentReport smoothing_profile(const Trajectory& traj, double s, double sigma) {
    if (!(sigma > s)) throw std::invalid_argument("smoothing_profile: requires sigma > s");
    traj.validate();
    ExperimentReport rep;
    rep.name = "smoothing-profile";
    rep.columns = {"t", "hsigma_norm", "weighted"};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const double t = traj.times[i];
        if (t <= 0.0) continue;  // weight undefined at t = 0
        const double nrm = sobolev_norm(traj.states[i], sigma);
        const double weighted = std::pow(t, (sigma - s) / 4.0) * nrm;
        lo = std::min(lo, weighted);
        hi = std::max(hi, weighted);
        rep.add_row({t, nrm, weighted});
    }
    if (rep.rows.empty()) throw std::invalid_argument("smoothing_profile: no positive times");
    const double spread = hi / lo;
    rep.pass = std::isfinite(spread) && spread < 10.0;
    rep.meta["spread"] = std::to_string(spread);
    return rep;
}

}  // namespace thinfilm
