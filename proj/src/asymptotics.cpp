#include "thinfilm/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace thinfilm {

void SweepConfig::validate() const {
    if (!(s > 1.0)) throw std::invalid_argument("SweepConfig: requires s > 1");
    if (!(T > 0.0)) throw std::invalid_argument("SweepConfig: T must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("SweepConfig: gamma must be positive");
    if (deltas.empty()) throw std::invalid_argument("SweepConfig: deltas must be nonempty");
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i)
        if (!(deltas[i] > deltas[i + 1]))
            throw std::invalid_argument("SweepConfig: deltas must be strictly decreasing");
    const auto d = unit_direction();
    if (d[1] < 0.0 || d[2] < 0.0)
        throw std::invalid_argument(
            "SweepConfig: direction kappa/alpha components must be nonnegative to stay in Q*");
    stepper.validate();
    for (double delta : deltas) params_at(delta).validate_qstar();
}

std::array<double, 3> SweepConfig::unit_direction() const {
    const double nrm = std::sqrt(direction[0] * direction[0] + direction[1] * direction[1] +
                                 direction[2] * direction[2]);
    if (!(nrm > 0.0)) throw std::invalid_argument("SweepConfig: direction must be nonzero");
    return {direction[0] / nrm, direction[1] / nrm, direction[2] / nrm};
}

PhysicalParams SweepConfig::params_at(double delta) const {
    const auto d = unit_direction();
    return PhysicalParams{1.0 + delta * d[0], delta * d[1], delta * d[2], kappa_star};
}

FourierField make_perturbed_data(const FourierField& u0, const FourierField& shape,
                                 double delta, double gamma) {
    if (!(delta > 0.0))
        throw std::invalid_argument("make_perturbed_data: delta must be positive");
    if (!(u0.grid() == shape.grid()))
        throw std::invalid_argument("make_perturbed_data: fields must share one grid");
    const double eps = std::pow(delta, gamma);
    FourierField out(u0.grid());
    for (std::size_t i = 0; i < u0.grid().size(); ++i)
        out.coeffs()[i] = u0.coeffs()[i] + eps * shape.coeffs()[i];
    return out;
}

ExperimentReport sweep(const SpectralGrid& grid, const SweepConfig& cfg,
                       const FourierField& u0, const FourierField& shape) {
    cfg.validate();
    if (!(u0.grid() == grid) || !(shape.grid() == grid))
        throw std::invalid_argument("sweep: fields must live on the sweep grid");

    // The limit run is shared by every delta point.
    const PhysicalParams po = PhysicalParams::limit_point(cfg.kappa_star);
    const Trajectory base = evolve(u0, cfg.T, po, cfg.stepper);

    auto distance = [&](double delta) {
        const FourierField ua0 =
            delta > 0.0 ? make_perturbed_data(u0, shape, delta, cfg.gamma) : u0;
        const Trajectory ta = evolve(ua0, cfg.T, cfg.params_at(delta), cfg.stepper);
        double E = 0.0;
        for (std::size_t i = 0; i < ta.size(); ++i) {
            FourierField diff(grid);
            for (std::size_t j = 0; j < grid.size(); ++j)
                diff.coeffs()[j] = ta.states[i].coeffs()[j] - base.states[i].coeffs()[j];
            E = std::max(E, sobolev_norm(diff, cfg.s));
        }
        return E;
    };

    // Delta points are independent; the report assembly stays in delta order.
    std::vector<std::future<double>> jobs;
    jobs.reserve(cfg.deltas.size());
    for (double delta : cfg.deltas)
        jobs.push_back(std::async(std::launch::async, distance, delta));

    ExperimentReport rep;
    rep.name = "parameter-sweep";
    rep.columns = {"delta", "gamma", "E", "model", "ratio"};
    for (std::size_t i = 0; i < cfg.deltas.size(); ++i) {
        const double delta = cfg.deltas[i];
        const double E = jobs[i].get();
        const double model = std::max(std::pow(delta, cfg.gamma), delta);
        rep.add_row({delta, cfg.gamma, E, model, model > 0.0 ? E / model : 0.0});
    }
    double cmax = 0.0;
    for (const auto& row : rep.rows) cmax = std::max(cmax, row[4]);
    rep.meta["C_measured"] = std::to_string(cmax);
    rep.meta["s"] = std::to_string(cfg.s);
    rep.meta["T"] = std::to_string(cfg.T);
    return rep;
}

FitResult fit_rate(const ExperimentReport& sweep_report, double gamma, bool* pass) {
    std::vector<double> xs, ys;
    for (const auto& row : sweep_report.rows) {
        if (!(row[0] > 0.0) || !(row[2] > 0.0)) continue;  // the delta = 0 anchor
        xs.push_back(row[0]);
        ys.push_back(row[2]);
    }
    if (xs.size() < 4) throw std::invalid_argument("fit_rate: need at least 4 delta points");
    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    if (std::log10(*mx / *mn) < 1.5)
        throw std::invalid_argument("fit_rate: deltas must span at least 1.5 decades");
    const FitResult fit = fit_loglog(xs, ys);
    if (pass) {
        *pass = fit.slope >= std::min(gamma, 1.0) - 0.1;
        if (gamma >= 2.0) *pass = *pass && std::abs(fit.slope - 1.0) <= 0.2;
    }
    return fit;
}

}  // namespace thinfilm
