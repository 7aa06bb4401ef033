#pragma once

#include <array>
#include <span>

#include "thinfilm/evolve.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/report.hpp"
#include "thinfilm/symbol.hpp"

namespace thinfilm {

/// Parameter-asymptotics sweep toward the vertical-plane limit o = (1,0,0).
/// For each delta the perturbed parameters are a = o + delta * direction and
/// the perturbed data are u0 + delta^gamma * shape, so the data distance
/// realizes the prescribed rate with constant 1. Requires s > 1; every a must
/// stay inside Q*.
struct SweepConfig {
    double s = 2.0;
    double T = 0.5;
    double gamma = 1.0;
    std::vector<double> deltas;
    std::array<double, 3> direction = {1.0, 1.0, 1.0};  // normalized internally
    double kappa_star = 1.0;
    StepperConfig stepper{.dt = 1.0 / 512, .save_every = 16};

    void validate() const;
    std::array<double, 3> unit_direction() const;
    PhysicalParams params_at(double delta) const;
};

/// u0 + delta^gamma * shape; with unit-H^s shape the data distance is exactly
/// delta^gamma.
FourierField make_perturbed_data(const FourierField& u0, const FourierField& shape,
                                 double delta, double gamma);

/// Co-evolves u^a (params o + delta*dir, data u0 + delta^gamma shape) and u^o
/// (limit params, data u0) on one grid and one time mesh, and records
///   E(delta) = max over shared sample times of ||u^a(t) - u^o(t)||_{H^s}.
/// Rows: (delta, gamma, E, model, ratio) with model = max(delta^gamma, delta).
/// The delta points run concurrently; assembly is ordered by delta.
ExperimentReport sweep(const SpectralGrid& grid, const SweepConfig& cfg,
                       const FourierField& u0, const FourierField& shape);

/// Fits log E vs log delta from a sweep report. PASS iff the slope is at
/// least min(gamma, 1) - 0.1, and additionally within 1 +/- 0.2 when
/// gamma >= 2 (rate saturation). Requires >= 4 points spanning >= 1.5 decades.
FitResult fit_rate(const ExperimentReport& sweep_report, double gamma, bool* pass = nullptr);

}  // namespace thinfilm
