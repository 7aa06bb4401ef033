#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "thinfilm/asymptotics.hpp"
#include "thinfilm/config.hpp"
#include "thinfilm/evolve.hpp"
#include "thinfilm/illposed.hpp"
#include "thinfilm/symbol.hpp"

namespace py = pybind11;
using namespace thinfilm;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

FourierField field_from(const SpectralGrid& g, const ComplexArray& arr) {
    if (arr.ndim() != 2 || arr.shape(0) != g.n || arr.shape(1) != g.n)
        throw std::invalid_argument("expected an (n, n) array matching the grid");
    std::vector<Complex> coeffs(arr.data(), arr.data() + g.size());
    return FourierField(g, std::move(coeffs));
}

py::array_t<Complex> array_from(const FourierField& f) {
    const int n = f.grid().n;
    py::array_t<Complex> out(std::vector<py::ssize_t>{n, n});
    std::copy(f.coeffs().begin(), f.coeffs().end(), out.mutable_data());
    return out;
}

py::tuple trajectory_to_python(const Trajectory& traj) {
    const int n = traj.states.front().grid().n;
    const int k = static_cast<int>(traj.size());
    py::array_t<double> times(std::vector<py::ssize_t>{k});
    py::array_t<Complex> states(std::vector<py::ssize_t>{k, n, n});
    std::copy(traj.times.begin(), traj.times.end(), times.mutable_data());
    for (int i = 0; i < k; ++i)
        std::copy(traj.states[i].coeffs().begin(), traj.states[i].coeffs().end(),
                  states.mutable_data() + static_cast<std::size_t>(i) * n * n);
    return py::make_tuple(times, states);
}

Trajectory trajectory_from_python(const SpectralGrid& g, const py::array_t<double>& times,
                                  const ComplexArray& states) {
    if (states.ndim() != 3 || states.shape(1) != g.n || states.shape(2) != g.n ||
        states.shape(0) != times.shape(0))
        throw std::invalid_argument("expected times (k,) and states (k, n, n)");
    Trajectory traj;
    for (py::ssize_t i = 0; i < times.shape(0); ++i) {
        std::vector<Complex> coeffs(states.data() + static_cast<std::size_t>(i) * g.size(),
                                    states.data() + static_cast<std::size_t>(i + 1) * g.size());
        traj.push(times.at(i), FourierField(g, std::move(coeffs)));
    }
    return traj;
}

py::dict report_to_dict(const ExperimentReport& rep) {
    py::dict out;
    out["name"] = rep.name;
    out["columns"] = rep.columns;
    out["rows"] = rep.rows;
    out["pass"] = rep.pass;
    py::dict meta;
    for (const auto& [k, v] : rep.meta) meta[py::str(k)] = v;
    out["meta"] = meta;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pseudo-spectral solver and verification harness for the two-dimensional "
              "electrified thin-film equation and its vertical-plane limit";

    py::class_<SpectralGrid>(m, "Grid")
        .def(py::init([](double L, int n) { return make_grid(L, n); }), py::arg("L"),
             py::arg("n"))
        .def_readonly("L", &SpectralGrid::L)
        .def_readonly("n", &SpectralGrid::n)
        .def_property_readonly("xi_spacing", &SpectralGrid::xi_spacing)
        .def("__repr__", [](const SpectralGrid& g) {
            return "Grid(L=" + std::to_string(g.L) + ", n=" + std::to_string(g.n) + ")";
        });

    py::class_<PhysicalParams>(m, "Params")
        .def(py::init([](double R, double kappa, double alpha, double kappa_star) {
                 PhysicalParams p{R, kappa, alpha, kappa_star};
                 p.validate();
                 return p;
             }),
             py::arg("R") = 1.0, py::arg("kappa") = 0.0, py::arg("alpha") = 0.0,
             py::arg("kappa_star") = 1.0)
        .def_readwrite("R", &PhysicalParams::R)
        .def_readwrite("kappa", &PhysicalParams::kappa)
        .def_readwrite("alpha", &PhysicalParams::alpha)
        .def_readwrite("kappa_star", &PhysicalParams::kappa_star)
        .def("in_qstar", &PhysicalParams::in_qstar)
        .def_static("limit_point", &PhysicalParams::limit_point, py::arg("kappa_star") = 1.0)
        .def("__repr__", [](const PhysicalParams& p) {
            return "Params(R=" + std::to_string(p.R) + ", kappa=" + std::to_string(p.kappa) +
                   ", alpha=" + std::to_string(p.alpha) + ")";
        });

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init([](double dt, double dealias_fraction, double picard_tol,
                         int picard_max_iter, int duhamel_nodes, int save_every) {
                 StepperConfig c{dt, dealias_fraction, picard_tol, picard_max_iter,
                                 duhamel_nodes, save_every};
                 c.validate();
                 return c;
             }),
             py::arg("dt") = 1.0 / 256, py::arg("dealias_fraction") = 2.0 / 3.0,
             py::arg("picard_tol") = 1e-10, py::arg("picard_max_iter") = 25,
             py::arg("duhamel_nodes") = 4, py::arg("save_every") = 1)
        .def_readwrite("dt", &StepperConfig::dt)
        .def_readwrite("dealias_fraction", &StepperConfig::dealias_fraction)
        .def_readwrite("picard_tol", &StepperConfig::picard_tol)
        .def_readwrite("picard_max_iter", &StepperConfig::picard_max_iter)
        .def_readwrite("duhamel_nodes", &StepperConfig::duhamel_nodes)
        .def_readwrite("save_every", &StepperConfig::save_every);

    py::class_<IllposedConfig>(m, "IllposedConfig")
        .def(py::init([](int N, int r, double s, double t, int quad_nodes, int quad_levels) {
                 return IllposedConfig{N, r, s, t, quad_nodes, quad_levels};
             }),
             py::arg("N") = 8, py::arg("r") = 4, py::arg("s") = -3.0, py::arg("t") = 0.01,
             py::arg("quad_nodes") = 8, py::arg("quad_levels") = 50)
        .def_readwrite("N", &IllposedConfig::N)
        .def_readwrite("r", &IllposedConfig::r)
        .def_readwrite("s", &IllposedConfig::s)
        .def_readwrite("t", &IllposedConfig::t)
        .def_readwrite("quad_nodes", &IllposedConfig::quad_nodes)
        .def_readwrite("quad_levels", &IllposedConfig::quad_levels);

    py::class_<HighFreqBound>(m, "HighFreqBound")
        .def_readonly("M", &HighFreqBound::M)
        .def_readonly("eta", &HighFreqBound::eta)
        .def_readonly("C_low", &HighFreqBound::C_low)
        .def_readonly("violations", &HighFreqBound::violations);

    // Transforms and norms.
    m.def("to_fourier",
          [](const SpectralGrid& g, const ComplexArray& vals) {
              if (vals.ndim() != 2 || vals.shape(0) != g.n || vals.shape(1) != g.n)
                  throw std::invalid_argument("expected an (n, n) array matching the grid");
              std::vector<Complex> v(vals.data(), vals.data() + g.size());
              return array_from(to_fourier(g, v));
          },
          py::arg("grid"), py::arg("values"),
          "Physical samples (n, n) to Fourier-series coefficients");
    m.def("to_physical",
          [](const SpectralGrid& g, const ComplexArray& coeffs) {
              const std::vector<Complex> vals = to_physical(field_from(g, coeffs));
              py::array_t<Complex> out(std::vector<py::ssize_t>{g.n, g.n});
              std::copy(vals.begin(), vals.end(), out.mutable_data());
              return out;
          },
          py::arg("grid"), py::arg("coeffs"),
          "Inverse transform back to physical samples");

    m.def("sobolev_norm",
          [](const SpectralGrid& g, const ComplexArray& coeffs, double s) {
              return sobolev_norm(field_from(g, coeffs), s);
          },
          py::arg("grid"), py::arg("coeffs"), py::arg("s"));
    m.def("lebesgue2_norm", [](const SpectralGrid& g, const ComplexArray& coeffs) {
        return lebesgue2_norm(field_from(g, coeffs));
    });
    m.def("et_norm",
          [](const SpectralGrid& g, const py::array_t<double>& times, const ComplexArray& states,
             double s, std::optional<double> s1) {
              const Trajectory traj = trajectory_from_python(g, times, states);
              return s1 ? et_norm(traj, s, *s1) : et_norm(traj, s);
          },
          py::arg("grid"), py::arg("times"), py::arg("states"), py::arg("s"),
          py::arg("s1") = std::nullopt);

    // Symbol and semigroup.
    m.def("symbol_f", &symbol_f, py::arg("xi1"), py::arg("xi2"), py::arg("params"));
    m.def("kernel_hat", &kernel_hat, py::arg("t"), py::arg("xi1"), py::arg("xi2"),
          py::arg("params"));
    m.def("apply_semigroup",
          [](const SpectralGrid& g, const ComplexArray& coeffs, double t,
             const PhysicalParams& p) { return array_from(apply_semigroup(field_from(g, coeffs), t, p)); },
          py::arg("grid"), py::arg("coeffs"), py::arg("t"), py::arg("params"));
    m.def("high_freq_bound", &high_freq_bound, py::arg("grid"), py::arg("params"),
          py::arg("margin") = 1.0);
    m.def("kernel_difference_sup", &kernel_difference_sup, py::arg("grid"), py::arg("params"),
          py::arg("t"), py::arg("weight_power"));
    m.def("check_kernel_sup_bound",
          [](const SpectralGrid& g, const PhysicalParams& p, double lambda,
             const std::vector<double>& times, double margin) {
              return report_to_dict(check_kernel_sup_bound(g, p, lambda, times, margin));
          },
          py::arg("grid"), py::arg("params"), py::arg("lam"), py::arg("times"),
          py::arg("margin") = 1.0);

    // Evolution.
    m.def("nonlinear_term",
          [](const SpectralGrid& g, const ComplexArray& coeffs, double dealias_fraction) {
              StepperConfig cfg;
              cfg.dealias_fraction = dealias_fraction;
              return array_from(nonlinear_term(field_from(g, coeffs), cfg));
          },
          py::arg("grid"), py::arg("coeffs"), py::arg("dealias_fraction") = 2.0 / 3.0);
    m.def("etd_step",
          [](const SpectralGrid& g, const ComplexArray& coeffs, double dt,
             const PhysicalParams& p, const StepperConfig& cfg) {
              return array_from(etd_step(field_from(g, coeffs), dt, p, cfg));
          },
          py::arg("grid"), py::arg("coeffs"), py::arg("dt"), py::arg("params"),
          py::arg("config") = StepperConfig{});
    m.def("evolve",
          [](const SpectralGrid& g, const ComplexArray& coeffs, double T,
             const PhysicalParams& p, const StepperConfig& cfg) {
              return trajectory_to_python(evolve(field_from(g, coeffs), T, p, cfg));
          },
          py::arg("grid"), py::arg("u0"), py::arg("T"), py::arg("params"),
          py::arg("config") = StepperConfig{});
    m.def("picard_solve",
          [](const SpectralGrid& g, const ComplexArray& coeffs, double T,
             const PhysicalParams& p, const StepperConfig& cfg, double s,
             std::optional<double> s1, double C, bool allow_long_horizon) {
              PicardOptions opts{s, s1, C, allow_long_horizon};
              return trajectory_to_python(picard_solve(field_from(g, coeffs), T, p, cfg, opts));
          },
          py::arg("grid"), py::arg("u0"), py::arg("T"), py::arg("params"),
          py::arg("config") = StepperConfig{}, py::arg("s") = 0.0,
          py::arg("s1") = std::nullopt, py::arg("C") = 1.0,
          py::arg("allow_long_horizon") = false);
    m.def("local_existence_time", &local_existence_time, py::arg("u0_norm"), py::arg("s"),
          py::arg("s1") = std::nullopt, py::arg("C") = 1.0);

    // Ill-posedness experiment.
    m.def("indicator_data",
          [](const SpectralGrid& g, const IllposedConfig& cfg, const std::string& which) {
              const BandRegion region = which == "A1" ? BandRegion::A1 : BandRegion::A2;
              return array_from(indicator_data(g, cfg, region));
          },
          py::arg("grid"), py::arg("config"), py::arg("which"));
    m.def("d2_flow_exact",
          [](const SpectralGrid& g, const IllposedConfig& cfg, const PhysicalParams& p) {
              return array_from(d2_flow_exact(g, cfg, p));
          },
          py::arg("grid"), py::arg("config"), py::arg("params"));
    m.def("bilinear_b",
          [](const SpectralGrid& g, const ComplexArray& v0, const ComplexArray& w0, double t,
             const PhysicalParams& p, const IllposedConfig& cfg) {
              return array_from(bilinear_B(field_from(g, v0), field_from(g, w0), t, p, cfg));
          },
          py::arg("grid"), py::arg("v0"), py::arg("w0"), py::arg("t"), py::arg("params"),
          py::arg("config"));
    m.def("inflation_norm", &inflation_norm, py::arg("grid"), py::arg("config"),
          py::arg("params"));
    m.def("inflation_slope",
          [](const SpectralGrid& g, const std::vector<int>& Ns, const IllposedConfig& cfg,
             const PhysicalParams& p) {
              FitResult fit;
              py::dict out = report_to_dict(inflation_slope(g, Ns, cfg, p, &fit));
              out["slope"] = fit.slope;
              out["intercept"] = fit.intercept;
              out["residual"] = fit.residual;
              return out;
          },
          py::arg("grid"), py::arg("Ns"), py::arg("config"), py::arg("params"));

    // Parameter asymptotics.
    m.def("make_perturbed_data",
          [](const SpectralGrid& g, const ComplexArray& u0, const ComplexArray& shape,
             double delta, double gamma) {
              return array_from(
                  make_perturbed_data(field_from(g, u0), field_from(g, shape), delta, gamma));
          },
          py::arg("grid"), py::arg("u0"), py::arg("shape"), py::arg("delta"), py::arg("gamma"));
    m.def("sweep",
          [](const SpectralGrid& g, const ComplexArray& u0, const ComplexArray& shape, double s,
             double T, double gamma, const std::vector<double>& deltas,
             const std::array<double, 3>& direction, double kappa_star,
             const StepperConfig& stepper) {
              SweepConfig cfg{s, T, gamma, deltas, direction, kappa_star, stepper};
              const ExperimentReport rep = sweep(g, cfg, field_from(g, u0), field_from(g, shape));
              py::dict out = report_to_dict(rep);
              bool pass = false;
              const FitResult fit = fit_rate(rep, gamma, &pass);
              out["slope"] = fit.slope;
              out["rate_pass"] = pass;
              return out;
          },
          py::arg("grid"), py::arg("u0"), py::arg("shape"), py::arg("s") = 2.0,
          py::arg("T") = 0.5, py::arg("gamma") = 1.0,
          py::arg("deltas") = std::vector<double>{1e-1, 3e-2, 1e-2, 3e-3, 1e-3},
          py::arg("direction") = std::array<double, 3>{1.0, 1.0, 1.0},
          py::arg("kappa_star") = 1.0, py::arg("stepper") = StepperConfig{.dt = 1.0 / 512,
                                                                          .save_every = 16});

    // Field generation and the experiment runner.
    m.def("random_band_field",
          [](const SpectralGrid& g, int band, double profile_pow, double norm_s,
             double amplitude, std::uint64_t seed) {
              Rng rng(seed);
              return array_from(
                  random_band_field(g, {band, profile_pow, norm_s, amplitude}, rng));
          },
          py::arg("grid"), py::arg("band"), py::arg("profile_pow") = 1.0,
          py::arg("norm_s") = 0.0, py::arg("amplitude") = 1.0, py::arg("seed") = 1);
    m.def("run_json",
          [](const std::string& config_text) {
              const RunConfig cfg = parse_config(config_text);
              const RunResult res = run(cfg);
              py::dict out;
              out["exit_code"] = res.exit_code;
              out["summary"] = res.summary;
              py::list artifacts;
              for (const auto& a : res.artifacts) artifacts.append(a.string());
              out["artifacts"] = artifacts;
              return out;
          },
          py::arg("config_text"),
          "Parse a JSON run configuration, execute it, and return the outcome");

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<BlowupError>(m, "BlowupError");

    m.attr("__version__") = "0.1.0";
}
