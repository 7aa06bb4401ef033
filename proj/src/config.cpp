#include "thinfilm/config.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

namespace thinfilm {

using json = nlohmann::ordered_json;

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::KernelCheck: return "kernel-check";
        case ExperimentKind::Illposed: return "illposed";
        case ExperimentKind::Sweep: return "sweep";
        case ExperimentKind::PicardValidate: return "picard-validate";
    }
    return "?";
}

namespace {

ExperimentKind kind_from_string(const std::string& s) {
    if (s == "simulate") return ExperimentKind::Simulate;
    if (s == "kernel-check") return ExperimentKind::KernelCheck;
    if (s == "illposed") return ExperimentKind::Illposed;
    if (s == "sweep") return ExperimentKind::Sweep;
    if (s == "picard-validate") return ExperimentKind::PicardValidate;
    throw ConfigError("experiment: unknown kind '" + s +
                      "' (expected simulate | kernel-check | illposed | sweep | picard-validate)");
}

// Pulls a typed value, tracking the field path for error messages.
template <typename T>
T get_as(const json& obj, const std::string& path, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + key + ": wrong type");
    }
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw ConfigError(path + key + ": unknown field");
    }
}

RandomFieldSpec parse_field_spec(const json& obj, const std::string& path,
                                 RandomFieldSpec defaults) {
    reject_unknown(obj, path, {"band", "profile_pow", "norm_s", "amplitude"});
    RandomFieldSpec spec = defaults;
    spec.band = get_as<int>(obj, path, "band", spec.band);
    spec.profile_pow = get_as<double>(obj, path, "profile_pow", spec.profile_pow);
    spec.norm_s = get_as<double>(obj, path, "norm_s", spec.norm_s);
    spec.amplitude = get_as<double>(obj, path, "amplitude", spec.amplitude);
    if (spec.band < 1) throw ConfigError(path + "band: must be at least 1");
    if (!(spec.amplitude > 0.0)) throw ConfigError(path + "amplitude: must be positive");
    return spec;
}

json field_spec_json(const RandomFieldSpec& s) {
    return json{{"band", s.band},
                {"profile_pow", s.profile_pow},
                {"norm_s", s.norm_s},
                {"amplitude", s.amplitude}};
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc, "", {"experiment", "grid", "params", "validate_qstar", "stepper",
                             "simulate", "kernel_check", "illposed", "sweep",
                             "picard_validate", "output_dir", "seed", "emit_fields"});

    RunConfig cfg;
    if (!doc.contains("experiment")) throw ConfigError("experiment: required");
    cfg.experiment = kind_from_string(get_as<std::string>(doc, "", "experiment", ""));

    if (doc.contains("grid")) {
        const json& g = doc["grid"];
        reject_unknown(g, "grid.", {"L", "n"});
        const double L = get_as<double>(g, "grid.", "L", cfg.grid.L);
        const int n = get_as<int>(g, "grid.", "n", cfg.grid.n);
        try {
            cfg.grid = make_grid(L, n);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("grid: ") + e.what());
        }
    }

    if (doc.contains("params")) {
        const json& p = doc["params"];
        reject_unknown(p, "params.", {"R", "kappa", "alpha", "kappa_star"});
        cfg.params.R = get_as<double>(p, "params.", "R", cfg.params.R);
        cfg.params.kappa = get_as<double>(p, "params.", "kappa", cfg.params.kappa);
        cfg.params.alpha = get_as<double>(p, "params.", "alpha", cfg.params.alpha);
        cfg.params.kappa_star = get_as<double>(p, "params.", "kappa_star", cfg.params.kappa_star);
    }
    cfg.validate_qstar = get_as<bool>(doc, "", "validate_qstar", cfg.validate_qstar);

    if (doc.contains("stepper")) {
        const json& s = doc["stepper"];
        reject_unknown(s, "stepper.", {"dt", "dealias_fraction", "picard_tol",
                                       "picard_max_iter", "duhamel_nodes", "save_every"});
        cfg.stepper.dt = get_as<double>(s, "stepper.", "dt", cfg.stepper.dt);
        cfg.stepper.dealias_fraction =
            get_as<double>(s, "stepper.", "dealias_fraction", cfg.stepper.dealias_fraction);
        cfg.stepper.picard_tol = get_as<double>(s, "stepper.", "picard_tol", cfg.stepper.picard_tol);
        cfg.stepper.picard_max_iter =
            get_as<int>(s, "stepper.", "picard_max_iter", cfg.stepper.picard_max_iter);
        cfg.stepper.duhamel_nodes =
            get_as<int>(s, "stepper.", "duhamel_nodes", cfg.stepper.duhamel_nodes);
        cfg.stepper.save_every = get_as<int>(s, "stepper.", "save_every", cfg.stepper.save_every);
    }

    if (doc.contains("simulate")) {
        const json& s = doc["simulate"];
        reject_unknown(s, "simulate.", {"T", "ic"});
        cfg.simulate.T = get_as<double>(s, "simulate.", "T", cfg.simulate.T);
        if (s.contains("ic")) cfg.simulate.ic = parse_field_spec(s["ic"], "simulate.ic.", cfg.simulate.ic);
    }

    if (doc.contains("kernel_check")) {
        const json& s = doc["kernel_check"];
        reject_unknown(s, "kernel_check.",
                       {"lambdas", "t_min", "t_max", "t_count", "margin", "refine_tolerance"});
        cfg.kernel_check.lambdas =
            get_as<std::vector<double>>(s, "kernel_check.", "lambdas", cfg.kernel_check.lambdas);
        cfg.kernel_check.t_min = get_as<double>(s, "kernel_check.", "t_min", cfg.kernel_check.t_min);
        cfg.kernel_check.t_max = get_as<double>(s, "kernel_check.", "t_max", cfg.kernel_check.t_max);
        cfg.kernel_check.t_count = get_as<int>(s, "kernel_check.", "t_count", cfg.kernel_check.t_count);
        cfg.kernel_check.margin = get_as<double>(s, "kernel_check.", "margin", cfg.kernel_check.margin);
        cfg.kernel_check.refine_tolerance =
            get_as<double>(s, "kernel_check.", "refine_tolerance", cfg.kernel_check.refine_tolerance);
        for (double l : cfg.kernel_check.lambdas)
            if (!(l >= 0.0)) throw ConfigError("kernel_check.lambdas: lambda >= 0 required");
    }

    if (doc.contains("illposed")) {
        const json& s = doc["illposed"];
        reject_unknown(s, "illposed.",
                       {"N_list", "r", "s", "t", "quad_nodes", "quad_levels",
                        "compare_quadrature", "agree_tol", "slope_tol"});
        cfg.illposed.N_list = get_as<std::vector<int>>(s, "illposed.", "N_list", cfg.illposed.N_list);
        cfg.illposed.band.r = get_as<int>(s, "illposed.", "r", cfg.illposed.band.r);
        cfg.illposed.band.s = get_as<double>(s, "illposed.", "s", cfg.illposed.band.s);
        cfg.illposed.band.t = get_as<double>(s, "illposed.", "t", cfg.illposed.band.t);
        cfg.illposed.band.quad_nodes =
            get_as<int>(s, "illposed.", "quad_nodes", cfg.illposed.band.quad_nodes);
        cfg.illposed.band.quad_levels =
            get_as<int>(s, "illposed.", "quad_levels", cfg.illposed.band.quad_levels);
        cfg.illposed.compare_quadrature =
            get_as<bool>(s, "illposed.", "compare_quadrature", cfg.illposed.compare_quadrature);
        cfg.illposed.agree_tol = get_as<double>(s, "illposed.", "agree_tol", cfg.illposed.agree_tol);
        cfg.illposed.slope_tol = get_as<double>(s, "illposed.", "slope_tol", cfg.illposed.slope_tol);
        if (!(cfg.illposed.band.s < -2.0)) throw ConfigError("illposed.s: s < -2 required");
        if (cfg.illposed.N_list.empty()) throw ConfigError("illposed.N_list: must be nonempty");
    }

    if (doc.contains("sweep")) {
        const json& s = doc["sweep"];
        reject_unknown(s, "sweep.",
                       {"s", "T", "gamma", "deltas", "direction", "band", "profile_pow"});
        cfg.sweep.s = get_as<double>(s, "sweep.", "s", cfg.sweep.s);
        cfg.sweep.T = get_as<double>(s, "sweep.", "T", cfg.sweep.T);
        cfg.sweep.gamma = get_as<double>(s, "sweep.", "gamma", cfg.sweep.gamma);
        cfg.sweep.deltas = get_as<std::vector<double>>(s, "sweep.", "deltas", cfg.sweep.deltas);
        if (s.contains("direction")) {
            auto d = get_as<std::vector<double>>(s, "sweep.", "direction", {});
            if (d.size() != 3) throw ConfigError("sweep.direction: need exactly 3 components");
            cfg.sweep.direction = {d[0], d[1], d[2]};
        }
        cfg.sweep_band = get_as<int>(s, "sweep.", "band", cfg.sweep_band);
        cfg.sweep_profile_pow = get_as<double>(s, "sweep.", "profile_pow", cfg.sweep_profile_pow);
    }
    if (cfg.sweep.deltas.empty()) cfg.sweep.deltas = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
    cfg.sweep.kappa_star = cfg.params.kappa_star;
    // An explicit stepper block governs the sweep too; otherwise the sweep
    // keeps its own defaults (dt = 1/512, sparse sampling).
    if (doc.contains("stepper")) cfg.sweep.stepper = cfg.stepper;

    if (doc.contains("picard_validate")) {
        const json& s = doc["picard_validate"];
        reject_unknown(s, "picard_validate.", {"T", "ic", "s", "s1", "tol"});
        cfg.picard.T = get_as<double>(s, "picard_validate.", "T", cfg.picard.T);
        if (s.contains("ic"))
            cfg.picard.ic = parse_field_spec(s["ic"], "picard_validate.ic.", cfg.picard.ic);
        cfg.picard.s = get_as<double>(s, "picard_validate.", "s", cfg.picard.s);
        cfg.picard.s1 = get_as<double>(s, "picard_validate.", "s1", cfg.picard.s1);
        cfg.picard.tol = get_as<double>(s, "picard_validate.", "tol", cfg.picard.tol);
    }

    cfg.output_dir = get_as<std::string>(doc, "", "output_dir", cfg.output_dir.string());
    cfg.seed = get_as<std::uint64_t>(doc, "", "seed", cfg.seed);
    cfg.emit_fields = get_as<bool>(doc, "", "emit_fields", cfg.emit_fields);

    // The band experiment needs a lattice wide enough for its products;
    // widen the default grid rather than rejecting an unconfigured run.
    if (cfg.experiment == ExperimentKind::Illposed && !doc.contains("grid")) {
        int need = 8;
        for (int N : cfg.illposed.N_list)
            need = std::max(need, 2 * (2 * N + 4 * cfg.illposed.band.r));
        cfg.grid = make_grid(cfg.grid.L, need);
    }

    // Cross-field invariants, checked for the active experiment.
    try {
        cfg.params.validate();
        if (cfg.validate_qstar) cfg.params.validate_qstar();
        cfg.stepper.validate();
        if (cfg.experiment == ExperimentKind::Illposed) {
            for (int N : cfg.illposed.N_list) {
                cfg.illposed.band.N = N;
                cfg.illposed.band.validate(cfg.grid);
            }
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.experiment == ExperimentKind::Sweep) {
        try {
            cfg.sweep.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("sweep: ") + e.what());
        }
    }
    return cfg;
}

std::string RunConfig::to_json() const {
    json doc;
    doc["experiment"] = thinfilm::to_string(experiment);
    doc["grid"] = {{"L", grid.L}, {"n", grid.n}};
    doc["params"] = {{"R", params.R},
                     {"kappa", params.kappa},
                     {"alpha", params.alpha},
                     {"kappa_star", params.kappa_star}};
    doc["validate_qstar"] = validate_qstar;
    doc["stepper"] = {{"dt", stepper.dt},
                      {"dealias_fraction", stepper.dealias_fraction},
                      {"picard_tol", stepper.picard_tol},
                      {"picard_max_iter", stepper.picard_max_iter},
                      {"duhamel_nodes", stepper.duhamel_nodes},
                      {"save_every", stepper.save_every}};
    doc["simulate"] = {{"T", simulate.T}, {"ic", field_spec_json(simulate.ic)}};
    doc["kernel_check"] = {{"lambdas", kernel_check.lambdas},
                           {"t_min", kernel_check.t_min},
                           {"t_max", kernel_check.t_max},
                           {"t_count", kernel_check.t_count},
                           {"margin", kernel_check.margin},
                           {"refine_tolerance", kernel_check.refine_tolerance}};
    doc["illposed"] = {{"N_list", illposed.N_list},
                       {"r", illposed.band.r},
                       {"s", illposed.band.s},
                       {"t", illposed.band.t},
                       {"quad_nodes", illposed.band.quad_nodes},
                       {"quad_levels", illposed.band.quad_levels},
                       {"compare_quadrature", illposed.compare_quadrature},
                       {"agree_tol", illposed.agree_tol},
                       {"slope_tol", illposed.slope_tol}};
    doc["sweep"] = {{"s", sweep.s},
                    {"T", sweep.T},
                    {"gamma", sweep.gamma},
                    {"deltas", sweep.deltas},
                    {"direction", sweep.direction},
                    {"band", sweep_band},
                    {"profile_pow", sweep_profile_pow}};
    doc["picard_validate"] = {{"T", picard.T},
                              {"ic", field_spec_json(picard.ic)},
                              {"s", picard.s},
                              {"s1", picard.s1},
                              {"tol", picard.tol}};
    doc["output_dir"] = output_dir.string();
    doc["seed"] = seed;
    doc["emit_fields"] = emit_fields;
    return doc.dump(2);
}

std::string RunConfig::config_hash() const {
    // FNV-1a over the canonical echo with the purely locational fields
    // (output_dir, emit_fields) normalized out, so payloads written to
    // different directories hash identically.
    json doc = json::parse(to_json());
    doc["output_dir"] = "";
    doc["emit_fields"] = false;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : doc.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string apply_override(const std::string& json_text, const std::string& override_kv) {
    const auto eq = override_kv.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override: expected key=value, got '" + override_kv + "'");
    const std::string key = override_kv.substr(0, eq);
    const std::string value = override_kv.substr(eq + 1);

    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    json parsed_value;
    try {
        parsed_value = json::parse(value);
    } catch (const json::exception&) {
        parsed_value = value;  // bare strings allowed
    }

    json* cursor = &doc;
    std::size_t pos = 0;
    while (true) {
        const auto dot = key.find('.', pos);
        const std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (part.empty()) throw ConfigError("override: empty path segment in '" + key + "'");
        if (dot == std::string::npos) {
            (*cursor)[part] = parsed_value;
            break;
        }
        cursor = &(*cursor)[part];
        pos = dot + 1;
    }
    return doc.dump();
}

FourierField random_band_field(const SpectralGrid& grid, const RandomFieldSpec& spec,
                               Rng& rng) {
    if (spec.band < 1 || spec.band > grid.max_index())
        throw std::invalid_argument("random_band_field: band outside the lattice");
    FourierField f(grid);
    for (int k1 = 0; k1 <= spec.band; ++k1) {
        for (int k2 = -spec.band; k2 <= spec.band; ++k2) {
            if (k1 == 0 && k2 <= 0) continue;  // one representative per +/- pair
            const double amp = std::pow(1.0 + k1 * k1 + k2 * k2, -spec.profile_pow);
            const double phase = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
            const Complex c = 0.5 * amp * Complex(std::cos(phase), std::sin(phase));
            f(k1, k2) = c;
            f(-k1, -k2) = std::conj(c);
        }
    }
    const double nrm = sobolev_norm(f, spec.norm_s);
    if (!(nrm > 0.0)) throw std::invalid_argument("random_band_field: empty band");
    const double scale = spec.amplitude / nrm;
    for (Complex& c : f.coeffs()) c *= scale;
    return f;
}

}  // namespace thinfilm
