#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thinfilm/asymptotics.hpp"
#include "thinfilm/evolve.hpp"
#include "thinfilm/grid.hpp"
#include "thinfilm/illposed.hpp"
#include "thinfilm/symbol.hpp"

namespace thinfilm {

/// Configuration or invariant violation; the message carries the offending
/// field path and the violated rule.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Simulate, KernelCheck, Illposed, Sweep, PicardValidate };

std::string to_string(ExperimentKind k);

/// Band-limited random initial data: modes with 0 < max(|k1|,|k2|) <= band,
/// amplitude profile (1+|k|^2)^{-profile_pow}, uniform random phases,
/// Hermitian-symmetrized and scaled to `amplitude` in the H^{norm_s} norm.
struct RandomFieldSpec {
    int band = 8;
    double profile_pow = 1.0;
    double norm_s = 0.0;
    double amplitude = 1.0;
};

FourierField random_band_field(const SpectralGrid& grid, const RandomFieldSpec& spec,
                               Rng& rng);

struct SimulateConfig {
    double T = 0.5;
    RandomFieldSpec ic;
};

struct KernelCheckConfig {
    std::vector<double> lambdas = {0, 1, 2, 3, 4};
    double t_min = 1e-3;
    double t_max = 1.0;
    int t_count = 16;
    double margin = 1.0;
    double refine_tolerance = 0.05;  // max ratio drift allowed from n to 2n
};

struct IllposedRunConfig {
    std::vector<int> N_list = {8, 16, 32};
    IllposedConfig band;             // N field is overridden per list entry
    bool compare_quadrature = true;  // also run the bilinear_B path
    double agree_tol = 1e-6;
    double slope_tol = 0.3;
};

struct PicardValidateConfig {
    double T = 1.0 / 64;
    RandomFieldSpec ic{.band = 5, .norm_s = 2.0, .amplitude = 0.1};
    double s = 2.0;
    double s1 = -1.0;
    double tol = 1e-5;
};

/// Fully-validated run description; all defaults materialized.
struct RunConfig {
    ExperimentKind experiment = ExperimentKind::Simulate;
    SpectralGrid grid{SpectralGrid::two_pi(), 64};
    PhysicalParams params;
    bool validate_qstar = true;
    StepperConfig stepper;
    SimulateConfig simulate;
    KernelCheckConfig kernel_check;
    IllposedRunConfig illposed;
    SweepConfig sweep;
    int sweep_band = 8;             // random-field spec for base data and shape
    double sweep_profile_pow = 1.0;
    PicardValidateConfig picard;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;
    bool emit_fields = false;

    /// FNV-1a hash of the canonical JSON echo; embedded in every artifact.
    std::string config_hash() const;
    std::string to_json() const;
};

/// Parses and validates a JSON document against the documented schema.
/// Unknown keys, type mismatches and invariant violations raise ConfigError
/// with the field path and the rule that failed.
RunConfig parse_config(const std::string& json_text);

/// Applies a `key=value` override (dot-separated path into the JSON document,
/// value parsed as JSON) before re-validation.
std::string apply_override(const std::string& json_text, const std::string& override_kv);

struct RunResult {
    int exit_code = 0;  // 0 pass, 2 experiment fail (1 reserved for operational errors)
    std::vector<std::filesystem::path> artifacts;
    std::string summary;
};

/// Executes the configured experiment and writes CSV/JSON artifacts into
/// output_dir. Deterministic for a fixed config and seed.
RunResult run(const RunConfig& config);

/// Binary trajectory container (see README for the exact layout).
void write_field_container(const std::filesystem::path& path, const Trajectory& traj,
                           const PhysicalParams& p, bool physical_space);

}  // namespace thinfilm
