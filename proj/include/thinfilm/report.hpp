#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace thinfilm {

/// Tabular result record: named columns, double-valued rows, string metadata,
/// and an overall pass flag. Serialized as CSV (metadata as '# key=value'
/// comment lines) or embedded into JSON summaries.
struct ExperimentReport {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, std::string> meta;
    bool pass = true;

    void add_row(std::initializer_list<double> row);
    void write_csv(std::ostream& os) const;
    std::string csv() const;
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the log-log fit
    std::size_t points = 0;
};

/// Least-squares line through (log x_i, log y_i). Throws if fewer than two
/// valid points or any x, y <= 0.
FitResult fit_loglog(std::span<const double> xs, std::span<const double> ys);

/// Deterministic RNG (splitmix64-seeded xoshiro256++) with explicit
/// distributions, so artifacts are reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next_u64();
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    double normal();                     // Box-Muller

private:
    std::uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// log-spaced values in [lo, hi], inclusive of both ends.
std::vector<double> logspace(double lo, double hi, int count);

}  // namespace thinfilm
