#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lda/geometry.hpp"
#include "lda/lattice.hpp"
#include "lda/stats.hpp"

namespace lda {

enum class DecoderKind { ml, bp };
enum class NoiseKind { gaussian_iid, uniform_iid, student_t_iid };

// --- AWGN word-error experiments -------------------------------------------

struct AwgnConfig {
    std::vector<double> sigma_grid;
    std::int64_t trials = 1000;
    DecoderKind decoder = DecoderKind::ml;
    std::uint64_t seed = 1;
    int workers = 1;
    std::int64_t cvp_budget = 1'000'000;
    int bp_iters = 60;
    // Transmit a random codeword instead of 0.  For exact (ML) decoding the
    // error event is translation invariant so this changes nothing but the
    // arithmetic; for BP on a loopy graph it removes the all-zero bias.
    bool random_codeword = false;
};

struct ErrorRatePoint {
    double sigma = 0.0;
    double vnr = 0.0;  // vol^{2/n} / (2 pi e sigma^2)
    std::int64_t trials = 0;
    std::int64_t errors = 0;
    double wer = 0.0;
    Interval ci;
};

struct ErrorRateCurve {
    std::vector<ErrorRatePoint> rows;
};

// Transmit, add i.i.d. N(0, sigma^2) noise, decode, count word errors.
// Noise is paired across the sigma grid: trial t uses the same unit
// Gaussian vector at every sigma, so for exact decoding the error set can
// only grow with sigma (Voronoi cells are convex and contain 0).
// Deterministic in (config, seed); independent of the worker count.
ErrorRateCurve awgn_error_experiment(const ConstructionALattice& l,
                                     const AwgnConfig& cfg);

// sigma achieving a target VNR for this lattice.
double sigma_for_vnr(const ConstructionALattice& l, double vnr);

// --- semi-norm-ergodic exceedance tables -----------------------------------

struct ExceedanceRow {
    int n = 0;
    std::int64_t trials = 0;
    std::int64_t exceed = 0;
    double frequency = 0.0;
    Interval ci;
};

struct ExceedanceTable {
    NoiseKind kind = NoiseKind::gaussian_iid;
    double delta = 0.1;
    int df = 0;  // student_t only
    std::vector<ExceedanceRow> rows;
};

// Empirical Pr[ ||z||^2 > (1+delta) n sigma^2 ] for z with n i.i.d.
// unit-variance components of the given kind (student_t requires df >= 3
// and is rescaled to unit variance).  One row per n in the grid.
ExceedanceTable semi_norm_ergodic_check(NoiseKind kind, std::span<const int> n_grid,
                                        double delta, std::int64_t trials,
                                        std::uint64_t seed, int workers = 1,
                                        int df = 5);

// --- per-instance goodness reports ------------------------------------------

struct GoodnessConfig {
    int seeds = 20;
    std::uint64_t master_seed = 1;
    std::int64_t nsm_samples = 2000;
    std::int64_t wer_trials = 400;
    std::vector<double> vnr_points = {1.0, 1.5};
    DecoderKind wer_decoder = DecoderKind::ml;
    std::int64_t cvp_budget = 1'000'000;
    std::int64_t point_budget = 50'000'000;
    int workers = 1;
};

struct SeedMetrics {
    std::uint64_t seed = 0;
    bool full_rank = false;
    double log_volume = 0.0;
    double r_eff = 0.0;
    double r_pack = 0.0;  // NaN when the budget ran out
    double ratio = 0.0;   // r_pack / r_eff
    NsmEstimate nsm;      // samples == 0 when skipped
    ErrorRateCurve wer;
    std::vector<std::string> skipped;  // budget-exhausted fields
};

struct MetricsReport {
    int n = 0;
    std::uint32_t p = 0;
    int dv = 0, dc = 0;
    std::uint64_t master_seed = 0;
    std::vector<SeedMetrics> per_seed;
    int fullrank_count = 0;
    double median_r_eff = 0.0;
    double median_r_pack = 0.0;
    double median_ratio = 0.0;
    double median_nsm = 0.0;
};

// Metrics for one concrete lattice (also used to inject degenerate
// instances like pZ^n into the same reporting path).
SeedMetrics instance_metrics(const ConstructionALattice& l, std::uint64_t seed,
                             const GoodnessConfig& cfg);

// Randomizes the skeleton once per derived seed and aggregates
// instance_metrics across seeds (medians ignore skipped fields).
MetricsReport goodness_report(const SkeletonGraph& g, std::uint32_t p,
                              const GoodnessConfig& cfg);

double median(std::vector<double> v);  // NaN entries dropped; empty -> NaN

// --- table emission ----------------------------------------------------------

using Cell = std::variant<std::int64_t, double, std::string>;

// Row-oriented table with an ordered config echo.  This is the one shape
// every experiment is serialized through, so CSV and JSON stay in sync.
struct Table {
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_config(const std::string& key, const std::string& value);
    void add_config(const std::string& key, double value);
    void add_config(const std::string& key, std::int64_t value);
    bool operator==(const Table&) const = default;
};

enum class EmitFormat { csv, json };

Table to_table(const ErrorRateCurve& curve);
Table to_table(const ExceedanceTable& table);
Table to_table(const MetricsReport& report);

// CSV: `# key=value` comment header (config echo), then a column-name row,
// then data rows; doubles are written with max_digits10 so parsing them
// back reproduces the exact bit pattern.  JSON: one object
// {schema_version, config, columns, rows}.
void emit(const Table& t, EmitFormat format, const std::string& path);
std::string emit_string(const Table& t, EmitFormat format);

// Inverse of emit; the format is detected from the content.
Table read_table(const std::string& path);
Table parse_table(const std::string& text);

// Structural validation of the JSON emission (shape mirrored in
// docs/table.schema.json): returns a list of violations, empty when valid.
std::vector<std::string> validate_table_json(const std::string& text);

}  // namespace lda
