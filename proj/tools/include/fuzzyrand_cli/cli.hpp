#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fuzzyrand/adjust.hpp"
#include "fuzzyrand/random_model.hpp"
#include "fuzzyrand/synth.hpp"

namespace fuzzyrand::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitNumerical = 3 };

/// Maps a library exception onto the documented exit codes.
ExitCode exit_code_for(const std::exception& e);

/// A cell of an output table. monostate prints as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, std::string, double, std::int64_t, std::uint64_t>;

/// Column-named rows; CSV and JSON writers emit the same fields in the same order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  void write(std::ostream& out, std::string_view format) const;
};

/// Columns every adjusted-index record carries, in order.
std::vector<std::string> record_columns();
/// Values for record_columns(); a failed cell has empty numeric fields.
std::vector<Cell> record_cells(const RandomModel& model, IndexKind kind,
                               const std::optional<AdjustedResult>& result);

/// Overrides read from the environment by main().
struct Environment {
  std::optional<std::string> seed;     // FUZZYRAND_SEED
  std::optional<std::string> workers;  // FUZZYRAND_WORKERS
};

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Environment& env = {});

// Benchmark and error-analysis drivers. The CLI wraps these; the acceptance
// checks call them directly.

struct BenchmarkSpec {
  FactorialGrid grid;
  std::size_t replicates = 5;
  std::vector<ModelFamily> models{ModelFamily::kPerm, ModelFamily::kFit, ModelFamily::kSym,
                                  ModelFamily::kFlat};
  IndexKind kind = IndexKind::kNdc;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Reads a grid description:
/// {"n_clusters": [...], "n_points": [...], "imbalance": [...], "precision": [...],
///  "randomize_rate": [...], "sided": "two", "replicates": 5, "models": "perm,fit",
///  "kind": "ndc", "samples": 100000, "seed": 1}
/// Missing value lists fall back to the full factorial grid.
BenchmarkSpec parse_benchmark_spec(std::istream& in);

/// Shrinks samples and replicates by `scale` and keeps an evenly spaced subset
/// of ceil(scale * size) values from each list (first and last always kept).
BenchmarkSpec scaled(BenchmarkSpec spec, double scale);

struct BenchmarkRow {
  FactorialParams params;  // params.seed is the pair seed
  std::size_t setting = 0;
  std::size_t replicate = 0;
  RandomModel model;
  std::optional<AdjustedResult> result;
  std::string error;
};

/// Rows ordered by (setting, replicate, model). Cells run on spec.workers
/// threads; the output does not depend on the worker count.
std::vector<BenchmarkRow> run_benchmark(const BenchmarkSpec& spec);
Table benchmark_table(const std::vector<BenchmarkRow>& rows, IndexKind kind);

struct ErrorAnalysisSpec {
  FactorialGrid grid = error_analysis_grid();
  std::size_t pairs = 10;  // generated pairs per setting
  std::size_t reps = 100;  // computations per pair and model
  std::vector<ModelFamily> models{ModelFamily::kFit, ModelFamily::kSym, ModelFamily::kFlat};
  IndexKind kind = IndexKind::kNdc;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// Drop comparisons whose every repetition is negative.
  bool drop_all_negative = true;
};

struct ErrorAnalysisModel {
  ModelFamily model = ModelFamily::kFit;
  std::size_t comparisons = 0;  // kept
  std::size_t dropped = 0;
  std::size_t failed = 0;  // comparisons with a failed repetition
  std::size_t computations = 0;
  double fraction_within = 0.0;  // |value - comparison mean| < 0.01
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
};

inline constexpr double kErrorThreshold = 0.01;

std::vector<ErrorAnalysisModel> run_error_analysis(const ErrorAnalysisSpec& spec);
Table error_analysis_table(const std::vector<ErrorAnalysisModel>& models);

}  // namespace fuzzyrand::cli
