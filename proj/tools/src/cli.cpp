#include "fuzzyrand_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/membership.hpp"
#include "fuzzyrand/rng.hpp"

namespace fuzzyrand::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const CapabilityError*>(&e)) {
    return kExitUsage;
  }
  if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const ConvergenceError*>(&e)) {
    return kExitNumerical;
  }
  return kExitValidation;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

void write_csv_field(std::ostream& out, const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

struct CsvCell {
  std::ostream& out;
  void operator()(std::monostate) const {}
  void operator()(const std::string& s) const { write_csv_field(out, s); }
  void operator()(double x) const {
    if (std::isfinite(x)) out << x;
    else out << (std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
  }
  void operator()(std::int64_t x) const { out << x; }
  void operator()(std::uint64_t x) const { out << x; }
};

ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

void Table::write_csv(std::ostream& out) const {
  const auto old_precision = out.precision(17);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    write_csv_field(out, columns[c]);
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::visit(CsvCell{out}, row[c]);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void Table::write_json(std::ostream& out) const {
  ordered_json doc = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = to_json(row[c]);
    doc.push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

void Table::write(std::ostream& out, std::string_view format) const {
  if (format == "json") write_json(out);
  else write_csv(out);
}

std::vector<std::string> record_columns() {
  return {"model", "sided", "kind",    "raw",  "expected", "adjusted",
          "std_error", "samples", "seed", "flags"};
}

std::vector<Cell> record_cells(const RandomModel& model, IndexKind kind,
                               const std::optional<AdjustedResult>& result) {
  std::vector<Cell> cells{std::string(to_string(model.family)),
                          std::string(to_string(model.sided)), std::string(to_string(kind))};
  if (!result) {
    cells.resize(record_columns().size());
    return cells;
  }
  std::string flags;
  for (const auto& f : result->provenance.flags) flags += (flags.empty() ? "" : ";") + f;
  cells.insert(cells.end(), {result->raw, result->expected, result->adjusted, result->std_error,
                             result->provenance.samples, result->provenance.seed, flags});
  return cells;
}

// ---------------------------------------------------------------------------
// Worker pool

namespace {

/// Runs fn(i) for i in [0, n) on `workers` threads, handing out indices in order.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

template <class T>
std::vector<T> json_list(const ordered_json& doc, const char* key, std::vector<T> fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& v = doc.at(key);
  if (!v.is_array()) return {v.get<T>()};
  return v.get<std::vector<T>>();
}

std::vector<RandomModel> as_models(const std::vector<ModelFamily>& families, Sidedness sided) {
  std::vector<RandomModel> models;
  for (auto f : families) models.push_back(RandomModel{f, sided});
  return models;
}

Sidedness parse_sided(std::string_view text) {
  if (text == "one") return Sidedness::kOne;
  if (text == "two") return Sidedness::kTwo;
  throw UsageError("sided must be \"one\" or \"two\", got \"" + std::string(text) + "\"");
}

template <class T>
std::vector<T> thin(const std::vector<T>& values, double scale) {
  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(scale * static_cast<double>(values.size()) - 1e-9)));
  if (keep >= values.size()) return values;
  if (keep == 1) return {values.front()};
  std::vector<T> out;
  for (std::size_t k = 0; k < keep; ++k) {
    const double pos = static_cast<double>(k) * static_cast<double>(values.size() - 1) /
                       static_cast<double>(keep - 1);
    out.push_back(values[static_cast<std::size_t>(std::lround(pos))]);
  }
  return out;
}

std::size_t scale_count(std::size_t n, double scale) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(scale * static_cast<double>(n) - 1e-9)));
}

}  // namespace

// ---------------------------------------------------------------------------
// Benchmark

BenchmarkSpec parse_benchmark_spec(std::istream& in) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("grid: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("grid: expected a JSON object");
  BenchmarkSpec spec;
  try {
    const FactorialGrid full = factorial_grid();
    spec.grid.n_clusters = json_list<std::size_t>(doc, "n_clusters", full.n_clusters);
    spec.grid.n_points = json_list<std::size_t>(doc, "n_points", full.n_points);
    spec.grid.imbalance = json_list<double>(doc, "imbalance", full.imbalance);
    spec.grid.precision = json_list<double>(doc, "precision", full.precision);
    spec.grid.randomize_rate = json_list<double>(doc, "randomize_rate", full.randomize_rate);
    spec.grid.sided = parse_sided(doc.value("sided", std::string("two")));
    spec.replicates = doc.value("replicates", spec.replicates);
    if (doc.contains("models")) spec.models = parse_model_families(doc.at("models").get<std::string>());
    if (doc.contains("kind")) spec.kind = parse_index_kind(doc.at("kind").get<std::string>());
    spec.samples = doc.value("samples", spec.samples);
    spec.seed = doc.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("grid: ") + e.what());
  }
  if (spec.grid.size() == 0) throw ValidationError("grid: every value list must be non-empty");
  if (spec.replicates == 0) throw ValidationError("grid: replicates must be >= 1");
  // Surface parameter errors before any work is scheduled.
  for (const auto& p : spec.grid.expand()) replacement_distribution(p);
  return spec;
}

BenchmarkSpec scaled(BenchmarkSpec spec, double scale) {
  if (!(scale > 0.0 && scale <= 1.0)) throw UsageError("--scale must lie in (0, 1]");
  spec.samples = scale_count(spec.samples, scale);
  spec.replicates = scale_count(spec.replicates, scale);
  auto& g = spec.grid;
  g.n_clusters = thin(g.n_clusters, scale);
  g.n_points = thin(g.n_points, scale);
  g.imbalance = thin(g.imbalance, scale);
  g.precision = thin(g.precision, scale);
  g.randomize_rate = thin(g.randomize_rate, scale);
  return spec;
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkSpec& spec) {
  const auto settings = spec.grid.expand();
  const auto models = as_models(spec.models, spec.grid.sided);
  const std::size_t cells = settings.size() * spec.replicates;
  std::vector<BenchmarkRow> rows(cells * models.size());

  parallel_for(cells, spec.workers, [&](std::size_t cell) {
    const std::size_t s = cell / spec.replicates;
    const std::size_t r = cell % spec.replicates;
    FactorialParams params = settings[s];
    params.seed = derive_seed(spec.seed, {s, r});
    BenchmarkRow* out = &rows[cell * models.size()];
    std::optional<std::pair<MembershipMatrix, MembershipMatrix>> pair;
    std::string pair_error;
    try {
      pair = generate_pair(params);
    } catch (const std::exception& e) {
      pair_error = e.what();
    }
    FitCache cache;
    for (std::size_t m = 0; m < models.size(); ++m) {
      BenchmarkRow& row = out[m];
      row.params = params;
      row.setting = s;
      row.replicate = r;
      row.model = models[m];
      if (!pair) {
        row.error = pair_error;
        continue;
      }
      McConfig cfg;
      cfg.samples = spec.samples;
      cfg.seed = derive_seed(params.seed, {m});
      try {
        row.result = adjusted_index(pair->first, pair->second, models[m], spec.kind, cfg, &cache);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  });
  return rows;
}

Table benchmark_table(const std::vector<BenchmarkRow>& rows, IndexKind kind) {
  Table t;
  t.columns = {"setting", "replicate", "n_clusters", "n_points", "imbalance", "precision",
               "randomize_rate", "pair_seed"};
  for (auto& c : record_columns()) t.columns.push_back(c);
  t.columns.push_back("error");
  for (const auto& row : rows) {
    const auto& p = row.params;
    std::vector<Cell> cells{std::uint64_t{row.setting}, std::uint64_t{row.replicate},
                            std::uint64_t{p.n_clusters}, std::uint64_t{p.n_points},
                            p.imbalance, p.precision, p.randomize_rate, p.seed};
    for (auto& c : record_cells(row.model, kind, row.result)) cells.push_back(std::move(c));
    cells.push_back(row.error);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Error analysis

std::vector<ErrorAnalysisModel> run_error_analysis(const ErrorAnalysisSpec& spec) {
  const auto settings = spec.grid.expand();
  const auto models = as_models(spec.models, Sidedness::kTwo);
  const std::size_t comparisons = settings.size() * spec.pairs;

  struct Outcome {
    std::vector<double> values;
    bool failed = false;
  };
  std::vector<Outcome> outcomes(comparisons * models.size());

  parallel_for(comparisons, spec.workers, [&](std::size_t c) {
    const std::size_t s = c / spec.pairs;
    const std::size_t k = c % spec.pairs;
    FactorialParams params = settings[s];
    params.sided = Sidedness::kTwo;
    params.seed = derive_seed(spec.seed, {s, k});
    FitCache cache;
    try {
      const auto [a, b] = generate_pair(params);
      for (std::size_t m = 0; m < models.size(); ++m) {
        Outcome& o = outcomes[c * models.size() + m];
        for (std::size_t rep = 0; rep < spec.reps; ++rep) {
          McConfig cfg;
          cfg.samples = spec.samples;
          cfg.seed = derive_seed(params.seed, {m, rep});
          try {
            o.values.push_back(adjusted_index(a, b, models[m], spec.kind, cfg, &cache).adjusted);
          } catch (const Error&) {
            o.failed = true;
          }
        }
      }
    } catch (const Error&) {
      for (std::size_t m = 0; m < models.size(); ++m) outcomes[c * models.size() + m].failed = true;
    }
  });

  std::vector<ErrorAnalysisModel> summary;
  for (std::size_t m = 0; m < models.size(); ++m) {
    ErrorAnalysisModel s{spec.models[m]};
    std::size_t within = 0;
    double abs_sum = 0.0;
    for (std::size_t c = 0; c < comparisons; ++c) {
      const Outcome& o = outcomes[c * models.size() + m];
      if (o.failed || o.values.empty()) {
        ++s.failed;
        continue;
      }
      const bool all_negative =
          std::all_of(o.values.begin(), o.values.end(), [](double v) { return v < 0.0; });
      if (spec.drop_all_negative && all_negative) {
        ++s.dropped;
        continue;
      }
      ++s.comparisons;
      double mean = 0.0;
      for (double v : o.values) mean += v;
      mean /= static_cast<double>(o.values.size());
      for (double v : o.values) {
        const double err = std::abs(v - mean);
        ++s.computations;
        abs_sum += err;
        if (err < kErrorThreshold) ++within;
        s.max_abs_error = std::max(s.max_abs_error, err);
      }
    }
    if (s.computations) {
      s.fraction_within = static_cast<double>(within) / static_cast<double>(s.computations);
      s.mean_abs_error = abs_sum / static_cast<double>(s.computations);
    }
    summary.push_back(s);
  }
  return summary;
}

Table error_analysis_table(const std::vector<ErrorAnalysisModel>& models) {
  Table t;
  t.columns = {"model",          "comparisons",   "dropped",       "failed", "computations",
               "fraction_within", "max_abs_error", "mean_abs_error"};
  for (const auto& m : models) {
    t.rows.push_back({std::string(to_string(m.model)), std::uint64_t{m.comparisons},
                      std::uint64_t{m.dropped}, std::uint64_t{m.failed},
                      std::uint64_t{m.computations}, m.fraction_within, m.max_abs_error,
                      m.mean_abs_error});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Common {
  std::string models = "perm,fit,sym,flat";
  std::string kind = "ndc";
  std::optional<std::uint64_t> samples;
  std::optional<std::string> seed;
  std::optional<std::size_t> workers;
  std::string format = "csv";
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_models = true) {
  if (with_models) cmd->add_option("--models", c.models, "Comma-separated random models");
  cmd->add_option("--kind", c.kind, "Index: ndc or brouwer")
      ->check(CLI::IsMember({"ndc", "brouwer"}, CLI::ignore_case));
  cmd->add_option("--samples", c.samples, "Monte-Carlo samples per expectation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Base seed (default: $FUZZYRAND_SEED or drawn from entropy)");
  cmd->add_option("--workers", c.workers, "Worker threads (default: $FUZZYRAND_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out_path, "Output file (default: standard output)");
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(std::string(what) + ": not a non-negative integer: \"" + text + "\"");
  }
  return v;
}

struct Resolved {
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

Resolved resolve(const Common& c, const Environment& env, std::ostream& err) {
  Resolved r;
  if (c.seed) {
    r.seed = parse_u64(*c.seed, "--seed");
  } else if (env.seed) {
    r.seed = parse_u64(*env.seed, "FUZZYRAND_SEED");
  } else {
    std::random_device rd;
    r.seed = (std::uint64_t{rd()} << 32) ^ rd();
    err << "seed: " << r.seed << '\n';
  }
  if (c.workers) {
    r.workers = *c.workers;
  } else if (env.workers) {
    r.workers = parse_u64(*env.workers, "FUZZYRAND_WORKERS");
    if (r.workers == 0) throw UsageError("FUZZYRAND_WORKERS must be >= 1");
  }
  return r;
}

// Writes through to `sink` or the command's --out target.
struct Output {
  std::ostream& sink;
  void operator()(const Table& t, const Common& c) const {
    if (c.out_path.empty()) {
      t.write(sink, c.format);
      return;
    }
    std::ofstream file(c.out_path);
    if (!file) throw ValidationError("cannot open output file " + c.out_path);
    t.write(file, c.format);
  }
};

int report_failures(const std::vector<std::pair<std::string, ExitCode>>& failures,
                    std::ostream& err) {
  int code = kExitOk;
  for (const auto& [msg, c] : failures) {
    err << "error: " << msg << '\n';
    // Usage problems outrank data problems, which outrank numerical ones.
    if (code == kExitOk || c < code) code = c;
  }
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const Environment& env) {
  CLI::App app{"Fuzzy Rand indices adjusted for chance"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fuzzyrand 0.1.0");

  Common compare_opts;
  std::vector<std::string> inputs;
  bool one_sided = false;
  bool header = false;
  bool monte_carlo = false;
  auto* compare = app.add_subcommand("compare", "Adjusted index of two membership CSVs");
  compare->add_option("inputs", inputs, "Two membership CSV files")->required()->expected(2);
  add_common(compare, compare_opts);
  compare->add_flag("--one-sided", one_sided, "Hold the second clustering fixed");
  compare->add_flag("--header", header, "Input CSVs start with a header line");
  compare->add_flag("--monte-carlo", monte_carlo, "Sample even where a closed form exists");

  Common toy_opts;
  std::string toy_dir;
  auto* toy = app.add_subcommand("toy", "Nine-point toy allocations and their ten comparisons");
  add_common(toy, toy_opts);
  toy->add_option("--out-dir", toy_dir, "Write the five allocations as CSV files here");

  Common bench_opts;
  std::string grid_path;
  std::string manifest_path;
  double bench_scale = 1.0;
  auto* bench = app.add_subcommand("benchmark", "Factorial benchmark, long-format output");
  bench->add_option("--grid", grid_path, "Grid JSON")->required();
  add_common(bench, bench_opts);
  bench->add_option("--manifest", manifest_path, "Write a JSON run manifest here");
  bench->add_option("--scale", bench_scale, "Shrink samples, replicates and grid (0, 1]");

  Common ea_opts;
  ea_opts.models = "fit,sym,flat";
  std::size_t reps = 100;
  std::size_t pairs = 10;
  double ea_scale = 1.0;
  std::string ea_grid;
  bool keep_negative = false;
  auto* ea = app.add_subcommand("error-analysis", "Monte-Carlo error of the Dirichlet models");
  add_common(ea, ea_opts);
  ea->add_option("--reps", reps, "Computations per comparison and model")
      ->check(CLI::PositiveNumber);
  ea->add_option("--pairs", pairs, "Generated pairs per setting")->check(CLI::PositiveNumber);
  ea->add_option("--scale", ea_scale, "Shrink samples, repetitions, pairs and grid (0, 1]");
  ea->add_option("--grid", ea_grid, "Grid JSON (default: the 48-setting grid)");
  ea->add_flag("--keep-negative", keep_negative, "Keep comparisons with only negative values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Output write{out};
  try {
    if (compare->parsed()) {
      const auto r = resolve(compare_opts, env, err);
      const auto a = read_csv(fs::path(inputs[0]), header);
      const auto b = read_csv(fs::path(inputs[1]), header);
      const IndexKind kind = parse_index_kind(compare_opts.kind);
      Table t{record_columns(), {}};
      std::vector<std::pair<std::string, ExitCode>> failures;
      const auto families = parse_model_families(compare_opts.models);
      FitCache cache;
      for (std::size_t m = 0; m < families.size(); ++m) {
        RandomModel model{families[m], one_sided ? Sidedness::kOne : Sidedness::kTwo,
                          !monte_carlo};
        McConfig cfg;
        cfg.samples = compare_opts.samples.value_or(kDefaultSamples);
        cfg.seed = derive_seed(r.seed, {0, m});
        cfg.workers = r.workers;
        try {
          t.rows.push_back(record_cells(model, kind, adjusted_index(a, b, model, kind, cfg, &cache)));
        } catch (const Error& e) {
          failures.emplace_back(model.label() + ": " + e.what(), exit_code_for(e));
        }
      }
      write(t, compare_opts);
      return report_failures(failures, err);
    }

    if (toy->parsed()) {
      const auto r = resolve(toy_opts, env, err);
      const auto data = toy_allocations();
      if (!toy_dir.empty()) {
        fs::create_directories(toy_dir);
        for (const auto& a : data.allocations) write_csv(fs::path(toy_dir) / (a.name + ".csv"), a.matrix);
      }
      const IndexKind kind = parse_index_kind(toy_opts.kind);
      std::vector<std::pair<MembershipMatrix, MembershipMatrix>> pairs_in;
      for (const auto& c : data.comparisons) pairs_in.emplace_back(data.first(c), data.second(c));
      const auto models = as_models(parse_model_families(toy_opts.models), Sidedness::kTwo);
      McConfig cfg;
      cfg.samples = toy_opts.samples.value_or(kDefaultSamples);
      cfg.seed = r.seed;
      cfg.workers = r.workers;
      Table t;
      t.columns = {"comparison", "first", "second"};
      for (auto& c : record_columns()) t.columns.push_back(c);
      t.columns.push_back("error");
      for (const auto& cell : adjusted_batch(pairs_in, models, kind, cfg)) {
        const auto& c = data.comparisons[cell.pair_index];
        std::vector<Cell> row{std::int64_t{c.id}, data.allocations[c.first].name,
                              data.allocations[c.second].name};
        for (auto& x : record_cells(models[cell.model_index], kind, cell.result)) row.push_back(std::move(x));
        row.push_back(cell.error);
        t.rows.push_back(std::move(row));
      }
      write(t, toy_opts);
      return kExitOk;
    }

    if (bench->parsed()) {
      std::ifstream grid_file(grid_path);
      if (!grid_file) throw ValidationError("cannot open grid file " + grid_path);
      BenchmarkSpec spec = parse_benchmark_spec(grid_file);
      Common opts = bench_opts;
      if (!opts.seed && !env.seed && spec.seed) opts.seed = std::to_string(spec.seed);
      const auto r = resolve(opts, env, err);
      spec.seed = r.seed;
      spec.workers = r.workers;
      if (bench->count("--models")) spec.models = parse_model_families(bench_opts.models);
      if (bench->count("--kind")) spec.kind = parse_index_kind(bench_opts.kind);
      if (bench_opts.samples) spec.samples = *bench_opts.samples;
      spec = scaled(std::move(spec), bench_scale);

      const auto rows = run_benchmark(spec);
      write(benchmark_table(rows, spec.kind), bench_opts);
      if (!manifest_path.empty()) {
        std::size_t failed = 0;
        for (const auto& row : rows) failed += row.error.empty() ? 0 : 1;
        ordered_json m;
        m["tool"] = "fuzzyrand benchmark";
        m["version"] = "0.1.0";
        m["grid"] = {{"n_clusters", spec.grid.n_clusters},
                     {"n_points", spec.grid.n_points},
                     {"imbalance", spec.grid.imbalance},
                     {"precision", spec.grid.precision},
                     {"randomize_rate", spec.grid.randomize_rate},
                     {"sided", to_string(spec.grid.sided)}};
        std::vector<std::string> names;
        for (auto f : spec.models) names.emplace_back(to_string(f));
        m["models"] = names;
        m["kind"] = to_string(spec.kind);
        m["replicates"] = spec.replicates;
        m["samples"] = spec.samples;
        m["seed"] = spec.seed;
        m["workers"] = spec.workers;
        m["scale"] = bench_scale;
        m["generator"] = Xoshiro256pp::kName;
        // Replacement Dirichlet total precision scales with the cluster count.
        m["precision_normalization"] = "precision * n_clusters";
        m["settings"] = spec.grid.size();
        m["rows"] = rows.size();
        m["failed_rows"] = failed;
        std::ofstream mf(manifest_path);
        if (!mf) throw ValidationError("cannot open manifest file " + manifest_path);
        mf << m.dump(2) << '\n';
      }
      return kExitOk;
    }

    if (ea->parsed()) {
      const auto r = resolve(ea_opts, env, err);
      ErrorAnalysisSpec spec;
      if (!ea_grid.empty()) {
        std::ifstream grid_file(ea_grid);
        if (!grid_file) throw ValidationError("cannot open grid file " + ea_grid);
        spec.grid = parse_benchmark_spec(grid_file).grid;
      }
      spec.grid.sided = Sidedness::kTwo;
      spec.models = parse_model_families(ea_opts.models);
      spec.kind = parse_index_kind(ea_opts.kind);
      spec.samples = ea_opts.samples.value_or(kDefaultSamples);
      spec.seed = r.seed;
      spec.workers = r.workers;
      spec.drop_all_negative = !keep_negative;
      if (!(ea_scale > 0.0 && ea_scale <= 1.0)) throw UsageError("--scale must lie in (0, 1]");
      spec.reps = scale_count(reps, ea_scale);
      spec.pairs = scale_count(pairs, ea_scale);
      spec.samples = scale_count(spec.samples, ea_scale);
      auto& g = spec.grid;
      g.n_clusters = thin(g.n_clusters, ea_scale);
      g.n_points = thin(g.n_points, ea_scale);
      g.imbalance = thin(g.imbalance, ea_scale);
      g.precision = thin(g.precision, ea_scale);
      g.randomize_rate = thin(g.randomize_rate, ea_scale);
      write(error_analysis_table(run_error_analysis(spec)), ea_opts);
      return kExitOk;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

}  // namespace fuzzyrand::cli
