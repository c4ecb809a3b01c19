#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyrand/dirichlet.hpp"
#include "fuzzyrand/expectation.hpp"
#include "fuzzyrand/indices.hpp"
#include "fuzzyrand/membership.hpp"
#include "fuzzyrand/random_model.hpp"

namespace fuzzyrand {

/// |1 - E[RI]| below this makes the adjustment undefined.
inline constexpr double kDegenerateDenominator = 1e-9;

struct Provenance {
  RandomModel model;
  IndexKind kind = IndexKind::kNdc;
  std::uint64_t samples = 0;  // 0 for closed forms
  std::uint64_t seed = 0;
  std::string method;
  std::string generator;
  std::vector<std::string> fitted;  // distributions used, first then second clustering
  std::vector<std::string> flags;   // degenerate-path and interpretation markers

  bool has_flag(std::string_view flag) const;
};

/// (raw - expected) / (max_index - expected) with max_index = 1.
struct AdjustedResult {
  double raw = 0.0;
  double expected = 0.0;
  double adjusted = 0.0;
  double max_index = 1.0;
  double std_error = 0.0;           // of `expected`
  double adjusted_std_error = 0.0;  // propagated to `adjusted`
  Provenance provenance;
};

/// Assembles the adjustment. Throws NumericalError on a vanishing denominator.
double adjust_for_chance(double raw, double expected, double max_index = 1.0);

/// Thread-safe cache of fitted model distributions keyed by matrix content and model.
class FitCache {
 public:
  FitResult get(const MembershipMatrix& m, DirichletModel model);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, DirichletModel>, FitResult> fits_;
};

/// Adjusted index of c1 against c2.
///
/// Hard closed forms are used when both inputs are hard and model.exact_hint
/// is set (PERM, and FIT/SYM whose fits collapse to categoricals); CAT, NUM and
/// ALL always are closed forms. Everything else goes through the Monte-Carlo
/// engine. One-sided models randomize c1 and hold c2 fixed.
AdjustedResult adjusted_index(const MembershipMatrix& c1, const MembershipMatrix& c2,
                              const RandomModel& model, IndexKind kind, const McConfig& cfg,
                              FitCache* cache = nullptr);

struct BatchCell {
  std::size_t pair_index = 0;
  std::size_t model_index = 0;
  std::optional<AdjustedResult> result;
  std::string error;  // empty on success
};

/// One cell per (pair, model), pair-major. Cell seeds derive from
/// (cfg.seed, pair index, model index), so results do not depend on order.
std::vector<BatchCell> adjusted_batch(
    const std::vector<std::pair<MembershipMatrix, MembershipMatrix>>& pairs,
    const std::vector<RandomModel>& models, IndexKind kind, const McConfig& cfg);

}  // namespace fuzzyrand
