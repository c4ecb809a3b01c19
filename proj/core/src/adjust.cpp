#include "fuzzyrand/adjust.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/hard_models.hpp"
#include "fuzzyrand/rng.hpp"

namespace fuzzyrand {

bool Provenance::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

double adjust_for_chance(double raw, double expected, double max_index) {
  const double denominator = max_index - expected;
  if (std::abs(denominator) < kDegenerateDenominator) {
    throw NumericalError("adjustment undefined: expected index equals its maximum (" +
                         std::to_string(expected) + ")");
  }
  return (raw - expected) / denominator;
}

FitResult FitCache::get(const MembershipMatrix& m, DirichletModel model) {
  const auto key = std::tuple{m.content_hash(), m.rows(), m.cols(), model};
  {
    std::lock_guard lock(mutex_);
    if (auto it = fits_.find(key); it != fits_.end()) return it->second;
  }
  FitResult fit = build_model(m, model);
  std::lock_guard lock(mutex_);
  return fits_.emplace(key, std::move(fit)).first->second;
}

std::size_t FitCache::size() const {
  std::lock_guard lock(mutex_);
  return fits_.size();
}

namespace {

std::size_t nonempty_clusters(const ClusterSizes& sizes) {
  return static_cast<std::size_t>(
      std::count_if(sizes.counts.begin(), sizes.counts.end(), [](std::size_t c) { return c > 0; }));
}

void note_fit(const FitResult& fit, Provenance& prov) {
  prov.fitted.push_back(fit.model.describe());
  auto flag = [&prov](const char* f) {
    if (!prov.has_flag(f)) prov.flags.emplace_back(f);
  };
  if (fit.hard_input) flag("hard-input-categorical");
  if (fit.degenerate) flag("degenerate-categorical");
  if (fit.capped) flag("precision-capped");
}

void closed_form(Provenance& prov, double& expected, double value) {
  expected = value;
  prov.method = "closed-form";
  prov.samples = 0;
}

void from_estimate(Provenance& prov, double& expected, double& std_error,
                   const ExpectationEstimate& est) {
  expected = est.value;
  std_error = est.std_error;
  prov.method = std::string(est.method);
  prov.generator = std::string(est.generator);
  prov.samples = est.samples;
}

}  // namespace

AdjustedResult adjusted_index(const MembershipMatrix& c1, const MembershipMatrix& c2,
                              const RandomModel& model, IndexKind kind, const McConfig& cfg,
                              FitCache* cache) {
  if (c1.rows() != c2.rows()) {
    throw ValidationError("clusterings cover " + std::to_string(c1.rows()) + " and " +
                          std::to_string(c2.rows()) + " points");
  }
  const bool hard1 = classify(c1) == Classification::kHard;
  const bool hard2 = classify(c2) == Classification::kHard;
  const bool both_hard = hard1 && hard2;

  AdjustedResult out;
  out.raw = raw_index(c1, c2, kind, cfg.workers);
  Provenance& prov = out.provenance;
  prov.model = model;
  prov.kind = kind;
  prov.seed = cfg.seed;
  if (kind == IndexKind::kBrouwer && !both_hard) prov.flags.emplace_back("non-reflexive");

  const bool one_sided = model.sided == Sidedness::kOne;
  switch (model.family) {
    case ModelFamily::kPerm:
      if (one_sided) prov.flags.emplace_back("one-sided-perm-equals-two-sided");
      if (both_hard && model.exact_hint) {
        closed_form(prov, out.expected,
                    expected_ri_perm(ClusterSizes::of(c1), ClusterSizes::of(c2)));
      } else {
        from_estimate(prov, out.expected, out.std_error, expected_conc_perm(c1, c2, kind, cfg));
      }
      break;

    case ModelFamily::kCat:
    case ModelFamily::kNum:
    case ModelFamily::kAll: {
      if (one_sided) {
        throw UsageError(std::string(to_string(model.family)) +
                         " model is only available two-sided");
      }
      if (!both_hard) {
        throw UsageError(std::string(to_string(model.family)) +
                         " model requires hard clusterings; use fit, sym or flat for fuzzy input");
      }
      const auto s1 = ClusterSizes::of(c1);
      const auto s2 = ClusterSizes::of(c2);
      double value = 0.0;
      if (model.family == ModelFamily::kCat) {
        value = expected_ri_cat(ProportionVector::of(s1), ProportionVector::of(s2));
      } else if (model.family == ModelFamily::kAll) {
        value = expected_ri_all(c1.rows());
      } else {
        const bool exact = model.exact_hint && c1.rows() <= kMaxExactNumPoints;
        if (model.exact_hint && !exact) prov.flags.emplace_back("num-approximation");
        value = expected_ri_num(nonempty_clusters(s1), nonempty_clusters(s2), c1.rows(), exact);
      }
      closed_form(prov, out.expected, value);
      break;
    }

    case ModelFamily::kFit:
    case ModelFamily::kSym:
    case ModelFamily::kFlat: {
      const DirichletModel dm = *as_dirichlet_model(model.family);
      FitCache local;
      FitCache& fits = cache ? *cache : local;
      const FitResult f1 = fits.get(c1, dm);
      note_fit(f1, prov);
      if (one_sided) {
        prov.fitted.push_back("observed");
        from_estimate(prov, out.expected, out.std_error,
                      expected_conc_one_sided(f1.model, c2, kind, cfg));
        break;
      }
      const FitResult f2 = fits.get(c2, dm);
      note_fit(f2, prov);
      if (model.exact_hint && f1.model.is_categorical() && f2.model.is_categorical()) {
        // One-hot draws give 0/1 agreements under either kind.
        closed_form(prov, out.expected,
                    expected_ri_cat(f1.model.categorical().p, f2.model.categorical().p));
      } else {
        from_estimate(prov, out.expected, out.std_error,
                      expected_conc_two_sided(f1.model, f2.model, kind, cfg));
      }
      break;
    }
  }

  out.adjusted = adjust_for_chance(out.raw, out.expected, out.max_index);
  const double denom = out.max_index - out.expected;
  out.adjusted_std_error = std::abs(out.raw - out.max_index) / (denom * denom) * out.std_error;
  return out;
}

std::vector<BatchCell> adjusted_batch(
    const std::vector<std::pair<MembershipMatrix, MembershipMatrix>>& pairs,
    const std::vector<RandomModel>& models, IndexKind kind, const McConfig& cfg) {
  std::vector<BatchCell> cells;
  cells.reserve(pairs.size() * models.size());
  FitCache cache;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t m = 0; m < models.size(); ++m) {
      BatchCell cell{p, m, std::nullopt, {}};
      McConfig cell_cfg = cfg;
      cell_cfg.seed = derive_seed(cfg.seed, {p, m});
      try {
        cell.result = adjusted_index(pairs[p].first, pairs[p].second, models[m], kind, cell_cfg,
                                     &cache);
      } catch (const Error& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace fuzzyrand
