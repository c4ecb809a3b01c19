#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "fuzzyrand/dirichlet.hpp"
#include "fuzzyrand/indices.hpp"
#include "fuzzyrand/membership.hpp"

namespace fuzzyrand {

inline constexpr std::uint64_t kDefaultSamples = 10'000'000;
/// Largest N for which one-sided estimation may sum over every observed pair per draw.
inline constexpr std::size_t kMaxExhaustivePoints = 512;

/// Monte-Carlo settings. Results are a deterministic function of
/// (inputs, samples, seed, workers): worker w consumes substream w of `seed`,
/// and partial sums are combined in worker order.
struct McConfig {
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  /// One-sided only: average over all observed pairs per draw instead of sampling one.
  bool exhaustive_pairs = false;
};

struct ExpectationEstimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples); 0 for closed forms
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::string_view method;     // "two-sided", "one-sided", "perm-resampling", "closed-form"
  std::string_view generator;  // RNG name, empty for closed forms
};

/// E over i.i.d. pairs z11, z12 ~ d1 and z21, z22 ~ d2 of conc(a(z11, z12), a(z21, z22)).
ExpectationEstimate expected_conc_two_sided(const ModelDistribution& d1,
                                            const ModelDistribution& d2, IndexKind kind,
                                            const McConfig& cfg);

/// Mean over observed pairs p of c2 of E over z11, z12 ~ d1 of conc(a(z11, z12), a_c2(p)).
ExpectationEstimate expected_conc_one_sided(const ModelDistribution& d1, const MembershipMatrix& c2,
                                            IndexKind kind, const McConfig& cfg);

/// Permutation model for hard or fuzzy inputs: one uniformly drawn pair from
/// each clustering, drawn independently.
ExpectationEstimate expected_conc_perm(const MembershipMatrix& c1, const MembershipMatrix& c2,
                                       IndexKind kind, const McConfig& cfg);

}  // namespace fuzzyrand
