#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fuzzyrand/membership.hpp"

namespace fuzzyrand {

/// Cluster sizes of a hard clustering; N = sum of counts, P = C(N, 2).
struct ClusterSizes {
  std::vector<std::size_t> counts;

  std::size_t points() const noexcept;
  double pairs() const noexcept;
  /// Number of co-clustered pairs: sum_i C(c_i, 2).
  double same_cluster_pairs() const noexcept;

  /// Sizes of a HARD matrix (column sums). Throws UsageError for non-hard input.
  static ClusterSizes of(const MembershipMatrix& m);
};

/// Cluster-proportion vector on the simplex.
struct ProportionVector {
  std::vector<double> p;

  /// Validates nonnegativity and sum 1 (within 1e-9).
  static ProportionVector from(std::vector<double> p);
  static ProportionVector of(const ClusterSizes& sizes);
  /// Sum of squared proportions: the probability two i.i.d. labels coincide.
  double collision_probability() const noexcept;
};

/// Permutation-model expectation [T1 T2 + (P - T1)(P - T2)] / P^2.
double expected_ri_perm(const ClusterSizes& s1, const ClusterSizes& s2);

/// Categorical-model expectation q1 q2 + (1 - q1)(1 - q2) with q = sum p_i^2.
double expected_ri_cat(const ProportionVector& p1, const ProportionVector& p2);

/// Largest N accepted by the exact Num expectation.
inline constexpr std::size_t kMaxExactNumPoints = 5000;

/// Num-model expectation: exact Stirling ratios when `exact`, else 1/(n1 n2) + (1 - 1/n1)(1 - 1/n2).
double expected_ri_num(std::size_t n1, std::size_t n2, std::size_t points, bool exact);

/// All-model expectation r^2 + (1 - r)^2, r = B_{N-1} / B_N.
double expected_ri_all(std::size_t points);

/// log S(N, k), Stirling numbers of the second kind, for every k in [0, kmax].
/// Entries with S = 0 are -infinity.
std::vector<double> log_stirling2_row(std::size_t points, std::size_t kmax);

/// S(N - 1, k) / S(N, k); requires 1 <= k <= N.
double stirling2_ratio(std::size_t points, std::size_t k);

/// B_{N-1} / B_N for N >= 1 (B_0 = 1).
double bell_ratio(std::size_t points);

}  // namespace fuzzyrand
