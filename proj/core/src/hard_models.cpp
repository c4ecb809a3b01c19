#include "fuzzyrand/hard_models.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <utility>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/rng.hpp"

namespace fuzzyrand {

namespace {

double choose2(double c) { return 0.5 * c * (c - 1.0); }

double log_add_exp(double a, double b) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a)) : b + std::log1p(std::exp(a - b));
}

}  // namespace

std::size_t ClusterSizes::points() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double ClusterSizes::pairs() const noexcept { return choose2(static_cast<double>(points())); }

double ClusterSizes::same_cluster_pairs() const noexcept {
  double total = 0.0;
  for (std::size_t c : counts) total += choose2(static_cast<double>(c));
  return total;
}

ClusterSizes ClusterSizes::of(const MembershipMatrix& m) {
  if (classify(m) != Classification::kHard) {
    throw UsageError("cluster sizes are only defined for hard clusterings");
  }
  ClusterSizes sizes{std::vector<std::size_t>(m.cols(), 0)};
  for (std::size_t label : argmax_labels(m)) ++sizes.counts[label];
  return sizes;
}

ProportionVector ProportionVector::from(std::vector<double> p) {
  double sum = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0) throw ValidationError("proportion vector: negative entry");
    sum += x;
  }
  if (p.empty() || std::abs(sum - 1.0) > kFuzzyRowSumTolerance) {
    throw ValidationError("proportion vector: entries must sum to 1");
  }
  return ProportionVector{std::move(p)};
}

ProportionVector ProportionVector::of(const ClusterSizes& sizes) {
  const double total = static_cast<double>(sizes.points());
  if (total <= 0.0) throw ValidationError("proportion vector: no points");
  std::vector<double> p;
  p.reserve(sizes.counts.size());
  for (std::size_t c : sizes.counts) p.push_back(static_cast<double>(c) / total);
  return ProportionVector{std::move(p)};
}

double ProportionVector::collision_probability() const noexcept {
  double q = 0.0;
  for (double x : p) q += x * x;
  return q;
}

double expected_ri_perm(const ClusterSizes& s1, const ClusterSizes& s2) {
  const std::size_t n = s1.points();
  if (n != s2.points()) {
    throw ValidationError("permutation model: clusterings cover " + std::to_string(n) + " and " +
                          std::to_string(s2.points()) + " points");
  }
  if (n < 2) throw ValidationError("permutation model: at least two points are required");
  const double pairs = s1.pairs();
  const double t1 = s1.same_cluster_pairs();
  const double t2 = s2.same_cluster_pairs();
  return (t1 * t2 + (pairs - t1) * (pairs - t2)) / (pairs * pairs);
}

double expected_ri_cat(const ProportionVector& p1, const ProportionVector& p2) {
  const double q1 = p1.collision_probability();
  const double q2 = p2.collision_probability();
  return q1 * q2 + (1.0 - q1) * (1.0 - q2);
}

std::vector<double> log_stirling2_row(std::size_t points, std::size_t kmax) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> row(kmax + 1, kNegInf);
  row[0] = 0.0;  // S(0, 0) = 1
  for (std::size_t m = 1; m <= points; ++m) {
    const std::size_t top = std::min(m, kmax);
    for (std::size_t k = top; k >= 1; --k) {
      row[k] = log_add_exp(std::log(static_cast<double>(k)) + row[k], row[k - 1]);
    }
    row[0] = kNegInf;
  }
  return row;
}

double stirling2_ratio(std::size_t points, std::size_t k) {
  if (k < 1 || k > points) {
    throw ValidationError("stirling ratio: need 1 <= k <= N (k=" + std::to_string(k) +
                          ", N=" + std::to_string(points) + ")");
  }
  if (k == points) return 0.0;  // S(N-1, N) = 0
  static std::mutex mutex;
  static std::map<std::pair<std::size_t, std::size_t>, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({points, k}); it != cache.end()) return it->second;
  }
  const auto prev = log_stirling2_row(points - 1, k);
  // S(N, k) = k S(N-1, k) + S(N-1, k-1)
  const double log_next = log_add_exp(std::log(static_cast<double>(k)) + prev[k], prev[k - 1]);
  const double ratio = std::exp(prev[k] - log_next);
  std::lock_guard lock(mutex);
  cache.emplace(std::pair{points, k}, ratio);
  return ratio;
}

double expected_ri_num(std::size_t n1, std::size_t n2, std::size_t points, bool exact) {
  if (n1 < 1 || n2 < 1 || n1 > points || n2 > points) {
    throw ValidationError("num model: cluster counts must lie in [1, N]");
  }
  double r1 = 0.0;
  double r2 = 0.0;
  if (exact) {
    if (points > kMaxExactNumPoints) {
      throw CapabilityError("num model: exact Stirling ratios are limited to N <= " +
                            std::to_string(kMaxExactNumPoints) + "; use the approximation");
    }
    r1 = stirling2_ratio(points, n1);
    r2 = stirling2_ratio(points, n2);
  } else {
    r1 = 1.0 / static_cast<double>(n1);
    r2 = 1.0 / static_cast<double>(n2);
  }
  return r1 * r2 + (1.0 - r1) * (1.0 - r2);
}

double bell_ratio(std::size_t points) {
  if (points < 1) throw ValidationError("bell ratio: N must be >= 1");
  constexpr std::size_t kExactLimit = 25;
  if (points <= kExactLimit) {
    // Bell triangle, row m starts with B_m.
    std::vector<UInt128> row{1};
    UInt128 prev_bell = 1;
    for (std::size_t m = 1; m <= points; ++m) {
      std::vector<UInt128> next{row.back()};
      for (auto x : row) next.push_back(next.back() + x);
      prev_bell = row.front();
      row = std::move(next);
    }
    return static_cast<double>(prev_bell) / static_cast<double>(row.front());
  }
  static std::mutex mutex;
  static std::map<std::size_t, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(points); it != cache.end()) return it->second;
  }
  std::vector<double> row{0.0};
  double log_prev_bell = 0.0;
  for (std::size_t m = 1; m <= points; ++m) {
    std::vector<double> next;
    next.reserve(row.size() + 1);
    next.push_back(row.back());
    for (double x : row) next.push_back(log_add_exp(next.back(), x));
    log_prev_bell = row.front();
    row = std::move(next);
  }
  const double ratio = std::exp(log_prev_bell - row.front());
  std::lock_guard lock(mutex);
  cache.emplace(points, ratio);
  return ratio;
}

double expected_ri_all(std::size_t points) {
  if (points < 2) throw ValidationError("all model: at least two points are required");
  const double r = bell_ratio(points);
  return r * r + (1.0 - r) * (1.0 - r);
}

}  // namespace fuzzyrand
