#include "fuzzyrand/indices.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "fuzzyrand/errors.hpp"

namespace fuzzyrand {

std::string_view to_string(IndexKind kind) {
  return kind == IndexKind::kNdc ? "ndc" : "brouwer";
}

IndexKind parse_index_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ndc") return IndexKind::kNdc;
  if (lower == "brouwer") return IndexKind::kBrouwer;
  throw UsageError("unknown index kind '" + std::string(text) + "' (expected ndc or brouwer)");
}

namespace {

void require_same_dimension(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ValidationError("agreement: membership vectors have dimensions " +
                          std::to_string(u.size()) + " and " + std::to_string(v.size()));
  }
}

}  // namespace

double agreement_ndc(std::span<const double> u, std::span<const double> v) {
  require_same_dimension(u, v);
  double l1 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) l1 += std::abs(u[k] - v[k]);
  return std::clamp(1.0 - 0.5 * l1, 0.0, 1.0);
}

double agreement_brouwer(std::span<const double> u, std::span<const double> v) {
  require_same_dimension(u, v);
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    dot += u[k] * v[k];
    uu += u[k] * u[k];
    vv += v[k] * v[k];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw ValidationError("brouwer agreement is undefined for a zero membership vector");
  }
  return std::clamp(dot / std::sqrt(uu * vv), 0.0, 1.0);
}

double agreement(std::span<const double> u, std::span<const double> v, IndexKind kind) {
  return kind == IndexKind::kNdc ? agreement_ndc(u, v) : agreement_brouwer(u, v);
}

namespace {

// Sum of concordances over pairs (i, j), i in [begin, end), j > i.
CompensatedSum concordance_block(const MembershipMatrix& c1, const MembershipMatrix& c2,
                                 IndexKind kind, std::size_t begin, std::size_t end) {
  CompensatedSum sum;
  const std::size_t n = c1.rows();
  for (std::size_t i = begin; i < end; ++i) {
    const auto u1 = c1.row(i);
    const auto u2 = c2.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a1 = agreement(u1, c1.row(j), kind);
      const double a2 = agreement(u2, c2.row(j), kind);
      sum.add(concordance(a1, a2, kind));
    }
  }
  return sum;
}

}  // namespace

double raw_index(const MembershipMatrix& c1, const MembershipMatrix& c2, IndexKind kind,
                 std::size_t workers) {
  if (c1.rows() != c2.rows()) {
    throw ValidationError("raw index: clusterings cover " + std::to_string(c1.rows()) + " and " +
                          std::to_string(c2.rows()) + " points");
  }
  if (c1.rows() < 2) throw ValidationError("raw index: at least two points are required");
  require_fuzzy_or_hard(c1, "raw index (first clustering)");
  require_fuzzy_or_hard(c2, "raw index (second clustering)");

  const std::size_t n = c1.rows();
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  workers = std::clamp<std::size_t>(workers, 1, n - 1);
  if (workers == 1) return concordance_block(c1, c2, kind, 0, n).value() / pairs;

  // Balance blocks by pair count: row i contributes n - 1 - i pairs.
  std::vector<std::size_t> bounds{0};
  const double per_worker = pairs / static_cast<double>(workers);
  double acc = 0.0;
  for (std::size_t i = 0; i < n && bounds.size() < workers; ++i) {
    acc += static_cast<double>(n - 1 - i);
    if (acc >= per_worker * static_cast<double>(bounds.size())) bounds.push_back(i + 1);
  }
  bounds.push_back(n);

  std::vector<CompensatedSum> partial(bounds.size() - 1);
  std::vector<std::thread> threads;
  threads.reserve(partial.size());
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    threads.emplace_back([&, b] {
      partial[b] = concordance_block(c1, c2, kind, bounds[b], bounds[b + 1]);
    });
  }
  for (auto& t : threads) t.join();
  CompensatedSum total;
  for (const auto& p : partial) total.add(p);
  return total.value() / pairs;
}

double rand_index_labels(std::span<const std::size_t> l1, std::span<const std::size_t> l2) {
  if (l1.size() != l2.size()) throw ValidationError("rand index: label vectors differ in length");
  if (l1.size() < 2) throw ValidationError("rand index: at least two points are required");
  std::size_t concordant = 0;
  std::size_t total = 0;
  for (std::size_t i = 0; i < l1.size(); ++i) {
    for (std::size_t j = i + 1; j < l1.size(); ++j) {
      const bool same1 = l1[i] == l1[j];
      const bool same2 = l2[i] == l2[j];
      concordant += same1 == same2 ? 1 : 0;
      ++total;
    }
  }
  return static_cast<double>(concordant) / static_cast<double>(total);
}

}  // namespace fuzzyrand
