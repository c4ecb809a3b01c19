#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "fuzzyrand/membership.hpp"

namespace fuzzyrand {

/// Agreement/concordance pair.
///
/// kNdc: l1 agreement 1 - |u - v|_1 / 2 with concordance 1 - |a1 - a2| (reflexive).
/// kBrouwer: cosine agreement with concordance a1 a2 + (1 - a1)(1 - a2) (not reflexive).
enum class IndexKind { kNdc, kBrouwer };

std::string_view to_string(IndexKind kind);
/// Parses "ndc" / "brouwer" (case-insensitive); throws UsageError otherwise.
IndexKind parse_index_kind(std::string_view text);

double agreement_ndc(std::span<const double> u, std::span<const double> v);
double agreement_brouwer(std::span<const double> u, std::span<const double> v);
double agreement(std::span<const double> u, std::span<const double> v, IndexKind kind);

inline double concordance(double a1, double a2, IndexKind kind) noexcept {
  if (kind == IndexKind::kNdc) return 1.0 - (a1 > a2 ? a1 - a2 : a2 - a1);
  return a1 * a2 + (1.0 - a1) * (1.0 - a2);
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Mean concordance over all N(N-1)/2 unordered pairs.
///
/// Both inputs must be HARD or FUZZY with equal N >= 2; the cluster counts may
/// differ. `workers` > 1 splits the outer loop into contiguous row blocks whose
/// compensated partial sums are combined in block order.
double raw_index(const MembershipMatrix& c1, const MembershipMatrix& c2, IndexKind kind,
                 std::size_t workers = 1);

/// Pair-counting Rand index of two label vectors: (|A| + |D|) / C(N, 2).
double rand_index_labels(std::span<const std::size_t> l1, std::span<const std::size_t> l2);

}  // namespace fuzzyrand
