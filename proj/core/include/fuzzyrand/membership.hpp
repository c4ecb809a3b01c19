#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace fuzzyrand {

/// Tolerance on row sums for a matrix to count as fuzzy (rows on the simplex).
inline constexpr double kFuzzyRowSumTolerance = 1e-9;
/// Tolerance on entries of a one-hot row.
inline constexpr double kHardEntryTolerance = 1e-12;

enum class Classification { kHard, kFuzzy, kPossibilistic };

std::string_view to_string(Classification c);

/// N x n cluster allocation: row i is the membership vector of point i.
///
/// Stored row-major. Entries are validated on construction (finite, >= 0),
/// after which the matrix is immutable.
class MembershipMatrix {
 public:
  MembershipMatrix() = default;
  MembershipMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  /// Builds a matrix from nested rows. All rows must have equal length.
  static MembershipMatrix from_rows(const std::vector<std::vector<double>>& rows);
  /// One-hot matrix from 0-based labels; `cols` defaults to max label + 1.
  static MembershipMatrix from_labels(std::span<const std::size_t> labels, std::size_t cols = 0);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Column means, the cluster-proportion vector for hard or fuzzy inputs.
  std::vector<double> column_means() const;

  /// Stable content hash (dimensions + bit patterns), used as a cache key.
  std::size_t content_hash() const noexcept;

  friend bool operator==(const MembershipMatrix&, const MembershipMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

bool is_hard_row(std::span<const double> row);
bool is_simplex_row(std::span<const double> row);

/// HARD if every row is one-hot, else FUZZY if every row sums to 1, else POSSIBILISTIC.
Classification classify(const MembershipMatrix& m);

/// Throws UsageError unless `m` is HARD or FUZZY. `what` names the argument in the message.
void require_fuzzy_or_hard(const MembershipMatrix& m, std::string_view what);

/// Replaces each row by the indicator of its largest entry (ties -> lowest column).
MembershipMatrix harden(const MembershipMatrix& m);

/// Argmax label per row, with the same tie rule as harden().
std::vector<std::size_t> argmax_labels(const MembershipMatrix& m);

MembershipMatrix read_csv(std::istream& in, bool has_header);
MembershipMatrix read_csv(const std::filesystem::path& path, bool has_header);

/// Writes with 17 significant digits so values round-trip exactly.
void write_csv(std::ostream& out, const MembershipMatrix& m, bool with_header = false);
void write_csv(const std::filesystem::path& path, const MembershipMatrix& m,
               bool with_header = false);

}  // namespace fuzzyrand
