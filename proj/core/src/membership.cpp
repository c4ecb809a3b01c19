#include "fuzzyrand/membership.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fuzzyrand/errors.hpp"

namespace fuzzyrand {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kHard:
      return "hard";
    case Classification::kFuzzy:
      return "fuzzy";
    case Classification::kPossibilistic:
      return "possibilistic";
  }
  return "unknown";
}

MembershipMatrix::MembershipMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ * cols_ != values_.size()) {
    throw ValidationError("membership matrix: expected " + std::to_string(rows_ * cols_) +
                          " values, got " + std::to_string(values_.size()));
  }
  if (rows_ > 0 && cols_ == 0) {
    throw ValidationError("membership matrix: at least one cluster column is required");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const double v = values_[i * cols_ + j];
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << "membership matrix: entry at row " << i + 1 << ", column " << j + 1
            << " must be finite and >= 0 (got " << v << ")";
        throw ValidationError(msg.str());
      }
    }
  }
}

MembershipMatrix MembershipMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw ValidationError("membership matrix: row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].size()) + " columns, expected " +
                            std::to_string(cols));
    }
    values.insert(values.end(), rows[i].begin(), rows[i].end());
  }
  return MembershipMatrix(rows.size(), cols, std::move(values));
}

MembershipMatrix MembershipMatrix::from_labels(std::span<const std::size_t> labels,
                                               std::size_t cols) {
  if (labels.empty()) return {};
  const std::size_t needed = *std::max_element(labels.begin(), labels.end()) + 1;
  if (cols == 0) cols = needed;
  if (cols < needed) {
    throw ValidationError("membership matrix: label " + std::to_string(needed - 1) +
                          " out of range for " + std::to_string(cols) + " clusters");
  }
  std::vector<double> values(labels.size() * cols, 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) values[i * cols + labels[i]] = 1.0;
  return MembershipMatrix(labels.size(), cols, std::move(values));
}

std::vector<double> MembershipMatrix::column_means() const {
  std::vector<double> means(cols_, 0.0);
  if (rows_ == 0) return means;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) means[j] += values_[i * cols_ + j];
  }
  for (double& m : means) m /= static_cast<double>(rows_);
  return means;
}

std::size_t MembershipMatrix::content_hash() const noexcept {
  // FNV-1a over dimensions and raw bits.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(rows_);
  mix(cols_);
  for (double v : values_) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(bits);
  }
  return static_cast<std::size_t>(h);
}

bool is_hard_row(std::span<const double> row) {
  std::size_t ones = 0;
  for (double v : row) {
    if (std::abs(v - 1.0) <= kHardEntryTolerance) {
      ++ones;
    } else if (std::abs(v) > kHardEntryTolerance) {
      return false;
    }
  }
  return ones == 1;
}

bool is_simplex_row(std::span<const double> row) {
  double sum = 0.0;
  for (double v : row) sum += v;
  return std::abs(sum - 1.0) <= kFuzzyRowSumTolerance;
}

Classification classify(const MembershipMatrix& m) {
  bool hard = true;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    if (hard && is_hard_row(r)) continue;
    hard = false;
    if (!is_simplex_row(r)) return Classification::kPossibilistic;
  }
  return hard ? Classification::kHard : Classification::kFuzzy;
}

void require_fuzzy_or_hard(const MembershipMatrix& m, std::string_view what) {
  if (classify(m) == Classification::kPossibilistic) {
    throw UsageError(std::string(what) +
                     ": possibilistic allocations are not supported here; rows must sum to 1");
  }
}

std::vector<std::size_t> argmax_labels(const MembershipMatrix& m) {
  std::vector<std::size_t> labels(m.rows(), 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    // max_element returns the first maximum, which is the lowest column on ties.
    labels[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return labels;
}

MembershipMatrix harden(const MembershipMatrix& m) {
  if (m.empty()) return m;
  const auto labels = argmax_labels(m);
  return MembershipMatrix::from_labels(labels, m.cols());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line, std::size_t column) {
  const auto text = trim(field);
  double value = 0.0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("csv: field " + std::to_string(column + 1) + " is not a number: '" +
                         std::string(text) + "'",
                     line);
  }
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError("csv: field " + std::to_string(column + 1) + " must be finite and >= 0 (got '" +
                          std::string(text) + "') (line " + std::to_string(line) + ")");
  }
  return value;
}

}  // namespace

MembershipMatrix read_csv(std::istream& in, bool has_header) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::vector<double> values;
  bool header_pending = has_header;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (trim(view).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = view.find(',', start);
      const auto field = view.substr(start, comma == std::string_view::npos ? comma : comma - start);
      values.push_back(parse_field(field, line_no, count));
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError("csv: ragged row with " + std::to_string(count) + " fields, expected " +
                           std::to_string(cols),
                       line_no);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("csv: no data rows", line_no);
  try {
    return MembershipMatrix(rows, cols, std::move(values));
  } catch (const ValidationError& e) {
    throw ParseError(std::string("csv: ") + e.what(), line_no);
  }
}

MembershipMatrix read_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw ParseError("csv: cannot open '" + path.string() + "'", 0);
  return read_csv(in, has_header);
}

void write_csv(std::ostream& out, const MembershipMatrix& m, bool with_header) {
  if (with_header) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << 'c' << (j + 1);
    out << '\n';
  }
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  out.precision(old_precision);
}

void write_csv(const std::filesystem::path& path, const MembershipMatrix& m, bool with_header) {
  std::ofstream out(path);
  if (!out) throw ValidationError("csv: cannot write '" + path.string() + "'");
  write_csv(out, m, with_header);
}

}  // namespace fuzzyrand
