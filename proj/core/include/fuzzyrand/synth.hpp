#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzyrand/dirichlet.hpp"
#include "fuzzyrand/membership.hpp"
#include "fuzzyrand/random_model.hpp"

namespace fuzzyrand {

/// The nine-point, three-cluster toy allocations and their ten comparisons.
struct ToyAllocations {
  struct Named {
    std::string name;
    MembershipMatrix matrix;
  };
  struct Comparison {
    int id;
    std::size_t first;   // index into `allocations`
    std::size_t second;  // index into `allocations`
  };

  // UnevenLowFuzzy, EvenLowFuzzy, HighFuzzy, UnevenHard, EvenHard.
  std::vector<Named> allocations;
  std::vector<Comparison> comparisons;

  const MembershipMatrix& first(const Comparison& c) const { return allocations[c.first].matrix; }
  const MembershipMatrix& second(const Comparison& c) const {
    return allocations[c.second].matrix;
  }
};

ToyAllocations toy_allocations();

/// One setting of the synthetic benchmark.
///
/// ceil(imbalance * n_clusters) "major" clusters share 80% of the points (and
/// 80% of the replacement concentration) evenly; the rest share 20%. When every
/// cluster is major the split is simply even. precision == 0 replaces rows by
/// categorical (one-hot) draws.
struct FactorialParams {
  std::size_t n_clusters = 2;
  std::size_t n_points = 128;
  double imbalance = 0.8;
  double precision = 1.0;
  double randomize_rate = 0.2;
  Sidedness sided = Sidedness::kTwo;
  std::uint64_t seed = 0;
};

/// Integer apportionment of `total` by largest remainders; ties go to the lower index.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights);

std::size_t major_cluster_count(std::size_t n_clusters, double imbalance);

/// Relative cluster weights of the 80/20 split.
std::vector<double> imbalance_weights(std::size_t n_clusters, double imbalance);

/// Hard base clustering: points assigned to clusters in contiguous blocks.
MembershipMatrix base_clustering(const FactorialParams& p);

/// Distribution of replacement rows: Dirichlet with total concentration
/// precision * n_clusters, or the categorical with the same weights at precision 0.
ModelDistribution replacement_distribution(const FactorialParams& p);

/// Number of rows replaced in each randomized matrix: round(rate * N).
std::size_t replaced_rows(const FactorialParams& p);

/// Two perfectly agreeing hard clusterings, then round(rate * N) rows of the
/// randomized matrices (both, or only the second when one-sided) replaced by
/// i.i.d. replacement draws. Deterministic in p.seed.
std::pair<MembershipMatrix, MembershipMatrix> generate_pair(const FactorialParams& p);

/// Value lists of a factorial grid.
struct FactorialGrid {
  std::vector<std::size_t> n_clusters;
  std::vector<std::size_t> n_points;
  std::vector<double> imbalance;
  std::vector<double> precision;
  std::vector<double> randomize_rate;
  Sidedness sided = Sidedness::kTwo;

  std::size_t size() const noexcept;
  /// Cartesian product in the order clusters, points, imbalance, precision, rate.
  std::vector<FactorialParams> expand() const;
};

/// Full parameter space of the factorial benchmark.
FactorialGrid factorial_grid(Sidedness sided = Sidedness::kTwo);

/// The 48-setting grid used for the Monte-Carlo error analysis.
FactorialGrid error_analysis_grid();

}  // namespace fuzzyrand
