#include "fuzzyrand/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/rng.hpp"

namespace fuzzyrand {

namespace {

// Low-fuzzy membership: 0.98 on the assigned cluster, 0.01 elsewhere.
std::vector<double> low_fuzzy_row(std::size_t cluster) {
  std::vector<double> row(3, 0.01);
  row[cluster] = 0.98;
  return row;
}

MembershipMatrix low_fuzzy(const std::vector<std::size_t>& labels) {
  std::vector<std::vector<double>> rows;
  for (std::size_t label : labels) rows.push_back(low_fuzzy_row(label));
  return MembershipMatrix::from_rows(rows);
}

}  // namespace

ToyAllocations toy_allocations() {
  const std::vector<std::size_t> uneven{0, 0, 0, 0, 0, 0, 0, 1, 2};
  const std::vector<std::size_t> even{0, 0, 0, 1, 1, 1, 2, 2, 2};

  // Every row within 0.01 of (1/3, 1/3, 1/3); the slight lean follows the even layout.
  const auto high_fuzzy = MembershipMatrix::from_rows({
      {0.340, 0.330, 0.330},
      {0.338, 0.331, 0.331},
      {0.336, 0.332, 0.332},
      {0.330, 0.340, 0.330},
      {0.331, 0.338, 0.331},
      {0.332, 0.336, 0.332},
      {0.330, 0.330, 0.340},
      {0.331, 0.331, 0.338},
      {0.332, 0.332, 0.336},
  });

  ToyAllocations toy;
  toy.allocations = {
      {"UnevenLowFuzzy", low_fuzzy(uneven)},
      {"EvenLowFuzzy", low_fuzzy(even)},
      {"HighFuzzy", high_fuzzy},
      {"UnevenHard", MembershipMatrix::from_labels(uneven, 3)},
      {"EvenHard", MembershipMatrix::from_labels(even, 3)},
  };
  constexpr std::size_t kUnevenLF = 0, kEvenLF = 1, kHF = 2, kUnevenH = 3, kEvenH = 4;
  toy.comparisons = {
      {1, kUnevenLF, kEvenLF}, {2, kUnevenLF, kHF},    {3, kUnevenLF, kUnevenH},
      {4, kUnevenLF, kEvenH},  {5, kEvenLF, kHF},      {6, kEvenLF, kUnevenH},
      {7, kEvenLF, kEvenH},    {8, kHF, kUnevenH},     {9, kHF, kEvenH},
      {10, kUnevenH, kEvenH},
  };
  return toy;
}

std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights) {
  if (weights.empty()) throw ValidationError("apportion: no weights");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw ValidationError("apportion: weights must have a positive sum");
  std::vector<std::size_t> counts(weights.size());
  std::vector<double> remainders(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double quota = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(quota + 1e-9));
    remainders[i] = quota - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b] + 1e-12; });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % order.size(), ++assigned) {
    ++counts[order[k]];
  }
  return counts;
}

std::size_t major_cluster_count(std::size_t n_clusters, double imbalance) {
  if (n_clusters == 0) throw ValidationError("factorial: n_clusters must be >= 1");
  if (!(imbalance > 0.0 && imbalance <= 1.0)) {
    throw ValidationError("factorial: imbalance must lie in (0, 1]");
  }
  // The small slack keeps e.g. 0.6 * 5 = 3.0000000000000004 at 3.
  const auto k =
      static_cast<std::size_t>(std::ceil(imbalance * static_cast<double>(n_clusters) - 1e-9));
  if (k == 0) throw ValidationError("factorial: imbalance selects no clusters");
  return std::min(k, n_clusters);
}

std::vector<double> imbalance_weights(std::size_t n_clusters, double imbalance) {
  const std::size_t major = major_cluster_count(n_clusters, imbalance);
  if (major == n_clusters) return std::vector(n_clusters, 1.0 / static_cast<double>(n_clusters));
  std::vector<double> w(n_clusters, 0.2 / static_cast<double>(n_clusters - major));
  std::fill_n(w.begin(), major, 0.8 / static_cast<double>(major));
  return w;
}

namespace {

void validate(const FactorialParams& p) {
  if (p.n_points < 2) throw ValidationError("factorial: n_points must be >= 2");
  if (!(p.randomize_rate > 0.0 && p.randomize_rate <= 1.0)) {
    throw ValidationError("factorial: randomize_rate must lie in (0, 1]");
  }
  if (!(p.precision >= 0.0) || !std::isfinite(p.precision)) {
    throw ValidationError("factorial: precision must be >= 0");
  }
  major_cluster_count(p.n_clusters, p.imbalance);
}

}  // namespace

MembershipMatrix base_clustering(const FactorialParams& p) {
  validate(p);
  const auto sizes = apportion(p.n_points, imbalance_weights(p.n_clusters, p.imbalance));
  std::vector<std::size_t> labels;
  labels.reserve(p.n_points);
  for (std::size_t c = 0; c < sizes.size(); ++c) labels.insert(labels.end(), sizes[c], c);
  return MembershipMatrix::from_labels(labels, p.n_clusters);
}

ModelDistribution replacement_distribution(const FactorialParams& p) {
  validate(p);
  auto w = imbalance_weights(p.n_clusters, p.imbalance);
  if (p.precision == 0.0) return Categorical{ProportionVector{std::move(w)}};
  const double total = p.precision * static_cast<double>(p.n_clusters);
  for (double& x : w) x *= total;
  return DirichletParams(std::move(w));
}

std::size_t replaced_rows(const FactorialParams& p) {
  return static_cast<std::size_t>(std::llround(p.randomize_rate * static_cast<double>(p.n_points)));
}

std::pair<MembershipMatrix, MembershipMatrix> generate_pair(const FactorialParams& p) {
  const MembershipMatrix base = base_clustering(p);
  const MembershipSampler sampler(replacement_distribution(p));
  const std::size_t replace = std::min(replaced_rows(p), p.n_points);
  Xoshiro256pp rng(p.seed);

  auto randomize = [&](const MembershipMatrix& m) {
    std::vector<double> values(m.values().begin(), m.values().end());
    std::vector<std::size_t> order(m.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `replace` entries are a uniform subset.
    for (std::size_t i = 0; i < replace; ++i) {
      const auto j = i + rng.below(m.rows() - i);
      std::swap(order[i], order[j]);
      sampler.draw(rng, std::span<double>(values.data() + order[i] * m.cols(), m.cols()));
    }
    return MembershipMatrix(m.rows(), m.cols(), std::move(values));
  };

  if (p.sided == Sidedness::kOne) return {base, randomize(base)};
  auto first = randomize(base);
  auto second = randomize(base);
  return {std::move(first), std::move(second)};
}

std::size_t FactorialGrid::size() const noexcept {
  return n_clusters.size() * n_points.size() * imbalance.size() * precision.size() *
         randomize_rate.size();
}

std::vector<FactorialParams> FactorialGrid::expand() const {
  std::vector<FactorialParams> out;
  out.reserve(size());
  for (auto c : n_clusters)
    for (auto n : n_points)
      for (auto imb : imbalance)
        for (auto prec : precision)
          for (auto rate : randomize_rate) out.push_back({c, n, imb, prec, rate, sided, 0});
  return out;
}

FactorialGrid factorial_grid(Sidedness sided) {
  return FactorialGrid{{2, 4, 8, 16, 32, 64, 128},
                       {128, 256, 512, 1024, 2048, 4096, 8192},
                       {0.8, 0.6, 0.4, 0.2},
                       {0.0, 0.01, 0.1, 1.0, 1.5},
                       {0.2, 0.4, 0.6, 0.8, 1.0},
                       sided};
}

FactorialGrid error_analysis_grid() {
  return FactorialGrid{{2, 50}, {100, 1000}, {0.8, 0.2}, {0.1, 1.0, 1.5}, {0.5, 1.0},
                       Sidedness::kTwo};
}

}  // namespace fuzzyrand
