#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/synth.hpp"

using namespace fuzzyrand;

namespace {

std::vector<std::size_t> argmax_sizes(const MembershipMatrix& m) {
  std::vector<std::size_t> sizes(m.cols(), 0);
  for (auto l : argmax_labels(m)) ++sizes[l];
  return sizes;
}

std::size_t differing_rows(const MembershipMatrix& a, const MembershipMatrix& b) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (!std::equal(a.row(i).begin(), a.row(i).end(), b.row(i).begin())) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("toy allocations") {
  const auto toy = toy_allocations();
  REQUIRE(toy.allocations.size() == 5);
  CHECK(toy.allocations[0].name == "UnevenLowFuzzy");
  CHECK(argmax_sizes(toy.allocations[0].matrix) == std::vector<std::size_t>{7, 1, 1});
  CHECK(argmax_sizes(toy.allocations[1].matrix) == std::vector<std::size_t>{3, 3, 3});
  CHECK(classify(toy.allocations[4].matrix) == Classification::kHard);
  CHECK(argmax_sizes(toy.allocations[4].matrix) == std::vector<std::size_t>{3, 3, 3});
  CHECK(toy.allocations[3].matrix == harden(toy.allocations[0].matrix));
  CHECK(toy.allocations[4].matrix == harden(toy.allocations[1].matrix));
  for (const std::size_t k : {0, 1}) {
    const auto& m = toy.allocations[k].matrix;
    CHECK(classify(m) == Classification::kFuzzy);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::vector<double> row(m.row(i).begin(), m.row(i).end());
      std::sort(row.begin(), row.end());
      CHECK(row == std::vector<double>{0.01, 0.01, 0.98});
    }
  }
  const auto& high = toy.allocations[2].matrix;
  CHECK(classify(high) == Classification::kFuzzy);
  for (double x : high.values()) CHECK(std::abs(x - 1.0 / 3.0) <= 0.01);

  REQUIRE(toy.comparisons.size() == 10);
  const std::vector<std::pair<std::string, std::string>> table1{
      {"UnevenLowFuzzy", "EvenLowFuzzy"}, {"UnevenLowFuzzy", "HighFuzzy"},
      {"UnevenLowFuzzy", "UnevenHard"},   {"UnevenLowFuzzy", "EvenHard"},
      {"EvenLowFuzzy", "HighFuzzy"},      {"EvenLowFuzzy", "UnevenHard"},
      {"EvenLowFuzzy", "EvenHard"},       {"HighFuzzy", "UnevenHard"},
      {"HighFuzzy", "EvenHard"},          {"UnevenHard", "EvenHard"}};
  for (std::size_t k = 0; k < 10; ++k) {
    const auto& c = toy.comparisons[k];
    CHECK(c.id == static_cast<int>(k + 1));
    CHECK(toy.allocations[c.first].name == table1[k].first);
    CHECK(toy.allocations[c.second].name == table1[k].second);
  }
}

TEST_CASE("apportionment and the 80/20 split") {
  CHECK(apportion(10, std::vector{0.5, 0.5}) == std::vector<std::size_t>{5, 5});
  CHECK(apportion(10, std::vector{1.0, 1.0, 1.0}) == std::vector<std::size_t>{4, 3, 3});
  CHECK(apportion(7, std::vector{0.8, 0.2}) == std::vector<std::size_t>{6, 1});
  CHECK_THROWS_AS(apportion(3, std::vector<double>{}), ValidationError);

  CHECK(major_cluster_count(2, 0.8) == 2);
  CHECK(major_cluster_count(5, 0.6) == 3);
  CHECK(major_cluster_count(8, 0.2) == 2);
  CHECK(major_cluster_count(2, 0.2) == 1);
  CHECK_THROWS_AS(major_cluster_count(2, 0.0), ValidationError);
  CHECK_THROWS_AS(major_cluster_count(0, 0.5), ValidationError);

  // n_clusters=2, imbalance=0.8: both clusters are major, so an even split.
  FactorialParams p{2, 129, 0.8, 1.0, 0.2, Sidedness::kTwo, 1};
  const auto base = base_clustering(p);
  const auto sizes = argmax_sizes(base);
  CHECK(sizes == std::vector<std::size_t>{65, 64});
  CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == 129);

  // 8 clusters, imbalance 0.2: 2 clusters share 80%, 6 share 20%.
  FactorialParams q{8, 1000, 0.2, 1.0, 0.2, Sidedness::kTwo, 1};
  const auto qs = argmax_sizes(base_clustering(q));
  CHECK(qs[0] + qs[1] == 800);
  CHECK(std::accumulate(qs.begin(), qs.end(), std::size_t{0}) == 1000);
  const auto w = imbalance_weights(8, 0.2);
  CHECK(w[0] == doctest::Approx(0.4));
  CHECK(w[7] == doctest::Approx(0.2 / 6));
}

TEST_CASE("replacement distribution") {
  FactorialParams p{4, 100, 0.5, 1.5, 0.2, Sidedness::kTwo, 1};
  const auto d = replacement_distribution(p);
  REQUIRE(!d.is_categorical());
  CHECK(d.dirichlet().precision() == doctest::Approx(6.0));
  CHECK(d.dirichlet().alpha()[0] == doctest::Approx(2.4));
  CHECK(d.dirichlet().alpha()[3] == doctest::Approx(0.6));
  p.precision = 0.0;
  CHECK(replacement_distribution(p).is_categorical());
}

TEST_CASE("generate_pair") {
  SUBCASE("replaced row count is round(rate * N)") {
    for (double rate : {0.2, 0.4, 0.5, 0.6, 1.0}) {
      FactorialParams p{3, 101, 0.6, 1.0, rate, Sidedness::kOne, 7};
      const auto [a, b] = generate_pair(p);
      CHECK(replaced_rows(p) == static_cast<std::size_t>(std::llround(rate * 101)));
      CHECK(a == base_clustering(p));
      // Continuous replacements almost surely differ from the one-hot rows they replace.
      CHECK(differing_rows(a, b) == replaced_rows(p));
    }
  }
  SUBCASE("classification follows precision") {
    FactorialParams p{4, 64, 0.8, 0.0, 0.2, Sidedness::kTwo, 8};
    auto [a, b] = generate_pair(p);
    CHECK(classify(a) == Classification::kHard);
    CHECK(classify(b) == Classification::kHard);
    for (double prec : {0.01, 0.1, 1.0, 1.5}) {
      p.precision = prec;
      std::tie(a, b) = generate_pair(p);
      CHECK(classify(a) == Classification::kFuzzy);
      CHECK(classify(b) == Classification::kFuzzy);
    }
  }
  SUBCASE("two-sided draws are independent, one-sided keeps the base") {
    FactorialParams p{3, 50, 0.6, 1.0, 1.0, Sidedness::kTwo, 9};
    const auto [a, b] = generate_pair(p);
    CHECK(differing_rows(a, b) == 50);
    p.sided = Sidedness::kOne;
    const auto [c, d] = generate_pair(p);
    CHECK(c == base_clustering(p));
    CHECK(differing_rows(c, d) == 50);
  }
  SUBCASE("deterministic in the seed") {
    FactorialParams p{5, 80, 0.4, 0.1, 0.6, Sidedness::kTwo, 10};
    CHECK(generate_pair(p) == generate_pair(p));
    auto q = p;
    q.seed = 11;
    CHECK(!(generate_pair(p) == generate_pair(q)));
  }
  SUBCASE("parameter errors") {
    CHECK_THROWS_AS(generate_pair(FactorialParams{3, 50, 0.0, 1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(generate_pair(FactorialParams{3, 50, 0.5, -1.0, 0.5}), ValidationError);
    CHECK_THROWS_AS(generate_pair(FactorialParams{3, 50, 0.5, 1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(generate_pair(FactorialParams{3, 1, 0.5, 1.0, 0.5}), ValidationError);
  }
}

TEST_CASE("grids") {
  const auto full = factorial_grid();
  CHECK(full.size() == 7 * 7 * 4 * 5 * 5);
  const auto ea = error_analysis_grid();
  CHECK(ea.size() == 48);
  const auto settings = ea.expand();
  CHECK(settings.size() == 48);
  CHECK(settings.front().n_clusters == 2);
  CHECK(settings.back().n_clusters == 50);
  CHECK(settings[1].randomize_rate == 1.0);
}
