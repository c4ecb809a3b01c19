#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/expectation.hpp"
#include "fuzzyrand/hard_models.hpp"
#include "fuzzyrand/synth.hpp"
#include "support/oracles.hpp"

using namespace fuzzyrand;

namespace {

McConfig mc(std::uint64_t samples, std::uint64_t seed, std::size_t workers = 1) {
  McConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.workers = workers;
  return cfg;
}

Categorical cat(std::vector<double> p) { return Categorical{ProportionVector::from(std::move(p))}; }

bool within(const ExpectationEstimate& e, double truth, double k = 3.0) {
  return std::abs(e.value - truth) <= k * e.std_error;
}

// One-sided expectation evaluated exactly for hard c2 and a categorical model of c1.
double one_sided_exact(const oracle::Labels& c2, const std::vector<double>& p) {
  double same = 0;
  for (double x : p) same += x * x;
  double total = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < c2.size(); ++i) {
    for (std::size_t j = i + 1; j < c2.size(); ++j, ++pairs) {
      total += c2[i] == c2[j] ? same : 1.0 - same;
    }
  }
  return total / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("two-sided examples") {
  const auto e = expected_conc_two_sided(cat({0.5, 0.5}), cat({0.5, 0.5}), IndexKind::kNdc, mc(1'000'000, 1));
  CHECK(within(e, 0.5));
  CHECK(e.samples == 1'000'000);
  CHECK(e.method == "two-sided");
  CHECK(e.generator == "xoshiro256++");
  CHECK(e.std_error > 0.0);

  for (std::size_t n : {2, 3, 5}) {
    std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    const auto s = expected_conc_two_sided(cat(uniform), cat(uniform), IndexKind::kNdc, mc(1'000'000, n));
    CHECK(within(s, expected_ri_num(n, n, 1000, false)));
  }
}

TEST_CASE("two-sided flat n=2 is stable across seeds") {
  std::vector<double> values;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    values.push_back(expected_conc_two_sided(DirichletParams::flat(2), DirichletParams::flat(2),
                                             IndexKind::kNdc, mc(10'000'000, seed))
                         .value);
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  CHECK(*hi - *lo < 0.001);
}

TEST_CASE("one-sided against exact enumeration") {
  const oracle::Labels c2{0, 0, 1};
  const std::vector<double> p{2.0 / 3.0, 1.0 / 3.0};
  const auto m2 = MembershipMatrix::from_labels(c2);
  const double exact = one_sided_exact(c2, p);
  CHECK(exact == doctest::Approx(13.0 / 27.0));
  CHECK(within(expected_conc_one_sided(cat(p), m2, IndexKind::kNdc, mc(1'000'000, 2)), exact));

  McConfig ex = mc(200'000, 3);
  ex.exhaustive_pairs = true;
  const auto e = expected_conc_one_sided(cat(p), m2, IndexKind::kNdc, ex);
  CHECK(e.method == "one-sided-exhaustive");
  CHECK(within(e, exact));

  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 10; ++trial) {
    oracle::Labels labels(5 + trial);
    for (auto& l : labels) l = gen() % 3;
    const std::vector<double> q{0.2, 0.5, 0.3};
    CHECK(within(expected_conc_one_sided(cat(q), MembershipMatrix::from_labels(labels, 3),
                                         IndexKind::kNdc, mc(300'000, 10 + trial)),
                 one_sided_exact(labels, q), 4.0));
  }
}

TEST_CASE("one-sided structural cases") {
  // Every point identical: a2 = 1, so E = E[a1]; for flat n=2 that is 1 - E|x - y| = 2/3.
  const auto same = MembershipMatrix::from_rows({{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}});
  CHECK(within(expected_conc_one_sided(DirichletParams::flat(2), same, IndexKind::kNdc, mc(1'000'000, 5)),
               2.0 / 3.0));

  const auto even = toy_allocations().allocations[4].matrix;
  std::vector<double> values;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    values.push_back(
        expected_conc_one_sided(DirichletParams::flat(3), even, IndexKind::kNdc, mc(10'000'000, seed)).value);
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  CHECK(*hi - *lo < 0.001);

  McConfig ex = mc(10, 1);
  ex.exhaustive_pairs = true;
  std::vector<std::size_t> big(kMaxExhaustivePoints + 1, 0);
  big[0] = 1;
  CHECK_THROWS_AS(expected_conc_one_sided(DirichletParams::flat(2), MembershipMatrix::from_labels(big),
                                          IndexKind::kNdc, ex),
                  CapabilityError);
}

TEST_CASE("exhaustive and sampled one-sided agree on fuzzy input") {
  std::mt19937_64 gen(6);
  const auto c2 = MembershipMatrix::from_rows(oracle::random_fuzzy_rows(gen, 30, 3, 0.3));
  const auto d1 = DirichletParams({0.7, 2.0, 1.1});
  McConfig ex = mc(50'000, 7);
  ex.exhaustive_pairs = true;
  const auto a = expected_conc_one_sided(d1, c2, IndexKind::kNdc, ex);
  const auto b = expected_conc_one_sided(d1, c2, IndexKind::kNdc, mc(2'000'000, 8));
  CHECK(std::abs(a.value - b.value) < 3 * std::hypot(a.std_error, b.std_error));
}

TEST_CASE("perm resampling") {
  const auto m = MembershipMatrix::from_labels(std::vector<std::size_t>{0, 0, 1});
  CHECK(within(expected_conc_perm(m, m, IndexKind::kNdc, mc(1'000'000, 9)), 5.0 / 9.0));
  const auto single = MembershipMatrix::from_labels(std::vector<std::size_t>{0, 0, 0, 0});
  CHECK(expected_conc_perm(single, single, IndexKind::kNdc, mc(1000, 9)).value == 1.0);
  CHECK_THROWS_AS(expected_conc_perm(m, single, IndexKind::kNdc, mc(10, 1)), ValidationError);

  std::mt19937_64 gen(10);
  for (int trial = 0; trial < 5; ++trial) {
    oracle::Labels a(8 + trial), b(8 + trial);
    for (auto& x : a) x = gen() % 3;
    for (auto& x : b) x = gen() % 4;
    const auto ma = MembershipMatrix::from_labels(a, 3), mb = MembershipMatrix::from_labels(b, 4);
    CHECK(within(expected_conc_perm(ma, mb, IndexKind::kBrouwer, mc(1'000'000, 11 + trial)),
                 expected_ri_perm(ClusterSizes::of(ma), ClusterSizes::of(mb))));
  }
}

TEST_CASE("hard consistency of the Dirichlet models") {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 4; ++trial) {
    oracle::Labels a(20), b(20);
    for (auto& x : a) x = gen() % 3;
    for (auto& x : b) x = gen() % 2;
    const auto ma = MembershipMatrix::from_labels(a, 3), mb = MembershipMatrix::from_labels(b, 2);
    const auto [fa, fb] = build_model(ma, mb, DirichletModel::kFit);
    CHECK(within(expected_conc_two_sided(fa.model, fb.model, IndexKind::kNdc, mc(1'000'000, 20 + trial)),
                 expected_ri_cat(fa.model.categorical().p, fb.model.categorical().p)));
    const auto [sa, sb] = build_model(ma, mb, DirichletModel::kSym);
    const auto e = expected_conc_two_sided(sa.model, sb.model, IndexKind::kNdc, mc(1'000'000, 30 + trial));
    CHECK(std::abs(e.value - expected_ri_num(3, 2, 20, false)) <= 3 * e.std_error + 0.01);
  }
}

TEST_CASE("determinism and worker invariance") {
  const auto d1 = DirichletParams({0.5, 1.5, 3});
  const auto d2 = DirichletParams({2, 2});
  const auto a = expected_conc_two_sided(d1, d2, IndexKind::kNdc, mc(400'000, 77, 3));
  const auto b = expected_conc_two_sided(d1, d2, IndexKind::kNdc, mc(400'000, 77, 3));
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  const auto c = expected_conc_two_sided(d1, d2, IndexKind::kNdc, mc(400'000, 77, 1));
  CHECK(std::abs(a.value - c.value) < 3 * std::hypot(a.std_error, c.std_error));
  const auto d = expected_conc_two_sided(d1, d2, IndexKind::kNdc, mc(400'000, 78, 3));
  CHECK(a.value != d.value);
  CHECK(a.samples == 400'000);
  CHECK_THROWS_AS(expected_conc_two_sided(d1, d2, IndexKind::kNdc, mc(0, 1)), ValidationError);
}

TEST_CASE("perturbation stability at matched seeds") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> ua(0.2, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> a1(2 + trial % 4), a2(2 + trial % 3);
    for (auto& x : a1) x = ua(gen);
    for (auto& x : a2) x = ua(gen);
    for (double delta : {1e-3, -1e-3, 1e-4}) {
      auto p1 = a1;
      for (auto& x : p1) x *= 1 + delta;
      for (auto kind : {IndexKind::kNdc, IndexKind::kBrouwer}) {
        const auto base = expected_conc_two_sided(DirichletParams(a1), DirichletParams(a2), kind, mc(200'000, 40 + trial));
        const auto pert = expected_conc_two_sided(DirichletParams(p1), DirichletParams(a2), kind, mc(200'000, 40 + trial));
        CHECK(std::abs(base.value - pert.value) < 0.005);
      }
    }
  }
}
