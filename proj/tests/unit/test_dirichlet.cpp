#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fuzzyrand/dirichlet.hpp"
#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/synth.hpp"

using namespace fuzzyrand;
using doctest::Approx;

namespace {

struct Moments {
  std::vector<double> mean, var, var_se;
};

// Per-coordinate sample mean, variance, and the standard error of the variance.
Moments moments(const MembershipMatrix& m) {
  const std::size_t n = m.cols();
  const double rows = static_cast<double>(m.rows());
  Moments out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < n; ++k) out.mean[k] += m(i, k) / rows;
  std::vector<double> m4(n, 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const double d = m(i, k) - out.mean[k];
      out.var[k] += d * d / rows;
      m4[k] += d * d * d * d / rows;
    }
  }
  for (std::size_t k = 0; k < n; ++k) out.var_se[k] = std::sqrt((m4[k] - out.var[k] * out.var[k]) / rows);
  return out;
}

}  // namespace

TEST_CASE("params") {
  const DirichletParams d({2.0, 6.0});
  CHECK(d.precision() == 8.0);
  CHECK(d.mean() == std::vector<double>{0.25, 0.75});
  CHECK(DirichletParams::flat(3).alpha() == std::vector<double>{1, 1, 1});
  CHECK_THROWS_AS(DirichletParams({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(DirichletParams({}), ValidationError);
  CHECK_THROWS_AS(DirichletParams({1.0, INFINITY}), ValidationError);
}

TEST_CASE("log_pdf examples") {
  CHECK(log_pdf(DirichletParams::flat(2), std::vector{0.3, 0.7}) == Approx(0.0).epsilon(1e-14));
  CHECK(log_pdf(DirichletParams({2, 2}), std::vector{0.5, 0.5}) == Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(log_pdf(DirichletParams::flat(3), std::vector{0.2, 0.3, 0.5}) ==
        Approx(std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(log_pdf(DirichletParams::flat(2), std::vector{0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(log_pdf(DirichletParams::flat(2), std::vector{0.2, 0.2}), ValidationError);
  CHECK_THROWS_AS(log_pdf(DirichletParams::flat(3), std::vector{0.5, 0.5}), ValidationError);
}

TEST_CASE("log_pdf integrates to one") {
  // Importance sampling with the flat Dirichlet, whose density is (n-1)!.
  const std::vector<std::vector<double>> alphas{
      {1, 1}, {2, 5}, {5, 5}, {1, 2, 3}, {4, 1.5, 2}, {1, 1, 1, 1}, {2, 3, 1.5, 5}};
  Xoshiro256pp rng(101);
  for (const auto& a : alphas) {
    const DirichletParams d(a);
    const auto draws = sample(DirichletParams::flat(a.size()), rng, 1'000'000);
    double flat_density = std::tgamma(static_cast<double>(a.size()));
    double sum = 0;
    for (std::size_t i = 0; i < draws.rows(); ++i) sum += std::exp(log_pdf(d, draws.row(i)));
    CHECK(sum / static_cast<double>(draws.rows()) / flat_density == Approx(1.0).epsilon(0.01));
  }
}

TEST_CASE("sampler examples") {
  Xoshiro256pp rng(102);
  SUBCASE("flat n=2") {
    const auto m = moments(sample(DirichletParams::flat(2), rng, 1'000'000));
    CHECK(std::abs(m.mean[0] - 0.5) < 0.002);
  }
  SUBCASE("alpha=(8,2)") {
    const auto m = moments(sample(DirichletParams({8, 2}), rng, 1'000'000));
    CHECK(std::abs(m.mean[0] - 0.8) < 0.002);
    CHECK(std::abs(m.mean[1] - 0.2) < 0.002);
  }
  SUBCASE("categorical") {
    const auto draws = sample(Categorical{ProportionVector::from({0.7, 0.3})}, rng, 1'000'000);
    CHECK(classify(draws) == Classification::kHard);
    const auto m = moments(draws);
    CHECK(std::abs(m.mean[0] - 0.7) < 0.002);
  }
  SUBCASE("draws are on the simplex, even for tiny alpha") {
    const auto draws = sample(DirichletParams({0.01, 0.05, 0.001}), rng, 10'000);
    for (std::size_t i = 0; i < draws.rows(); ++i) {
      double s = 0;
      for (double x : draws.row(i)) {
        REQUIRE(std::isfinite(x));
        s += x;
      }
      REQUIRE(s == Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: sampler moments match the analytic Dirichlet moments") {
  const std::vector<std::vector<double>> alphas{
      {1, 1}, {0.3, 0.7}, {8, 2}, {0.5, 1, 2}, {3, 3, 3, 3}, {0.15, 4, 1}, {1.5, 0.9, 7, 2, 0.6}};
  Xoshiro256pp rng(103);
  for (const auto& a : alphas) {
    const double a0 = std::accumulate(a.begin(), a.end(), 0.0);
    const auto m = moments(sample(DirichletParams(a), rng, 1'000'000));
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double mean = a[k] / a0;
      const double var = a[k] * (a0 - a[k]) / (a0 * a0 * (a0 + 1));
      const double mean_se = std::sqrt(var / 1e6);
      CHECK(std::abs(m.mean[k] - mean) < 3 * mean_se);
      CHECK(std::abs(m.var[k] - var) < 3 * m.var_se[k]);
    }
  }
}

TEST_CASE("fit_mle examples") {
  Xoshiro256pp rng(104);
  SUBCASE("recovers alpha=(2,5)") {
    const auto fit = fit_mle(sample(DirichletParams({2, 5}), rng, 100'000), false);
    REQUIRE(!fit.model.is_categorical());
    const auto& a = fit.model.dirichlet().alpha();
    CHECK(std::abs(a[0] / 2 - 1) < 0.02);
    CHECK(std::abs(a[1] / 5 - 1) < 0.02);
  }
  SUBCASE("symmetric alpha=3, n=4") {
    const auto fit = fit_mle(sample(DirichletParams::symmetric(4, 3.0), rng, 100'000), true);
    REQUIRE(!fit.model.is_categorical());
    for (double a : fit.model.dirichlet().alpha()) CHECK(std::abs(a - 3.0) < 0.06);
  }
  SUBCASE("hard input gives the cluster proportions") {
    const auto hard = MembershipMatrix::from_labels(std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 1, 2});
    const auto fit = fit_mle(hard, false);
    REQUIRE(fit.model.is_categorical());
    CHECK(fit.hard_input);
    const auto& p = fit.model.categorical().p.p;
    CHECK(p[0] == Approx(7.0 / 9.0));
    CHECK(p[1] == Approx(1.0 / 9.0));
    CHECK(p[2] == Approx(1.0 / 9.0));
    const auto sym = fit_mle(hard, true);
    REQUIRE(sym.model.is_categorical());
    for (double x : sym.model.categorical().p.p) CHECK(x == Approx(1.0 / 3.0));
  }
  SUBCASE("near-hard input fits a low-precision Dirichlet") {
    // The 1e-6 clamp bounds mean log x, so the fitted precision stays near 1/|log 1e-6|
    // and never reaches the 0.01 categorical threshold.
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 40; ++i) rows.push_back(i % 3 ? std::vector{1.0 - 1e-9, 1e-9} : std::vector{1e-9, 1.0 - 1e-9});
    const auto fit = fit_mle(MembershipMatrix::from_rows(rows), false);
    REQUIRE(!fit.model.is_categorical());
    CHECK(!fit.degenerate);
    CHECK(fit.model.dirichlet().precision() < 0.2);
    CHECK(fit.model.dirichlet().alpha()[0] > fit.model.dirichlet().alpha()[1]);
  }
  SUBCASE("nearly constant data hits the concentration cap") {
    std::vector<std::vector<double>> rows(9, {0.5, 0.5});
    rows[0] = {0.5 + 1e-9, 0.5 - 1e-9};
    const auto fit = fit_mle(MembershipMatrix::from_rows(rows), false);
    REQUIRE(!fit.model.is_categorical());
    CHECK(fit.capped);
    for (double a : fit.model.dirichlet().alpha()) CHECK(a <= kMaxConcentration);
  }
  SUBCASE("toy HighFuzzy fits a finite, very concentrated Dirichlet") {
    const auto toy = toy_allocations();
    const auto fit = fit_mle(toy.allocations[2].matrix, false);
    REQUIRE(!fit.model.is_categorical());
    CHECK(fit.model.dirichlet().precision() > 1000);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(fit_mle(MembershipMatrix::from_rows({{0.5, 0.9}, {0.5, 0.5}}), false), UsageError);
    CHECK_THROWS_AS(fit_mle(MembershipMatrix::from_rows({{0.5, 0.5}}), false), ValidationError);
  }
}

TEST_CASE("property: fit recovers alpha within 5%") {
  std::mt19937_64 gen(105);
  std::uniform_real_distribution<double> ua(0.5, 10.0);
  Xoshiro256pp rng(106);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t n = 2 + trial % 7;
    std::vector<double> alpha(n);
    for (auto& a : alpha) a = ua(gen);
    const auto fit = fit_mle(sample(DirichletParams(alpha), rng, 100'000), false);
    REQUIRE(!fit.model.is_categorical());
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(fit.model.dirichlet().alpha()[k] / alpha[k] - 1) < 0.05);
    }
  }
}

TEST_CASE("build_model") {
  const auto fuzzy3 = MembershipMatrix::from_rows({{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}, {0.1, 0.1, 0.8}});
  const auto fuzzy2 = MembershipMatrix::from_rows({{0.2, 0.8}, {0.6, 0.4}, {0.5, 0.5}});
  const auto [f3, f2] = build_model(fuzzy3, fuzzy2, DirichletModel::kFlat);
  CHECK(f3.model.dirichlet().alpha() == std::vector<double>{1, 1, 1});
  CHECK(f2.model.dirichlet().alpha() == std::vector<double>{1, 1});

  const auto uneven = MembershipMatrix::from_labels(std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 1, 2});
  const auto even = MembershipMatrix::from_labels(std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 2, 2, 2});
  const auto [sa, sb] = build_model(uneven, even, DirichletModel::kSym);
  for (const auto* fit : {&sa, &sb}) {
    REQUIRE(fit->model.is_categorical());
    for (double x : fit->model.categorical().p.p) CHECK(x == Approx(1.0 / 3.0));
  }
  const auto [fa, fb] = build_model(uneven, even, DirichletModel::kFit);
  CHECK(fa.model.categorical().p.p[0] == Approx(7.0 / 9.0));
  CHECK(fb.model.categorical().p.p[0] == Approx(1.0 / 3.0));
  CHECK(fa.model.describe().rfind("categorical(", 0) == 0);
  CHECK(f3.model.describe() == "dirichlet(1,1,1)");
}
