#include "fuzzyrand/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fuzzyrand/errors.hpp"

namespace fuzzyrand::special {

namespace {

// Below this the recurrences shift the argument up before using asymptotic series.
constexpr double kAsymptoticThreshold = 8.0;

}  // namespace

double digamma(double x) {
  if (!(x > 0.0)) throw ValidationError("digamma: argument must be positive");
  double result = 0.0;
  while (x < kAsymptoticThreshold) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum B_2k / (2k x^2k)
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760))))));
  return result + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  if (!(x > 0.0)) throw ValidationError("trigamma: argument must be positive");
  double result = 0.0;
  while (x < kAsymptoticThreshold) {
    result += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x^2) + sum B_2k / x^(2k+1)
  const double series =
      inv * inv2 *
      (1.0 / 6 - inv2 * (1.0 / 30 - inv2 * (1.0 / 42 - inv2 * (1.0 / 30 - inv2 * (5.0 / 66)))));
  return result + inv + 0.5 * inv2 + series;
}

double inverse_digamma(double y) {
  if (!std::isfinite(y)) throw ValidationError("inverse digamma: argument must be finite");
  constexpr double kEulerGamma = std::numbers::egamma;
  // Starting point from the asymptotes psi(x) ~ log(x - 1/2) and psi(x) ~ -1/x - gamma.
  double x = y >= -2.22 ? std::exp(y) + 0.5 : -1.0 / (y + kEulerGamma);
  for (int iter = 0; iter < 100; ++iter) {
    const double step = (digamma(x) - y) / trigamma(x);
    double next = x - step;
    if (next <= 0.0) next = 0.5 * x;
    const double change = std::abs(next - x);
    x = next;
    if (change <= 1e-15 * x) break;
  }
  return x;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw ValidationError("log gamma: argument must be positive");
  if (x == 1.0 || x == 2.0) return 0.0;
  double shift = 0.0;
  double product = 1.0;
  while (x < kAsymptoticThreshold) {
    product *= x;
    x += 1.0;
    if (product > 1e280 || product < 1e-280) {
      shift += std::log(product);
      product = 1.0;
    }
  }
  shift += std::log(product);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12 -
             inv2 * (1.0 / 360 -
                     inv2 * (1.0 / 1260 -
                             inv2 * (1.0 / 1680 - inv2 * (1.0 / 1188 - inv2 * (691.0 / 360360))))));
  constexpr double kHalfLog2Pi = 0.91893853320467274178;
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series - shift;
}

}  // namespace fuzzyrand::special
