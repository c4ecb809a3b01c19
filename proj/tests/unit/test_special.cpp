#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/special.hpp"

using namespace fuzzyrand;

namespace {

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("digamma and trigamma against boost") {
  for (double x = 1e-6; x < 1e7; x *= 1.37) {
    CHECK(close(special::digamma(x), boost::math::digamma(x), 1e-12));
    CHECK(close(special::trigamma(x), boost::math::trigamma(x), 1e-12));
  }
  CHECK(special::digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-13));
  CHECK_THROWS_AS(special::digamma(0.0), ValidationError);
  CHECK_THROWS_AS(special::trigamma(-1.0), ValidationError);
}

TEST_CASE("log_gamma against the standard library") {
  for (double x = 1e-6; x < 1e7; x *= 1.41) CHECK(close(special::log_gamma(x), std::lgamma(x), 1e-12));
  CHECK(special::log_gamma(1.0) == doctest::Approx(0.0));
  CHECK(special::log_gamma(4.0) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
}

TEST_CASE("inverse_digamma inverts digamma") {
  for (double x = 1e-5; x < 1e6; x *= 1.53) {
    CHECK(close(special::inverse_digamma(special::digamma(x)), x, 1e-10));
  }
  for (double y = -50; y < 15; y += 0.7) {
    CHECK(close(special::digamma(special::inverse_digamma(y)), y, 1e-12));
  }
  CHECK_THROWS_AS(special::inverse_digamma(NAN), ValidationError);
}
