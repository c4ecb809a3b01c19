#pragma once

namespace fuzzyrand::special {

/// psi(x) = d/dx log Gamma(x) for x > 0.
double digamma(double x);

/// psi'(x) for x > 0.
double trigamma(double x);

/// Solves digamma(x) = y for x > 0 by Newton's method.
double inverse_digamma(double y);

/// log Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace fuzzyrand::special
