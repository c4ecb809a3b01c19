#include "fuzzyrand/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/random/normal_distribution.hpp>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/special.hpp"

namespace fuzzyrand {

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw ValidationError("dirichlet: concentration vector is empty");
  for (double a : alpha_) {
    if (!std::isfinite(a) || a <= 0.0) {
      throw ValidationError("dirichlet: concentrations must be positive and finite");
    }
  }
  precision_ = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
}

std::vector<double> DirichletParams::mean() const {
  std::vector<double> m(alpha_);
  for (double& x : m) x /= precision_;
  return m;
}

std::size_t ModelDistribution::dims() const noexcept {
  return is_categorical() ? categorical().p.p.size() : dirichlet().dims();
}

std::string ModelDistribution::describe() const {
  std::ostringstream out;
  out.precision(10);
  const auto& values = is_categorical() ? categorical().p.p : dirichlet().alpha();
  out << (is_categorical() ? "categorical(" : "dirichlet(");
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
  out << ')';
  return out.str();
}

double log_pdf(const DirichletParams& d, std::span<const double> x) {
  if (x.size() != d.dims()) {
    throw ValidationError("dirichlet log_pdf: point has " + std::to_string(x.size()) +
                          " coordinates, expected " + std::to_string(d.dims()));
  }
  double sum = 0.0;
  double log_density = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0)) {
      throw ValidationError("dirichlet log_pdf: density is defined on the open simplex only");
    }
    sum += x[i];
    log_density += (d.alpha()[i] - 1.0) * std::log(x[i]);
  }
  if (std::abs(sum - 1.0) > kFuzzyRowSumTolerance) {
    throw ValidationError("dirichlet log_pdf: point does not lie on the simplex");
  }
  double log_beta = -special::log_gamma(d.precision());
  for (double a : d.alpha()) log_beta += special::log_gamma(a);
  return log_density - log_beta;
}

MembershipSampler::MembershipSampler(const ModelDistribution& d) : dims_(d.dims()) {
  if (d.is_categorical()) {
    categorical_ = true;
    cumulative_.resize(dims_);
    std::partial_sum(d.categorical().p.p.begin(), d.categorical().p.p.end(), cumulative_.begin());
    cumulative_.back() = 1.0;
    return;
  }
  for (double a : d.dirichlet().alpha()) {
    const bool boosted = a < 1.0;
    const double shape = boosted ? a + 1.0 : a;
    const double dd = shape - 1.0 / 3.0;
    terms_.push_back({a, dd, 1.0 / std::sqrt(9.0 * dd), 1.0 / a, boosted, a == 1.0});
    // U^(1/alpha) underflows for tiny alpha; keep every coordinate as a logarithm then.
    if (a < 0.2) log_space_ = true;
  }
}

double MembershipSampler::gamma(const GammaTerm& t, Xoshiro256pp& rng) const {
  if (t.exponential) return -std::log(rng.uniform_open());
  boost::random::normal_distribution<double> normal;
  double value = 0.0;
  while (true) {
    const double x = normal(rng);
    double v = 1.0 + t.c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + t.d * (1.0 - v + std::log(v))) {
      value = t.d * v;
      break;
    }
  }
  return value;
}

void MembershipSampler::draw(Xoshiro256pp& rng, std::span<double> out) const {
  if (categorical_) {
    std::fill(out.begin(), out.end(), 0.0);
    out[draw_label(rng)] = 1.0;
    return;
  }
  if (!log_space_) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dims_; ++i) {
      const auto& t = terms_[i];
      double g = gamma(t, rng);
      if (t.boosted) g *= std::pow(rng.uniform_open(), t.inv_alpha);
      out[i] = g;
      sum += g;
    }
    const double inv = 1.0 / sum;
    for (std::size_t i = 0; i < dims_; ++i) out[i] *= inv;
    return;
  }
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dims_; ++i) {
    const auto& t = terms_[i];
    double lg = std::log(gamma(t, rng));
    if (t.boosted) lg += std::log(rng.uniform_open()) * t.inv_alpha;
    out[i] = lg;
    top = std::max(top, lg);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < dims_; ++i) {
    out[i] = std::exp(out[i] - top);
    sum += out[i];
  }
  const double inv = 1.0 / sum;
  for (std::size_t i = 0; i < dims_; ++i) out[i] *= inv;
}

std::size_t MembershipSampler::draw_label(Xoshiro256pp& rng) const {
  const double u = rng.uniform_open();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), dims_ - 1);
}

MembershipMatrix sample(const ModelDistribution& d, Xoshiro256pp& rng, std::size_t count) {
  if (count == 0) throw ValidationError("sample: count must be >= 1");
  const MembershipSampler sampler(d);
  std::vector<double> values(count * sampler.dims());
  for (std::size_t i = 0; i < count; ++i) {
    sampler.draw(rng, std::span<double>(values.data() + i * sampler.dims(), sampler.dims()));
  }
  return MembershipMatrix(count, sampler.dims(), std::move(values));
}

namespace {

FitResult categorical_fit(std::vector<double> p, std::size_t iterations, bool hard, bool degenerate) {
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= sum;
  return FitResult{Categorical{ProportionVector{std::move(p)}}, iterations, hard, degenerate, false};
}

// Rescales so no concentration exceeds the cap; returns true if it did.
bool apply_cap(std::vector<double>& alpha) {
  const double top = *std::max_element(alpha.begin(), alpha.end());
  if (top <= kMaxConcentration) return false;
  const double scale = kMaxConcentration / top;
  for (double& a : alpha) a = std::max(a * scale, std::numeric_limits<double>::min());
  return true;
}

// Minka's fixed point: psi(alpha_k) = psi(sum alpha) + E[log x_k].
void fixed_point_step(const std::vector<double>& alpha, const std::vector<double>& mean_log,
                      double mean_of_logs, bool symmetric, std::vector<double>& next) {
  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  const double psi_total = special::digamma(total);
  if (symmetric) {
    std::fill(next.begin(), next.end(), special::inverse_digamma(psi_total + mean_of_logs));
    return;
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    next[k] = special::inverse_digamma(psi_total + mean_log[k]);
  }
}

// Newton step on the per-point log-likelihood. The Hessian is diag(q) + z 11^T,
// inverted in O(n) by Sherman-Morrison. Returns false if the step leaves alpha > 0.
bool newton_step(const std::vector<double>& alpha, const std::vector<double>& mean_log,
                 double mean_of_logs, bool symmetric, std::vector<double>& next) {
  const std::size_t n = alpha.size();
  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  const double psi_total = special::digamma(total);
  const double z = special::trigamma(total);
  if (symmetric) {
    const double a = alpha[0];
    const double dn = static_cast<double>(n);
    const double grad = dn * (psi_total - special::digamma(a) + mean_of_logs);
    const double hess = dn * dn * z - dn * special::trigamma(a);
    if (!(hess < 0.0)) return false;
    const double updated = a - grad / hess;
    if (!(updated > 0.0) || !std::isfinite(updated)) return false;
    std::fill(next.begin(), next.end(), updated);
    return true;
  }
  double sum_gq = 0.0;
  double sum_inv_q = 0.0;
  std::vector<double> grad(n);
  std::vector<double> q(n);
  for (std::size_t k = 0; k < n; ++k) {
    grad[k] = psi_total - special::digamma(alpha[k]) + mean_log[k];
    q[k] = -special::trigamma(alpha[k]);
    sum_gq += grad[k] / q[k];
    sum_inv_q += 1.0 / q[k];
  }
  const double b = sum_gq / (1.0 / z + sum_inv_q);
  for (std::size_t k = 0; k < n; ++k) {
    next[k] = alpha[k] - (grad[k] - b) / q[k];
    if (!(next[k] > 0.0) || !std::isfinite(next[k])) return false;
  }
  return true;
}

}  // namespace

FitResult fit_mle(const MembershipMatrix& m, bool symmetric) {
  require_fuzzy_or_hard(m, "dirichlet fit");
  if (m.rows() < 2) throw ValidationError("dirichlet fit: at least two points are required");
  const std::size_t n = m.cols();
  const double rows = static_cast<double>(m.rows());

  if (classify(m) == Classification::kHard) {
    return categorical_fit(symmetric ? std::vector(n, 1.0) : m.column_means(), 0, true, false);
  }
  if (n == 1) {
    // A single cluster carries no information about concentration.
    return categorical_fit({1.0}, 0, false, true);
  }

  // Sufficient statistics of the clamped, renormalized data.
  std::vector<double> mean_log(n, 0.0);
  std::vector<double> mean(n, 0.0);
  std::vector<double> mean_sq(n, 0.0);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      x[k] = std::clamp(m(i, k), kFitClamp, 1.0 - kFitClamp);
      sum += x[k];
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double v = x[k] / sum;
      mean_log[k] += std::log(v);
      mean[k] += v;
      mean_sq[k] += v * v;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    mean_log[k] /= rows;
    mean[k] /= rows;
    mean_sq[k] /= rows;
  }

  // Method-of-moments start: median over coordinates of (E[x] - E[x^2]) / Var[x].
  std::vector<double> precision_estimates;
  for (std::size_t k = 0; k < n; ++k) {
    const double var = mean_sq[k] - mean[k] * mean[k];
    if (var > 0.0) precision_estimates.push_back((mean[k] - mean_sq[k]) / var);
  }
  double precision = 1.0;
  if (!precision_estimates.empty()) {
    std::nth_element(precision_estimates.begin(),
                     precision_estimates.begin() + precision_estimates.size() / 2,
                     precision_estimates.end());
    precision = precision_estimates[precision_estimates.size() / 2];
  } else {
    precision = kMaxConcentration * static_cast<double>(n);
  }
  if (!(precision > 0.0) || !std::isfinite(precision)) precision = 1.0;

  std::vector<double> alpha(n);
  const double mean_of_logs = std::accumulate(mean_log.begin(), mean_log.end(), 0.0) / n;
  for (std::size_t k = 0; k < n; ++k) {
    alpha[k] = symmetric ? precision / static_cast<double>(n) : precision * mean[k];
    alpha[k] = std::max(alpha[k], 1e-8);
  }
  bool capped = apply_cap(alpha);

  std::vector<double> next(n);
  std::size_t iter = 0;
  bool converged = false;
  while (iter < kFitMaxIterations) {
    ++iter;
    if (!newton_step(alpha, mean_log, mean_of_logs, symmetric, next)) {
      fixed_point_step(alpha, mean_log, mean_of_logs, symmetric, next);
    }
    capped = apply_cap(next) || capped;
    double movement = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      movement = std::max(movement, std::abs(next[k] - alpha[k]) / std::max(1.0, alpha[k]));
    }
    alpha.swap(next);
    if (movement < kFitTolerance) {
      converged = true;
      break;
    }
  }

  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  if (total < kDegeneratePrecision) {
    return categorical_fit(m.column_means(), iter, false, true);
  }
  // A capped fit has a diverging precision; the cap is its stopping rule.
  if (!converged && !capped) {
    throw ConvergenceError("dirichlet fit: no convergence after " +
                               std::to_string(kFitMaxIterations) + " iterations",
                           alpha);
  }
  FitResult result{DirichletParams(std::move(alpha)), iter, false, false, capped};
  return result;
}

std::string_view to_string(DirichletModel model) {
  switch (model) {
    case DirichletModel::kFit:
      return "fit";
    case DirichletModel::kSym:
      return "sym";
    case DirichletModel::kFlat:
      return "flat";
  }
  return "unknown";
}

FitResult build_model(const MembershipMatrix& m, DirichletModel model) {
  switch (model) {
    case DirichletModel::kFit:
      return fit_mle(m, false);
    case DirichletModel::kSym:
      return fit_mle(m, true);
    case DirichletModel::kFlat:
      require_fuzzy_or_hard(m, "flat model");
      return FitResult{DirichletParams::flat(m.cols())};
  }
  throw UsageError("unknown dirichlet model");
}

std::pair<FitResult, FitResult> build_model(const MembershipMatrix& m1, const MembershipMatrix& m2,
                                            DirichletModel model) {
  return {build_model(m1, model), build_model(m2, model)};
}

}  // namespace fuzzyrand
