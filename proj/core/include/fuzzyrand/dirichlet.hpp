#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fuzzyrand/hard_models.hpp"
#include "fuzzyrand/membership.hpp"
#include "fuzzyrand/rng.hpp"

namespace fuzzyrand {

/// Dirichlet concentration vector; every entry positive and finite.
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha);

  static DirichletParams flat(std::size_t dims) { return DirichletParams(std::vector(dims, 1.0)); }
  static DirichletParams symmetric(std::size_t dims, double alpha) {
    return DirichletParams(std::vector(dims, alpha));
  }

  const std::vector<double>& alpha() const noexcept { return alpha_; }
  std::size_t dims() const noexcept { return alpha_.size(); }
  double precision() const noexcept { return precision_; }
  std::vector<double> mean() const;

 private:
  std::vector<double> alpha_;
  double precision_ = 0.0;
};

/// Categorical distribution over one-hot membership vectors (the alpha -> 0 limit).
struct Categorical {
  ProportionVector p;
};

/// Distribution that random membership vectors are drawn from.
class ModelDistribution {
 public:
  ModelDistribution(DirichletParams d) : value_(std::move(d)) {}  // NOLINT
  ModelDistribution(Categorical c) : value_(std::move(c)) {}      // NOLINT

  bool is_categorical() const noexcept { return std::holds_alternative<Categorical>(value_); }
  const DirichletParams& dirichlet() const { return std::get<DirichletParams>(value_); }
  const Categorical& categorical() const { return std::get<Categorical>(value_); }
  std::size_t dims() const noexcept;

  /// "dirichlet(a1,a2,...)" or "categorical(p1,p2,...)".
  std::string describe() const;

 private:
  std::variant<DirichletParams, Categorical> value_;
};

/// log density on the open simplex. Throws ValidationError for boundary points.
double log_pdf(const DirichletParams& d, std::span<const double> x);

/// Draws membership vectors from a ModelDistribution.
///
/// Dirichlet draws normalize independent Gamma(alpha_i, 1) variates
/// (Marsaglia-Tsang, with the alpha < 1 boost computed in log space so tiny
/// concentrations do not underflow). Categorical draws are one-hot.
class MembershipSampler {
 public:
  explicit MembershipSampler(const ModelDistribution& d);

  std::size_t dims() const noexcept { return dims_; }
  bool categorical() const noexcept { return categorical_; }

  void draw(Xoshiro256pp& rng, std::span<double> out) const;
  /// Label of a categorical draw. Only valid when categorical().
  std::size_t draw_label(Xoshiro256pp& rng) const;

 private:
  struct GammaTerm {
    double alpha;
    double d;  // shape used by Marsaglia-Tsang: max(alpha, alpha + 1) - 1/3
    double c;  // 1 / sqrt(9 d)
    double inv_alpha;
    bool boosted;
    bool exponential;
  };

  double gamma(const GammaTerm& t, Xoshiro256pp& rng) const;

  std::size_t dims_ = 0;
  bool categorical_ = false;
  bool log_space_ = false;
  std::vector<GammaTerm> terms_;
  std::vector<double> cumulative_;
};

/// count i.i.d. draws as the rows of a matrix.
MembershipMatrix sample(const ModelDistribution& d, Xoshiro256pp& rng, std::size_t count);

/// Memberships are clamped to [kFitClamp, 1 - kFitClamp] before taking logs.
inline constexpr double kFitClamp = 1e-6;
/// Below this fitted precision the fit collapses to its categorical limit.
inline constexpr double kDegeneratePrecision = 0.01;
/// Stopping rule: largest step |delta alpha_k| / max(1, alpha_k).
inline constexpr double kFitTolerance = 1e-10;
inline constexpr std::size_t kFitMaxIterations = 10'000;
/// Largest concentration a fit may report; larger fits are rescaled onto it.
inline constexpr double kMaxConcentration = 1e6;

struct FitResult {
  ModelDistribution model;
  std::size_t iterations = 0;
  bool hard_input = false;  // categorical closed path taken because the input is hard
  bool degenerate = false;  // categorical limit taken because precision < kDegeneratePrecision
  bool capped = false;      // concentration hit kMaxConcentration
};

/// Maximum-likelihood Dirichlet.
///
/// Iterates Minka's Newton update (Hessian inverted by Sherman-Morrison),
/// falling back to his fixed-point update psi(a_k) = psi(sum a) + E[log x_k]
/// whenever a Newton step would leave the positive orthant.
///
/// Hard input returns the categorical limit directly: the column means for a
/// general fit, uniform proportions for a symmetric fit. Throws
/// ConvergenceError (with the last iterate) when neither the tolerance nor a
/// degenerate exit is reached within kFitMaxIterations.
FitResult fit_mle(const MembershipMatrix& m, bool symmetric);

enum class DirichletModel { kFit, kSym, kFlat };

std::string_view to_string(DirichletModel model);

/// Random-model distributions for a pair of clusterings.
std::pair<FitResult, FitResult> build_model(const MembershipMatrix& m1, const MembershipMatrix& m2,
                                            DirichletModel model);
FitResult build_model(const MembershipMatrix& m, DirichletModel model);

}  // namespace fuzzyrand
