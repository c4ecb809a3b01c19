#include "fuzzyrand/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "fuzzyrand/errors.hpp"
#include "fuzzyrand/rng.hpp"

namespace fuzzyrand {

namespace {

// Running mean and squared deviations (Welford), mergeable in a fixed order.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) noexcept {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(count + o.count);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.count) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / total;
    count += o.count;
  }
};

// Draws the agreement of a pair of i.i.d. memberships from one distribution.
class AgreementDraw {
 public:
  AgreementDraw(const MembershipSampler& sampler, IndexKind kind)
      : sampler_(sampler), kind_(kind), first_(sampler.dims()), second_(sampler.dims()) {}

  double operator()(Xoshiro256pp& rng) {
    if (sampler_.categorical()) {
      return sampler_.draw_label(rng) == sampler_.draw_label(rng) ? 1.0 : 0.0;
    }
    sampler_.draw(rng, first_);
    sampler_.draw(rng, second_);
    return agreement(first_, second_, kind_);
  }

 private:
  const MembershipSampler& sampler_;
  IndexKind kind_;
  std::vector<double> first_;
  std::vector<double> second_;
};

// Agreement of a uniformly drawn unordered pair of rows.
double random_pair_agreement(const MembershipMatrix& m, IndexKind kind, Xoshiro256pp& rng) {
  const std::uint64_t n = m.rows();
  const auto i = rng.below(n);
  auto j = rng.below(n - 1);
  if (j >= i) ++j;
  return agreement(m.row(i), m.row(j), kind);
}

// Runs `make_kernel()` once per worker; each kernel maps an RNG to one sample.
template <typename MakeKernel>
ExpectationEstimate run(const McConfig& cfg, std::string_view method, MakeKernel make_kernel) {
  if (cfg.samples == 0) throw ValidationError("monte carlo: samples must be >= 1");
  const std::size_t workers =
      static_cast<std::size_t>(std::clamp<std::uint64_t>(cfg.workers, 1, cfg.samples));
  std::vector<Moments> partial(workers);
  auto work = [&](std::size_t w) {
    auto kernel = make_kernel();
    auto rng = Xoshiro256pp::substream(cfg.seed, w);
    const std::uint64_t share = cfg.samples / workers + (w < cfg.samples % workers ? 1 : 0);
    Moments acc;
    for (std::uint64_t s = 0; s < share; ++s) acc.add(kernel(rng));
    partial[w] = acc;
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  Moments total;
  for (const auto& p : partial) total.merge(p);
  ExpectationEstimate est;
  est.value = std::clamp(total.mean, 0.0, 1.0);
  const double n = static_cast<double>(total.count);
  est.std_error = total.count > 1 ? std::sqrt(total.m2 / (n - 1.0) / n) : 0.0;
  est.samples = total.count;
  est.seed = cfg.seed;
  est.method = method;
  est.generator = Xoshiro256pp::kName;
  return est;
}

void require_pairs(const MembershipMatrix& m, std::string_view what) {
  require_fuzzy_or_hard(m, what);
  if (m.rows() < 2) {
    throw ValidationError(std::string(what) + ": at least two points are required");
  }
}

}  // namespace

ExpectationEstimate expected_conc_two_sided(const ModelDistribution& d1,
                                            const ModelDistribution& d2, IndexKind kind,
                                            const McConfig& cfg) {
  const MembershipSampler s1(d1);
  const MembershipSampler s2(d2);
  return run(cfg, "two-sided", [&] {
    return [draw1 = AgreementDraw(s1, kind), draw2 = AgreementDraw(s2, kind),
            kind](Xoshiro256pp& rng) mutable {
      const double a1 = draw1(rng);
      const double a2 = draw2(rng);
      return concordance(a1, a2, kind);
    };
  });
}

ExpectationEstimate expected_conc_one_sided(const ModelDistribution& d1, const MembershipMatrix& c2,
                                            IndexKind kind, const McConfig& cfg) {
  require_pairs(c2, "one-sided expectation");
  const MembershipSampler s1(d1);
  if (!cfg.exhaustive_pairs) {
    return run(cfg, "one-sided", [&] {
      return [draw1 = AgreementDraw(s1, kind), &c2, kind](Xoshiro256pp& rng) mutable {
        const double a1 = draw1(rng);
        const double a2 = random_pair_agreement(c2, kind, rng);
        return concordance(a1, a2, kind);
      };
    });
  }

  if (c2.rows() > kMaxExhaustivePoints) {
    throw CapabilityError("one-sided expectation: exhaustive pair mode is limited to N <= " +
                          std::to_string(kMaxExhaustivePoints));
  }
  std::vector<double> observed;
  observed.reserve(c2.rows() * (c2.rows() - 1) / 2);
  for (std::size_t i = 0; i < c2.rows(); ++i) {
    for (std::size_t j = i + 1; j < c2.rows(); ++j) {
      observed.push_back(agreement(c2.row(i), c2.row(j), kind));
    }
  }
  return run(cfg, "one-sided-exhaustive", [&] {
    return [draw1 = AgreementDraw(s1, kind), &observed, kind](Xoshiro256pp& rng) mutable {
      const double a1 = draw1(rng);
      CompensatedSum sum;
      for (double a2 : observed) sum.add(concordance(a1, a2, kind));
      return sum.value() / static_cast<double>(observed.size());
    };
  });
}

ExpectationEstimate expected_conc_perm(const MembershipMatrix& c1, const MembershipMatrix& c2,
                                       IndexKind kind, const McConfig& cfg) {
  if (c1.rows() != c2.rows()) {
    throw ValidationError("permutation model: clusterings cover " + std::to_string(c1.rows()) +
                          " and " + std::to_string(c2.rows()) + " points");
  }
  require_pairs(c1, "permutation model (first clustering)");
  require_pairs(c2, "permutation model (second clustering)");
  return run(cfg, "perm-resampling", [&] {
    return [&c1, &c2, kind](Xoshiro256pp& rng) {
      const double a1 = random_pair_agreement(c1, kind, rng);
      const double a2 = random_pair_agreement(c2, kind, rng);
      return concordance(a1, a2, kind);
    };
  });
}

}  // namespace fuzzyrand
