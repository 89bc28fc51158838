#ifndef COALSIM_LAMBDA_MEASURE_HPP
#define COALSIM_LAMBDA_MEASURE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "coalsim/errors.hpp"
#include "coalsim/random.hpp"

namespace coalsim {

/// One weighted Beta(a, b) density component of a reproduction measure.
struct BetaComponent {
  double a = 1.0;
  double b = 1.0;
  double weight = 1.0;
};

/// A point mass at x in (0, 1].
struct PointAtom {
  double x = 1.0;
  double weight = 1.0;
};

/// Finite measure on [0, 1] driving an exchangeable reproduction model:
/// a point mass at 0 (binary reproduction), a mixture of Beta densities,
/// and finitely many atoms in (0, 1]. Every event rate in the library is an
/// integral against this measure.
class LambdaMeasure {
 public:
  LambdaMeasure(double atom0, std::vector<BetaComponent> betas, std::vector<PointAtom> atoms);

  /// Pure pairwise reproduction: weight * delta_0.
  static LambdaMeasure kingman(double weight = 1.0);
  /// Uniform density on (0, 1) (the Bolthausen-Sznitman model).
  static LambdaMeasure uniform(double weight = 1.0);
  /// Single Beta(a, b) density component.
  static LambdaMeasure beta(double a, double b, double weight = 1.0);
  /// Single atom at x in (0, 1] (Eldon-Wakeley-type models).
  static LambdaMeasure point(double x, double weight = 1.0);

  static LambdaMeasure from_json(const nlohmann::json& spec);
  static LambdaMeasure from_file(const std::string& path);
  nlohmann::json to_json() const;

  double atom0() const { return atom0_; }
  const std::vector<BetaComponent>& beta_components() const { return betas_; }
  const std::vector<PointAtom>& point_atoms() const { return atoms_; }
  double total_mass() const;
  /// True when the measure charges only {0} (pairwise events only).
  bool is_binary() const { return betas_.empty() && atoms_.empty(); }

 private:
  double atom0_ = 0.0;
  std::vector<BetaComponent> betas_;
  std::vector<PointAtom> atoms_;
};

/// Discrete distribution over integer values together with the total event
/// rate it was normalized from.
struct RatePmf {
  std::vector<long long> support;   // strictly increasing
  std::vector<double> probs;        // sums to 1
  std::vector<double> cumulative;   // running sums of probs
  double total_rate = 0.0;

  long long sample(Rng& rng) const;
  double prob_of(long long value) const;
  void build_cumulative();
};

/// Rate at which a fixed k-subset out of n lineages participates in a common
/// reproduction event: the (k-2, n-k) binomial moment of the measure.
double merger_rate(const LambdaMeasure& lam, long long n, long long k);

/// Speed functional whose reciprocal tail integral decides whether the model
/// started from infinitely many lineages reaches a finite count in finite
/// time: atom0 * u^2 plus the measure-weighted integral of
/// (e^{-xu} - 1 + xu) / x^2.
double descent_rate(const LambdaMeasure& lam, double u);

enum class CdiVerdict { comes_down, does_not_come_down, inconclusive };

std::string to_string(CdiVerdict v);

struct CdiReport {
  CdiVerdict verdict = CdiVerdict::inconclusive;
  double gamma_fit = 0.0;            // global log-log slope of the speed functional
  double gamma_extrapolated = 0.0;   // accelerated limit of per-decade slopes
  double increment_ratio = 0.0;      // last/previous decade increment of the tail integral
  double relative_tail = 0.0;        // estimated remaining tail over the partial integral
  std::vector<double> grid_u;
  std::vector<double> speed_values;
  std::vector<double> partial_integrals;  // integral of 1/speed from 1 to each decade
};

/// Numeric check of the tail-integral criterion. "inconclusive" is a legal
/// verdict: convergence of an improper integral is not decidable numerically.
CdiReport cdi_check(const LambdaMeasure& lam);

/// Distribution of the number of new copies created by an event seen by a
/// group of n lineages (values 1..n-1); the normalizer is the total rate of
/// such events.
RatePmf offspring_pmf(const LambdaMeasure& lam, long long n);

/// Jump-size distribution of a fixation line at level j: jump m-1 occurs at
/// rate C(j, m) * merger_rate(lam, j, m). As a distribution this coincides
/// with offspring_pmf(lam, j); total_rate carries the absolute event rate.
RatePmf level_jump_rates(const LambdaMeasure& lam, long long j);

namespace detail {
double log_binomial(long long n, long long k);
double log_beta(double a, double b);
}  // namespace detail

}  // namespace coalsim

#endif  // COALSIM_LAMBDA_MEASURE_HPP
