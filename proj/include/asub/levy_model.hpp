#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "asub/random.hpp"

namespace asub::levy {

// Jump-size distributions for finite-activity jump parts.
struct NormalJump {
  double mean = 0.0;
  double stddev = 0.0;  // > 0
};
struct DiracJump {
  double size = 0.0;  // != 0
};
using JumpDist = std::variant<NormalJump, DiracJump>;

// Finite-activity jump measure: rate * (jump-size distribution), or none.
class JumpMeasure {
 public:
  JumpMeasure() = default;  // zero measure
  JumpMeasure(double rate, JumpDist dist);

  static JumpMeasure zero() { return {}; }
  static JumpMeasure normal(double rate, double mean, double stddev) {
    return {rate, NormalJump{mean, stddev}};
  }
  static JumpMeasure dirac(double rate, double size) {
    return {rate, DiracJump{size}};
  }

  bool is_zero() const { return !dist_.has_value(); }
  double rate() const { return rate_; }
  const JumpDist& dist() const;

  // Lebesgue density of the measure at y (rate * F(y)); only when the
  // jump-size law has a density.
  bool has_density() const;
  double density(double y) const;

  // E[e^{i u J}] of one jump (1 for the zero measure).
  std::complex<double> jump_cf(double u) const;
  // E[e^{theta J}] of one jump; finite for all supported families.
  double jump_exp_moment(double theta) const;
  // E[J 1{|J| <= 1}] of one jump.
  double jump_trunc_mean() const;
  // Measure of {|y| > bound}: rate * P(|J| > bound).
  double mass_outside(double bound) const;

  double sample(rng::Stream& rng) const;

 private:
  double rate_ = 0.0;
  std::optional<JumpDist> dist_;
};

// One term of a Gaussian/atom mixture representing the law of an increment:
// weight * Normal(mean, var), an atom at `mean` when var == 0.
struct MixtureComponent {
  double weight;
  double mean;
  double var;
};

// Time-homogeneous process with independent stationary increments, specified
// by drift c, Gaussian variance Q and a finite-activity jump measure. Jumps
// with |y| <= 1 are compensated in the characteristic exponent, so c is the
// triplet drift, not the sample-path drift.
class LevyModel {
 public:
  LevyModel(double drift, double variance, JumpMeasure jumps,
            int dimension = 1);

  int dimension() const { return dimension_; }
  double drift() const { return drift_; }
  double variance() const { return variance_; }
  const JumpMeasure& jumps() const { return jumps_; }

  // Sample-path drift: c minus the compensator of small jumps.
  double path_drift() const { return path_drift_; }

 private:
  int dimension_;
  double drift_;
  double variance_;
  JumpMeasure jumps_;
  double path_drift_;
};

LevyModel brownian(double drift, double variance);
LevyModel pure_drift(double drift);

// Log-characteristic function rate: E[e^{iuX_r}] = e^{r * char_exponent(u)}.
// Re <= 0 everywhere and the value at -u is the conjugate.
std::complex<double> char_exponent(const LevyModel& m, double u);

// Log-moment-generating rate: E[e^{lambda X_r}] = e^{r * exp_moment_rate}.
// Finite for every real lambda in the supported model families.
double exp_moment_rate(const LevyModel& m, double lambda);

// The law of X_r as a finite Gaussian/atom mixture (Poisson-weighted jump
// counts). Component weights sum to 1 - tail_tol or better.
std::vector<MixtureComponent> density_components(const LevyModel& m, double r,
                                                 double tail_tol = 1e-14);

// True when the law of X_r has a Lebesgue density for every r > 0.
bool has_transition_density(const LevyModel& m);
// Density of X_r at x (requires has_transition_density).
double transition_density(const LevyModel& m, double r, double x);

// Exact draw distributed as X_r; r == 0 returns 0.
double sample_increment(const LevyModel& m, double r, rng::Stream& rng);

// (P_r f)(x) = E[f(x + X_r)], quadrature against the mixture law.
double semigroup_apply(const LevyModel& m,
                       const std::function<double(double)>& f, double r,
                       double x);

// E[X_r 1{|X_r| <= 1}]
double truncated_mean(const LevyModel& m, double r);
// E[X_r^2 1{|X_r| <= 1}]
double truncated_second_moment(const LevyModel& m, double r);
// P(|X_r| > bound)
double mass_outside(const LevyModel& m, double r, double bound);
// P(|X_r| > 1)
double mass_outside_unit(const LevyModel& m, double r);

// Radii in (0, r_cap) where r -> E[f(X_r) 1{|X_r| <= bound}] can be
// non-smooth: when the law of X_r has atoms (variance == 0), an atom path
// path_drift*r + k*jump_size crosses the truncation boundary at isolated
// radii.
// Sorted ascending; empty when the transition law is smooth.
std::vector<double> truncation_kink_radii(const LevyModel& m, double bound,
                                          double r_cap);

// Small-time moment growth check: each of the three truncated quantities
// above must grow at most linearly in r near 0.
struct SatoRow {
  double r;
  double mass_outside;
  double abs_trunc_mean;
  double trunc_second;
  double ratio;  // max of the three over (r ∧ 1)
};
struct SatoReport {
  std::vector<SatoRow> rows;
  double max_ratio;
  double ratio_smallest;   // at the smallest grid r
  double ratio_reference;  // at the grid r closest to 1e-2
  bool pass;
};
SatoReport sato_bound_check(const LevyModel& m, std::span<const double> r_grid);

}  // namespace asub::levy
