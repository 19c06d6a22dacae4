#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "asub/levy_model.hpp"
#include "asub/random.hpp"
#include "asub/subordinator.hpp"

namespace asub::subordination {

// Y_t = X_{Z_t}: a Lévy base process run on an independent additive clock.
// The pair is the whole model; Y is additive (independent increments) with
// time-dependent characteristics given by local_triplet below.
struct TimeChangedModel {
  levy::LevyModel base;
  subord::SubordinatorSpec clock;
};

struct LocalTriplet;
LocalTriplet local_triplet(const TimeChangedModel& tc, double s);

// The local jump measure of Y at calendar time s,
//   nu~_s(dx) = beta(s) nu(dx) + int_0^inf P(X_r in dx) g(s, r) dr,
// exposed as lazy quadrature queries rather than a materialized measure.
class NuHandle {
 public:
  NuHandle(const TimeChangedModel& tc, double s);

  // Lebesgue density at x != 0. Needs a base transition density for the
  // integral part and a jump-size density for the beta(s) nu part.
  double density(double x) const;
  // int e^{lambda x} nu~_s(dx); DomainError when the integral diverges.
  double mgf(double lambda) const;
  // int (e^{iux} - 1 - iux 1{|x| <= 1}) nu~_s(dx): the jump term of the
  // Lévy–Khintchine form of the local exponent.
  std::complex<double> cf_integral(double u) const;
  // nu~_s({|x| > bound})
  double mass_above(double bound) const;

 private:
  friend LocalTriplet local_triplet(const TimeChangedModel& tc, double s);
  template <class H>
  auto kernel_integral(const std::vector<double>& kinks, H&& h) const;

  levy::LevyModel base_;
  std::function<double(double, double)> g_;
  double s_;
  double beta_s_;
  double r_scale_;
  bool has_jumps_;
  std::vector<double> unit_kinks_;  // radii where unit-truncated moments kink
};

// Characteristics of Y at calendar time s: Y behaves locally like a Lévy
// process with triplet (drift, variance, nu).
struct LocalTriplet {
  double s;
  double drift;     // beta(s) c + int E[X_r 1{|X_r|<=1}] g(s,r) dr
  double variance;  // beta(s) Q
  NuHandle nu;

  // Lévy–Khintchine form: iu drift - u^2 variance / 2 + nu.cf_integral(u).
  // Agrees with local_char_exponent (composition route) within quadrature
  // tolerance; the two routes are compared in tests.
  std::complex<double> char_exponent(double u) const;
};

// Density of nu~_s at x (the integral part via quadrature in r).
double subordinated_jump_density(const TimeChangedModel& tc, double s,
                                 double x);
// int e^{lambda x} nu~_s(dx).
double jump_measure_mgf(const TimeChangedModel& tc, double s, double lambda);

// Local characteristic exponent via composition: psi_s(-Psi_X(u)), valid
// because Re(Psi_X) <= 0.
std::complex<double> local_char_exponent(const TimeChangedModel& tc, double s,
                                         double u);

// Psi-bar_t(u) = int_0^t psi_s(-Psi_X(u)) ds, so that
// E[e^{iu Y_t}] = exp(Psi-bar_t(u)). Uses the clock's closed form when
// attached, otherwise time quadrature (SingularOriginError if the origin
// piece diverges without a closed form).
std::complex<double> char_exponent_curve(const TimeChangedModel& tc, double t,
                                         double u);

// One simulated path of (Z, Y) on a fixed grid; both start at 0.
struct PathSample {
  std::vector<double> z;
  std::vector<double> y;
};

// Per-interval samplers for a fixed grid. Each path consumes one clock
// stream and one base stream, so results are reproducible per (seed, path).
class PathSampler {
 public:
  PathSampler(const TimeChangedModel& tc, std::vector<double> grid,
              double eps);
  const std::vector<double>& grid() const { return clock_.grid(); }
  PathSample sample(rng::Stream& clock_rng, rng::Stream& base_rng) const;

 private:
  levy::LevyModel base_;
  subord::PathSampler clock_;
};

// One path with streams derived from (master_seed, path_index): lane 0
// drives the clock, lane 1 the base.
PathSample sample_path(const TimeChangedModel& tc,
                       const std::vector<double>& grid, double eps,
                       std::uint64_t master_seed, std::uint64_t path_index);

}  // namespace asub::subordination
