#include "asub/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>

#include "asub/errors.hpp"
#include "asub/quadrature.hpp"

namespace asub::subordination {

namespace {

// -Psi_X(u): the clock-transform argument of the composition identities.
// Re >= 0 holds mathematically; clamp away rounding noise so the value stays
// inside the transform's guaranteed domain.
std::complex<double> clock_argument(const levy::LevyModel& base, double u) {
  const std::complex<double> w = -levy::char_exponent(base, u);
  return {std::max(w.real(), 0.0), w.imag()};
}

}  // namespace

NuHandle::NuHandle(const TimeChangedModel& tc, double s)
    : base_(tc.base),
      g_(tc.clock.g),
      s_(s),
      beta_s_(0.0),
      r_scale_(tc.clock.r_scale),
      has_jumps_(tc.clock.has_jumps) {
  if (!(s >= tc.clock.domain_start)) {
    throw DomainError("local jump measure: s is before the clock's domain");
  }
  beta_s_ = tc.clock.beta(s);
  if (!std::isfinite(beta_s_) || beta_s_ < 0.0) {
    throw DomainError("local jump measure: beta(s) must be finite and >= 0");
  }
  if (has_jumps_) {
    unit_kinks_ = levy::truncation_kink_radii(base_, 1.0, 60.0 * r_scale_);
  }
}

// Integrates h(r) * g(s, r) over (0, inf), splitting at the radii where h is
// continuous but not smooth (truncated base moments kink where an atom of the
// transition law crosses the truncation boundary); double-exponential rules
// need interior smoothness on each piece.
template <class H>
auto NuHandle::kernel_integral(const std::vector<double>& kinks,
                               H&& h) const {
  using R = std::invoke_result_t<H&, double>;
  if (!has_jumps_) return R(0);
  auto f = [this, &h](double r) { return h(r) * g_(s_, r); };
  R total(0);
  double lo = 0.0;
  for (double k : kinks) {
    total += quad::integrate_de(f, lo, k);
    lo = k;
  }
  total += quad::integrate_upper(f, lo, r_scale_);
  return total;
}

double NuHandle::density(double x) const {
  if (x == 0.0) {
    throw DomainError("jump density: the measure lives on x != 0");
  }
  double val = 0.0;
  if (beta_s_ > 0.0 && base_.jumps().rate() > 0.0) {
    if (!base_.jumps().has_density()) {
      throw UnsupportedModelError(
          "jump density: base jump measure has no Lebesgue density");
    }
    val += beta_s_ * base_.jumps().density(x);
  }
  if (has_jumps_) {
    if (!levy::has_transition_density(base_)) {
      throw UnsupportedModelError(
          "jump density: base model has no transition density");
    }
    val += kernel_integral({}, [this, x](double r) {
      return levy::transition_density(base_, r, x);
    });
  }
  return val;
}

double NuHandle::mgf(double lambda) const {
  double val = 0.0;
  const levy::JumpMeasure& jm = base_.jumps();
  if (beta_s_ > 0.0 && jm.rate() > 0.0) {
    val += beta_s_ * jm.rate() * jm.jump_exp_moment(lambda);
  }
  if (has_jumps_) {
    const double eta = levy::exp_moment_rate(base_, lambda);
    // e^{eta r} g(s, r) in log space: the two factors can overflow/underflow
    // separately (inf * 0) long before the product leaves double range.
    auto f = [this, eta](double r) {
      const double gv = g_(s_, r);
      if (gv <= 0.0) return 0.0;
      const double lg = eta * r + std::log(gv);
      return lg < 700.0 ? std::exp(lg)
                        : std::numeric_limits<double>::infinity();
    };
    double scale = r_scale_;
    if (eta > 0.0) {
      // e^{eta r} fights the kernel's decay; stretch the decay-length hint
      // and probe the tail so divergence reports as a domain error rather
      // than a quadrature failure.
      scale = r_scale_ / std::max(0.1, 1.0 - eta * r_scale_);
      if (!quad::tail_decays(f, scale)) {
        throw DomainError(
            "jump measure mgf: integral diverges at lambda = " +
            std::to_string(lambda) + " (exponential moment rate " +
            std::to_string(eta) + " beats the kernel decay)");
      }
    }
    val += quad::integrate_upper(f, 0.0, scale);
  }
  return val;
}

std::complex<double> NuHandle::cf_integral(double u) const {
  if (u == 0.0) return {0.0, 0.0};
  std::complex<double> val{0.0, 0.0};
  const std::complex<double> iu{0.0, u};
  if (beta_s_ > 0.0 && base_.jumps().rate() > 0.0) {
    // LK jump integral of the base measure: Psi_X(u) - iuc + u^2 Q / 2.
    val += beta_s_ * (levy::char_exponent(base_, u) - iu * base_.drift() +
                      0.5 * u * u * base_.variance());
  }
  if (has_jumps_) {
    const std::complex<double> psi = levy::char_exponent(base_, u);
    val += kernel_integral(unit_kinks_, [this, iu, psi](double r) {
      return std::exp(r * psi) - 1.0 - iu * levy::truncated_mean(base_, r);
    });
  }
  return val;
}

double NuHandle::mass_above(double bound) const {
  if (!(bound > 0.0)) {
    throw DomainError("mass_above: bound must be positive");
  }
  double val = beta_s_ * base_.jumps().mass_outside(bound);
  if (has_jumps_) {
    const auto kinks =
        levy::truncation_kink_radii(base_, bound, 60.0 * r_scale_);
    val += kernel_integral(kinks, [this, bound](double r) {
      return levy::mass_outside(base_, r, bound);
    });
  }
  return val;
}

LocalTriplet local_triplet(const TimeChangedModel& tc, double s) {
  NuHandle nu(tc, s);
  double drift = nu.beta_s_ * tc.base.drift();
  if (nu.has_jumps_) {
    drift += nu.kernel_integral(nu.unit_kinks_, [&tc](double r) {
      return levy::truncated_mean(tc.base, r);
    });
  }
  const double variance = nu.beta_s_ * tc.base.variance();
  return LocalTriplet{s, drift, variance, std::move(nu)};
}

std::complex<double> LocalTriplet::char_exponent(double u) const {
  const std::complex<double> iu{0.0, u};
  return iu * drift - 0.5 * u * u * variance + nu.cf_integral(u);
}

double subordinated_jump_density(const TimeChangedModel& tc, double s,
                                 double x) {
  return NuHandle(tc, s).density(x);
}

double jump_measure_mgf(const TimeChangedModel& tc, double s, double lambda) {
  return NuHandle(tc, s).mgf(lambda);
}

std::complex<double> local_char_exponent(const TimeChangedModel& tc, double s,
                                         double u) {
  return subord::laplace_exponent(tc.clock, s, clock_argument(tc.base, u));
}

std::complex<double> char_exponent_curve(const TimeChangedModel& tc, double t,
                                         double u) {
  return subord::integrated_laplace_exponent(tc.clock, t,
                                             clock_argument(tc.base, u));
}

PathSampler::PathSampler(const TimeChangedModel& tc, std::vector<double> grid,
                         double eps)
    : base_(tc.base), clock_(tc.clock, std::move(grid), eps) {}

PathSample PathSampler::sample(rng::Stream& clock_rng,
                               rng::Stream& base_rng) const {
  PathSample out;
  out.z = clock_.sample(clock_rng);
  out.y.assign(out.z.size(), 0.0);
  for (std::size_t i = 1; i < out.z.size(); ++i) {
    const double dz = out.z[i] - out.z[i - 1];
    out.y[i] = out.y[i - 1] + levy::sample_increment(base_, dz, base_rng);
  }
  return out;
}

PathSample sample_path(const TimeChangedModel& tc,
                       const std::vector<double>& grid, double eps,
                       std::uint64_t master_seed, std::uint64_t path_index) {
  PathSampler sampler(tc, grid, eps);
  rng::Stream clock_rng = rng::Stream::derive(master_seed, path_index, 0);
  rng::Stream base_rng = rng::Stream::derive(master_seed, path_index, 1);
  return sampler.sample(clock_rng, base_rng);
}

}  // namespace asub::subordination
