#include "asub/generator_check.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "asub/errors.hpp"
#include "asub/kernels.hpp"
#include "asub/quadrature.hpp"
#include "asub/subordinator.hpp"

namespace asub::gencheck {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Below this r the integrand of the r-integral uses the first-order value
// r * L f_s(x): P_r f_s - f_s = r L f_s + O(r^2), and evaluating the
// difference by quadrature at tiny r would be pure cancellation.
constexpr double kSeriesGuard = 1e-6;

double normal_pdf(double y, double mean, double sd) {
  const double z = (y - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * kPi));
}

}  // namespace

TestFunction gaussian_probe() {
  TestFunction tf;
  tf.f = [](double s, double x) { return std::exp(-s - 0.5 * x * x); };
  tf.df_ds = [](double s, double x) { return -std::exp(-s - 0.5 * x * x); };
  tf.df_dx = [](double s, double x) {
    return -x * std::exp(-s - 0.5 * x * x);
  };
  tf.d2f_dx2 = [](double s, double x) {
    return (x * x - 1.0) * std::exp(-s - 0.5 * x * x);
  };
  tf.decay_radius = 14.0;
  tf.sup_norm = 1.0;
  return tf;
}

TestFunction odd_probe() {
  TestFunction tf;
  tf.f = [](double s, double x) { return std::exp(-s) * x * std::exp(-x * x); };
  tf.df_ds = [](double s, double x) {
    return -std::exp(-s) * x * std::exp(-x * x);
  };
  tf.df_dx = [](double s, double x) {
    return std::exp(-s) * (1.0 - 2.0 * x * x) * std::exp(-x * x);
  };
  tf.d2f_dx2 = [](double s, double x) {
    return std::exp(-s) * (4.0 * x * x - 6.0) * x * std::exp(-x * x);
  };
  // |d2f/dx2| peaks at ~1.95 e^{-s} (x ~ 0.52), so the 1e-6 decay level
  // needs a slightly larger radius than the symmetric probe's.
  tf.decay_radius = 15.0;
  tf.sup_norm = 0.43;  // max |x e^{-x^2}| = e^{-1/2}/sqrt(2) ~ 0.4289
  return tf;
}

bool decay_certificate(const TestFunction& tf) {
  const double radius = tf.decay_radius;
  if (!(radius > 0.0)) return false;
  const double reach = 3.0 * radius;
  const double step = radius / 40.0;
  for (double s = 0.0; s <= reach; s += step) {
    for (double x = -reach; x <= reach; x += step) {
      if (s * s + x * x < radius * radius) continue;
      if (std::abs(tf.f(s, x)) > 1e-6) return false;
      if (std::abs(tf.df_ds(s, x)) > 1e-6) return false;
      if (std::abs(tf.df_dx(s, x)) > 1e-6) return false;
      if (std::abs(tf.d2f_dx2(s, x)) > 1e-6) return false;
    }
  }
  return true;
}

double apply_base_generator(const levy::LevyModel& m, const TestFunction& tf,
                            double s, double x) {
  if (m.dimension() != 1) {
    throw UnsupportedModelError(
        "base generator: only one-dimensional models are supported");
  }
  double total = m.drift() * tf.df_dx(s, x) +
                 0.5 * m.variance() * tf.d2f_dx2(s, x);
  const auto& jm = m.jumps();
  if (!jm.is_zero()) {
    const double fx = tf.f(s, x);
    const double fpx = tf.df_dx(s, x);
    if (const auto* atom = std::get_if<levy::DiracJump>(&jm.dist())) {
      const double y = atom->size;
      double term = tf.f(s, x + y) - fx;
      if (std::abs(y) <= 1.0) term -= y * fpx;
      total += jm.rate() * term;
    } else {
      const auto& nj = std::get<levy::NormalJump>(jm.dist());
      const double lo = nj.mean - 12.0 * nj.stddev;
      const double hi = nj.mean + 12.0 * nj.stddev;
      const double mean_f = quad::integrate(
          [&tf, &nj, s, x](double y) {
            return tf.f(s, x + y) * normal_pdf(y, nj.mean, nj.stddev);
          },
          lo, hi);
      total += jm.rate() * (mean_f - fx - fpx * jm.jump_trunc_mean());
    }
  }
  return total;
}

double apply_timechanged_generator(const subordination::TimeChangedModel& tc,
                                   const TestFunction& tf, double s, double x) {
  const auto& clock = tc.clock;
  if (s < clock.domain_start) {
    throw DomainError(
        "time-changed generator: s is below the clock's calendar domain");
  }
  const double lf = apply_base_generator(tc.base, tf, s, x);
  double total = tf.df_ds(s, x) + clock.beta(s) * lf;
  if (clock.has_jumps) {
    const double f0 = tf.f(s, x);
    const auto fs = [&tf, s](double y) { return tf.f(s, y); };
    const auto integrand = [&](double r) {
      if (r <= 0.0) return 0.0;
      const double gv = clock.g(s, r);
      if (gv == 0.0) return 0.0;
      if (r < kSeriesGuard) return r * lf * gv;
      return (levy::semigroup_apply(tc.base, fs, r, x) - f0) * gv;
    };
    try {
      total += quad::integrate_de(integrand, 0.0, 1.0);
      total += quad::integrate_upper(integrand, 1.0, clock.r_scale);
    } catch (const QuadratureError& e) {
      throw QuadratureError(
          std::string("time-changed generator: r-integral did not converge "
                      "at s = ") +
          std::to_string(s) + ": " + e.what());
    }
  }
  return total;
}

QuotientEstimate difference_quotient(const subordination::TimeChangedModel& tc,
                                     const TestFunction& tf, double s, double x,
                                     double t, std::size_t n_paths, double eps,
                                     rng::Stream& rng) {
  if (!(t > 0.0)) {
    throw DomainError("difference quotient: step t must be positive");
  }
  if (n_paths == 0) {
    throw DomainError("difference quotient: need at least one path");
  }
  const subord::IncrementLaw law(tc.clock, s, t);
  const subord::IncrementSampler sampler(law, eps);
  std::vector<double> vals(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    const double dz = sampler.sample(rng);
    const double dy = levy::sample_increment(tc.base, dz, rng);
    vals[i] = tf.f(s + t, x + dy);
  }
  const double n = static_cast<double>(n_paths);
  const double mean = kernels::sum(vals) / n;
  // two-pass variance: stable even when every sample is identical
  // central_sums returns (sum (v-mean)^2, sum (v-mean)^4); the first is the
  // two-pass variance numerator, immune to the cancellation that makes
  // one-pass sums report phantom spread on deterministic samples.
  const auto centered = kernels::central_sums(vals, mean);
  const double var = n > 1.0 ? centered.s1 / (n - 1.0) : 0.0;
  return {(mean - tf.f(s, x)) / t, std::sqrt(var / n) / t};
}

ConvergenceReport convergence_report(const subordination::TimeChangedModel& tc,
                                     const TestFunction& tf, double s, double x,
                                     const std::vector<double>& t_list,
                                     std::size_t n_paths, double eps,
                                     std::uint64_t seed) {
  if (t_list.empty()) {
    throw DomainError("convergence report: t_list must be nonempty");
  }
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0) || (i > 0 && !(t_list[i] < t_list[i - 1]))) {
      throw DomainError(
          "convergence report: t_list must be positive and decreasing");
    }
  }
  ConvergenceReport rep;
  rep.target = apply_timechanged_generator(tc, tf, s, x);
  rep.rows.reserve(t_list.size());
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    auto stream = rng::Stream::derive(seed, i);
    const auto est =
        difference_quotient(tc, tf, s, x, t_list[i], n_paths, eps, stream);
    rep.rows.push_back({t_list[i], est.estimate, est.std_error,
                        std::abs(est.estimate - rep.target)});
  }
  // Fit err ~ a t + b t^2 by least squares and report the effective bias
  // slope at the finest step, a + b t_final. The quadratic term absorbs
  // genuine Taylor curvature of the bias; a non-vanishing error offset
  // (the failure mode this report exists to catch) cannot be represented
  // by the model and shows up as a residual at the finest step.
  double s20 = 0.0, s30 = 0.0, s40 = 0.0, b1 = 0.0, b2 = 0.0;
  for (const auto& row : rep.rows) {
    const double t2 = row.t * row.t;
    s20 += t2;
    s30 += t2 * row.t;
    s40 += t2 * t2;
    b1 += row.abs_error * row.t;
    b2 += row.abs_error * t2;
  }
  const double t_final = rep.rows.back().t;
  const double det = s20 * s40 - s30 * s30;
  if (rep.rows.size() > 1 && det > 1e-12 * s20 * s40) {
    const double a = (b1 * s40 - b2 * s30) / det;
    const double b = (s20 * b2 - s30 * b1) / det;
    rep.slope = a + b * t_final;
  } else {
    rep.slope = s20 > 0.0 ? b1 / s20 : 0.0;
  }
  rep.slope = std::max(0.0, rep.slope);
  bool ok = true;
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    ok = ok && rep.rows[i + 1].abs_error <=
                   rep.rows[i].abs_error +
                       3.0 * (rep.rows[i].std_error + rep.rows[i + 1].std_error);
  }
  const auto& last = rep.rows.back();
  ok = ok && last.abs_error <= 3.0 * last.std_error + rep.slope * last.t;
  rep.passed = ok;
  return rep;
}

}  // namespace asub::gencheck
