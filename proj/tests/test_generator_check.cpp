#include "asub/generator_check.hpp"

#include <catch2/catch.hpp>
#include <cmath>
#include <vector>

#include "asub/errors.hpp"
#include "asub/levy_model.hpp"
#include "asub/random.hpp"
#include "asub/selfdec.hpp"
#include "asub/subordinator.hpp"

using namespace asub;
using gencheck::apply_base_generator;
using gencheck::apply_timechanged_generator;
using gencheck::convergence_report;
using gencheck::decay_certificate;
using gencheck::difference_quotient;
using gencheck::gaussian_probe;
using gencheck::odd_probe;
using gencheck::TestFunction;
using subord::SubordinatorSpec;
namespace tcm = asub::subordination;

namespace {

// g(s, r) = e^{-r}, no drift: the r-integral goes through raw quadrature.
SubordinatorSpec raw_exp_spec() {
  SubordinatorSpec spec;
  spec.name = "raw_exp";
  spec.beta = [](double) { return 0.0; };
  spec.g = [](double, double r) { return std::exp(-r); };
  spec.has_jumps = true;
  spec.r_scale = 1.0;
  spec.validate();
  return spec;
}

// beta == 0, g == 0: every generator term vanishes.
SubordinatorSpec zero_clock() {
  SubordinatorSpec spec;
  spec.name = "zero";
  spec.beta = [](double) { return 0.0; };
  spec.g = [](double, double) { return 0.0; };
  spec.has_jumps = false;
  spec.validate();
  return spec;
}

// A probe with no s-dependence: f(s, x) = e^{-x^2/2}.
TestFunction stationary_probe() {
  TestFunction tf;
  tf.f = [](double, double x) { return std::exp(-0.5 * x * x); };
  tf.df_ds = [](double, double) { return 0.0; };
  tf.df_dx = [](double, double x) { return -x * std::exp(-0.5 * x * x); };
  tf.d2f_dx2 = [](double, double x) {
    return (x * x - 1.0) * std::exp(-0.5 * x * x);
  };
  tf.decay_radius = 14.0;
  return tf;
}

// A probe constant in x: only the time derivative survives.
TestFunction space_constant_probe() {
  TestFunction tf;
  tf.f = [](double s, double) { return std::exp(-s); };
  tf.df_ds = [](double s, double) { return -std::exp(-s); };
  tf.df_dx = [](double, double) { return 0.0; };
  tf.d2f_dx2 = [](double, double) { return 0.0; };
  return tf;
}

TestFunction zero_probe() {
  TestFunction tf;
  tf.f = [](double, double) { return 0.0; };
  tf.df_ds = [](double, double) { return 0.0; };
  tf.df_dx = [](double, double) { return 0.0; };
  tf.d2f_dx2 = [](double, double) { return 0.0; };
  tf.decay_radius = 1.0;
  tf.sup_norm = 0.0;
  return tf;
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

}  // namespace

TEST_CASE("probe functions: partials and decay") {
  // [DERIVED] analytic partials agree with central finite differences
  const double h = 1e-5;
  for (const auto& tf : {gaussian_probe(), odd_probe()}) {
    for (const auto [s, x] : {std::pair{0.3, 0.7}, std::pair{1.1, -1.4}}) {
      const double fd_s = (tf.f(s + h, x) - tf.f(s - h, x)) / (2.0 * h);
      const double fd_x = (tf.f(s, x + h) - tf.f(s, x - h)) / (2.0 * h);
      const double fd_xx =
          (tf.f(s, x + h) - 2.0 * tf.f(s, x) + tf.f(s, x - h)) / (h * h);
      CHECK(tf.df_ds(s, x) == Approx(fd_s).margin(1e-7));
      CHECK(tf.df_dx(s, x) == Approx(fd_x).margin(1e-7));
      CHECK(tf.d2f_dx2(s, x) == Approx(fd_xx).margin(1e-5));
    }
  }

  // [TRIVIAL] the shipped probes carry a valid decay certificate
  CHECK(decay_certificate(gaussian_probe()));
  CHECK(decay_certificate(odd_probe()));
  // sup-norm bounds hold at the maximizing points
  CHECK(std::abs(gaussian_probe().f(0.0, 0.0)) <= gaussian_probe().sup_norm);
  CHECK(std::abs(odd_probe().f(0.0, 1.0 / std::sqrt(2.0))) <=
        odd_probe().sup_norm);
  // a probe that does not vanish at infinity fails the certificate
  CHECK_FALSE(decay_certificate(space_constant_probe()));
}

TEST_CASE("base generator: diffusion part") {
  const auto tf = gaussian_probe();

  // [DERIVED] BM(0,1): L f = (1/2) f'' = (1/2)(x^2 - 1) e^{-s - x^2/2}
  CHECK(apply_base_generator(levy::brownian(0.0, 1.0), tf, 0.0, 0.0) ==
        Approx(-0.5).margin(1e-12));
  CHECK(apply_base_generator(levy::brownian(0.0, 1.0), tf, 0.5, 1.2) ==
        Approx(0.5 * (1.44 - 1.0) * std::exp(-0.5 - 0.72)).margin(1e-12));

  // [TRIVIAL] constant-in-x probe: all space derivatives vanish
  CHECK(apply_base_generator(levy::brownian(0.3, 2.0), space_constant_probe(),
                             0.7, 1.3) == 0.0);

  // [TRIVIAL] pure drift at the symmetric probe's critical point x = 0
  CHECK(apply_base_generator(levy::pure_drift(1.0), tf, 0.0, 0.0) ==
        Approx(0.0).margin(1e-15));
  // ... and c f' away from it
  CHECK(apply_base_generator(levy::pure_drift(1.0), tf, 0.0, 1.0) ==
        Approx(-std::exp(-0.5)).margin(1e-12));

  // [DERIVED] odd probe: (1/2) f''(0, 1/2) = (1/2)(4/4 - 6)(1/2) e^{-1/4}
  CHECK(apply_base_generator(levy::brownian(0.0, 1.0), odd_probe(), 0.0, 0.5) ==
        Approx(0.5 * (1.0 - 6.0) * 0.5 * std::exp(-0.25)).margin(1e-12));
}

TEST_CASE("base generator: jump part") {
  const auto tf = gaussian_probe();

  // [DERIVED] atomic jumps of size 2 (> 1, no compensator):
  // L f(0,0) = (1/2)(0.2) f''(0,0) + 1.5 (f(0,2) - f(0,0))
  {
    const levy::LevyModel m(0.1, 0.2, levy::JumpMeasure::dirac(1.5, 2.0));
    const double expected =
        0.1 * 0.0 + 0.5 * 0.2 * (-1.0) + 1.5 * (std::exp(-2.0) - 1.0);
    CHECK(apply_base_generator(m, tf, 0.0, 0.0) ==
          Approx(expected).margin(1e-12));
  }

  // [DERIVED] atomic jumps of size 0.6 (<= 1, compensated):
  // L f(0, 0.4) = 0.3 f'(0.4) + 2 (f(1.0) - f(0.4) - 0.6 f'(0.4))
  {
    const levy::LevyModel m(0.3, 0.0, levy::JumpMeasure::dirac(2.0, 0.6));
    const auto f = [](double x) { return std::exp(-0.5 * x * x); };
    const auto fp = [](double x) { return -x * std::exp(-0.5 * x * x); };
    const double expected =
        0.3 * fp(0.4) + 2.0 * (f(1.0) - f(0.4) - 0.6 * fp(0.4));
    CHECK(apply_base_generator(m, tf, 0.0, 0.4) ==
          Approx(expected).margin(1e-12));
  }

  // [DERIVED] Gaussian jumps J ~ N(0.1, 0.2^2) against closed forms:
  // E[f(x+J)] = e^{-(x+mu)^2 / (2(1+sd^2))} / sqrt(1+sd^2) and
  // E[J 1{|J|<=1}] = mu (Phi(b) - Phi(a)) - sd (phi(b) - phi(a)).
  {
    const double mu = 0.1, sd = 0.2, rate = 2.0, x = 0.3;
    const levy::LevyModel m(0.0, 1.0, levy::JumpMeasure::normal(rate, mu, sd));
    const double mean_f = std::exp(-0.5 * (x + mu) * (x + mu) / (1.0 + sd * sd)) /
                          std::sqrt(1.0 + sd * sd);
    const double a = (-1.0 - mu) / sd, b = (1.0 - mu) / sd;
    const double trunc_mean = mu * (norm_cdf(b) - norm_cdf(a)) -
                              sd * (norm_pdf(b) - norm_pdf(a));
    const auto f = [](double y) { return std::exp(-0.5 * y * y); };
    const auto fp = [](double y) { return -y * std::exp(-0.5 * y * y); };
    const double expected = 0.5 * (x * x - 1.0) * f(x) +
                            rate * (mean_f - f(x) - fp(x) * trunc_mean);
    CHECK(apply_base_generator(m, tf, 0.0, x) ==
          Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("timechanged generator: identity clock degeneration") {
  const auto tf = gaussian_probe();
  const tcm::TimeChangedModel tc{levy::brownian(0.0, 1.0),
                                 subord::identity_clock()};

  // [DERIVED] df/ds + L f = -1 - 0.5 at the origin
  CHECK(apply_timechanged_generator(tc, tf, 0.0, 0.0) ==
        Approx(-1.5).margin(1e-12));

  // [TRIVIAL] pointwise equality with the two-term sum, including jumps
  const tcm::TimeChangedModel jumpy{
      levy::LevyModel(0.2, 0.5, levy::JumpMeasure::normal(1.0, -0.3, 0.4)),
      subord::identity_clock()};
  for (const auto [s, x] : {std::pair{0.7, -0.9}, std::pair{1.4, 0.3}}) {
    const double direct = tf.df_ds(s, x) +
                          apply_base_generator(jumpy.base, tf, s, x);
    CHECK(apply_timechanged_generator(jumpy, tf, s, x) ==
          Approx(direct).margin(1e-12));
  }
}

TEST_CASE("timechanged generator: zero clock and s-free probe") {
  // [TRIVIAL] beta == 0, g == 0, f independent of s: everything vanishes
  const tcm::TimeChangedModel tc{levy::brownian(0.0, 1.0), zero_clock()};
  CHECK(apply_timechanged_generator(tc, stationary_probe(), 0.5, 0.8) == 0.0);
}

TEST_CASE("timechanged generator: exponential kernel oracle") {
  // [DERIVED] g = e^{-r}, beta = 0, base BM(0,1), f = e^{-s - x^2/2}:
  // P_r f_s(0) = e^{-s} (1+r)^{-1/2}, so at s = 0
  //   L'f(0,0) = -1 + int_0^inf [(1+r)^{-1/2} - 1] e^{-r} dr
  // with the integral equal to e sqrt(pi) erfc(1) - 1 (high-precision value
  // -0.24212784385868789396 frozen from an independent computation).
  const auto tf = gaussian_probe();
  const tcm::TimeChangedModel tc{levy::brownian(0.0, 1.0), raw_exp_spec()};
  const double integral = -0.24212784385868789396;
  CHECK(apply_timechanged_generator(tc, tf, 0.0, 0.0) ==
        Approx(-1.0 + integral).margin(1e-8));

  // the probe factorizes through e^{-s}, so the whole value scales the same
  CHECK(apply_timechanged_generator(tc, tf, 0.5, 0.0) ==
        Approx(std::exp(-0.5) * (-1.0 + integral)).margin(1e-8));

  // [TRIVIAL] below the clock's calendar domain the call is rejected
  const auto sd_model = selfdec::build_timechanged({1.0, 0.5});
  CHECK_THROWS_AS(apply_timechanged_generator(sd_model, tf, 1e-4, 0.0),
                  DomainError);
}

TEST_CASE("r-integrand is O(r) near zero and bounded") {
  // [DERIVED] for BM(0,1) and the symmetric probe at (0,0):
  // P_r f_0(0) - f(0,0) = (1+r)^{-1/2} - 1 = -r/2 + O(r^2)
  const auto tf = gaussian_probe();
  const auto base = levy::brownian(0.0, 1.0);
  const auto fs = [&tf](double y) { return tf.f(0.0, y); };
  const double f0 = tf.f(0.0, 0.0);
  for (const double r : {1e-6, 1e-5, 1e-4}) {
    const double diff = levy::semigroup_apply(base, fs, r, 0.0) - f0;
    CHECK(diff / r == Approx(-0.5).margin(0.01));
  }
  for (const double r : {0.1, 1.0, 10.0, 100.0}) {
    const double diff = levy::semigroup_apply(base, fs, r, 0.0) - f0;
    CHECK(std::abs(diff) <= 2.0 * tf.sup_norm);
  }
}

TEST_CASE("difference quotient: deterministic dynamics") {
  // [TRIVIAL] identity clock + pure drift: no randomness at all
  const auto tf = gaussian_probe();
  const tcm::TimeChangedModel tc{levy::pure_drift(1.0),
                                 subord::identity_clock()};
  auto rng = rng::Stream(42);
  const double t = 0.01;
  const auto est = difference_quotient(tc, tf, 0.0, 0.0, t, 100, 1e-5, rng);
  const double exact = (tf.f(t, t) - tf.f(0.0, 0.0)) / t;
  CHECK(est.estimate == Approx(exact).margin(1e-13));
  CHECK(est.std_error == Approx(0.0).margin(1e-13));

  // [TRIVIAL] identical seeds give identical estimates
  const tcm::TimeChangedModel bm{levy::brownian(0.0, 1.0),
                                 subord::identity_clock()};
  auto r1 = rng::Stream::derive(777, 5);
  auto r2 = rng::Stream::derive(777, 5);
  const auto e1 = difference_quotient(bm, tf, 0.0, 0.0, t, 500, 1e-5, r1);
  const auto e2 = difference_quotient(bm, tf, 0.0, 0.0, t, 500, 1e-5, r2);
  CHECK(e1.estimate == e2.estimate);
  CHECK(e1.std_error == e2.std_error);

  // [TRIVIAL] invalid steps are rejected
  auto r3 = rng::Stream(1);
  CHECK_THROWS_AS(difference_quotient(bm, tf, 0.0, 0.0, 0.0, 10, 1e-5, r3),
                  DomainError);
  CHECK_THROWS_AS(difference_quotient(bm, tf, 0.0, 0.0, 0.01, 0, 1e-5, r3),
                  DomainError);
}

TEST_CASE("difference quotient: brownian base") {
  // [DERIVED] identity clock, BM(0,1): quotient -> -1.5 with O(t) bias;
  // at t = 0.01 the bias is about t (L + d/ds)^2 f / 2 ~ 0.014
  const auto tf = gaussian_probe();
  const tcm::TimeChangedModel tc{levy::brownian(0.0, 1.0),
                                 subord::identity_clock()};
  auto rng = rng::Stream::derive(20260819, 0);
  const auto est =
      difference_quotient(tc, tf, 0.0, 0.0, 0.01, 200000, 1e-5, rng);
  CHECK(std::abs(est.estimate - (-1.5)) <= 3.0 * est.std_error + 0.02);
  CHECK(est.std_error > 0.0);
}

TEST_CASE("convergence report: identity clock") {
  // [DERIVED] errors shrink along t_list {0.1, 0.05, 0.025} toward -1.5
  const auto tf = gaussian_probe();
  const tcm::TimeChangedModel tc{levy::brownian(0.0, 1.0),
                                 subord::identity_clock()};
  const auto rep = convergence_report(tc, tf, 0.0, 0.0, {0.1, 0.05, 0.025},
                                      200000, 1e-5, 31415);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.target == Approx(-1.5).margin(1e-10));
  CHECK(rep.passed);
  // the fitted bias slope is positive and of the Taylor-predicted size
  CHECK(rep.slope > 0.3);
  CHECK(rep.slope < 3.0);
  // error at the largest step clearly exceeds the final error
  CHECK(rep.rows.front().abs_error > rep.rows.back().abs_error);

  // [TRIVIAL] zero probe: every column is exactly zero and the report passes
  const auto zrep = convergence_report(tc, zero_probe(), 0.0, 0.0,
                                       {0.1, 0.05}, 1000, 1e-5, 7);
  CHECK(zrep.target == 0.0);
  CHECK(zrep.slope == 0.0);
  CHECK(zrep.passed);
  for (const auto& row : zrep.rows) {
    CHECK(row.quotient == 0.0);
    CHECK(row.std_error == 0.0);
    CHECK(row.abs_error == 0.0);
  }

  // [TRIVIAL] step lists must be positive and decreasing
  CHECK_THROWS_AS(
      convergence_report(tc, tf, 0.0, 0.0, {}, 10, 1e-5, 1), DomainError);
  CHECK_THROWS_AS(
      convergence_report(tc, tf, 0.0, 0.0, {0.1, 0.1}, 10, 1e-5, 1),
      DomainError);
  CHECK_THROWS_AS(
      convergence_report(tc, tf, 0.0, 0.0, {0.1, -0.05}, 10, 1e-5, 1),
      DomainError);
}

TEST_CASE("convergence report: selfdec clock self-consistency") {
  // [DERIVED] the quadrature evaluation of L'f and the Monte Carlo
  // difference quotient must agree for the self-decomposable clock at
  // s = 1 without any external reference value.
  const auto tf = gaussian_probe();
  const auto tc = selfdec::build_timechanged({1.0, 0.5});
  const auto rep = convergence_report(tc, tf, 1.0, 0.0, {0.1, 0.05}, 100000,
                                      1e-5, 271828);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.passed);
  CHECK(std::isfinite(rep.target));
}
