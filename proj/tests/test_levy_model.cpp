#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "asub/errors.hpp"
#include "asub/kernels.hpp"
#include "asub/levy_model.hpp"
#include "asub/quadrature.hpp"
#include "asub/random.hpp"

using namespace asub;
using levy::JumpMeasure;
using levy::LevyModel;

namespace {

LevyModel bm_cpp_model() {
  return LevyModel(0.1, 0.04, JumpMeasure::normal(3.0, -0.05, 0.1));
}

// empirical CF of samples at frequency u, with componentwise standard errors
struct Ecf {
  std::complex<double> value;
  double se_re, se_im;
};

Ecf ecf(const std::vector<double>& x, double u) {
  const auto s = kernels::cf_sums(x, u);
  const double n = double(x.size());
  const double re = s.cos_sum / n, im = s.sin_sum / n;
  return {{re, im},
          std::sqrt((s.cos_sq / n - re * re) / n),
          std::sqrt((s.sin_sq / n - im * im) / n)};
}

}  // namespace

TEST_CASE("characteristic exponent closed forms") {
  const auto bm = levy::brownian(0.0, 1.0);
  CHECK(levy::char_exponent(bm, 2.0).real() == Approx(-2.0).margin(1e-14));
  CHECK(levy::char_exponent(bm, 2.0).imag() == Approx(0.0).margin(1e-14));
  CHECK(std::abs(levy::char_exponent(bm_cpp_model(), 0.0)) < 1e-14);

  // unit jumps at rate 1, compensated: psi(pi) = e^{i pi} - 1 - i pi
  const LevyModel cpp(0.0, 0.0, JumpMeasure::dirac(1.0, 1.0));
  const auto v = levy::char_exponent(cpp, 3.14159265358979323846);
  CHECK(v.real() == Approx(-2.0).margin(1e-12));
  CHECK(v.imag() == Approx(-3.14159265358979323846).margin(1e-12));
}

TEST_CASE("characteristic exponent symmetry and sign") {
  const auto m = bm_cpp_model();
  for (double u = -20.0; u <= 20.0; u += 0.7) {
    const auto a = levy::char_exponent(m, u);
    const auto b = levy::char_exponent(m, -u);
    CHECK(a.real() <= 1e-15);
    CHECK(a.real() == Approx(b.real()).margin(1e-13));
    CHECK(a.imag() == Approx(-b.imag()).margin(1e-13));
  }
}

TEST_CASE("exponential moment rate closed forms") {
  CHECK(levy::exp_moment_rate(levy::brownian(0.0, 1.0), 1.0) ==
        Approx(0.5).margin(1e-14));
  const LevyModel cpp(0.0, 0.0, JumpMeasure::dirac(1.0, 1.0));
  // e^1 - 1 - 1 = e - 2
  CHECK(levy::exp_moment_rate(cpp, 1.0) ==
        Approx(0.71828182845904523536).margin(1e-14));
  // matches the characteristic exponent along the imaginary axis: for BM
  // with drift, kappa(l) = lc + l^2 Q/2
  CHECK(levy::exp_moment_rate(levy::brownian(0.3, 2.0), -1.5) ==
        Approx(-0.45 + 1.125 * 2.0).margin(1e-13));
}

TEST_CASE("transition density: Gaussian case and mixture normalization") {
  const auto bm = levy::brownian(0.0, 1.0);
  REQUIRE(levy::has_transition_density(bm));
  // N(0,2) at 0: 1/(2 sqrt(pi))
  CHECK(levy::transition_density(bm, 2.0, 0.0) ==
        Approx(0.28209479177387814347).epsilon(1e-13));

  const auto m = bm_cpp_model();
  REQUIRE(levy::has_transition_density(m));
  const double mass = quad::integrate(
      [&](double x) { return levy::transition_density(m, 0.8, x); }, -6.0,
      6.0);
  CHECK(mass == Approx(1.0).epsilon(1e-8));

  CHECK_FALSE(levy::has_transition_density(levy::pure_drift(1.0)));
  CHECK_THROWS_AS(levy::transition_density(levy::pure_drift(1.0), 1.0, 0.5),
                  UnsupportedModelError);
  CHECK_THROWS_AS(levy::transition_density(bm, 0.0, 0.0), DomainError);
}

TEST_CASE("mixture components cover the law") {
  const auto comps = levy::density_components(bm_cpp_model(), 0.8);
  double total = 0.0;
  for (const auto& c : comps) {
    CHECK(c.weight >= 0.0);
    CHECK(c.var > 0.0);
    total += c.weight;
  }
  CHECK(total == Approx(1.0).margin(1e-12));

  const auto atom = levy::density_components(levy::pure_drift(2.0), 0.5);
  REQUIRE(atom.size() == 1);
  CHECK(atom[0].mean == Approx(1.0));
  CHECK(atom[0].var == 0.0);
}

TEST_CASE("increment sampling basics") {
  rng::Stream s(7);
  CHECK(levy::sample_increment(bm_cpp_model(), 0.0, s) == 0.0);
  for (int i = 0; i < 10; ++i) {
    CHECK(levy::sample_increment(levy::pure_drift(1.0), 2.5, s) == 2.5);
  }
}

TEST_CASE("sampled Gaussian increments have the right moments") {
  const auto bm = levy::brownian(0.0, 1.0);
  rng::Stream s(42);
  const int n = 100000;
  std::vector<double> x(n);
  for (auto& v : x) v = levy::sample_increment(bm, 1.0, s);
  const auto ms = kernels::sum_sq(x);
  const double mean = ms.s1 / n;
  const double var = ms.s2 / n - mean * mean;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("empirical CF of increments matches the exponent") {
  const double r = 0.7;
  const int n = 100000;
  const std::vector<LevyModel> models = {
      levy::brownian(0.0, 1.0), bm_cpp_model(),
      LevyModel(0.0, 0.0, JumpMeasure::dirac(1.0, 1.0))};
  int model_idx = 0;
  for (const auto& m : models) {
    rng::Stream s(1000 + model_idx);
    std::vector<double> x(n);
    for (auto& v : x) v = levy::sample_increment(m, r, s);
    for (double u : {-5.0, -2.0, 1.0, 3.0}) {
      CAPTURE(model_idx, u);
      const auto est = ecf(x, u);
      const auto ref = std::exp(r * levy::char_exponent(m, u));
      CHECK(std::abs(est.value.real() - ref.real()) <= 4.0 * est.se_re);
      CHECK(std::abs(est.value.imag() - ref.imag()) <= 4.0 * est.se_im);
    }
    ++model_idx;
  }
}

TEST_CASE("semigroup action") {
  const auto bm = levy::brownian(0.0, 1.0);
  const auto gauss = [](double x) { return std::exp(-0.5 * x * x); };
  // E[e^{-Z^2/2}] = (1+r)^{-1/2} for Z ~ N(0, r)
  CHECK(levy::semigroup_apply(bm, gauss, 1.0, 0.0) ==
        Approx(0.70710678118654752440).epsilon(1e-10));
  CHECK(levy::semigroup_apply(bm, gauss, 3.0, 0.0) ==
        Approx(0.5).epsilon(1e-10));
  CHECK(levy::semigroup_apply(bm, gauss, 0.0, 3.0) == gauss(3.0));
  CHECK(levy::semigroup_apply(bm_cpp_model(), [](double) { return 1.0; }, 2.0,
                              -1.0) == Approx(1.0).epsilon(1e-10));
  // contraction
  const auto f = [](double x) { return std::cos(2.0 * x) * std::exp(-x * x / 8); };
  for (double rr : {0.1, 1.0, 4.0}) {
    for (double x0 : {-2.0, 0.0, 1.5}) {
      CHECK(std::abs(levy::semigroup_apply(bm_cpp_model(), f, rr, x0)) <=
            1.0 + 1e-9);
    }
  }
}

TEST_CASE("truncated moments") {
  const auto d = levy::pure_drift(1.0);
  CHECK(levy::truncated_mean(d, 0.5) == Approx(0.5));
  CHECK(levy::truncated_mean(d, 2.0) == 0.0);
  CHECK(levy::truncated_mean(d, 0.0) == 0.0);
  const auto bm = levy::brownian(0.0, 1.0);
  for (double r : {0.3, 1.0, 2.0}) {
    CHECK(levy::truncated_mean(bm, r) == Approx(0.0).margin(1e-14));
  }
  // E[X_r^2 1{|X_r|<=1}] -> Q r as r -> 0
  CHECK(levy::truncated_second_moment(bm, 1e-4) == Approx(1e-4).epsilon(1e-6));
  // and P(|X_r| > 1) is tiny for small r
  CHECK(levy::mass_outside_unit(bm, 1e-2) < 1e-20);
}

TEST_CASE("small-time moment growth stays linear") {
  const std::vector<double> grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0};
  const auto rep_bm = levy::sato_bound_check(levy::brownian(0.0, 1.0), grid);
  CHECK(rep_bm.pass);
  CHECK(rep_bm.max_ratio == Approx(1.0).margin(0.05));

  const auto rep_drift = levy::sato_bound_check(levy::pure_drift(1.0), grid);
  CHECK(rep_drift.pass);
  CHECK(rep_drift.max_ratio <= 1.0 + 1e-12);

  const auto rep_zero =
      levy::sato_bound_check(levy::brownian(0.0, 0.0), grid);
  CHECK(rep_zero.pass);
  CHECK(rep_zero.max_ratio == 0.0);

  const auto rep_cpp = levy::sato_bound_check(bm_cpp_model(), grid);
  CHECK(rep_cpp.pass);
}

TEST_CASE("model construction validates its inputs") {
  CHECK_THROWS_AS(levy::brownian(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(LevyModel(0.0, 1.0, JumpMeasure::zero(), 2),
                  UnsupportedModelError);
  CHECK_THROWS_AS(JumpMeasure::normal(-1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(JumpMeasure::normal(1.0, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(JumpMeasure::dirac(1.0, 0.0), DomainError);
  rng::Stream s(1);
  CHECK_THROWS_AS(levy::sample_increment(levy::brownian(0.0, 1.0), -1.0, s),
                  DomainError);
}
