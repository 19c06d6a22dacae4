#include "asub/selfdec.hpp"

#include <cmath>
#include <complex>
#include <utility>

#include "asub/errors.hpp"

namespace asub::selfdec {

namespace {

void check_params(const SelfDecParams& p) {
  if (!(p.gamma > 0.0) || !(p.nu > 0.0)) {
    throw DomainError(
        "self-decomposable family needs gamma > 0 and nu > 0");
  }
}

void check_time(double t) {
  if (!(t > 0.0)) throw DomainError("time must be positive");
}

}  // namespace

double gy_density(const SelfDecParams& p, double t, double y) {
  check_params(p);
  check_time(t);
  if (y == 0.0) throw DomainError("jump density lives on y != 0");
  const double tg = std::pow(t, p.gamma);
  return p.gamma / (p.nu * p.nu * tg * t) *
         std::exp(-std::abs(y) / (p.nu * tg));
}

double clock_a(const SelfDecParams& p, double t) {
  check_params(p);
  check_time(t);
  const double tg = std::pow(t, p.gamma);
  return p.gamma / (p.nu * p.nu * p.nu * tg * tg * t);
}

double clock_b(const SelfDecParams& p, double t) {
  check_params(p);
  check_time(t);
  const double tg = std::pow(t, p.gamma);
  return 2.0 * p.nu * p.nu * tg * tg;
}

double clock_density(const SelfDecParams& p, double t, double r) {
  if (r < 0.0) throw DomainError("jump sizes are nonnegative");
  return clock_a(p, t) * std::exp(-r / clock_b(p, t));
}

double jump_mgf_closed(const SelfDecParams& p, double t, double lambda) {
  check_params(p);
  check_time(t);
  const double tg = std::pow(t, p.gamma);
  const double x = lambda * p.nu * tg;
  if (!(std::abs(x) < 1.0)) {
    throw DomainError(
        "jump measure transform diverges at |lambda| >= 1/(nu t^gamma)");
  }
  return 2.0 * p.gamma / (p.nu * t * (1.0 - x * x));
}

double char_curve_closed(const SelfDecParams& p, double t, double u) {
  check_params(p);
  if (t < 0.0) throw DomainError("time must be >= 0");
  if (t == 0.0 || u == 0.0) return 0.0;
  const double x = u * p.nu * std::pow(t, p.gamma);
  return -std::log1p(x * x) / p.nu;
}

subordination::TimeChangedModel build_timechanged(const SelfDecParams& p) {
  check_params(p);
  const double gamma = p.gamma;
  const double nu = p.nu;
  auto clock = subord::exponential_kernel_clock(
      {0.0, 0.0}, {gamma / (nu * nu * nu), -(2.0 * gamma + 1.0)},
      {2.0 * nu * nu, 2.0 * gamma});
  clock.name = "selfdec";
  clock.psi_bar_closed =
      [gamma, nu](double t, std::complex<double> u) -> std::complex<double> {
    const std::complex<double> arg =
        1.0 + 2.0 * nu * nu * u * std::pow(t, 2.0 * gamma);
    if (u.imag() == 0.0 && !(arg.real() > 0.0)) {
      // real argument at or past the pole -1/b_t: the exponential moment of
      // Z_t does not exist there
      throw DomainError(
          "integrated Laplace exponent diverges at this real argument");
    }
    return -std::log(arg) / nu;
  };
  clock.validate();
  return {levy::brownian(0.0, 1.0), std::move(clock)};
}

}  // namespace asub::selfdec
