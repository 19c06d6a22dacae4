#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <type_traits>

#include "asub/errors.hpp"

namespace asub::quad {

struct Options {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_depth = 15;
};

namespace detail {

inline std::string tol_message(const char* what, double err, double budget) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s: error estimate %.3e exceeds budget %.3e",
                what, err, budget);
  return buf;
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval. Works for real- and
// complex-valued integrands. Throws QuadratureError when the estimated
// error stays above abs_tol + rel_tol * L1.
template <class F>
auto integrate(F&& f, double a, double b, Options opt = {}) {
  using R = std::invoke_result_t<F&, double>;
  double err = 0, l1 = 0;
  R value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(opt.max_depth), opt.rel_tol, &err, &l1);
  const double budget = opt.abs_tol + opt.rel_tol * std::max(l1, std::abs(value));
  if (!(err <= budget) || !std::isfinite(std::abs(value))) {
    throw QuadratureError(detail::tol_message("adaptive quadrature", err, budget));
  }
  return value;
}

// Double-exponential quadrature on a finite interval. Robust to endpoint
// boundary layers and integrable endpoint singularities (where the adaptive
// Gauss-Kronrod error estimate stagnates); the integrand must be smooth in
// the interior.
template <class F>
auto integrate_de(F&& f, double a, double b, Options opt = {}) {
  using R = std::invoke_result_t<F&, double>;
  if (a == b) return R(0);
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  double err = 0, l1 = 0;
  R value;
  try {
    value = ts.integrate(f, a, b, opt.rel_tol, &err, &l1);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    throw QuadratureError(std::string("finite DE quadrature: ") + e.what());
  }
  const double budget = opt.abs_tol + opt.rel_tol * std::max(l1, std::abs(value));
  if (!(err <= budget) || !std::isfinite(std::abs(value))) {
    throw QuadratureError(
        detail::tol_message("finite DE quadrature", err, budget));
  }
  return value;
}

// Integral over [a, inf) via double-exponential quadrature on r = a + scale*x.
// `scale` is a decay-length hint (the node distribution spans many orders of
// magnitude, so a rough guess suffices); integrands must vanish as r -> inf.
template <class F>
auto integrate_upper(F&& f, double a, double scale, Options opt = {}) {
  if (!(scale > 0)) throw DomainError("integrate_upper: scale must be positive");
  using R = std::invoke_result_t<F&, double>;
  auto h = [&f, a, scale](double x) -> R {
    const double r = a + scale * x;
    if (!std::isfinite(r)) return R(0);
    auto v = f(r);
    if (!std::isfinite(std::abs(v))) return R(0);
    return v * scale;
  };
  static thread_local boost::math::quadrature::exp_sinh<double> es;
  double err = 0, l1 = 0;
  R value;
  try {
    value = es.integrate(h, opt.rel_tol, &err, &l1);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception& e) {
    throw QuadratureError(std::string("semi-infinite quadrature: ") + e.what());
  }
  const double budget = opt.abs_tol + opt.rel_tol * std::max(l1, std::abs(value));
  if (!(err <= budget) || !std::isfinite(std::abs(value))) {
    throw QuadratureError(
        detail::tol_message("semi-infinite quadrature", err, budget));
  }
  return value;
}

// Composite fixed-order Gauss-Legendre with panel doubling; for smooth
// integrands (time integrals of Laplace/characteristic exponents). Stops when
// successive refinements agree to tol * (1 + |I|).
template <class F>
auto composite_gauss(F&& f, double a, double b, double tol = 1e-8,
                     int max_panels = 4096) {
  using R = std::invoke_result_t<F&, double>;
  using G = boost::math::quadrature::gauss<double, 15>;
  if (a == b) return R(0);
  auto pass = [&](int n) {
    R total(0);
    const double h = (b - a) / n;
    for (int i = 0; i < n; ++i) {
      total += G::integrate(f, a + i * h, a + (i + 1) * h);
    }
    return total;
  };
  R prev = pass(1);
  for (int n = 2; n <= max_panels; n *= 2) {
    R cur = pass(n);
    const double diff = std::abs(cur - prev);
    if (diff <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw QuadratureError("composite_gauss: refinement did not converge");
}

// Heuristic convergence test for a nonnegative integrand on [scale, inf):
// samples along a geometric grid and reports whether the values eventually
// decay. Boundary/supercritical cases (flat or growing tails) report false.
inline bool tail_decays(const std::function<double(double)>& h, double scale) {
  double peak = 0;
  double last_big = 0;  // most recent sample above the representable floor
  int peak_idx = 0;
  constexpr int kPoints = 64;
  double vals[kPoints];
  int count = 0;
  double r = scale;
  for (int k = 0; k < kPoints; ++k, r *= 1.5) {
    double v = h(r);
    if (!std::isfinite(v) || std::abs(v) > 1e280) return false;
    vals[k] = std::abs(v);
    count = k + 1;
    if (vals[k] >= 1e-250) last_big = vals[k];
    if (vals[k] > peak) {
      peak = vals[k];
      peak_idx = k;
    }
    // A vanished tail is only trustworthy if the last representable sample
    // had already decayed: integrands whose factors underflow to exact zero
    // show a constant-then-cliff profile whose zeros say nothing about
    // convergence of the true product.
    if (k > peak_idx + 8 && vals[k] < 1e-250 && last_big <= 1e-8 * peak) {
      return true;  // clearly gone
    }
  }
  if (peak == 0) return true;  // identically ~0 tail
  // demand strict decay well past the peak and a negligible last sample
  const int last = count - 1;
  if (last <= peak_idx + 4) return vals[last] < 1e-250;
  for (int k = std::max(peak_idx + 4, last - 6); k < last; ++k) {
    if (vals[k + 1] > vals[k] * 1.0000001) return false;
  }
  return vals[last] <= 1e-8 * peak && last_big <= 1e-8 * peak;
}

}  // namespace asub::quad
