#include <cmath>
#include <span>

#include "asub/kernels.hpp"

namespace asub::kernels::scalar {

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

Sums2 sum_sq(std::span<const double> x) {
  Sums2 out;
  for (double v : x) {
    out.s1 += v;
    out.s2 += v * v;
  }
  return out;
}

CfSums cf_sums(std::span<const double> x, double u) {
  CfSums out;
  for (double v : x) {
    const double c = std::cos(u * v);
    const double s = std::sin(u * v);
    out.cos_sum += c;
    out.sin_sum += s;
    out.cos_sq += c * c;
    out.sin_sq += s * s;
  }
  return out;
}

Sums2 exp_sums(std::span<const double> x, double a) {
  Sums2 out;
  for (double v : x) {
    const double e = std::exp(a * v);
    out.s1 += e;
    out.s2 += e * e;
  }
  return out;
}

Sums2 central_sums(std::span<const double> x, double mean) {
  Sums2 out;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    out.s1 += d2;
    out.s2 += d2 * d2;
  }
  return out;
}

Sums2 call_payoff_sums(std::span<const double> x, double forward_factor,
                       double strike) {
  Sums2 out;
  for (double v : x) {
    const double p = std::max(forward_factor * std::exp(v) - strike, 0.0);
    out.s1 += p;
    out.s2 += p * p;
  }
  return out;
}

}  // namespace asub::kernels::scalar
