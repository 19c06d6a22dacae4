#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "asub/subordination.hpp"

namespace asub::pricing {

// European option market data: spot, continuously compounded rate, maturity
// and the strike grid to price.
struct MarketSpec {
  double spot = 0.0;      // S0 > 0
  double rate = 0.0;      // per unit time, any finite real
  double maturity = 0.0;  // T > 0
  std::vector<double> strikes;  // nonempty, all > 0

  // DomainError on any violated invariant.
  void validate() const;
};

// Characteristic function of ln S_T under the risk-neutral measure, where
//   ln S_T = ln S0 + rate*T + omega + Y_T,   omega = -ln E[e^{Y_T}],
// so the discounted spot is a martingale. omega is evaluated through the
// clock's real Laplace-transform route (the integrated exponent at -m, with
// m the base process's exponential moment rate) — never by pushing the
// oscillatory transform to complex arguments outside Re(u) >= 0.
//
// Construction throws DomainError when E[e^{Y_T}] does not exist, naming
// the transform domain that is violated.
class RiskNeutralCf {
 public:
  RiskNeutralCf(const subordination::TimeChangedModel& tc,
                const MarketSpec& market);

  // E[e^{iu ln S_T}]
  std::complex<double> operator()(double u) const;
  // The stochastic part alone: Psi-bar_T(u) = ln E[e^{iu Y_T}].
  std::complex<double> curve(double u) const;

  double omega() const { return omega_; }
  double maturity() const { return t_; }
  // ln S0 + rate*T + omega: the deterministic part of ln S_T.
  double log_spot_drift() const { return d_; }

 private:
  subordination::TimeChangedModel tc_;
  double t_;
  double omega_;
  double d_;
};

// European call by the Fourier-cosine expansion of the law of ln(S_T/K),
// truncated to [c1 - L sqrt(c2), c1 + L sqrt(c2)] with c1, c2 the first two
// cumulants (central finite differences of the exponent at u = 0). The sum
// is evaluated at `terms` and at twice that; QuadratureError if doubling
// still moves the price by more than 1e-6, otherwise the doubled value.
double cos_price_call(const MarketSpec& market, const RiskNeutralCf& cf,
                      double strike, double trunc_width = 10.0,
                      std::size_t terms = 1024);

// Same expansion for the European put payoff (used to cross-check parity).
double cos_price_put(const MarketSpec& market, const RiskNeutralCf& cf,
                     double strike, double trunc_width = 10.0,
                     std::size_t terms = 1024);

// put = call - S0 + K e^{-rate*T}. Accepts K = 0 as the boundary case
// put = call - S0 (the only point where a put price may be <= 0).
double put_from_parity(double call, const MarketSpec& market, double strike);

}  // namespace asub::pricing
