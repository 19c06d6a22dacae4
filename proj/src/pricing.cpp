#include "asub/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "asub/errors.hpp"
#include "asub/levy_model.hpp"
#include "asub/subordinator.hpp"

namespace asub::pricing {

namespace {

constexpr double kPi = 3.14159265358979323846;
// finite-difference step for the cumulant estimates at u = 0
constexpr double kCumulantStep = 1e-3;
// a doubled term count may move the price by at most this much
constexpr double kStabilityTol = 1e-6;

struct Interval {
  double a;
  double b;
};

// Truncation window for z = ln(S_T / K) from the first two cumulants,
// c1 +/- L sqrt(c2), estimated by central differences of the exponent
// kappa(u) = iu(ln S0 + rate T + omega) + Psi-bar_T(u). Conjugate symmetry
// makes c1 and c2 real; both differences are evaluated explicitly rather
// than assumed.
Interval truncation_interval(const RiskNeutralCf& cf, double log_strike,
                             double width_mult) {
  const double h = kCumulantStep;
  const auto kp = cf.curve(h);
  const auto km = cf.curve(-h);
  const double c1 =
      cf.log_spot_drift() - log_strike + std::imag(kp - km) / (2.0 * h);
  const double c2 = std::max(0.0, -std::real(kp + km) / (h * h));
  // keep the window nondegenerate even for (near-)deterministic models; the
  // stability check below decides whether the expansion converged
  const double w = std::max(width_mult * std::sqrt(c2), 1e-6);
  if (!std::isfinite(c1) || !std::isfinite(w)) {
    throw QuadratureError("cos pricing: cumulant estimates are not finite");
  }
  return {c1 - w, c1 + w};
}

// int_lo^hi e^z cos(theta (z - a)) dz
double exp_cos_integral(double theta, double a, double lo, double hi) {
  const auto anti = [&](double z) {
    return std::exp(z) *
           (std::cos(theta * (z - a)) + theta * std::sin(theta * (z - a)));
  };
  return (anti(hi) - anti(lo)) / (1.0 + theta * theta);
}

// int_lo^hi cos(theta (z - a)) dz
double cos_integral(double theta, double a, double lo, double hi) {
  if (theta == 0.0) return hi - lo;
  return (std::sin(theta * (hi - a)) - std::sin(theta * (lo - a))) / theta;
}

double cos_price(const MarketSpec& market, const RiskNeutralCf& cf,
                 double strike, double width_mult, std::size_t terms,
                 bool call) {
  market.validate();
  if (!(strike > 0.0)) throw DomainError("cos pricing: strike must be > 0");
  if (!(width_mult > 0.0)) {
    throw DomainError("cos pricing: truncation width must be > 0");
  }
  if (terms < 2) throw DomainError("cos pricing: need at least two terms");

  const double log_strike = std::log(strike);
  const auto [a, b] = truncation_interval(cf, log_strike, width_mult);
  // payoff support within the window: z > 0 for a call, z < 0 for a put
  const double lo = call ? std::max(a, 0.0) : a;
  const double hi = call ? b : std::min(b, 0.0);
  if (!(hi > lo)) return 0.0;  // payoff region outside the truncation window

  const double width = b - a;
  const double phase_drift = cf.log_spot_drift() - log_strike - a;
  double partial = 0.0;  // sum after `terms` terms
  double total = 0.0;    // sum after 2*terms terms
  for (std::size_t k = 0; k < 2 * terms; ++k) {
    const double theta = static_cast<double>(k) * kPi / width;
    // Re[ phi_z(theta) e^{-i theta a} ]
    const std::complex<double> factor = std::exp(
        std::complex<double>(0.0, theta * phase_drift) + cf.curve(theta));
    const double payoff_coef =
        call ? exp_cos_integral(theta, a, lo, hi) -
                   cos_integral(theta, a, lo, hi)
             : cos_integral(theta, a, lo, hi) -
                   exp_cos_integral(theta, a, lo, hi);
    double term = factor.real() * (2.0 / width) * strike * payoff_coef;
    if (k == 0) term *= 0.5;
    total += term;
    if (k + 1 == terms) partial = total;
  }
  const double discount = std::exp(-market.rate * cf.maturity());
  const double price_m = discount * partial;
  const double price_2m = discount * total;
  if (std::abs(price_2m - price_m) > kStabilityTol) {
    throw QuadratureError(
        "cos pricing did not stabilize: doubling the term count from " +
        std::to_string(terms) + " moved the price by " +
        std::to_string(std::abs(price_2m - price_m)));
  }
  return price_2m;
}

}  // namespace

void MarketSpec::validate() const {
  if (!(spot > 0.0)) throw DomainError("market: spot must be > 0");
  if (!std::isfinite(rate)) throw DomainError("market: rate must be finite");
  if (!(maturity > 0.0)) throw DomainError("market: maturity must be > 0");
  if (strikes.empty()) throw DomainError("market: strike grid is empty");
  for (const double k : strikes) {
    if (!(k > 0.0)) throw DomainError("market: strikes must be > 0");
  }
}

RiskNeutralCf::RiskNeutralCf(const subordination::TimeChangedModel& tc,
                             const MarketSpec& market)
    : tc_(tc), t_(market.maturity) {
  market.validate();
  // m = ln E[e^{X_1}]: E[e^{Y_T}] = exp(psi-bar_T(-m)), through the real
  // route only
  const double m = levy::exp_moment_rate(tc_.base, 1.0);
  double log_exp_moment = 0.0;
  try {
    log_exp_moment =
        subord::integrated_laplace_exponent_real(tc_.clock, t_, -m);
  } catch (const DomainError& e) {
    throw DomainError(
        "model inadmissible for risk-neutral pricing: E[exp(Y_T)] is "
        "infinite at maturity " +
        std::to_string(t_) +
        " — the clock transform must converge at the base exponential "
        "moment rate " +
        std::to_string(m) + " (" + e.what() + ")");
  }
  omega_ = -log_exp_moment;
  d_ = std::log(market.spot) + market.rate * t_ + omega_;
}

std::complex<double> RiskNeutralCf::operator()(double u) const {
  return std::exp(std::complex<double>(0.0, u * d_) + curve(u));
}

std::complex<double> RiskNeutralCf::curve(double u) const {
  if (u == 0.0) return {0.0, 0.0};
  return subordination::char_exponent_curve(tc_, t_, u);
}

double cos_price_call(const MarketSpec& market, const RiskNeutralCf& cf,
                      double strike, double trunc_width, std::size_t terms) {
  return cos_price(market, cf, strike, trunc_width, terms, true);
}

double cos_price_put(const MarketSpec& market, const RiskNeutralCf& cf,
                     double strike, double trunc_width, std::size_t terms) {
  return cos_price(market, cf, strike, trunc_width, terms, false);
}

double put_from_parity(double call, const MarketSpec& market, double strike) {
  market.validate();
  if (strike < 0.0) throw DomainError("parity: strike must be >= 0");
  return call - market.spot +
         strike * std::exp(-market.rate * market.maturity);
}

}  // namespace asub::pricing
