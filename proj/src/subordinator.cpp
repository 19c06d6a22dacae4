#include "asub/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>

#include "asub/errors.hpp"
#include "asub/quadrature.hpp"

namespace asub::subord {
namespace {

using cplx = std::complex<double>;

// psi_s(u) evaluated without the domain_start gate (the origin-integral path
// must probe s below domain_start).
cplx psi_eval(const SubordinatorSpec& spec, double s, cplx u) {
  if (u == cplx(0.0)) return 0.0;
  if (spec.psi_closed) return spec.psi_closed(s, u);
  cplx jump_part = 0.0;
  if (spec.has_jumps) {
    jump_part = quad::integrate_upper(
        [&](double r) { return (std::exp(-u * r) - 1.0) * spec.g(s, r); },
        0.0, spec.r_scale);
  }
  return -u * spec.beta(s) + jump_part;
}

// Decay-length hint for integrands e^{-ur} g(s,r) with u possibly negative:
// a negative u stretches the effective tail.
double stretched_scale(double r_scale, double u) {
  const double shrink = 1.0 + u * r_scale;
  if (shrink >= 1.0) return r_scale;
  return r_scale / std::max(0.1, shrink);
}

// e^{-u r} g(s, r) for the divergence probes, evaluated in log space: the
// two factors can overflow/underflow separately (inf * 0 = NaN) long before
// the product leaves double range.
std::function<double(double)> growth_probe(const SubordinatorSpec& spec,
                                           double s, double u) {
  return [&spec, s, u](double r) {
    const double gv = spec.g(s, r);
    if (gv <= 0.0) return 0.0;
    const double lg = -u * r + std::log(gv);
    return lg < 700.0 ? std::exp(lg)
                      : std::numeric_limits<double>::infinity();
  };
}

double psi_real_eval(const SubordinatorSpec& spec, double s, double u) {
  if (u == 0.0) return 0.0;
  // A closed form knows its exact convergence domain and throws DomainError
  // precisely at it, so consult it first; the decay probe below is
  // conservative near the boundary and only guards the quadrature route.
  if (spec.psi_closed) return spec.psi_closed(s, cplx(u, 0.0)).real();
  if (u < 0.0 && spec.has_jumps) {
    // exponential moment of the jump part: verify the integral converges
    if (!quad::tail_decays(growth_probe(spec, s, u), spec.r_scale)) {
      throw DomainError(
          "exponential moment of the clock increment diverges at this "
          "argument");
    }
  }
  double jump_part = 0.0;
  if (spec.has_jumps) {
    jump_part = quad::integrate_upper(
        [&](double r) { return std::expm1(-u * r) * spec.g(s, r); }, 0.0,
        stretched_scale(spec.r_scale, u));
  }
  return -u * spec.beta(s) + jump_part;
}

// Fritsch-Carlson monotone cubic slopes for strictly monotone data.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d1 * d0 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return std::abs(d) > 3.0 * std::abs(d0) ? 3.0 * d0 : d;
  };
  d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

double hermite_eval(double x0, double x1, double y0, double y1, double d0,
                    double d1, double x) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t, t3 = t2 * t;
  return y0 * (2 * t3 - 3 * t2 + 1) + y1 * (-2 * t3 + 3 * t2) +
         h * d0 * (t3 - 2 * t2 + t) + h * d1 * (t3 - t2);
}

// int_0^lo psi_s(u) ds with the substitution s = w^2, which turns an
// integrable power singularity at the calendar origin into something the
// adaptive rule can resolve. Diverging integrals still fail the error budget.
template <class Psi>
auto origin_integral(Psi&& psi, double lo) {
  return quad::integrate(
      [&psi](double w) { return psi(w * w) * (2.0 * w); }, 0.0, std::sqrt(lo));
}

}  // namespace

double PowerLaw::operator()(double s) const {
  return coeff == 0.0 ? 0.0 : coeff * std::pow(s, exponent);
}

void SubordinatorSpec::validate() const {
  if (!beta) throw ConfigError("clock spec needs a drift rate function");
  if (has_jumps && !g) throw ConfigError("clock spec needs a jump density");
  if (domain_start < 0 || !std::isfinite(domain_start)) {
    throw ConfigError("clock domain start must be finite and >= 0");
  }
  if (!(r_scale > 0)) throw ConfigError("clock jump scale must be > 0");

  const double s_lo = std::max(domain_start, 1e-3);
  for (double s : {s_lo, 0.5, 1.0, 2.5}) {
    if (s < domain_start) continue;
    if (beta(s) < 0) throw ConfigError("clock drift rate is negative");
    if (has_jumps) {
      for (double r : {0.1 * r_scale, r_scale, 5.0 * r_scale}) {
        if (g(s, r) < 0) throw ConfigError("clock jump density is negative");
      }
      // finite small-jump variation: int (1 ^ r) g(s, r) dr converges,
      // split at the kink of (1 ^ r)
      quad::integrate_de([&](double r) { return r * g(s, r); }, 0.0, 1.0);
      quad::integrate_upper([&](double r) { return g(s, r); }, 1.0, r_scale);
    }
    if (psi_closed) {
      for (double u : {0.5, 2.0}) {
        cplx direct = -u * beta(s);
        if (has_jumps) {
          direct += quad::integrate_upper(
              [&](double r) { return std::expm1(-u * r) * g(s, r); }, 0.0,
              r_scale);
        }
        const cplx closed = psi_closed(s, cplx(u, 0.0));
        if (std::abs(direct - closed) > 1e-8 * (1.0 + std::abs(closed))) {
          throw ConfigError(
              "closed-form Laplace exponent disagrees with quadrature");
        }
      }
    }
    if (has_jumps && tail_mass_closed) {
      for (double x : {0.5 * r_scale, 2.0 * r_scale}) {
        const double direct = quad::integrate_upper(
            [&](double r) { return g(s, r); }, x, r_scale);
        const double closed = tail_mass_closed(s, x);
        if (std::abs(direct - closed) > 1e-8 * (1.0 + std::abs(closed))) {
          throw ConfigError("closed-form tail mass disagrees with quadrature");
        }
      }
    }
  }
  if (beta_integral) {
    // compare as an increment away from the (possibly singular) origin
    const double direct =
        quad::composite_gauss([&](double s) { return beta(s); }, 0.6, 1.7,
                              1e-11);
    if (std::abs(direct - (beta_integral(1.7) - beta_integral(0.6))) > 1e-9) {
      throw ConfigError("closed-form drift integral disagrees with quadrature");
    }
  }
  if (psi_bar_closed && (psi_closed || domain_start == 0.0)) {
    const double t_chk = 1.3;
    const cplx u_chk(0.7, 0.0);
    const cplx direct = origin_integral(
        [&](double s) { return psi_eval(*this, s, u_chk); }, t_chk);
    const cplx closed = psi_bar_closed(t_chk, u_chk);
    if (std::abs(direct - closed) > 1e-7 * (1.0 + std::abs(closed))) {
      throw ConfigError(
          "closed-form integrated exponent disagrees with quadrature");
    }
  }
}

SubordinatorSpec identity_clock() {
  SubordinatorSpec spec;
  spec.name = "identity";
  spec.beta = [](double) { return 1.0; };
  spec.g = [](double, double) { return 0.0; };
  spec.has_jumps = false;
  spec.domain_start = 0.0;
  spec.psi_closed = [](double, cplx u) { return -u; };
  spec.psi_bar_closed = [](double t, cplx u) { return -u * t; };
  spec.tail_mass_closed = [](double, double) { return 0.0; };
  spec.beta_integral = [](double s) { return s; };
  spec.validate();
  return spec;
}

SubordinatorSpec exponential_kernel_clock(PowerLaw beta, PowerLaw a,
                                          PowerLaw b) {
  if (beta.coeff < 0 || a.coeff < 0) {
    throw ConfigError("drift and kernel amplitude must be >= 0");
  }
  if (a.coeff > 0 && !(b.coeff > 0)) {
    throw ConfigError("kernel decay length must be > 0");
  }
  if (beta.coeff > 0 && beta.exponent <= -1.0) {
    throw ConfigError("drift rate must be integrable at 0");
  }
  SubordinatorSpec spec;
  spec.name = "exponential_kernel";
  spec.has_jumps = a.coeff > 0;
  spec.beta = [beta](double s) { return beta(s); };
  spec.g = [a, b](double s, double r) {
    const double bs = b(s);
    if (bs <= 0.0) return 0.0;
    return a(s) * std::exp(-r / bs);
  };
  const bool singular_origin =
      (a.coeff > 0 && a.exponent < 0) || (b.coeff > 0 && b.exponent < 0) ||
      (beta.coeff > 0 && beta.exponent < 0);
  spec.domain_start = singular_origin ? 1e-3 : 0.0;
  spec.r_scale = spec.has_jumps ? b(1.0) : 1.0;
  spec.psi_closed = [beta, a, b](double s, cplx u) {
    const double bs = b(s);
    cplx value = -u * beta(s);
    if (bs > 0.0 && a(s) != 0.0) {
      if (u.imag() == 0.0 && !(1.0 + bs * u.real() > 0.0)) {
        // real argument at or past the pole -1/b(s): the exponential moment
        // of the increment does not exist there
        throw DomainError(
            "Laplace exponent diverges at this real argument (pole at minus "
            "the reciprocal decay length)");
      }
      value -= a(s) * bs * bs * u / (1.0 + bs * u);
    }
    return value;
  };
  spec.tail_mass_closed = [a, b](double s, double x) {
    const double bs = b(s);
    if (bs <= 0.0) return 0.0;
    return a(s) * bs * std::exp(-x / bs);
  };
  spec.beta_integral = [beta](double s) {
    return beta.coeff == 0.0
               ? 0.0
               : beta.coeff * std::pow(s, beta.exponent + 1.0) /
                     (beta.exponent + 1.0);
  };
  if (!spec.has_jumps) {
    spec.psi_bar_closed = [bi = spec.beta_integral](double t, cplx u) {
      return -u * bi(t);
    };
  }
  spec.validate();
  return spec;
}

std::complex<double> laplace_exponent(const SubordinatorSpec& spec, double s,
                                      std::complex<double> u) {
  if (s < spec.domain_start) {
    throw DomainError("time is below the clock's domain start");
  }
  if (u.real() < 0) {
    throw DomainError("Laplace exponent needs Re(u) >= 0");
  }
  return psi_eval(spec, s, u);
}

double laplace_exponent_real(const SubordinatorSpec& spec, double s,
                             double u) {
  if (s < spec.domain_start) {
    throw DomainError("time is below the clock's domain start");
  }
  return psi_real_eval(spec, s, u);
}

std::complex<double> integrated_laplace_exponent(const SubordinatorSpec& spec,
                                                 double t,
                                                 std::complex<double> u) {
  if (t < 0) throw DomainError("time must be >= 0");
  if (t == 0.0 || u == cplx(0.0)) return 0.0;
  if (u.real() < 0) {
    throw DomainError("integrated Laplace exponent needs Re(u) >= 0");
  }
  if (spec.psi_bar_closed) return spec.psi_bar_closed(t, u);
  cplx total = 0.0;
  const double lo = std::min(spec.domain_start, t);
  if (lo > 0.0) {
    try {
      total += origin_integral(
          [&](double s) { return psi_eval(spec, s, u); }, lo);
    } catch (const QuadratureError& e) {
      throw SingularOriginError(
          std::string("time integral of the Laplace exponent diverges near "
                      "the calendar origin and no closed form is attached: ") +
          e.what());
    }
  }
  if (t > lo) {
    total += quad::composite_gauss(
        [&](double s) { return psi_eval(spec, s, u); }, lo, t, 1e-9);
  }
  return total;
}

double integrated_laplace_exponent_real(const SubordinatorSpec& spec, double t,
                                        double u) {
  if (t < 0) throw DomainError("time must be >= 0");
  if (t == 0.0 || u == 0.0) return 0.0;
  if (u > 0.0) return integrated_laplace_exponent(spec, t, cplx(u, 0.0)).real();
  // Negative argument: the defining integral must converge at every s <= t.
  // Closed forms know their exact convergence domain and throw DomainError
  // right at it, so they take precedence over the conservative decay probe,
  // which only guards the pure-quadrature route.
  if (spec.psi_bar_closed) return spec.psi_bar_closed(t, cplx(u, 0.0)).real();
  if (spec.has_jumps && !spec.psi_closed) {
    const double s_lo = std::max(spec.domain_start, 1e-3 * t);
    for (double s : {t, 0.5 * (s_lo + t), s_lo}) {
      if (!quad::tail_decays(growth_probe(spec, s, u), spec.r_scale)) {
        throw DomainError(
            "exponential moment of the clock diverges before the horizon");
      }
    }
  }
  double total = 0.0;
  const double lo = std::min(spec.domain_start, t);
  if (lo > 0.0) {
    try {
      total += origin_integral(
          [&](double s) { return psi_real_eval(spec, s, u); }, lo);
    } catch (const QuadratureError& e) {
      throw SingularOriginError(
          std::string("time integral of the Laplace exponent diverges near "
                      "the calendar origin and no closed form is attached: ") +
          e.what());
    }
  }
  if (t > lo) {
    total += quad::composite_gauss(
        [&](double s) { return psi_real_eval(spec, s, u); }, lo, t, 1e-9);
  }
  return total;
}

IncrementLaw::IncrementLaw(const SubordinatorSpec& spec, double s, double dt)
    : s_(s),
      dt_(dt),
      has_jumps_(spec.has_jumps),
      r_scale_(spec.r_scale),
      g_(spec.g),
      tail_closed_(spec.tail_mass_closed) {
  if (!(dt > 0)) throw DomainError("increment length must be > 0");
  if (s < spec.domain_start) {
    throw DomainError("increment start is below the clock's domain start");
  }
  drift_ = spec.beta_integral
               ? spec.beta_integral(s + dt) - spec.beta_integral(s)
               : quad::composite_gauss(spec.beta, s, s + dt, 1e-10);
  if (drift_ < 0) throw DomainError("clock drift integral is negative");
}

double IncrementLaw::jump_density(double r) const {
  if (!has_jumps_) return 0.0;
  return quad::composite_gauss([&](double v) { return g_(v, r); }, s_,
                               s_ + dt_, 1e-10);
}

double IncrementLaw::tail_mass(double x) const {
  if (!has_jumps_) return 0.0;
  if (tail_closed_) {
    return quad::composite_gauss([&](double v) { return tail_closed_(v, x); },
                                 s_, s_ + dt_, 1e-10);
  }
  return quad::integrate_upper([&](double r) { return jump_density(r); }, x,
                               r_scale_);
}

double IncrementLaw::small_jump_mean(double eps) const {
  if (!has_jumps_) return 0.0;
  quad::Options opt;
  // jump_density is itself a quadrature with ~1e-10 relative noise, so the
  // outer error estimate bottoms out near that noise times the integrand's
  // magnitude: an absolute budget has to sit above the floor, scaled by the
  // integrand at the cutoff. rel_tol stays tight because it drives the
  // refinement depth -- loosening it stops refinement before the estimate
  // settles; the compensation only needs to be accurate relative to the
  // increment's total drift, which the scaled absolute budget guarantees.
  opt.abs_tol = std::max(1e-14, 1e-8 * eps * jump_density(eps));
  opt.rel_tol = 1e-10;
  // DE rule: G can have a boundary layer at 0 much narrower than eps
  return quad::integrate_de([&](double r) { return r * jump_density(r); }, 0.0,
                            eps, opt);
}

IncrementSampler::IncrementSampler(const IncrementLaw& law, double eps)
    : drift_(law.drift()), eps_(eps), lambda_(0.0), small_mean_(0.0) {
  if (!(eps > 0)) throw DomainError("small-jump cutoff must be > 0");
  if (!law.has_jumps()) return;
  small_mean_ = law.small_jump_mean(eps);
  lambda_ = law.tail_mass(eps);
  if (lambda_ <= 0.0) {
    lambda_ = 0.0;
    return;
  }
  // Tabulate the tail mass T(x) = int_x^inf G on a geometric grid in x,
  // in log-log coordinates, down to a negligible remainder.
  const double floor = std::max(lambda_ * 1e-14, 1e-300);
  std::vector<double> xs = {eps};
  std::vector<double> ts = {lambda_};
  double x = eps;
  for (int i = 0; i < 400 && ts.back() > floor; ++i) {
    x *= 1.2;
    const double tm = law.tail_mass(x);
    if (tm >= ts.back()) {
      if (tm <= lambda_ * 1e-12) break;
      throw QuadratureError(
          "tail-mass table is not strictly decreasing; cannot bracket the "
          "inverse CDF");
    }
    xs.push_back(x);
    ts.push_back(std::max(tm, 1e-300));
  }
  if (ts.back() > lambda_ * 1e-10) {
    throw QuadratureError(
        "tail mass decays too slowly to tabulate an inverse CDF");
  }
  lx_.resize(xs.size());
  lt_.resize(ts.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lx_[i] = std::log(xs[i]);
    lt_[i] = std::log(ts[i]);
  }
  slope_ = pchip_slopes(lx_, lt_);
}

double IncrementSampler::invert_tail(double target_log) const {
  if (target_log >= lt_.front()) return eps_;
  if (target_log <= lt_.back()) return std::exp(lx_.back());
  // locate the bracketing segment: lt_ is strictly decreasing
  std::size_t lo = 0, hi = lt_.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (lt_[mid] > target_log ? lo : hi) = mid;
  }
  double a = lx_[lo], b = lx_[hi];
  // the monotone cubic is decreasing on the segment; bisect to 1e-12
  while (b - a > 1e-12) {
    const double mid = 0.5 * (a + b);
    const double val = hermite_eval(lx_[lo], lx_[hi], lt_[lo], lt_[hi],
                                    slope_[lo], slope_[hi], mid);
    (val > target_log ? a : b) = mid;
  }
  return std::exp(0.5 * (a + b));
}

double IncrementSampler::sample(rng::Stream& rng) const {
  double z = drift_ + small_mean_;
  if (lambda_ > 0.0) {
    const std::uint64_t count = rng.poisson(lambda_);
    for (std::uint64_t k = 0; k < count; ++k) {
      z += invert_tail(std::log(lambda_ * rng.uniform01()));
    }
  }
  return z;
}

double sample_increment(const IncrementLaw& law, double eps,
                        rng::Stream& rng) {
  if (!law.sampler_cache_ || law.sampler_eps_ != eps) {
    law.sampler_cache_ = std::make_shared<const IncrementSampler>(law, eps);
    law.sampler_eps_ = eps;
  }
  return law.sampler_cache_->sample(rng);
}

PathSampler::PathSampler(const SubordinatorSpec& spec,
                         std::vector<double> grid, double eps)
    : grid_(std::move(grid)) {
  if (grid_.empty()) throw DomainError("path grid must be nonempty");
  if (grid_.front() < spec.domain_start) {
    throw DomainError("path grid must start at or after the clock's domain");
  }
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    if (!(grid_[i + 1] > grid_[i])) {
      throw DomainError("path grid must be strictly increasing");
    }
    samplers_.emplace_back(
        IncrementLaw(spec, grid_[i], grid_[i + 1] - grid_[i]), eps);
  }
}

std::vector<double> PathSampler::sample(rng::Stream& rng) const {
  std::vector<double> z(grid_.size());
  z[0] = 0.0;
  for (std::size_t i = 0; i < samplers_.size(); ++i) {
    z[i + 1] = z[i] + samplers_[i].sample(rng);
  }
  return z;
}

std::vector<double> sample_path(const SubordinatorSpec& spec,
                                const std::vector<double>& grid, double eps,
                                rng::Stream& rng) {
  return PathSampler(spec, grid, eps).sample(rng);
}

}  // namespace asub::subord
