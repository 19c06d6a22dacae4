#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "asub/random.hpp"

namespace asub::subord {

// c * s^p on s >= 0 (std::pow convention 0^0 = 1).
struct PowerLaw {
  double coeff = 0.0;
  double exponent = 0.0;
  double operator()(double s) const;
};

// Nondecreasing independent-increment clock Z with time-dependent drift rate
// beta(s) and jump density g(s, r) in the jump size r. The increment of Z
// over [s, s+dt] has Laplace transform exp(int_s^{s+dt} psi_v(u) dv) with
//   psi_s(u) = -u beta(s) + int_0^inf (e^{-ur} - 1) g(s, r) dr.
struct SubordinatorSpec {
  std::string name;
  std::function<double(double)> beta;           // beta(s) >= 0
  std::function<double(double, double)> g;      // g(s, r) >= 0
  bool has_jumps = true;                        // false: g identically 0
  double domain_start = 0.0;                    // earliest s at which g is finite
  double r_scale = 1.0;                         // decay length of r -> g(s, r)

  // Optional closed forms; each must match its quadrature definition (the
  // factories verify this at construction).
  std::function<std::complex<double>(double, std::complex<double>)>
      psi_closed;  // psi_s(u)
  std::function<std::complex<double>(double, std::complex<double>)>
      psi_bar_closed;  // int_0^t psi_s(u) ds; throws DomainError off-domain
  std::function<double(double, double)> tail_mass_closed;  // int_x^inf g(s,r)dr
  std::function<double(double)> beta_integral;             // int_0^s beta

  void validate() const;
};

// Clock with beta == 1, g == 0: Z_t = t.
SubordinatorSpec identity_clock();
// Clock with g(s, r) = a(s) e^{-r / b(s)} and drift rate beta(s).
SubordinatorSpec exponential_kernel_clock(PowerLaw beta, PowerLaw a,
                                          PowerLaw b);

// psi_s(u) for Re(u) >= 0 (the transform's guaranteed domain).
std::complex<double> laplace_exponent(const SubordinatorSpec& spec, double s,
                                      std::complex<double> u);

// Real extension of psi_s to negative arguments (exponential moments of the
// increment). Throws DomainError when the defining integral diverges.
double laplace_exponent_real(const SubordinatorSpec& spec, double s, double u);

// int_0^t psi_s(u) ds for Re(u) >= 0; uses the closed form when attached,
// otherwise composite quadrature on [domain_start, t] plus an adaptive
// attempt on [0, domain_start] (SingularOriginError if that piece diverges).
std::complex<double> integrated_laplace_exponent(const SubordinatorSpec& spec,
                                                 double t,
                                                 std::complex<double> u);

// Real extension of the integrated exponent, with divergence checks.
double integrated_laplace_exponent_real(const SubordinatorSpec& spec, double t,
                                        double u);

// The law of Z_{s+dt} - Z_s: drift plus an integrated jump density
// G(r) = int_s^{s+dt} g(v, r) dv.
class IncrementLaw {
 public:
  IncrementLaw(const SubordinatorSpec& spec, double s, double dt);

  double start() const { return s_; }
  double length() const { return dt_; }
  double drift() const { return drift_; }
  bool has_jumps() const { return has_jumps_; }
  double jump_density(double r) const;        // G(r)
  double tail_mass(double x) const;           // int_x^inf G(r) dr
  double small_jump_mean(double eps) const;   // int_0^eps r G(r) dr

 private:
  friend double sample_increment(const IncrementLaw&, double, rng::Stream&);
  double s_, dt_, drift_;
  bool has_jumps_;
  double r_scale_;
  std::function<double(double, double)> g_;
  std::function<double(double, double)> tail_closed_;
  // lazily built sampler cache for the free-function sampling entry point
  mutable std::shared_ptr<const class IncrementSampler> sampler_cache_;
  mutable double sampler_eps_ = -1.0;
};

// Draws from an IncrementLaw with small-jump cutoff eps: jumps >= eps exact
// compound Poisson via a tabulated inverse tail CDF, jumps < eps replaced by
// their mean. Build once, sample many times (const and thread-safe).
class IncrementSampler {
 public:
  IncrementSampler(const IncrementLaw& law, double eps);

  double sample(rng::Stream& rng) const;
  double drift() const { return drift_; }
  double small_jump_mean() const { return small_mean_; }
  double jump_intensity() const { return lambda_; }  // mean jump count
  double cutoff() const { return eps_; }

 private:
  double invert_tail(double target_log) const;
  double drift_, eps_, lambda_, small_mean_;
  // tail-mass table in log-log coordinates with monotone cubic slopes
  std::vector<double> lx_, lt_, slope_;
};

// One draw of Z_{s+dt} - Z_s. Builds (and caches) a sampler on first use for
// a given eps; prefer IncrementSampler directly in sampling loops.
double sample_increment(const IncrementLaw& law, double eps, rng::Stream& rng);

// Per-interval samplers for a fixed time grid; Z at grid[0] is 0.
class PathSampler {
 public:
  PathSampler(const SubordinatorSpec& spec, std::vector<double> grid,
              double eps);
  const std::vector<double>& grid() const { return grid_; }
  // Z values at the grid times (nondecreasing, starts at 0).
  std::vector<double> sample(rng::Stream& rng) const;

 private:
  std::vector<double> grid_;
  std::vector<IncrementSampler> samplers_;
};

// One path of Z on the grid (convenience wrapper over PathSampler).
std::vector<double> sample_path(const SubordinatorSpec& spec,
                                const std::vector<double>& grid, double eps,
                                rng::Stream& rng);

}  // namespace asub::subord
