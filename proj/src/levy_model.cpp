#include "asub/levy_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "asub/errors.hpp"
#include "asub/quadrature.hpp"

namespace asub::levy {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

// Moments of Normal(mu, sig^2) restricted to [A, B] (sig > 0).
struct TruncatedGaussian {
  double prob;    // P(A <= Y <= B)
  double mean;    // E[Y 1{A<=Y<=B}]
  double second;  // E[Y^2 1{A<=Y<=B}]
};

TruncatedGaussian truncated_gaussian(double mu, double sig, double A,
                                     double B) {
  const double a = (A - mu) / sig;
  const double b = (B - mu) / sig;
  const double P = normal_cdf(b) - normal_cdf(a);
  const double dphi = normal_pdf(a) - normal_pdf(b);
  const double ez = dphi;                                   // E[Z 1]
  const double ezz = P + a * normal_pdf(a) - b * normal_pdf(b);  // E[Z^2 1]
  TruncatedGaussian out;
  out.prob = P;
  out.mean = mu * P + sig * ez;
  out.second = mu * mu * P + 2.0 * mu * sig * ez + sig * sig * ezz;
  return out;
}

// Poisson(lambda) weights until the tail drops below tail_tol.
std::vector<double> poisson_weights(double lambda, double tail_tol) {
  std::vector<double> w;
  double wk = std::exp(-lambda);
  double cum = 0.0;
  const int k_max = static_cast<int>(lambda + 12.0 * std::sqrt(lambda)) + 50;
  for (int k = 0; k <= k_max; ++k) {
    w.push_back(wk);
    cum += wk;
    if (cum >= 1.0 - tail_tol) break;
    wk *= lambda / (k + 1);
  }
  return w;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite");
  }
}

}  // namespace

JumpMeasure::JumpMeasure(double rate, JumpDist dist)
    : rate_(rate), dist_(dist) {
  check_finite(rate, "jump rate");
  if (rate <= 0) throw DomainError("jump rate must be > 0");
  if (const auto* nj = std::get_if<NormalJump>(&*dist_)) {
    check_finite(nj->mean, "jump mean");
    if (!(nj->stddev > 0) || !std::isfinite(nj->stddev)) {
      throw DomainError("jump stddev must be > 0");
    }
  } else {
    const auto& dj = std::get<DiracJump>(*dist_);
    check_finite(dj.size, "jump size");
    if (dj.size == 0) throw DomainError("jump size must be nonzero");
  }
}

const JumpDist& JumpMeasure::dist() const {
  if (!dist_) throw DomainError("zero jump measure has no jump distribution");
  return *dist_;
}

bool JumpMeasure::has_density() const {
  return dist_ && std::holds_alternative<NormalJump>(*dist_);
}

double JumpMeasure::density(double y) const {
  if (is_zero()) return 0.0;
  const auto* nj = std::get_if<NormalJump>(&*dist_);
  if (!nj) {
    throw UnsupportedModelError("atomic jump measure has no density");
  }
  return rate_ * normal_pdf((y - nj->mean) / nj->stddev) / nj->stddev;
}

std::complex<double> JumpMeasure::jump_cf(double u) const {
  if (is_zero()) return 1.0;
  if (const auto* nj = std::get_if<NormalJump>(&*dist_)) {
    const double s = nj->stddev;
    return std::exp(
        std::complex<double>(-0.5 * u * u * s * s, u * nj->mean));
  }
  const double h = std::get<DiracJump>(*dist_).size;
  return std::exp(std::complex<double>(0.0, u * h));
}

double JumpMeasure::jump_exp_moment(double theta) const {
  if (is_zero()) return 1.0;
  if (const auto* nj = std::get_if<NormalJump>(&*dist_)) {
    const double s = nj->stddev;
    return std::exp(theta * nj->mean + 0.5 * theta * theta * s * s);
  }
  return std::exp(theta * std::get<DiracJump>(*dist_).size);
}

double JumpMeasure::jump_trunc_mean() const {
  if (is_zero()) return 0.0;
  if (const auto* nj = std::get_if<NormalJump>(&*dist_)) {
    return truncated_gaussian(nj->mean, nj->stddev, -1.0, 1.0).mean;
  }
  const double h = std::get<DiracJump>(*dist_).size;
  return std::abs(h) <= 1.0 ? h : 0.0;
}

double JumpMeasure::mass_outside(double bound) const {
  if (!(bound > 0)) throw DomainError("bound must be > 0");
  if (is_zero()) return 0.0;
  if (const auto* nj = std::get_if<NormalJump>(&*dist_)) {
    return rate_ *
           (1.0 -
            truncated_gaussian(nj->mean, nj->stddev, -bound, bound).prob);
  }
  return std::abs(std::get<DiracJump>(*dist_).size) > bound ? rate_ : 0.0;
}

double JumpMeasure::sample(rng::Stream& rng) const {
  if (is_zero()) throw DomainError("cannot sample the zero jump measure");
  if (const auto* nj = std::get_if<NormalJump>(&*dist_)) {
    return nj->mean + nj->stddev * rng.normal();
  }
  return std::get<DiracJump>(*dist_).size;
}

LevyModel::LevyModel(double drift, double variance, JumpMeasure jumps,
                     int dimension)
    : dimension_(dimension),
      drift_(drift),
      variance_(variance),
      jumps_(std::move(jumps)),
      path_drift_(drift) {
  if (dimension != 1) {
    throw UnsupportedModelError(
        "reference implementation supports dimension 1 only");
  }
  check_finite(drift, "drift");
  check_finite(variance, "variance");
  if (variance < 0) throw DomainError("Gaussian variance must be >= 0");

  if (!jumps_.is_zero()) {
    path_drift_ = drift - jumps_.rate() * jumps_.jump_trunc_mean();
    if (jumps_.has_density()) {
      // The closed-form jump characteristics used throughout must agree
      // with direct quadrature against the jump density.
      const auto& nj = std::get<NormalJump>(jumps_.dist());
      const double lo = nj.mean - 14.0 * nj.stddev;
      const double hi = nj.mean + 14.0 * nj.stddev;
      const double mass =
          quad::integrate([&](double y) { return jumps_.density(y); }, lo, hi)
          / jumps_.rate();
      if (std::abs(mass - 1.0) > 1e-8) {
        throw DomainError("jump density does not integrate to 1");
      }
      for (double u : {1.0, 3.0}) {
        const auto q = quad::integrate(
            [&](double y) {
              return std::exp(std::complex<double>(0.0, u * y)) *
                     (jumps_.density(y) / jumps_.rate());
            },
            lo, hi);
        if (std::abs(q - jumps_.jump_cf(u)) > 1e-10) {
          throw DomainError(
              "closed-form jump characteristic function disagrees with "
              "quadrature");
        }
      }
      const double tm_lo = std::max(-1.0, lo);
      const double tm_hi = std::min(1.0, hi);
      const double tm =
          tm_lo < tm_hi
              ? quad::integrate(
                    [&](double y) {
                      return y * jumps_.density(y) / jumps_.rate();
                    },
                    tm_lo, tm_hi)
              : 0.0;
      if (std::abs(tm - jumps_.jump_trunc_mean()) > 1e-10) {
        throw DomainError(
            "closed-form truncated jump mean disagrees with quadrature");
      }
    }
  }
}

LevyModel brownian(double drift, double variance) {
  return LevyModel(drift, variance, JumpMeasure::zero());
}

LevyModel pure_drift(double drift) {
  return LevyModel(drift, 0.0, JumpMeasure::zero());
}

std::complex<double> char_exponent(const LevyModel& m, double u) {
  std::complex<double> psi(-0.5 * u * u * m.variance(), u * m.drift());
  if (!m.jumps().is_zero()) {
    const std::complex<double> jump_term =
        m.jumps().jump_cf(u) - 1.0 -
        std::complex<double>(0.0, u * m.jumps().jump_trunc_mean());
    psi += m.jumps().rate() * jump_term;
  }
  return psi;
}

double exp_moment_rate(const LevyModel& m, double lambda) {
  double kappa = lambda * m.drift() + 0.5 * lambda * lambda * m.variance();
  if (!m.jumps().is_zero()) {
    kappa += m.jumps().rate() * (m.jumps().jump_exp_moment(lambda) - 1.0 -
                                 lambda * m.jumps().jump_trunc_mean());
  }
  return kappa;
}

std::vector<MixtureComponent> density_components(const LevyModel& m, double r,
                                                 double tail_tol) {
  if (r < 0) throw DomainError("duration must be >= 0");
  std::vector<MixtureComponent> out;
  const double base_mean = m.path_drift() * r;
  const double base_var = m.variance() * r;
  if (m.jumps().is_zero() || r == 0.0) {
    out.push_back({1.0, base_mean, r == 0.0 ? 0.0 : base_var});
    return out;
  }
  const auto weights = poisson_weights(m.jumps().rate() * r, tail_tol);
  out.reserve(weights.size());
  if (const auto* nj = std::get_if<NormalJump>(&m.jumps().dist())) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
      out.push_back({weights[k], base_mean + double(k) * nj->mean,
                     base_var + double(k) * nj->stddev * nj->stddev});
    }
  } else {
    const double h = std::get<DiracJump>(m.jumps().dist()).size;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      out.push_back({weights[k], base_mean + double(k) * h, base_var});
    }
  }
  return out;
}

bool has_transition_density(const LevyModel& m) { return m.variance() > 0; }

double transition_density(const LevyModel& m, double r, double x) {
  if (!(r > 0)) throw DomainError("transition density needs duration > 0");
  if (!has_transition_density(m)) {
    throw UnsupportedModelError(
        "model has no transition density (zero Gaussian part)");
  }
  double p = 0.0;
  for (const auto& comp : density_components(m, r)) {
    const double sig = std::sqrt(comp.var);
    p += comp.weight * normal_pdf((x - comp.mean) / sig) / sig;
  }
  return p;
}

double sample_increment(const LevyModel& m, double r, rng::Stream& rng) {
  if (r < 0) throw DomainError("duration must be >= 0");
  if (r == 0.0) return 0.0;
  double x = m.path_drift() * r;
  if (m.variance() > 0) x += std::sqrt(m.variance() * r) * rng.normal();
  if (!m.jumps().is_zero()) {
    const std::uint64_t count = rng.poisson(m.jumps().rate() * r);
    for (std::uint64_t k = 0; k < count; ++k) x += m.jumps().sample(rng);
  }
  return x;
}

double semigroup_apply(const LevyModel& m,
                       const std::function<double(double)>& f, double r,
                       double x) {
  if (r < 0) throw DomainError("duration must be >= 0");
  if (r == 0.0) return f(x);
  double acc = 0.0;
  quad::Options opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-10;
  for (const auto& comp : density_components(m, r)) {
    if (comp.var == 0.0) {
      acc += comp.weight * f(x + comp.mean);
      continue;
    }
    const double sig = std::sqrt(comp.var);
    const double center = x + comp.mean;
    acc += comp.weight *
           quad::integrate(
               [&](double z) { return f(center + sig * z) * normal_pdf(z); },
               -12.0, 12.0, opt);
  }
  return acc;
}

double truncated_mean(const LevyModel& m, double r) {
  if (r < 0) throw DomainError("duration must be >= 0");
  if (r == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& comp : density_components(m, r)) {
    if (comp.var == 0.0) {
      if (std::abs(comp.mean) <= 1.0) acc += comp.weight * comp.mean;
      continue;
    }
    acc += comp.weight *
           truncated_gaussian(comp.mean, std::sqrt(comp.var), -1.0, 1.0).mean;
  }
  return acc;
}

double truncated_second_moment(const LevyModel& m, double r) {
  if (r < 0) throw DomainError("duration must be >= 0");
  if (r == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& comp : density_components(m, r)) {
    if (comp.var == 0.0) {
      if (std::abs(comp.mean) <= 1.0) {
        acc += comp.weight * comp.mean * comp.mean;
      }
      continue;
    }
    acc += comp.weight * truncated_gaussian(comp.mean, std::sqrt(comp.var),
                                            -1.0, 1.0)
                             .second;
  }
  return acc;
}

double mass_outside(const LevyModel& m, double r, double bound) {
  if (r < 0) throw DomainError("duration must be >= 0");
  if (!(bound > 0)) throw DomainError("bound must be > 0");
  if (r == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& comp : density_components(m, r)) {
    if (comp.var == 0.0) {
      if (std::abs(comp.mean) > bound) acc += comp.weight;
      continue;
    }
    acc += comp.weight * (1.0 - truncated_gaussian(comp.mean,
                                                   std::sqrt(comp.var), -bound,
                                                   bound)
                                    .prob);
  }
  return acc;
}

double mass_outside_unit(const LevyModel& m, double r) {
  return mass_outside(m, r, 1.0);
}

std::vector<double> truncation_kink_radii(const LevyModel& m, double bound,
                                          double r_cap) {
  std::vector<double> radii;
  if (m.variance() > 0.0 || !(r_cap > 0)) return radii;  // smooth law
  const double c = m.path_drift();  // atoms live on the sample-path drift
  if (c == 0.0) return radii;       // atoms do not move with r
  auto add = [&](double level, double offset) {
    const double r = (level - offset) / c;
    if (r > 0.0 && r < r_cap) radii.push_back(r);
  };
  add(bound, 0.0);
  add(-bound, 0.0);
  if (!m.jumps().is_zero()) {
    if (const auto* dj = std::get_if<DiracJump>(&m.jumps().dist())) {
      // atom paths path_drift * r + k * size; enumerate while the crossing
      // radius fits
      const double cap_offset = std::abs(c) * r_cap + bound;
      const auto k_max = static_cast<std::size_t>(
          std::min(1000.0, std::ceil(cap_offset / std::abs(dj->size)) + 1.0));
      for (std::size_t k = 1; k <= k_max; ++k) {
        add(bound, k * dj->size);
        add(-bound, k * dj->size);
      }
    }
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

SatoReport sato_bound_check(const LevyModel& m,
                            std::span<const double> r_grid) {
  if (r_grid.empty()) throw DomainError("need a nonempty duration grid");
  SatoReport rep;
  rep.max_ratio = 0.0;
  double r_min = r_grid[0];
  double r_ref = r_grid[0];
  for (double r : r_grid) {
    if (!(r > 0)) throw DomainError("grid durations must be > 0");
    SatoRow row;
    row.r = r;
    row.mass_outside = mass_outside_unit(m, r);
    row.abs_trunc_mean = std::abs(truncated_mean(m, r));
    row.trunc_second = truncated_second_moment(m, r);
    row.ratio = std::max({row.mass_outside, row.abs_trunc_mean,
                          row.trunc_second}) /
                std::min(r, 1.0);
    rep.rows.push_back(row);
    rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    if (r < r_min) r_min = r;
    if (std::abs(std::log(r / 1e-2)) < std::abs(std::log(r_ref / 1e-2))) {
      r_ref = r;
    }
  }
  for (const auto& row : rep.rows) {
    if (row.r == r_min) rep.ratio_smallest = row.ratio;
    if (row.r == r_ref) rep.ratio_reference = row.ratio;
  }
  // No blow-up as r -> 0: the smallest-duration ratio must not exceed twice
  // the ratio at the reference duration.
  rep.pass = rep.ratio_smallest <= 2.0 * rep.ratio_reference + 1e-12;
  return rep;
}

}  // namespace asub::levy
