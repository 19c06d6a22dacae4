#include "asub/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "asub/errors.hpp"
#include "asub/kernels.hpp"
#include "asub/random.hpp"

namespace asub::validation {

namespace {

// Machine-rounding slack for pass bounds that can be exactly zero (e.g.
// deterministic dynamics, where the only residue is trig rounding).
constexpr double kRoundingSlack = 1e-14;

struct ComponentStats {
  std::complex<double> mean;
  double var_re;
  double var_im;
};

ComponentStats cf_stats(std::span<const double> samples, double u) {
  const auto sums = kernels::cf_sums(samples, u);
  const double n = static_cast<double>(samples.size());
  const double mean_re = sums.cos_sum / n;
  const double mean_im = sums.sin_sum / n;
  const double var_re =
      std::max(0.0, (sums.cos_sq - n * mean_re * mean_re) / (n - 1.0));
  const double var_im =
      std::max(0.0, (sums.sin_sq - n * mean_im * mean_im) / (n - 1.0));
  return {{mean_re, mean_im}, var_re, var_im};
}

// sqrt(E|phi_hat - phi|^2): the norm-wise standard error of a complex mean.
double norm_std_error(const ComponentStats& st, std::size_t n) {
  return std::sqrt((st.var_re + st.var_im) / static_cast<double>(n));
}

void append_row(std::string& out, const char* fmt, ...)
    __attribute__((format(printf, 2, 3)));
void append_row(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
}

}  // namespace

EcfEstimate empirical_cf(std::span<const double> samples, double u) {
  if (samples.size() < 2) {
    throw DomainError("empirical cf: need at least two samples");
  }
  const auto st = cf_stats(samples, u);
  const double n = static_cast<double>(samples.size());
  EcfEstimate est;
  est.u = u;
  est.value = st.mean;
  est.std_error = std::sqrt(std::max(st.var_re, st.var_im) / n);
  est.n = samples.size();
  return est;
}

CfMatchReport cf_match_report(const subordination::TimeChangedModel& tc,
                              double t, std::span<const double> u_grid,
                              std::size_t n_paths, double eps,
                              std::uint64_t seed) {
  const double t0 = tc.clock.domain_start;
  if (!(t > t0)) {
    throw DomainError("cf match: t must exceed the clock's calendar start");
  }
  if (u_grid.empty()) {
    throw DomainError("cf match: u grid is empty");
  }
  if (n_paths < 2) {
    throw DomainError("cf match: need at least two paths");
  }
  const std::vector<double> grid{t0, t};
  const auto terminals = [&](double cutoff) {
    const subordination::PathSampler sampler(tc, grid, cutoff);
    std::vector<double> y(n_paths);
    for (std::size_t i = 0; i < n_paths; ++i) {
      auto clock_rng = rng::Stream::derive(seed, i, 0);
      auto base_rng = rng::Stream::derive(seed, i, 1);
      y[i] = sampler.sample(clock_rng, base_rng).y.back();
    }
    return y;
  };
  const auto y = terminals(eps);
  const auto y_half = terminals(0.5 * eps);

  CfMatchReport rep;
  rep.t = t;
  rep.n = n_paths;
  rep.eps = eps;
  rep.seed = seed;
  rep.passed = true;
  rep.rows.reserve(u_grid.size());
  for (const double u : u_grid) {
    const auto est = empirical_cf(y, u);
    const auto est_half = empirical_cf(y_half, u);
    CfMatchRow row;
    row.u = u;
    row.empirical = est.value;
    row.analytic = std::exp(subordination::char_exponent_curve(tc, t, u));
    row.std_error = est.std_error;
    row.eps_bias = std::abs(est.value - est_half.value);
    row.abs_diff = std::abs(est.value - row.analytic);
    row.bound = 3.0 * std::sqrt(2.0) * est.std_error + row.eps_bias +
                kRoundingSlack;
    rep.passed = rep.passed && row.abs_diff <= row.bound;
    rep.rows.push_back(row);
  }
  return rep;
}

IndependenceReport independence_test(const subordination::TimeChangedModel& tc,
                                     double t0, double t1, double t2,
                                     double u1, double u2, std::size_t n_paths,
                                     double eps, std::uint64_t seed) {
  if (!(t0 >= tc.clock.domain_start)) {
    throw DomainError(
        "independence test: t0 is below the clock's calendar start");
  }
  if (!(t0 < t1 && t1 < t2)) {
    throw DomainError("independence test: need t0 < t1 < t2");
  }
  if (n_paths < 2) {
    throw DomainError("independence test: need at least two paths");
  }
  const subordination::PathSampler sampler(tc, {t0, t1, t2}, eps);
  std::vector<double> d1(n_paths), d2(n_paths), mix(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    auto clock_rng = rng::Stream::derive(seed, i, 0);
    auto base_rng = rng::Stream::derive(seed, i, 1);
    const auto path = sampler.sample(clock_rng, base_rng);
    d1[i] = path.y[1] - path.y[0];
    d2[i] = path.y[2] - path.y[1];
    mix[i] = u1 * d1[i] + u2 * d2[i];
  }
  const auto s1 = cf_stats(d1, u1);
  const auto s2 = cf_stats(d2, u2);
  const auto s12 = cf_stats(mix, 1.0);

  IndependenceReport rep;
  rep.t0 = t0;
  rep.t1 = t1;
  rep.t2 = t2;
  rep.u1 = u1;
  rep.u2 = u2;
  rep.n = n_paths;
  rep.joint = s12.mean;
  rep.product = s1.mean * s2.mean;
  rep.delta = std::abs(rep.joint - rep.product);
  // delta method on phi12 - phi1 phi2 (cross terms dropped; the summed
  // variances dominate under the independence hypothesis being tested)
  const double se1 = norm_std_error(s1, n_paths);
  const double se2 = norm_std_error(s2, n_paths);
  const double se12 = norm_std_error(s12, n_paths);
  rep.std_error = std::sqrt(se12 * se12 +
                            std::norm(s2.mean) * se1 * se1 +
                            std::norm(s1.mean) * se2 * se2);
  rep.passed = rep.delta <= 3.0 * rep.std_error + kRoundingSlack;
  return rep;
}

MomentReport moment_test(std::span<const double> samples, double analytic_mean,
                         double analytic_var) {
  const std::size_t n = samples.size();
  if (n < 30) {
    throw DomainError("moment test: need at least 30 samples");
  }
  const double nn = static_cast<double>(n);
  const double mean = kernels::sum(samples) / nn;
  // central_sums returns (sum (x-mean)^2, sum (x-mean)^4): the two-pass
  // variance numerator and the fourth central moment in one sweep.
  const auto centered = kernels::central_sums(samples, mean);
  const double var = centered.s1 / (nn - 1.0);

  MomentReport rep;
  rep.n = n;
  rep.sample_mean = mean;
  rep.sample_var = var;

  const double sd = std::sqrt(var);
  if (sd <= 1e-13 * (std::abs(mean) + 1.0)) {
    // spread at rounding level: the samples are effectively constant
    rep.variance_degenerate = true;
    rep.z_mean = std::abs(mean - analytic_mean) <=
                         1e-12 * (std::abs(analytic_mean) + 1.0)
                     ? 0.0
                     : std::numeric_limits<double>::infinity();
    rep.z_var = 0.0;
    rep.passed = rep.z_mean == 0.0;
    return rep;
  }

  rep.z_mean = (mean - analytic_mean) / (sd / std::sqrt(nn));
  const double m4 = centered.s2 / nn;
  const double se_var = std::sqrt(std::max(0.0, m4 - var * var) / nn);
  if (se_var <= 1e-13 * (var + 1.0)) {
    rep.variance_degenerate = true;
    rep.z_var = var == analytic_var
                    ? 0.0
                    : std::numeric_limits<double>::infinity();
  } else {
    rep.z_var = (var - analytic_var) / se_var;
  }
  rep.passed = std::abs(rep.z_mean) <= 3.0 &&
               (rep.variance_degenerate || std::abs(rep.z_var) <= 3.0);
  return rep;
}

std::string to_text(const CfMatchReport& report) {
  std::string out;
  append_row(out, "cf match: t=%.10g N=%zu eps=%.10g seed=%llu -> %s\n",
             report.t, report.n, report.eps,
             static_cast<unsigned long long>(report.seed),
             report.passed ? "PASS" : "FAIL");
  append_row(out, "%12s %13s %13s %13s %13s %12s %12s\n", "u", "Re emp",
             "Im emp", "Re analytic", "Im analytic", "|diff|", "bound");
  for (const auto& row : report.rows) {
    append_row(out, "%12.6g %13.8f %13.8f %13.8f %13.8f %12.4e %12.4e\n",
               row.u, row.empirical.real(), row.empirical.imag(),
               row.analytic.real(), row.analytic.imag(), row.abs_diff,
               row.bound);
  }
  return out;
}

std::string to_text(const IndependenceReport& report) {
  std::string out;
  append_row(out,
             "independence: times=(%.10g, %.10g, %.10g) u=(%.10g, %.10g) "
             "N=%zu -> %s\n",
             report.t0, report.t1, report.t2, report.u1, report.u2, report.n,
             report.passed ? "PASS" : "FAIL");
  append_row(out, "  joint   = %13.8f %+13.8fi\n", report.joint.real(),
             report.joint.imag());
  append_row(out, "  product = %13.8f %+13.8fi\n", report.product.real(),
             report.product.imag());
  append_row(out, "  delta   = %12.4e  (3 stderr = %12.4e)\n", report.delta,
             3.0 * report.std_error);
  return out;
}

std::string to_text(const MomentReport& report) {
  std::string out;
  append_row(out, "moments: N=%zu mean=%.10g var=%.10g -> %s\n", report.n,
             report.sample_mean, report.sample_var,
             report.passed ? "PASS" : "FAIL");
  append_row(out, "  z_mean = %.4f\n", report.z_mean);
  if (report.variance_degenerate) {
    append_row(out, "  z_var  = (degenerate spread, skipped)\n");
  } else {
    append_row(out, "  z_var  = %.4f\n", report.z_var);
  }
  return out;
}

void to_json(nlohmann::json& j, const CfMatchReport& report) {
  j = nlohmann::json{{"type", "cf_match"},
                     {"t", report.t},
                     {"n", report.n},
                     {"eps", report.eps},
                     {"seed", report.seed},
                     {"passed", report.passed}};
  auto rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"u", row.u},
                    {"empirical", {row.empirical.real(), row.empirical.imag()}},
                    {"analytic", {row.analytic.real(), row.analytic.imag()}},
                    {"std_error", row.std_error},
                    {"eps_bias", row.eps_bias},
                    {"abs_diff", row.abs_diff},
                    {"bound", row.bound}});
  }
  j["rows"] = std::move(rows);
}

void to_json(nlohmann::json& j, const IndependenceReport& report) {
  j = nlohmann::json{
      {"type", "independence"},
      {"times", {report.t0, report.t1, report.t2}},
      {"u", {report.u1, report.u2}},
      {"n", report.n},
      {"joint", {report.joint.real(), report.joint.imag()}},
      {"product", {report.product.real(), report.product.imag()}},
      {"delta", report.delta},
      {"std_error", report.std_error},
      {"passed", report.passed}};
}

void to_json(nlohmann::json& j, const MomentReport& report) {
  j = nlohmann::json{{"type", "moments"},
                     {"n", report.n},
                     {"sample_mean", report.sample_mean},
                     {"sample_var", report.sample_var},
                     {"z_mean", report.z_mean},
                     {"z_var", report.z_var},
                     {"variance_degenerate", report.variance_degenerate},
                     {"passed", report.passed}};
}

}  // namespace asub::validation
