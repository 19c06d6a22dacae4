#pragma once

#include <cstddef>
#include <span>

namespace asub::kernels {

// Accumulator pairs returned by the reduction kernels.
struct Sums2 {
  double s1 = 0.0;
  double s2 = 0.0;
};

// Sums feeding an empirical characteristic function estimate at one frequency.
struct CfSums {
  double cos_sum = 0.0;
  double sin_sum = 0.0;
  double cos_sq = 0.0;
  double sin_sq = 0.0;
};

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool cpu_supports_avx2();

// Backend in use for the free-function kernels below. Defaults to the widest
// instruction set the CPU supports; ASUB_KERNELS=scalar|avx2 overrides at
// process start, force_backend() overrides from code (tests).
Backend active_backend();
void force_backend(Backend b);

double sum(std::span<const double> x);
// (Σ x, Σ x²)
Sums2 sum_sq(std::span<const double> x);
// (Σ cos(u·x), Σ sin(u·x), Σ cos²(u·x), Σ sin²(u·x))
CfSums cf_sums(std::span<const double> x, double u);
// (Σ e^{a·x}, Σ e^{2a·x})
Sums2 exp_sums(std::span<const double> x, double a);
// (Σ (x−m)², Σ (x−m)⁴)
Sums2 central_sums(std::span<const double> x, double mean);
// p_i = max(ff·e^{x_i} − strike, 0); returns (Σ p, Σ p²)
Sums2 call_payoff_sums(std::span<const double> x, double forward_factor,
                       double strike);

// Scalar reference kernels. These are the semantic definition; the SIMD
// variants are equivalence-tested against them.
namespace scalar {
double sum(std::span<const double> x);
Sums2 sum_sq(std::span<const double> x);
CfSums cf_sums(std::span<const double> x, double u);
Sums2 exp_sums(std::span<const double> x, double a);
Sums2 central_sums(std::span<const double> x, double mean);
Sums2 call_payoff_sums(std::span<const double> x, double forward_factor,
                       double strike);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
// AVX2+FMA variants; callable only when cpu_supports_avx2() is true.
namespace avx2 {
double sum(std::span<const double> x);
Sums2 sum_sq(std::span<const double> x);
CfSums cf_sums(std::span<const double> x, double u);
Sums2 exp_sums(std::span<const double> x, double a);
Sums2 central_sums(std::span<const double> x, double mean);
Sums2 call_payoff_sums(std::span<const double> x, double forward_factor,
                       double strike);
}  // namespace avx2
#endif

}  // namespace asub::kernels
