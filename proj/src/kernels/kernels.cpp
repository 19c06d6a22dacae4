#include <cstdlib>
#include <cstring>
#include <span>

#include "asub/kernels.hpp"

namespace asub::kernels {
namespace {

#if defined(__x86_64__) || defined(_M_X64)
constexpr bool kHaveAvx2Build = true;
#else
constexpr bool kHaveAvx2Build = false;
#endif

Backend detect_backend() {
  const bool avx2_ok = cpu_supports_avx2();
  if (const char* env = std::getenv("ASUB_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && avx2_ok) return Backend::avx2;
    // Unknown or unsupported request: fall through to auto-detection.
  }
  return avx2_ok ? Backend::avx2 : Backend::scalar;
}

Backend& backend_slot() {
  static Backend b = detect_backend();
  return b;
}

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool cpu_supports_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() { return backend_slot(); }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !(kHaveAvx2Build && cpu_supports_avx2())) {
    b = Backend::scalar;
  }
  backend_slot() = b;
}

#if defined(__x86_64__) || defined(_M_X64)
#define ASUB_DISPATCH(call)                                             \
  do {                                                                  \
    if (backend_slot() == Backend::avx2) return avx2::call;             \
    return scalar::call;                                                \
  } while (0)
#else
#define ASUB_DISPATCH(call) return scalar::call
#endif

double sum(std::span<const double> x) { ASUB_DISPATCH(sum(x)); }

Sums2 sum_sq(std::span<const double> x) { ASUB_DISPATCH(sum_sq(x)); }

CfSums cf_sums(std::span<const double> x, double u) {
  ASUB_DISPATCH(cf_sums(x, u));
}

Sums2 exp_sums(std::span<const double> x, double a) {
  ASUB_DISPATCH(exp_sums(x, a));
}

Sums2 central_sums(std::span<const double> x, double mean) {
  ASUB_DISPATCH(central_sums(x, mean));
}

Sums2 call_payoff_sums(std::span<const double> x, double forward_factor,
                       double strike) {
  ASUB_DISPATCH(call_payoff_sums(x, forward_factor, strike));
}

#undef ASUB_DISPATCH

}  // namespace asub::kernels
