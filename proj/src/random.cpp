#include "asub/random.hpp"

#include <cmath>

#include "asub/errors.hpp"

namespace asub::rng {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  // expand the seed through splitmix64 so nearby seeds give unrelated states
  std::uint64_t s = seed;
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s) >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(std::uint64_t seed) : engine_(make_engine(seed)) {}

Stream Stream::derive(std::uint64_t master, std::uint64_t index,
                      std::uint64_t lane) {
  std::uint64_t s = master;
  s ^= 0x9E3779B97F4A7C15ULL * (index + 1);
  std::uint64_t mixed = splitmix64(s);
  s = mixed ^ (0xD1B54A32D192ED03ULL * (lane + 1));
  return Stream(splitmix64(s));
}

double Stream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double Stream::exponential() {
  double u;
  do {
    u = uniform01();
  } while (u == 0.0);
  return -std::log(u);
}

std::uint64_t Stream::poisson(double mean) {
  if (!(mean >= 0)) throw DomainError("poisson: mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean > 50.0) {
    const double half = mean / 2.0;
    return poisson(half) + poisson(mean - half);
  }
  const double limit = std::exp(-mean);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= uniform01();
  } while (p > limit);
  return k - 1;
}

}  // namespace asub::rng
