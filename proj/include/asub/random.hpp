#pragma once

#include <cstdint>
#include <random>

namespace asub::rng {

// Hand-rolled transforms on top of mt19937_64 so (config, seed) pairs
// reproduce byte-identical results across standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed);

  // Deterministic child stream. Workers/paths derive their own stream from
  // (master, index, lane) and never share state.
  static Stream derive(std::uint64_t master, std::uint64_t index,
                       std::uint64_t lane = 0);

  // uniform on [0, 1)
  double uniform01();
  // standard normal, Marsaglia polar with cached spare
  double normal();
  // Exp(1)
  double exponential();
  // Poisson(mean); Knuth product method below 50, halving recursion above
  std::uint64_t poisson(double mean);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace asub::rng
