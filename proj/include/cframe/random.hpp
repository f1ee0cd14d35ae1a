#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace cframe {

// Portable seeded generator. std::mt19937_64 is fully specified by the
// standard; the distributions below are written out by hand because the
// std:: distributions are implementation-defined and would make reports
// differ between standard libraries.
class Rng {
 public:
  static constexpr const char* kName = "mt19937_64/u53-boxmuller/v1";

  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);

  double normal();

  std::complex<double> complex_normal() { return {normal(), normal()}; }

  // Independent stream for sub-task `index`; depends only on the seed, so a
  // sub-task can be reproduced in isolation.
  Rng fork(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cframe
