#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace hetcache {

// splitmix64, used to derive independent stream seeds from one master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x1234567f89ULL + stream * 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

// mt19937_64 with hand-rolled double extraction. std::uniform_real_distribution
// is implementation-defined, which would break the bit-reproducibility contract
// of seeded instance generation and Monte Carlo runs across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unit-mean exponential
  double exponential() { return -std::log1p(-uniform()); }

  std::uint64_t next_u64() { return engine_(); }

  // uniform integer in [0, n)
  std::size_t index(std::size_t n) {
    // rejection-free modulo is fine here: n is tiny relative to 2^64
    return static_cast<std::size_t>(engine_() % n);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hetcache
