#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Counter-based per-trial random streams: stream i of a master seed is a
// xoshiro256++ generator keyed by splitmix64(seed, i).  Trial results are
// therefore independent of how trials are scheduled across workers.

namespace reccalc::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t key = seed;
    (void)splitmix64(key);
    key ^= stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
    bool nonzero = false;
    for (auto& w : s_) {
      w = splitmix64(key);
      nonzero |= (w != 0);
    }
    if (!nonzero) s_[0] = 1;
  }

  std::uint64_t next_u64() {  // xoshiro256++
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1).
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  // Standard exponential via inversion; never returns 0 or inf.
  double exponential() { return -std::log1p(-uniform()); }

  // Poisson count by Knuth's product method; fine for the means used here.
  int poisson(double mean) {
    if (!(mean >= 0.0) || mean > 600.0) {
      throw std::domain_error("poisson: mean outside [0, 600]");
    }
    if (mean == 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    while (true) {
      p *= uniform();
      if (p <= limit) return k;
      ++k;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace reccalc::rng
