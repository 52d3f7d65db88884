#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mulink {

// splitmix64 step; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Mixes a master seed with stream tags (e.g. SNR index, frame index) into a
// seed for an independent substream.
inline std::uint64_t mix_seed(std::uint64_t master,
                              std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  for (std::uint64_t t : tags) {
    s ^= t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = splitmix64(s);
  }
  return h;
}

// Deterministic random stream. mt19937_64 output is pinned by the standard;
// the samplers below avoid std::normal_distribution and friends, whose
// sequences are implementation-defined, so results are reproducible across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform on [0,1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; second deviate is cached
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  // circularly symmetric complex normal with E|z|^2 = 1
  std::complex<double> complex_normal() {
    return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
  }

  bool bit() { return (gen_() >> 63) != 0; }

 private:
  std::mt19937_64 gen_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace mulink
