#pragma once
//
// Counter-based splittable random number generation.
//
// Every consumer derives an independent substream from (seed, key...) so that
// parallel generation over columns/trials is bit-identical to serial
// generation regardless of thread count or scheduling.
//

#include <cmath>
#include <cstdint>

namespace sqsc {

/// SplitMix64 finalizer: the standard 64-bit avalanche mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hash-combine for deriving substream seeds: order-sensitive mixing of keys.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
  return mix64(seed ^ (mix64(key) + 0x9e3779b97f4a7c15ULL));
}
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2) {
  return derive_seed(derive_seed(seed, k1), k2);
}

/// SplitMix64 stream: tiny state, passes BigCrush, ideal for keyed substreams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0,1): top 53 bits, never exactly 0 (offset by half an ulp).
  double next_u01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller (deterministic pair caching).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_u01();
    const double u2 = next_u01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// +1 or -1 with equal probability.
  double next_rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  /// Student-t with `dof` degrees of freedom, scaled to unit variance
  /// (requires dof > 2; callers enforce dof > 4 for finite kurtosis).
  double next_student_t_unit(int dof) {
    const double z = next_normal();
    double chi2 = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double g = next_normal();
      chi2 += g * g;
    }
    const double t = z / std::sqrt(chi2 / static_cast<double>(dof));
    return t * std::sqrt(static_cast<double>(dof - 2) / static_cast<double>(dof));
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sqsc
