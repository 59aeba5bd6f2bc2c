// Seeded random streams with pinned bit-level behaviour. The standard
// distributions are implementation-defined, so uniform and gaussian draws are
// spelled out here to keep generated problems byte-identical everywhere.
#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace gtrs {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // A few warm-up draws decorrelate small consecutive seeds.
    splitmix64(state_);
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t uniform_index(std::uint64_t n) { return next_u64() % n; }

  /// Standard gaussian via Box-Muller.
  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  /// Independent stream derived from this one plus a tag.
  Rng fork(std::uint64_t tag) {
    std::uint64_t s = state_ ^ (0x2545f4914f6cdd1dull * (tag + 1));
    return Rng(s);
  }

 private:
  std::uint64_t state_;
};

}  // namespace gtrs
