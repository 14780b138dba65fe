#pragma once

#include <cstdint>
#include <random>

namespace p2d2 {

/// Deterministic, splittable random generator.
///
/// All randomness in the library flows through explicit Rng instances. A root
/// seed is fixed per experiment and child generators are derived with
/// split(stream); children depend only on (root seed, stream), never on how
/// many draws the parent has made, so parallel workers with disjoint streams
/// reproduce bit-identical results in any schedule.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  /// Standard normal via Box-Muller (two uniforms per call, no caching).
  double normal();

  /// Independent child generator identified by stream index.
  Rng split(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// SplitMix64 step; used for seed scrambling and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// Stateless mix of (seed, stream) into a child seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace p2d2
