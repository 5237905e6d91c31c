#pragma once

#include <cstdint>
#include <random>

#include "sparse_pr/model.hpp"

namespace sparse_pr {

/// Portable random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so the conversions below are written out:
///   uniform01  = (next() >> 11) * 2^-53
///   normal     = Box-Muller on two uniform01 draws, both outputs used
///   index(n)   = rejection sampling on next() to avoid modulo bias
/// Complex normals use independent N(0, 1/2) real and imaginary parts so that
/// E|z|^2 = 1.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double normal();
  Complex complex_normal();
  /// Uniform integer in [0, n).
  std::uint64_t index(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Order-independent per-task seed: mix64(mix64(mix64(base) ^ a) ^ b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace sparse_pr
