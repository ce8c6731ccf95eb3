#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pap {

/// Named, independent random streams split from one root seed.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard library distributions are not, so every draw used
/// by the simulation goes through the transforms below; that keeps
/// scenarios and reports bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Stream `name` (optionally indexed, e.g. by frame) derived from `root`.
  static Rng stream(std::uint64_t root, std::string_view name, std::uint64_t index = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform01() < p; }
  /// Standard normal via Box-Muller; one value per call.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }
  /// Knuth's product method, applied in chunks so large means stay exact.
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;

}  // namespace pap
