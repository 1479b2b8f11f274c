// Seedable data generators for the benchmark experiments.
//
// Draws come from std::mt19937_64, whose output sequence is fixed by the C++
// standard. The transforms are done here rather than through <random>
// distributions, which are implementation-defined:
//   uniform01  (next() >> 11) · 2⁻⁵³, in [0, 1)
//   normal     Box–Muller on (1 − u₁, u₂): r = √(−2 ln(1 − u₁)),
//              returns r·cos(2πu₂) and then the cached r·sin(2πu₂)
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "pdas/core.hpp"

namespace pdas {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 mix of a base seed with two coordinates; used to give every
/// (size, repeat) cell of an experiment its own stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

enum class GenKind : std::uint8_t {
  LinearNoise,  // yᵢ = i + εᵢ, εᵢ ~ Normal(0, variance 4), i = 1..n
  Uniform,      // yᵢ ~ Uniform[0, 10]
  Perturb,      // y'ᵢ = yᵢ + εᵢ, εᵢ ~ Normal(0, variance 1e−2)
};

inline constexpr double linear_noise_variance = 4.0;
inline constexpr double perturb_variance = 1e-2;
inline constexpr double uniform_lo = 0.0;
inline constexpr double uniform_hi = 10.0;

std::string to_string(GenKind k);
GenKind parse_gen_kind(const std::string& s);

struct GenSpec {
  GenKind kind = GenKind::LinearNoise;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// Perturb adds noise to `base` (zeros when empty; otherwise its length must
/// equal n). The other kinds ignore `base`.
Vector generate(const GenSpec& spec, std::span<const double> base = {});

}  // namespace pdas
