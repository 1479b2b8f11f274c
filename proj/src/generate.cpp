#include "pdas/generate.hpp"

#include <cmath>
#include <numbers>

namespace pdas {

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform01();  // (0, 1]
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::LinearNoise: return "linear";
    case GenKind::Uniform: return "uniform";
    case GenKind::Perturb: return "perturb";
  }
  return "?";
}

GenKind parse_gen_kind(const std::string& s) {
  if (s == "linear") return GenKind::LinearNoise;
  if (s == "uniform") return GenKind::Uniform;
  if (s == "perturb") return GenKind::Perturb;
  throw ValidationError("unknown generator '" + s + "' (expected linear, uniform or perturb)");
}

Vector generate(const GenSpec& spec, std::span<const double> base) {
  if (spec.n == 0) throw ValidationError("generator size n must be >= 1");
  Rng rng(spec.seed);
  Vector y(spec.n);
  switch (spec.kind) {
    case GenKind::LinearNoise: {
      const double sigma = std::sqrt(linear_noise_variance);
      for (std::size_t i = 0; i < spec.n; ++i) y[i] = static_cast<double>(i + 1) + sigma * rng.normal();
      break;
    }
    case GenKind::Uniform:
      for (auto& v : y) v = rng.uniform(uniform_lo, uniform_hi);
      break;
    case GenKind::Perturb: {
      if (!base.empty() && base.size() != spec.n) {
        throw ValidationError("perturb base has length " + std::to_string(base.size()) +
                              " but n = " + std::to_string(spec.n));
      }
      const double sigma = std::sqrt(perturb_variance);
      for (std::size_t i = 0; i < spec.n; ++i) {
        y[i] = (base.empty() ? 0.0 : base[i]) + sigma * rng.normal();
      }
      break;
    }
  }
  return y;
}

}  // namespace pdas
