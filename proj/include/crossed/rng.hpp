#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace crossed {

// Seeded generator with explicit bit-level transforms. The mt19937_64 core is
// fully specified by the standard, and the uniform/normal/gamma draws below
// avoid std::*_distribution, whose output differs across standard libraries.
// Same seed, same stream, on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe under log().
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the spare draw is cached.
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, rate) via Marsaglia-Tsang, with the usual boost for shape < 1.
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

// Labeled substream derivation: independent reproducible streams from one
// master seed (pattern, Z draws, responses, chains, replicates, ...).
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

}  // namespace crossed
