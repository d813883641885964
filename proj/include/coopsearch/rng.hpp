#pragma once

#include <cstdint>
#include <random>

namespace coopsearch {

using Rng = std::mt19937_64;

// Sub-streams derived from one run seed. Each consumer owns its own stream, so
// adding draws to one never shifts another.
enum class Stream : std::uint64_t {
  Scenario = 0,           // source placement for batch runs
  CoopEmission = 1,
  CoopCapture = 2,
  IndependentEmission = 3,
  IndependentCapture = 4,
  Oracle = 5,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x9e3779b9u};
  return Rng(seq);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace coopsearch
