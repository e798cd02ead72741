#ifndef IEOE_RNG_H_
#define IEOE_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace ieoe {

using Rng = std::mt19937_64;

// Independent random streams derived from one master seed. Every consumer
// draws from its own stream so that adding a consumer (e.g. another
// estimator) never shifts the draws of the others.
enum class Stream : std::uint64_t {
  kHyperparam = 1,
  kPolicy = 2,
  kBootstrap = 3,
  kModel = 4,
  kData = 5,
  kSplit = 6,
};

// 64-bit FNV-1a; stable across platforms and runs, unlike std::hash.
std::uint64_t StableHash(std::string_view text);

Rng MakeRng(std::uint64_t seed, Stream stream, std::uint64_t key = 0);

// Draw in [0, n) without modulo bias. Implemented locally so sequences do
// not depend on the standard library's distribution internals.
std::size_t UniformIndex(Rng& rng, std::size_t n);
double Uniform01(Rng& rng);

}  // namespace ieoe

#endif  // IEOE_RNG_H_
