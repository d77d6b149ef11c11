#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace drillport {

using Rng = std::mt19937_64;

// Derives an independent, reproducible sub-stream seed from a master seed and
// a key path, e.g. (seed, generation, index). SplitMix64 finalizer per step.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys);

inline Rng make_rng(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return Rng{derive_seed(master, keys)};
}

// Uniform in the open interval (0, 1).
double open_uniform(Rng& rng);

// Beta(a, b) via the two-gamma construction.
double sample_beta(Rng& rng, double a, double b);

} // namespace drillport
