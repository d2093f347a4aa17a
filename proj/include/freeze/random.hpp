#pragma once

#include <cstdint>
#include <random>

namespace freeze {

using Engine = std::mt19937_64;

// Stream splitting: sub-batch `stream` of a run seeded with `seed` draws from
// Engine(derive_seed(seed, stream)). The derivation is two rounds of the
// SplitMix64 finalizer, so neighbouring seeds and streams decorrelate.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream) {
  return Engine(derive_seed(seed, stream));
}

// Chi-distributed variate with `dof` > 0 degrees of freedom (0 returns 0).
double chi(Engine& engine, double dof);

}  // namespace freeze
