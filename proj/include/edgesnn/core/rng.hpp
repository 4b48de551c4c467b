#pragma once

#include <cstdint>
#include <random>

namespace edgesnn {

using Rng = std::mt19937_64;

// Independent, reproducible generator per (seed, stream) pair.
inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

namespace rng_stream {
inline constexpr std::uint64_t workload = 1;
inline constexpr std::uint64_t snn_init = 2;
inline constexpr std::uint64_t policy = 3;
}  // namespace rng_stream

}  // namespace edgesnn
