#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace genmine {

// Uniform integer in [0, bound) from a 64-bit engine, by rejection so the
// sequence is identical across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound);

// k indices drawn uniformly without replacement from [0, population), in
// draw order (partial Fisher-Yates). k is capped at population.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k, std::uint64_t seed);

}  // namespace genmine
