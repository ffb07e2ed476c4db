#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gfi {

using Rng = std::mt19937_64;

/// k distinct values from [0, n), uniformly, in draw order (partial Fisher-Yates).
std::vector<int> sample_without_replacement(int n, int k, Rng& rng);

/// Uniform integer in [0, n).
int uniform_index(int n, Rng& rng);

/// Seed for the `index`-th independent stream derived from `root`.
std::uint64_t split_seed(std::uint64_t root, std::uint64_t index);

}  // namespace gfi
