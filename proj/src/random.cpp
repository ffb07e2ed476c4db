#include "gfi/random.hpp"

#include <numeric>

#include "gfi/error.hpp"

namespace gfi {

std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
  if (k < 0 || k > n) throw InvalidArgument("sample size out of range");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + uniform_index(n - i, rng);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

int uniform_index(int n, Rng& rng) {
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = Rng::max() - Rng::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<int>(x % range);
}

std::uint64_t split_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 finalizer over (root, index)
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace gfi
