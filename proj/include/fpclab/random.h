#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace fpclab {

/// One SplitMix64 output step on state x. Used for seed derivation only.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for trial `index` of a campaign seeded with `master`:
///   mix64(master + 0x9E3779B97F4A7C15 * (index + 1)).
/// Every trial owns an independent stream derived this way, so results do not
/// depend on the order in which trials are scheduled.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seeded random source. All derived distributions are implemented here
/// rather than through <random> distributions, whose outputs are
/// implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  RandomStream child(std::uint64_t index) { return RandomStream(child_seed(next_u64(), index)); }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, bound). bound must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound);

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }
  bool coin() { return (next_u64() >> 63) != 0; }

  /// Standard normal by Box-Muller; caches the second variate.
  double normal();

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// Uniform permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n);

  /// k distinct indices from {0, ..., n-1}, uniformly, in sampled order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fpclab
