#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace cowpox {

/// Deterministic random stream.
///
/// Wraps a 64-bit Mersenne twister and implements the derived draws
/// (uniform reals, bounded integers, shuffles) directly so the output
/// sequence does not depend on the standard library's distribution code.
class RandomStream {
 public:
  RandomStream() : RandomStream(0) {}
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double low, double high) { return low + (high - low) * uniform(); }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Index drawn proportionally to `weights` (non-negative, positive sum).
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent sub-seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the named sub-stream `name` under `root`, for replicate `replicate`.
std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t replicate = 0);

/// The independent streams used by one simulation instance. Draws in one
/// subsystem never shift the sequence seen by another.
struct RandomStreams {
  RandomStream pairing;
  RandomStream scores;
  RandomStream detector;
  RandomStream attack;
  RandomStream retrieval;
  RandomStream pathogenicity;
  RandomStream placement;

  static RandomStreams from_seed(std::uint64_t seed);
};

}  // namespace cowpox
