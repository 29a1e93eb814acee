#include "cowpox/random.hpp"

#include <stdexcept>

namespace cowpox {

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RandomStream::below: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::size_t RandomStream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (weights.empty() || !(total > 0.0)) {
    throw std::invalid_argument("RandomStream::categorical: weights must have a positive sum");
  }
  double u = uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view name, std::uint64_t replicate) {
  // FNV-1a over the stream name, then mixed with the root and replicate.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return mix64(mix64(root ^ h) + mix64(replicate + 0x632be59bd9b4e019ULL));
}

RandomStreams RandomStreams::from_seed(std::uint64_t seed) {
  return RandomStreams{
      RandomStream(derive_seed(seed, "pairing")),   RandomStream(derive_seed(seed, "scores")),
      RandomStream(derive_seed(seed, "detector")),  RandomStream(derive_seed(seed, "attack")),
      RandomStream(derive_seed(seed, "retrieval")), RandomStream(derive_seed(seed, "pathogenicity")),
      RandomStream(derive_seed(seed, "placement")),
  };
}

}  // namespace cowpox
