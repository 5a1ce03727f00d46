#include "ariadapt/random.hpp"

#include <algorithm>
#include <limits>

#include "ariadapt/error.hpp"

namespace ariadapt {

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw Error("Rng::below(0)");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % bound);
}

WeightedSampler::WeightedSampler(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double acc = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error("sampling weights must be non-negative");
    acc += w;
    cumulative_.push_back(acc);
  }
  if (!(acc > 0.0)) throw Error("sampling weights sum to zero");
}

std::size_t WeightedSampler::operator()(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  // First strictly greater bound, so zero-weight entries are never returned.
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

std::uint64_t hashLabel(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mixSeed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t deriveSeed(std::uint64_t root, std::initializer_list<std::string_view> labels,
                         std::uint64_t index) {
  std::uint64_t s = mixSeed(root, 0x5eedULL);
  for (auto l : labels) s = mixSeed(s, hashLabel(l));
  return mixSeed(s, index);
}

}  // namespace ariadapt
