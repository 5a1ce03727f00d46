#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace ariadapt {

/// Seeded 64-bit Mersenne Twister with distribution helpers written out by
/// hand, so streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// Draws indices with probability proportional to non-negative weights.
class WeightedSampler {
 public:
  explicit WeightedSampler(std::span<const double> weights);
  std::size_t operator()(Rng& rng) const;
  double total() const noexcept { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

 private:
  std::vector<double> cumulative_;
};

std::uint64_t hashLabel(std::string_view label);
std::uint64_t mixSeed(std::uint64_t a, std::uint64_t b);

/// Independent stream seed for a (root, labels...) tuple.
std::uint64_t deriveSeed(std::uint64_t root, std::initializer_list<std::string_view> labels,
                         std::uint64_t index = 0);

}  // namespace ariadapt
