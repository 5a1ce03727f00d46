#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ariadapt {

enum class FeatureKind : std::uint8_t { demographic = 0, symptom = 1, combination = 2 };

std::string_view toString(FeatureKind kind);

/// A binary predicate over one study row: a single demographic indicator, a
/// single symptom, or the conjunction of two or three base indicators.
/// Parts are kept sorted, so "fever&cough" and "cough&fever" compare equal.
class FeatureName {
 public:
  static FeatureName demographic(std::string id);
  static FeatureName symptom(std::string id);
  /// Two parts, or three parts forming one of the ILI triples.
  static FeatureName combination(std::vector<std::string> parts);
  /// Parses a column label such as "male", "cough" or "cough&fever".
  static FeatureName parse(std::string_view label);

  FeatureKind kind() const noexcept { return kind_; }
  const std::vector<std::string>& parts() const noexcept { return parts_; }
  bool isBase() const noexcept { return kind_ != FeatureKind::combination; }
  std::string str() const;

  friend bool operator==(const FeatureName&, const FeatureName&) = default;
  friend std::strong_ordering operator<=>(const FeatureName& a, const FeatureName& b) {
    if (auto c = a.kind_ <=> b.kind_; c != 0) return c;
    return a.parts_ <=> b.parts_;
  }

 private:
  FeatureName(FeatureKind kind, std::vector<std::string> parts)
      : kind_(kind), parts_(std::move(parts)) {}

  FeatureKind kind_;
  std::vector<std::string> parts_;
};

/// Demographic base identifiers are "male" and the "age_*" bucket indicators.
bool isDemographicId(std::string_view id);

/// Ordered, duplicate-free list of features; a feature's position is its
/// column index in any Dataset over this space.
class FeatureSpace {
 public:
  FeatureSpace() = default;
  /// Keeps the given order. Throws on duplicates.
  explicit FeatureSpace(std::vector<FeatureName> features);
  /// Sorts by (kind, parts) first.
  static FeatureSpace canonical(std::vector<FeatureName> features);

  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  const FeatureName& operator[](std::size_t i) const { return features_[i]; }
  const std::vector<FeatureName>& features() const noexcept { return features_; }
  auto begin() const noexcept { return features_.begin(); }
  auto end() const noexcept { return features_.end(); }

  std::optional<std::size_t> indexOf(const FeatureName& f) const;
  bool contains(const FeatureName& f) const { return indexOf(f).has_value(); }

  friend bool operator==(const FeatureSpace& a, const FeatureSpace& b) {
    return a.features_ == b.features_;
  }

 private:
  std::vector<FeatureName> features_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Labeled binary observation matrix with per-row sampling weights.
/// Immutable once built; the constructor validates shapes and values.
class Dataset {
 public:
  Dataset() = default;
  Dataset(FeatureSpace space, std::vector<std::uint8_t> x, std::vector<std::uint8_t> y,
          std::vector<double> w, std::string provenance = {});
  /// Unit weights.
  Dataset(FeatureSpace space, std::vector<std::uint8_t> x, std::vector<std::uint8_t> y,
          std::string provenance = {});

  const FeatureSpace& space() const noexcept { return space_; }
  std::size_t rows() const noexcept { return y_.size(); }
  std::size_t cols() const noexcept { return space_.size(); }
  bool empty() const noexcept { return y_.empty(); }

  std::span<const std::uint8_t> row(std::size_t i) const {
    return {x_.data() + i * cols(), cols()};
  }
  std::uint8_t at(std::size_t i, std::size_t j) const { return x_[i * cols() + j]; }
  std::uint8_t label(std::size_t i) const { return y_[i]; }
  double weight(std::size_t i) const { return w_[i]; }

  const std::vector<std::uint8_t>& values() const noexcept { return x_; }
  const std::vector<std::uint8_t>& labels() const noexcept { return y_; }
  const std::vector<double>& weights() const noexcept { return w_; }
  const std::string& provenance() const noexcept { return provenance_; }

  std::size_t countLabel(std::uint8_t label) const;

  Dataset withLabels(std::vector<std::uint8_t> y) const;
  Dataset withWeights(std::vector<double> w) const;
  Dataset withProvenance(std::string provenance) const;
  /// Rows in the given order (repeats allowed). Weights are carried over unless reset.
  Dataset selectRows(std::span<const std::size_t> indices, bool resetWeights = false) const;
  /// Row-wise concatenation; both datasets must share the same space.
  static Dataset concat(const Dataset& a, const Dataset& b, std::string provenance = {});

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  FeatureSpace space_;
  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> y_;
  std::vector<double> w_;
  std::string provenance_;
};

/// Partition of two feature spaces into shared and side-specific features.
struct FeatureAlignment {
  std::vector<FeatureName> shared;
  std::vector<FeatureName> sourceOnly;
  std::vector<FeatureName> targetOnly;

  std::size_t sharedCount() const noexcept { return shared.size(); }
  std::size_t sourceCount() const noexcept { return shared.size() + sourceOnly.size(); }
  std::size_t targetCount() const noexcept { return shared.size() + targetOnly.size(); }
};

/// Features match iff kind and parts are identical. Each part is in canonical order.
FeatureAlignment alignSpaces(const FeatureSpace& source, const FeatureSpace& target);

/// Keeps exactly the listed columns, in the listed order.
Dataset projectDataset(const Dataset& d, std::span<const FeatureName> keep);

/// Names of `space` that appear in `allowed`, in the order of `space`.
std::vector<FeatureName> intersectInOrder(const FeatureSpace& space,
                                          std::span<const FeatureName> allowed);

}  // namespace ariadapt
