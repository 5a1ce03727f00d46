#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ariadapt/core.hpp"
#include "ariadapt/learn.hpp"
#include "ariadapt/random.hpp"

namespace ariadapt {

/// Density-ratio weight w(x) = P_t(x) / P_s(x) for every profile seen in the
/// source, with Laplace-smoothed frequencies
///   P(x) = (count(x) + alpha) / (n + alpha * K),
/// K being the number of distinct profiles in source and target together.
class ProfileWeightTable {
 public:
  ProfileWeightTable(const Dataset& source, const Dataset& target, double alpha = 1.0);

  double alpha() const noexcept { return alpha_; }
  std::size_t distinctProfiles() const noexcept { return distinct_; }
  std::size_t size() const noexcept { return weights_.size(); }
  /// Weight of a source profile. Throws for profiles absent from the source.
  double weight(std::span<const std::uint8_t> profile) const;

 private:
  double alpha_;
  std::size_t distinct_ = 0;
  std::unordered_map<std::string, double> weights_;
};

/// Source row indices drawn with replacement, row i with probability
/// proportional to w(x_i) times its current weight. `sourceProfiles` and
/// `targetProfiles` must share a space; they may be projections of larger
/// datasets, so the caller can resample full rows by shared-feature profile.
std::vector<std::size_t> covariateShiftIndices(const Dataset& sourceProfiles,
                                               const Dataset& targetProfiles, std::size_t m,
                                               Rng& rng, double alpha = 1.0);

/// m source rows reweighted toward the target's profile distribution.
/// Output weights are reset to 1.
Dataset covariateShiftResample(const Dataset& source, const Dataset& target, std::size_t m,
                               Rng& rng);

/// Number of positives among m draws that matches target's class ratio.
std::size_t balancedPositiveCount(const Dataset& target, std::size_t m);

/// Source indices, stratified to round(m * target positive fraction)
/// positives and the rest negatives; within a class rows are drawn by weight.
std::vector<std::size_t> classBalanceIndices(const Dataset& source, const Dataset& target,
                                             std::size_t m, Rng& rng);

Dataset classBalanceResample(const Dataset& source, const Dataset& target, std::size_t m,
                             Rng& rng);

/// Relative pivot below which a column counts as aliased.
inline constexpr double kAliasTolerance = 1e-9;
/// Refits allowed after dropping columns that diverge under separation.
inline constexpr int kSeparationRounds = 5;

struct SignificantFeature {
  FeatureName name;
  double coefficient = 0.0;
  double p = 1.0;
};

struct FeatureSelection {
  /// Ascending p-value.
  std::vector<SignificantFeature> features;
  TrainedClassifier fit;
  /// Set when the self-fit needed the ridge because of separation or an
  /// information matrix that could not be inverted.
  bool degenerate = false;
  /// Columns that were constant zero and left out of the fit.
  std::size_t droppedEmptyColumns = 0;
  /// Columns set only on rows of a single class.
  std::size_t droppedSeparatingColumns = 0;
  /// Columns equal to a linear combination of the intercept and earlier
  /// columns; their coefficients are not identifiable and get no p-value.
  std::size_t droppedAliasedColumns = 0;

  std::vector<FeatureName> names() const;
};

/// Fits y on every column of d and keeps features whose two-sided Wald
/// p-value is below the threshold. Throws ConvergenceError when the fit does
/// not converge.
FeatureSelection selectSignificantFeatures(const Dataset& d, double pThreshold = 0.05);

}  // namespace ariadapt
