#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ariadapt/core.hpp"
#include "ariadapt/learn.hpp"
#include "ariadapt/random.hpp"

namespace ariadapt {

enum class Method : std::uint8_t { baseline, sourceOnly, unionAll, feda, pred, linInt };

std::string_view methodName(Method m);
std::optional<Method> parseMethod(std::string_view name);
const std::vector<Method>& allMethods();

struct LinIntOptions {
  std::size_t gridPoints = 21;
  double holdout = 0.25;
  /// Explicit interpolation weights; replaces the uniform grid when non-empty.
  std::vector<double> lambdas;

  std::vector<double> grid() const;
};

struct MethodSpec {
  Method method = Method::baseline;
  LinIntOptions linInt;
};

enum class Origin : std::uint8_t { source, target };

/// Feature-augmented rows: source rows are <x_s, x_ov(s), 0>, target rows are
/// <0, x_ov(t), x_t>.
struct AugmentedDataset {
  std::size_t sourceBlock = 0;
  std::size_t sharedBlock = 0;
  std::size_t targetBlock = 0;
  std::vector<std::string> columnNames;
  std::vector<std::uint8_t> x;  // row-major rows() x cols()
  std::vector<std::uint8_t> y;
  std::vector<double> w;
  std::vector<Origin> origin;

  std::size_t cols() const noexcept { return sourceBlock + sharedBlock + targetBlock; }
  std::size_t rows() const noexcept { return y.size(); }
  std::span<const std::uint8_t> row(std::size_t i) const { return {x.data() + i * cols(), cols()}; }
  Design toDesign() const;
};

AugmentedDataset fedaAugment(const Dataset& source, const Dataset& target,
                             const FeatureAlignment& alignment);

/// Target rows in the augmented layout, as FEDA scores them.
AugmentedDataset fedaEmbedTarget(const FeatureSpace& sourceSpace, const Dataset& target,
                                 const FeatureAlignment& alignment);

/// Test-fold scores of one method, or the reason it produced none.
struct MethodOutcome {
  std::vector<double> scores;
  std::optional<std::string> naReason;
  /// LinInt: chosen interpolation weight, and whether the held-out fold forced lambda = 1.
  std::optional<double> lambda;
  bool lambdaFallback = false;
  double ridgeUsed = 0.0;

  bool ok() const noexcept { return !naReason.has_value(); }
  static MethodOutcome na(std::string reason) {
    MethodOutcome out;
    out.naReason = std::move(reason);
    return out;
  }
};

inline constexpr std::string_view kNaNoOverlap = "no significant overlap";
inline constexpr std::string_view kNaNoConvergence = "learner did not converge";

MethodOutcome runBaseline(const Dataset& targetTrain, const Dataset& targetTest);
MethodOutcome runSourceOnly(const Dataset& sourceTrain, const Dataset& targetTest,
                            const FeatureAlignment& alignment);
MethodOutcome runUnion(const Dataset& sourceTrain, const Dataset& targetTrain,
                       const Dataset& targetTest, const FeatureAlignment& alignment);
MethodOutcome runFEDA(const Dataset& sourceTrain, const Dataset& targetTrain,
                      const Dataset& targetTest, const FeatureAlignment& alignment);
MethodOutcome runPRED(const Dataset& sourceTrain, const Dataset& targetTrain,
                      const Dataset& targetTest, const FeatureAlignment& alignment);
/// PRED with an already fitted source model over alignment.shared.
MethodOutcome runPRED(const TrainedClassifier& sourceModel, const Dataset& targetTrain,
                      const Dataset& targetTest, const FeatureAlignment& alignment);
MethodOutcome runLinInt(const Dataset& sourceTrain, const Dataset& targetTrain,
                        const Dataset& targetTest, const FeatureAlignment& alignment,
                        const LinIntOptions& opts, Rng& rng);

/// Aligns the two spaces and dispatches on spec.method.
MethodOutcome runMethod(const MethodSpec& spec, const Dataset& sourceTrain,
                        const Dataset& targetTrain, const Dataset& targetTest, Rng& rng);

/// Stratified split: round(n_c * fraction) rows of each class go to the second part.
struct RowSplit {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};
RowSplit stratifiedSplit(const Dataset& d, double secondFraction, Rng& rng);

}  // namespace ariadapt
