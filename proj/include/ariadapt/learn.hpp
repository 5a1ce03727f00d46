#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ariadapt/core.hpp"

namespace ariadapt {

/// Real-valued design matrix for the learner. Usually built from a Dataset;
/// PRED prepends a real column of source-model probabilities.
struct Design {
  std::size_t cols = 0;
  std::vector<double> x;  // row-major rows() x cols
  std::vector<std::uint8_t> y;
  std::vector<double> w;
  std::vector<std::string> columnNames;

  std::size_t rows() const noexcept { return y.size(); }

  static Design fromDataset(const Dataset& d);
  Design withPrependedColumn(std::string name, std::span<const double> values) const;
};

struct WaldStatistic {
  double z = 0.0;
  double p = 1.0;
};

struct TrainedClassifier {
  std::vector<std::string> featureNames;
  std::vector<double> coefficients;
  double intercept = 0.0;
  bool converged = false;
  int iterations = 0;
  double gradientNorm = 0.0;
  /// 0 for a plain fit; the fallback ridge when separation forced one.
  double ridgeUsed = 0.0;
  /// Empty unless the observed information was invertible.
  std::vector<WaldStatistic> wald;
  std::optional<WaldStatistic> interceptWald;

  bool hasWald() const noexcept { return interceptWald.has_value(); }
};

struct FitOptions {
  double ridge = 0.0;
  int maxIter = 100;
  double gradientTolerance = 1e-6;
};

/// Penalty applied when the plain fit separates or diverges.
inline constexpr double kFallbackRidge = 1e-4;
/// Coefficient magnitude treated as evidence of separation.
inline constexpr double kSeparationBound = 30.0;

/// Maximizes sum_i w_i [y_i log p_i + (1-y_i) log(1-p_i)] - ridge/2 |params|^2
/// by Newton-Raphson (IRLS) with step halving. The penalty also covers the
/// intercept. Identical rows are collapsed before iterating.
TrainedClassifier fitLogistic(const Design& d, const FitOptions& opts = {});
TrainedClassifier fitLogistic(const Dataset& d, const FitOptions& opts = {});

std::vector<double> predictProb(const TrainedClassifier& c, const Design& d);
std::vector<double> predictProb(const TrainedClassifier& c, const Dataset& d);

/// Penalized objective and its gradient; params[0] is the intercept.
struct ObjectiveValue {
  double value = 0.0;
  std::vector<double> gradient;
};
ObjectiveValue logisticObjective(const Design& d, std::span<const double> params, double ridge);

/// Mann-Whitney AUC via midranks; ties count one half. nullopt when either
/// class is absent.
std::optional<double> auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

/// `name<TAB>coefficient<TAB>p` per feature plus an `__intercept__` line.
void writeModel(std::ostream& out, const TrainedClassifier& c);

}  // namespace ariadapt
