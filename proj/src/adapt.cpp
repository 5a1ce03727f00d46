#include "ariadapt/adapt.hpp"

#include <algorithm>
#include <cmath>

#include "ariadapt/error.hpp"

namespace ariadapt {

namespace {

constexpr std::string_view kPredColumn = "__source_prob__";

MethodOutcome scoresFrom(const TrainedClassifier& model, const Design& test) {
  if (!model.converged) return MethodOutcome::na(std::string(kNaNoConvergence));
  MethodOutcome out;
  out.scores = predictProb(model, test);
  out.ridgeUsed = model.ridgeUsed;
  return out;
}

// Learner preconditions (a class missing from the training rows) become NA.
template <typename F>
MethodOutcome guarded(F&& body) {
  try {
    return body();
  } catch (const ConvergenceError& e) {
    return MethodOutcome::na(std::string(kNaNoConvergence));
  } catch (const Error& e) {
    return MethodOutcome::na(e.what());
  }
}

std::vector<double> interpolate(double lambda, const std::vector<double>& target,
                                const std::vector<double>& source) {
  std::vector<double> out(target.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = lambda * target[i] + (1.0 - lambda) * source[i];
  return out;
}

}  // namespace

std::string_view methodName(Method m) {
  switch (m) {
    case Method::baseline: return "baseline";
    case Method::sourceOnly: return "source_only";
    case Method::unionAll: return "union";
    case Method::feda: return "feda";
    case Method::pred: return "pred";
    case Method::linInt: return "linint";
  }
  return "?";
}

std::optional<Method> parseMethod(std::string_view name) {
  for (Method m : allMethods())
    if (methodName(m) == name) return m;
  if (name == "sourceonly" || name == "source-only") return Method::sourceOnly;
  return std::nullopt;
}

const std::vector<Method>& allMethods() {
  static const std::vector<Method> methods = {Method::baseline, Method::sourceOnly,
                                              Method::unionAll, Method::feda,
                                              Method::pred,     Method::linInt};
  return methods;
}

std::vector<double> LinIntOptions::grid() const {
  if (!lambdas.empty()) {
    auto g = lambdas;
    std::sort(g.begin(), g.end());
    return g;
  }
  if (gridPoints < 2) return {1.0};
  std::vector<double> g(gridPoints);
  for (std::size_t k = 0; k < gridPoints; ++k)
    g[k] = static_cast<double>(k) / static_cast<double>(gridPoints - 1);
  return g;
}

Design AugmentedDataset::toDesign() const {
  Design d;
  d.cols = cols();
  d.x.assign(x.begin(), x.end());
  d.y = y;
  d.w = w;
  d.columnNames = columnNames;
  return d;
}

namespace {

void appendAugmented(AugmentedDataset& out, const Dataset& d, Origin origin,
                     std::span<const std::size_t> sharedCols) {
  const std::size_t f = out.cols();
  for (std::size_t i = 0; i < d.rows(); ++i) {
    const std::size_t base = out.x.size();
    out.x.resize(base + f, 0);
    auto row = d.row(i);
    std::uint8_t* dst = out.x.data() + base;
    if (origin == Origin::source) {
      std::copy(row.begin(), row.end(), dst);
    } else {
      std::copy(row.begin(), row.end(), dst + out.sourceBlock + out.sharedBlock);
    }
    for (std::size_t k = 0; k < sharedCols.size(); ++k) dst[out.sourceBlock + k] = row[sharedCols[k]];
    out.y.push_back(d.label(i));
    out.w.push_back(d.weight(i));
    out.origin.push_back(origin);
  }
}

std::vector<std::size_t> columnsOf(const FeatureSpace& space, std::span<const FeatureName> names) {
  std::vector<std::size_t> cols;
  for (const auto& f : names) {
    auto idx = space.indexOf(f);
    if (!idx) throw Error("unknown feature '" + f.str() + "'");
    cols.push_back(*idx);
  }
  return cols;
}

AugmentedDataset emptyAugmented(const FeatureSpace& sourceSpace, const FeatureSpace& targetSpace,
                                const FeatureAlignment& alignment) {
  AugmentedDataset out;
  out.sourceBlock = sourceSpace.size();
  out.sharedBlock = alignment.shared.size();
  out.targetBlock = targetSpace.size();
  for (const auto& f : sourceSpace) out.columnNames.push_back("src:" + f.str());
  for (const auto& f : alignment.shared) out.columnNames.push_back("shared:" + f.str());
  for (const auto& f : targetSpace) out.columnNames.push_back("tgt:" + f.str());
  return out;
}

}  // namespace

AugmentedDataset fedaAugment(const Dataset& source, const Dataset& target,
                             const FeatureAlignment& alignment) {
  auto out = emptyAugmented(source.space(), target.space(), alignment);
  out.x.reserve((source.rows() + target.rows()) * out.cols());
  appendAugmented(out, source, Origin::source, columnsOf(source.space(), alignment.shared));
  appendAugmented(out, target, Origin::target, columnsOf(target.space(), alignment.shared));
  return out;
}

AugmentedDataset fedaEmbedTarget(const FeatureSpace& sourceSpace, const Dataset& target,
                                 const FeatureAlignment& alignment) {
  auto out = emptyAugmented(sourceSpace, target.space(), alignment);
  appendAugmented(out, target, Origin::target, columnsOf(target.space(), alignment.shared));
  return out;
}

MethodOutcome runBaseline(const Dataset& targetTrain, const Dataset& targetTest) {
  return guarded([&] {
    const auto model = fitLogistic(targetTrain);
    return scoresFrom(model, Design::fromDataset(targetTest));
  });
}

MethodOutcome runSourceOnly(const Dataset& sourceTrain, const Dataset& targetTest,
                            const FeatureAlignment& alignment) {
  if (alignment.shared.empty()) return MethodOutcome::na(std::string(kNaNoOverlap));
  return guarded([&] {
    const auto model = fitLogistic(projectDataset(sourceTrain, alignment.shared));
    return scoresFrom(model, Design::fromDataset(projectDataset(targetTest, alignment.shared)));
  });
}

MethodOutcome runUnion(const Dataset& sourceTrain, const Dataset& targetTrain,
                       const Dataset& targetTest, const FeatureAlignment& alignment) {
  if (alignment.shared.empty()) return MethodOutcome::na(std::string(kNaNoOverlap));
  return guarded([&] {
    const auto train = Dataset::concat(projectDataset(sourceTrain, alignment.shared),
                                       projectDataset(targetTrain, alignment.shared));
    const auto model = fitLogistic(train);
    return scoresFrom(model, Design::fromDataset(projectDataset(targetTest, alignment.shared)));
  });
}

MethodOutcome runFEDA(const Dataset& sourceTrain, const Dataset& targetTrain,
                      const Dataset& targetTest, const FeatureAlignment& alignment) {
  return guarded([&] {
    const auto model = fitLogistic(fedaAugment(sourceTrain, targetTrain, alignment).toDesign());
    return scoresFrom(model, fedaEmbedTarget(sourceTrain.space(), targetTest, alignment).toDesign());
  });
}

MethodOutcome runPRED(const TrainedClassifier& sourceModel, const Dataset& targetTrain,
                      const Dataset& targetTest, const FeatureAlignment& alignment) {
  if (!sourceModel.converged) return MethodOutcome::na(std::string(kNaNoConvergence));
  return guarded([&] {
    auto augment = [&](const Dataset& d) {
      const auto ps = predictProb(sourceModel, projectDataset(d, alignment.shared));
      return Design::fromDataset(d).withPrependedColumn(std::string(kPredColumn), ps);
    };
    const auto model = fitLogistic(augment(targetTrain));
    return scoresFrom(model, augment(targetTest));
  });
}

MethodOutcome runPRED(const Dataset& sourceTrain, const Dataset& targetTrain,
                      const Dataset& targetTest, const FeatureAlignment& alignment) {
  if (alignment.shared.empty()) return MethodOutcome::na(std::string(kNaNoOverlap));
  return guarded([&] {
    const auto sourceModel = fitLogistic(projectDataset(sourceTrain, alignment.shared));
    return runPRED(sourceModel, targetTrain, targetTest, alignment);
  });
}

MethodOutcome runLinInt(const Dataset& sourceTrain, const Dataset& targetTrain,
                        const Dataset& targetTest, const FeatureAlignment& alignment,
                        const LinIntOptions& opts, Rng& rng) {
  if (alignment.shared.empty()) return MethodOutcome::na(std::string(kNaNoOverlap));
  return guarded([&]() -> MethodOutcome {
    const auto grid = opts.grid();
    const auto sourceModel = fitLogistic(projectDataset(sourceTrain, alignment.shared));
    if (!sourceModel.converged) return MethodOutcome::na(std::string(kNaNoConvergence));

    double lambda = 1.0;
    bool fallback = false;
    if (grid.size() == 1) {
      lambda = grid.front();
    } else {
      const RowSplit split = stratifiedSplit(targetTrain, opts.holdout, rng);
      const Dataset fitPart = targetTrain.selectRows(split.first);
      const Dataset heldOut = targetTrain.selectRows(split.second);
      if (heldOut.countLabel(0) == 0 || heldOut.countLabel(1) == 0) {
        fallback = true;
      } else {
        const auto targetModel = fitLogistic(fitPart);
        if (!targetModel.converged) return MethodOutcome::na(std::string(kNaNoConvergence));
        const auto pt = predictProb(targetModel, heldOut);
        const auto ps = predictProb(sourceModel, projectDataset(heldOut, alignment.shared));
        double best = -1.0;
        for (double l : grid) {
          const double a = auc(interpolate(l, pt, ps), heldOut.labels()).value();
          if (a >= best) {  // ascending grid: ties go to the larger lambda
            best = a;
            lambda = l;
          }
        }
      }
    }

    const auto targetModel = fitLogistic(targetTrain);
    if (!targetModel.converged) return MethodOutcome::na(std::string(kNaNoConvergence));
    const auto pt = predictProb(targetModel, targetTest);
    const auto ps = predictProb(sourceModel, projectDataset(targetTest, alignment.shared));
    MethodOutcome out;
    out.scores = interpolate(lambda, pt, ps);
    out.lambda = lambda;
    out.lambdaFallback = fallback;
    out.ridgeUsed = targetModel.ridgeUsed;
    return out;
  });
}

MethodOutcome runMethod(const MethodSpec& spec, const Dataset& sourceTrain,
                        const Dataset& targetTrain, const Dataset& targetTest, Rng& rng) {
  const auto alignment = alignSpaces(sourceTrain.space(), targetTrain.space());
  switch (spec.method) {
    case Method::baseline: return runBaseline(targetTrain, targetTest);
    case Method::sourceOnly: return runSourceOnly(sourceTrain, targetTest, alignment);
    case Method::unionAll: return runUnion(sourceTrain, targetTrain, targetTest, alignment);
    case Method::feda: return runFEDA(sourceTrain, targetTrain, targetTest, alignment);
    case Method::pred: return runPRED(sourceTrain, targetTrain, targetTest, alignment);
    case Method::linInt:
      return runLinInt(sourceTrain, targetTrain, targetTest, alignment, spec.linInt, rng);
  }
  throw Error("unknown method");
}

RowSplit stratifiedSplit(const Dataset& d, double secondFraction, Rng& rng) {
  if (!(secondFraction > 0.0 && secondFraction < 1.0))
    throw Error("split fraction must lie in (0, 1)");
  RowSplit out;
  for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (d.label(i) == cls) rows.push_back(i);
    rng.shuffle(rows);
    const std::size_t n = rows.size();
    auto take = static_cast<std::size_t>(std::llround(static_cast<double>(n) * secondFraction));
    // With two or more rows, each side keeps at least one row of the class.
    if (n >= 2) take = std::clamp<std::size_t>(take, 1, n - 1);
    out.second.insert(out.second.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    out.first.insert(out.first.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(out.first.begin(), out.first.end());
  std::sort(out.second.begin(), out.second.end());
  return out;
}

}  // namespace ariadapt
