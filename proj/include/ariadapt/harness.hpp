#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ariadapt/adapt.hpp"
#include "ariadapt/config.hpp"
#include "ariadapt/core.hpp"
#include "ariadapt/preprocess.hpp"

namespace ariadapt {

/// A study ready for the protocol: combinations materialized, labels standardized.
struct NamedDataset {
  std::string name;
  Dataset data;
};

/// expandCombinations followed by standardizeLabels.
Dataset prepareDataset(const Dataset& raw);

struct ProtocolOptions {
  std::uint64_t rootSeed = 0;
  /// Target rows split train:test = ratio:1.
  double trainTestRatio = 4.0;
  /// Balanced source rows = round(mix * target-train rows).
  double sourceTargetMix = 1.0;
  double pThreshold = 0.05;
  LinIntOptions linInt;
};

struct ExperimentConfig {
  std::vector<DatasetSource> datasets;
  std::vector<Method> methods = {Method::sourceOnly, Method::unionAll, Method::feda, Method::pred,
                                 Method::linInt};
  std::vector<std::uint64_t> seeds = std::vector<std::uint64_t>{0};
  std::vector<double> sweepMixes = {0.5, 1.0, 2.0, 4.0};
  std::filesystem::path outputPath = "results";
  ProtocolOptions protocol;

  void validate() const;
};

/// Reads the `[experiment]` and `[dataset ...]` sections.
ExperimentConfig loadExperimentConfig(const ConfigDocument& doc);

/// Generated studies draw from a stream derived from the root seed and the
/// study's position in `sources`.
std::vector<NamedDataset> materializeDatasets(const std::vector<DatasetSource>& sources,
                                              std::uint64_t rootSeed);

/// One line per pipeline stage, when tracing.
using Trace = std::vector<std::string>;

/// Target split and significance selection for one (target, seed). Shared by
/// every source and method run on that target and seed.
struct TargetFold {
  Dataset train;
  Dataset test;
  std::vector<FeatureName> selected;  // canonical order
  std::optional<std::string> selectionError;
  Trace trace;
};

TargetFold prepareTargetFold(const NamedDataset& target, std::uint64_t seed,
                             const ProtocolOptions& opts);

struct TransferResult {
  std::string source;
  std::string target;
  Method method = Method::baseline;
  std::uint64_t seed = 0;
  std::optional<double> auc;
  std::optional<std::string> naReason;
  std::size_t nSourceTrain = 0;
  std::size_t nTargetTrain = 0;
  std::size_t nSharedFeatures = 0;
  std::optional<double> lambda;

  friend bool operator==(const TransferResult&, const TransferResult&) = default;
};

inline constexpr std::string_view kNaUndefinedAuc = "AUC undefined";

/// Split, align, covariate-shift resample, class-balance resample, select on
/// target-train, run the method, score the test fold. Never throws for data
/// problems: they come back as NA results with a reason.
TransferResult runSingle(const NamedDataset& source, const NamedDataset& target,
                         const MethodSpec& spec, std::uint64_t seed, const ProtocolOptions& opts,
                         Trace* trace = nullptr);
TransferResult runSingle(const NamedDataset& source, const NamedDataset& target,
                         const MethodSpec& spec, std::uint64_t seed, const ProtocolOptions& opts,
                         const TargetFold& fold, Trace* trace = nullptr);

/// Mean of the numeric AUCs, taken in ascending seed order. nullopt if none.
std::optional<double> meanAuc(std::vector<TransferResult> results);

struct MethodMatrix {
  Method method = Method::baseline;
  /// cells[source][target]; the diagonal holds the target's baseline.
  std::vector<std::vector<std::optional<double>>> cells;
};

struct MatrixReport {
  std::vector<std::string> names;
  std::vector<std::optional<double>> baseline;  // per target
  std::vector<MethodMatrix> matrices;
  std::vector<TransferResult> results;           // canonical order
  Trace trace;
};

/// Every ordered pair, every method, every seed. Tasks run concurrently;
/// output does not depend on scheduling.
MatrixReport runMatrix(const std::vector<NamedDataset>& datasets, const ExperimentConfig& cfg,
                       bool collectTrace = false);

struct SweepPoint {
  double mix = 1.0;
  std::optional<double> auc;
  std::size_t numericRuns = 0;
  std::vector<TransferResult> results;
};

/// runSingle at each source:target mix, averaged over seeds.
std::vector<SweepPoint> runSweep(const NamedDataset& source, const NamedDataset& target,
                                 const MethodSpec& spec, const std::vector<double>& mixes,
                                 const std::vector<std::uint64_t>& seeds,
                                 const ProtocolOptions& opts);

}  // namespace ariadapt
