#include "ariadapt/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "ariadapt/dataset_csv.hpp"
#include "ariadapt/error.hpp"
#include "ariadapt/featurize.hpp"
#include "ariadapt/synth.hpp"

namespace ariadapt {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::string stagePrefix(std::string_view stage, const std::string& source,
                        const std::string& target, std::string_view method, std::uint64_t seed) {
  return fmt("stage=%.*s source=%s target=%s method=%.*s seed=%llu", static_cast<int>(stage.size()),
             stage.data(), source.c_str(), target.c_str(), static_cast<int>(method.size()),
             method.data(), static_cast<unsigned long long>(seed));
}

const ConfigSection* experimentSection(const ConfigDocument& doc) {
  const ConfigSection* found = nullptr;
  for (const auto& s : doc.sections) {
    if (s.kind != "experiment") continue;
    if (found) throw InputError(doc.origin, s.line, "experiment", "more than one [experiment] section");
    found = &s;
  }
  return found;
}

}  // namespace

Dataset prepareDataset(const Dataset& raw) { return standardizeLabels(expandCombinations(raw)); }

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw Error("at least one seed is required");
  if (!(protocol.trainTestRatio > 0.0)) throw Error("train:test ratio must be positive");
  if (!(protocol.sourceTargetMix > 0.0)) throw Error("source:target mix must be positive");
  for (double m : sweepMixes)
    if (!(m > 0.0)) throw Error("sweep mixes must be positive");
  if (!(protocol.pThreshold >= 0.0)) throw Error("p threshold must be non-negative");
  if (!(protocol.linInt.holdout > 0.0 && protocol.linInt.holdout < 1.0))
    throw Error("LinInt held-out fraction must lie in (0, 1)");
}

ExperimentConfig loadExperimentConfig(const ConfigDocument& doc) {
  ExperimentConfig cfg;
  cfg.datasets = parseDatasetSections(doc);
  const ConfigSection* exp = experimentSection(doc);
  if (!exp) return cfg;
  const std::string& origin = doc.origin;
  auto positive = [&](const ConfigEntry& e) {
    const double v = parseReal(e, origin);
    if (!(v > 0.0)) throw InputError(origin, e.line, e.key, "must be positive");
    return v;
  };
  for (const auto& e : exp->entries) {
    if (e.key == "seed") {
      cfg.protocol.rootSeed = static_cast<std::uint64_t>(parseInteger(e, origin));
    } else if (e.key == "seeds") {
      const auto n = parseInteger(e, origin);
      if (n < 1) throw InputError(origin, e.line, e.key, "need at least one seed");
      cfg.seeds.clear();
      for (long long s = 0; s < n; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else if (e.key == "seed_list") {
      cfg.seeds.clear();
      for (const auto& item : splitList(e.value))
        cfg.seeds.push_back(static_cast<std::uint64_t>(parseInteger({e.key, item, e.line}, origin)));
      if (cfg.seeds.empty()) throw InputError(origin, e.line, e.key, "empty seed list");
    } else if (e.key == "methods") {
      cfg.methods.clear();
      for (const auto& item : splitList(e.value)) {
        auto m = parseMethod(item);
        if (!m) throw InputError(origin, e.line, e.key, "unknown method '" + item + "'");
        cfg.methods.push_back(*m);
      }
    } else if (e.key == "train_test_ratio") {
      cfg.protocol.trainTestRatio = positive(e);
    } else if (e.key == "source_target_mix") {
      cfg.protocol.sourceTargetMix = positive(e);
    } else if (e.key == "sweep_mixes") {
      cfg.sweepMixes.clear();
      for (const auto& item : splitList(e.value)) cfg.sweepMixes.push_back(positive({e.key, item, e.line}));
    } else if (e.key == "p_threshold") {
      cfg.protocol.pThreshold = parseReal(e, origin);
    } else if (e.key == "linint_grid") {
      const auto g = parseInteger(e, origin);
      if (g < 1) throw InputError(origin, e.line, e.key, "grid needs at least one point");
      cfg.protocol.linInt.gridPoints = static_cast<std::size_t>(g);
    } else if (e.key == "linint_holdout") {
      cfg.protocol.linInt.holdout = parseReal(e, origin);
    } else if (e.key == "output") {
      cfg.outputPath = e.value;
    } else {
      throw InputError(origin, e.line, e.key, "unknown experiment key");
    }
  }
  try {
    cfg.validate();
  } catch (const Error& err) {
    throw InputError(origin, exp->line, "experiment", err.what());
  }
  return cfg;
}

std::vector<NamedDataset> materializeDatasets(const std::vector<DatasetSource>& sources,
                                              std::uint64_t rootSeed) {
  std::vector<NamedDataset> out;
  out.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& src = sources[i];
    Dataset raw;
    if (src.file) {
      raw = readDatasetCsv(*src.file);
    } else {
      Rng rng(deriveSeed(rootSeed, {"study"}, i));
      raw = generate(*src.profile, rng);
    }
    out.push_back({src.name, prepareDataset(raw).withProvenance(src.name)});
  }
  return out;
}

TargetFold prepareTargetFold(const NamedDataset& target, std::uint64_t seed,
                             const ProtocolOptions& opts) {
  TargetFold fold;
  Rng rng(deriveSeed(opts.rootSeed, {"split", target.name}, seed));
  const RowSplit split = stratifiedSplit(target.data, 1.0 / (opts.trainTestRatio + 1.0), rng);
  fold.train = target.data.selectRows(split.first);
  fold.test = target.data.selectRows(split.second);
  const std::string prefix = stagePrefix("split", target.name, target.name, "-", seed);
  fold.trace.push_back(prefix + fmt(" train=%zu test=%zu train_pos=%zu test_pos=%zu",
                                    fold.train.rows(), fold.test.rows(), fold.train.countLabel(1),
                                    fold.test.countLabel(1)));
  try {
    auto sel = selectSignificantFeatures(fold.train, opts.pThreshold);
    fold.selected = sel.names();
    std::sort(fold.selected.begin(), fold.selected.end());
    fold.trace.push_back(stagePrefix("select", target.name, target.name, "-", seed) +
                         fmt(" candidates=%zu empty=%zu one_class=%zu aliased=%zu selected=%zu degenerate=%d", fold.train.cols(), sel.droppedEmptyColumns, sel.droppedSeparatingColumns, sel.droppedAliasedColumns,
                             fold.selected.size(), sel.degenerate ? 1 : 0));
  } catch (const std::exception& e) {
    fold.selectionError = std::string("feature selection failed: ") + e.what();
    fold.trace.push_back(stagePrefix("select", target.name, target.name, "-", seed) +
                         " error=" + *fold.selectionError);
  }
  return fold;
}

TransferResult runSingle(const NamedDataset& source, const NamedDataset& target,
                         const MethodSpec& spec, std::uint64_t seed, const ProtocolOptions& opts,
                         Trace* trace) {
  const TargetFold fold = prepareTargetFold(target, seed, opts);
  return runSingle(source, target, spec, seed, opts, fold, trace);
}

TransferResult runSingle(const NamedDataset& source, const NamedDataset& target,
                         const MethodSpec& spec, std::uint64_t seed, const ProtocolOptions& opts,
                         const TargetFold& fold, Trace* trace) {
  TransferResult r;
  r.source = source.name;
  r.target = target.name;
  r.method = spec.method;
  r.seed = seed;
  r.nTargetTrain = fold.train.rows();
  const auto mname = methodName(spec.method);
  auto log = [&](std::string_view stage, const std::string& detail) {
    if (trace) trace->push_back(stagePrefix(stage, source.name, target.name, mname, seed) + detail);
  };
  if (trace) trace->insert(trace->end(), fold.trace.begin(), fold.trace.end());

  try {
    if (fold.selectionError) {
      r.naReason = *fold.selectionError;
      log("result", " auc=NA reason=" + *r.naReason);
      return r;
    }
    const Dataset targetTrain = projectDataset(fold.train, fold.selected);
    const Dataset targetTest = projectDataset(fold.test, fold.selected);

    MethodOutcome outcome;
    if (spec.method == Method::baseline) {
      r.nSharedFeatures = fold.selected.size();
      log("method", fmt(" features=%zu", fold.selected.size()));
      outcome = runBaseline(targetTrain, targetTest);
    } else {
      const auto alignment = alignSpaces(source.data.space(), target.data.space());
      log("align", fmt(" shared=%zu source_only=%zu target_only=%zu", alignment.shared.size(),
                       alignment.sourceOnly.size(), alignment.targetOnly.size()));

      Rng srcRng(deriveSeed(opts.rootSeed, {"source", source.name, target.name}, seed));
      const auto shiftIdx = covariateShiftIndices(projectDataset(source.data, alignment.shared),
                                                  projectDataset(fold.train, alignment.shared),
                                                  source.data.rows(), srcRng);
      const Dataset pool = source.data.selectRows(shiftIdx, /*resetWeights=*/true);
      log("covariate_shift", fmt(" drawn=%zu", pool.rows()));

      const auto m = static_cast<std::size_t>(
          std::llround(opts.sourceTargetMix * static_cast<double>(fold.train.rows())));
      const Dataset balanced = classBalanceResample(pool, fold.train, std::max<std::size_t>(m, 1), srcRng);
      r.nSourceTrain = balanced.rows();
      log("class_balance", fmt(" rows=%zu pos=%zu", balanced.rows(), balanced.countLabel(1)));

      const Dataset sourceTrain =
          projectDataset(balanced, intersectInOrder(source.data.space(), fold.selected));
      const auto working = alignSpaces(sourceTrain.space(), targetTrain.space());
      r.nSharedFeatures = working.shared.size();
      log("filter", fmt(" source_features=%zu target_features=%zu shared=%zu", sourceTrain.cols(),
                        targetTrain.cols(), working.shared.size()));

      Rng methodRng(deriveSeed(opts.rootSeed, {"method", source.name, target.name, mname}, seed));
      MethodSpec effective = spec;
      if (effective.linInt.lambdas.empty() && spec.method == Method::linInt)
        effective.linInt = opts.linInt;
      outcome = runMethod(effective, sourceTrain, targetTrain, targetTest, methodRng);
      log("method", outcome.lambda ? fmt(" lambda=%.4f fallback=%d", *outcome.lambda,
                                         outcome.lambdaFallback ? 1 : 0)
                                   : std::string());
    }

    r.lambda = outcome.lambda;
    if (!outcome.ok()) {
      r.naReason = *outcome.naReason;
    } else {
      r.auc = auc(outcome.scores, targetTest.labels());
      if (!r.auc) r.naReason = std::string(kNaUndefinedAuc);
    }
  } catch (const std::exception& e) {
    r.auc.reset();
    r.naReason = e.what();
  }
  log("result", r.auc ? fmt(" auc=%.6f", *r.auc) : " auc=NA reason=" + *r.naReason);
  return r;
}

std::optional<double> meanAuc(std::vector<TransferResult> results) {
  std::sort(results.begin(), results.end(),
            [](const TransferResult& a, const TransferResult& b) { return a.seed < b.seed; });
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : results) {
    if (r.auc) {
      sum += *r.auc;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

MatrixReport runMatrix(const std::vector<NamedDataset>& datasets, const ExperimentConfig& cfg,
                       bool collectTrace) {
  cfg.validate();
  if (datasets.size() < 2) throw Error("the matrix needs at least two datasets");
  const std::size_t k = datasets.size();
  auto seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  std::vector<Method> methods;
  for (Method m : cfg.methods)
    if (m != Method::baseline && std::find(methods.begin(), methods.end(), m) == methods.end())
      methods.push_back(m);

  // Target folds, one per (target, seed).
  std::vector<TargetFold> folds(k * seeds.size());
  const auto nFolds = static_cast<std::ptrdiff_t>(folds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t f = 0; f < nFolds; ++f) {
    const auto t = static_cast<std::size_t>(f) / seeds.size();
    const auto s = static_cast<std::size_t>(f) % seeds.size();
    folds[static_cast<std::size_t>(f)] = prepareTargetFold(datasets[t], seeds[s], cfg.protocol);
  }

  struct Task {
    std::size_t source, target, seedIndex;
    Method method;
  };
  std::vector<Task> tasks;
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = 0; t < k; ++t) {
      if (s == t) {
        for (std::size_t i = 0; i < seeds.size(); ++i) tasks.push_back({s, t, i, Method::baseline});
      } else {
        for (Method m : methods)
          for (std::size_t i = 0; i < seeds.size(); ++i) tasks.push_back({s, t, i, m});
      }
    }

  MatrixReport report;
  report.results.resize(tasks.size());
  std::vector<Trace> traces(collectTrace ? tasks.size() : 0);
  const auto nTasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < nTasks; ++i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    MethodSpec spec{task.method, cfg.protocol.linInt};
    const TargetFold& fold = folds[task.target * seeds.size() + task.seedIndex];
    report.results[static_cast<std::size_t>(i)] =
        runSingle(datasets[task.source], datasets[task.target], spec, seeds[task.seedIndex],
                  cfg.protocol, fold, collectTrace ? &traces[static_cast<std::size_t>(i)] : nullptr);
  }
  for (auto& t : traces) report.trace.insert(report.trace.end(), t.begin(), t.end());

  for (const auto& d : datasets) report.names.push_back(d.name);
  auto cellResults = [&](std::size_t s, std::size_t t, Method m) {
    std::vector<TransferResult> out;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].source == s && tasks[i].target == t && tasks[i].method == m)
        out.push_back(report.results[i]);
    return out;
  };
  report.baseline.resize(k);
  for (std::size_t t = 0; t < k; ++t) report.baseline[t] = meanAuc(cellResults(t, t, Method::baseline));
  for (Method m : methods) {
    MethodMatrix mm{m, std::vector<std::vector<std::optional<double>>>(k, std::vector<std::optional<double>>(k))};
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t t = 0; t < k; ++t)
        mm.cells[s][t] = s == t ? report.baseline[t] : meanAuc(cellResults(s, t, m));
    report.matrices.push_back(std::move(mm));
  }
  return report;
}

std::vector<SweepPoint> runSweep(const NamedDataset& source, const NamedDataset& target,
                                 const MethodSpec& spec, const std::vector<double>& mixes,
                                 const std::vector<std::uint64_t>& seeds,
                                 const ProtocolOptions& opts) {
  if (mixes.empty()) throw Error("sweep needs at least one mix ratio");
  if (seeds.empty()) throw Error("sweep needs at least one seed");
  std::vector<TargetFold> folds(seeds.size());
  const auto nSeeds = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < nSeeds; ++i)
    folds[static_cast<std::size_t>(i)] = prepareTargetFold(target, seeds[static_cast<std::size_t>(i)], opts);

  std::vector<SweepPoint> out(mixes.size());
  const auto nTasks = static_cast<std::ptrdiff_t>(mixes.size() * seeds.size());
  std::vector<TransferResult> results(static_cast<std::size_t>(nTasks));
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < nTasks; ++i) {
    const auto mi = static_cast<std::size_t>(i) / seeds.size();
    const auto si = static_cast<std::size_t>(i) % seeds.size();
    ProtocolOptions o = opts;
    o.sourceTargetMix = mixes[mi];
    results[static_cast<std::size_t>(i)] = runSingle(source, target, spec, seeds[si], o, folds[si]);
  }
  for (std::size_t mi = 0; mi < mixes.size(); ++mi) {
    out[mi].mix = mixes[mi];
    out[mi].results.assign(results.begin() + static_cast<std::ptrdiff_t>(mi * seeds.size()),
                           results.begin() + static_cast<std::ptrdiff_t>((mi + 1) * seeds.size()));
    out[mi].auc = meanAuc(out[mi].results);
    out[mi].numericRuns = static_cast<std::size_t>(std::count_if(
        out[mi].results.begin(), out[mi].results.end(), [](const auto& r) { return r.auc.has_value(); }));
  }
  return out;
}

}  // namespace ariadapt
