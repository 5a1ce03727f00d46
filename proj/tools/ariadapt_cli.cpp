// Command-line front end: generate, features, pair, matrix, sweep.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ariadapt/dataset_csv.hpp"
#include "ariadapt/error.hpp"
#include "ariadapt/harness.hpp"
#include "ariadapt/report.hpp"
#include "ariadapt/synth.hpp"

namespace fs = std::filesystem;
using namespace ariadapt;

namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  std::size_t seeds = 0;
  std::string config;
  std::string out;
  double pThreshold = 0.05;
  bool trace = false;
};

struct Context {
  GlobalFlags flags;
  CLI::Option* seedOpt = nullptr;
  CLI::Option* seedsOpt = nullptr;
  CLI::Option* outOpt = nullptr;
  CLI::Option* pOpt = nullptr;

  ExperimentConfig experiment() const {
    ExperimentConfig cfg;
    if (!flags.config.empty()) cfg = loadExperimentConfig(readConfig(flags.config));
    if (seedOpt->count()) cfg.protocol.rootSeed = flags.seed;
    if (seedsOpt->count()) {
      if (flags.seeds == 0) throw Error("--seeds must be at least 1");
      cfg.seeds.clear();
      for (std::size_t s = 0; s < flags.seeds; ++s) cfg.seeds.push_back(s);
    }
    if (pOpt->count()) cfg.protocol.pThreshold = flags.pThreshold;
    if (outOpt->count()) cfg.outputPath = flags.out;
    cfg.validate();
    return cfg;
  }
};

// A dataset named on the command line: a config section name, a CSV path, or a preset.
NamedDataset resolveDataset(const std::string& ref, const ExperimentConfig& cfg) {
  for (std::size_t i = 0; i < cfg.datasets.size(); ++i) {
    if (cfg.datasets[i].name != ref) continue;
    // Same generator stream as in a full matrix run.
    return materializeDatasets(cfg.datasets, cfg.protocol.rootSeed)[i];
  }
  if (fs::exists(ref)) {
    DatasetSource src{fs::path(ref).stem().string(), fs::path(ref), std::nullopt};
    return materializeDatasets({src}, cfg.protocol.rootSeed).front();
  }
  if (auto p = findPreset(ref)) {
    DatasetSource src{p->name, std::nullopt, *p};
    return materializeDatasets({src}, cfg.protocol.rootSeed).front();
  }
  throw Error("no dataset, file or preset named '" + ref + "'");
}

std::ofstream openFile(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

int cmdGenerate(const Context& ctx, const std::vector<std::string>& presets) {
  ExperimentConfig cfg = ctx.experiment();
  std::vector<DatasetSource> sources;
  for (const auto& name : presets) {
    auto p = findPreset(name);
    if (!p) throw Error("unknown preset '" + name + "'");
    sources.push_back({p->name, std::nullopt, *p});
  }
  if (sources.empty()) {
    for (const auto& d : cfg.datasets)
      if (d.profile) sources.push_back(d);
  }
  if (sources.empty())
    for (const auto& p : presetProfiles()) sources.push_back({p.name, std::nullopt, p});

  const fs::path dir = ctx.flags.out.empty() ? fs::path(".") : fs::path(ctx.flags.out);
  fs::create_directories(dir);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!sources[i].profile) continue;
    Rng rng(deriveSeed(cfg.protocol.rootSeed, {"study"}, i));
    const Dataset d = generate(*sources[i].profile, rng);
    const fs::path path = dir / (sources[i].name + ".csv");
    writeDatasetCsv(path, d);
    std::cout << path.string() << ' ' << d.rows() << " rows, " << d.countLabel(1)
              << " positive\n";
  }
  auto profiles = openFile(dir / "profiles.cfg");
  for (const auto& s : sources)
    if (s.profile) writeProfile(profiles, *s.profile);
  return 0;
}

int cmdFeatures(const Context& ctx, const std::vector<std::string>& data) {
  ExperimentConfig cfg = ctx.experiment();
  std::vector<NamedDataset> sets;
  for (const auto& ref : data) sets.push_back(resolveDataset(ref, cfg));
  if (data.empty()) sets = materializeDatasets(cfg.datasets, cfg.protocol.rootSeed);
  if (sets.empty()) throw Error("features: give --data or a config with datasets");

  for (const auto& nd : sets) {
    if (sets.size() > 1) std::cout << "# " << nd.name << '\n';
    try {
      const auto sel = selectSignificantFeatures(nd.data, cfg.protocol.pThreshold);
      writeFeaturesCsv(std::cout, sel);
      if (!ctx.flags.out.empty()) {
        auto f = openFile(fs::path(ctx.flags.out) / ("features_" + nd.name + ".csv"));
        writeFeaturesCsv(f, sel);
      }
    } catch (const ConvergenceError& e) {
      std::cerr << nd.name << ": NA (" << e.what() << ")\n";
    }
  }
  return 0;
}

int cmdPair(const Context& ctx, const std::string& sourceRef, const std::string& targetRef,
            const std::string& methodText) {
  ExperimentConfig cfg = ctx.experiment();
  const auto method = parseMethod(methodText);
  if (!method) throw Error("unknown method '" + methodText + "'");
  const NamedDataset source = resolveDataset(sourceRef, cfg);
  const NamedDataset target = resolveDataset(targetRef, cfg);
  const MethodSpec spec{*method, cfg.protocol.linInt};

  std::vector<TransferResult> results;
  Trace trace;
  for (auto seed : cfg.seeds)
    results.push_back(runSingle(source, target, spec, seed, cfg.protocol,
                                ctx.flags.trace ? &trace : nullptr));
  writeResultsCsv(std::cout, results);
  if (ctx.flags.trace) writeTrace(std::cerr, trace);
  if (!ctx.flags.out.empty()) {
    auto f = openFile(fs::path(ctx.flags.out) / "pair.csv");
    writeResultsCsv(f, results);
  }
  return 0;
}

int cmdMatrix(const Context& ctx, const std::vector<std::string>& data) {
  ExperimentConfig cfg = ctx.experiment();
  std::vector<NamedDataset> sets;
  for (const auto& ref : data) sets.push_back(resolveDataset(ref, cfg));
  if (data.empty()) sets = materializeDatasets(cfg.datasets, cfg.protocol.rootSeed);
  if (sets.size() < 2) throw Error("matrix: need at least two datasets");

  const MatrixReport report = runMatrix(sets, cfg, ctx.flags.trace);
  writeMatrixOutputs(cfg.outputPath, report);
  for (const auto& m : report.matrices) {
    writeMatrixTable(std::cout, report, m);
    std::cout << '\n';
  }
  if (ctx.flags.trace) writeTrace(std::cerr, report.trace);
  return 0;
}

int cmdSweep(const Context& ctx, const std::string& sourceRef, const std::string& targetRef,
             const std::string& methodText, const std::string& mixesText) {
  ExperimentConfig cfg = ctx.experiment();
  const auto method = parseMethod(methodText);
  if (!method) throw Error("unknown method '" + methodText + "'");
  std::vector<double> mixes = cfg.sweepMixes;
  if (!mixesText.empty())
    mixes = parseRealList({"--mixes", mixesText, 0}, "command line");
  const NamedDataset source = resolveDataset(sourceRef, cfg);
  const NamedDataset target = resolveDataset(targetRef, cfg);
  const auto points =
      runSweep(source, target, {*method, cfg.protocol.linInt}, mixes, cfg.seeds, cfg.protocol);
  writeSweepCsv(std::cout, points);
  if (!ctx.flags.out.empty()) {
    auto f = openFile(fs::path(ctx.flags.out) / "sweep.csv");
    writeSweepCsv(f, points);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transfer learning for respiratory infection prediction"};
  app.require_subcommand(1);
  Context ctx;
  ctx.seedOpt = app.add_option("--seed", ctx.flags.seed, "Root seed");
  ctx.seedsOpt = app.add_option("--seeds", ctx.flags.seeds, "Run seeds 0..N-1");
  app.add_option("--config", ctx.flags.config, "Experiment config file");
  ctx.outOpt = app.add_option("--out", ctx.flags.out, "Output directory");
  ctx.pOpt = app.add_option("--p-threshold", ctx.flags.pThreshold, "Feature selection threshold");
  app.add_flag("--trace", ctx.flags.trace, "Print one line per pipeline stage to stderr");

  std::vector<std::string> presets, data;
  std::string source, target, method = "feda", mixes;

  auto* gen = app.add_subcommand("generate", "Write synthetic studies as CSV");
  gen->add_option("--preset", presets, "Preset name (repeatable); default all");
  auto* feat = app.add_subcommand("features", "Significant features per dataset");
  feat->add_option("--data", data, "CSV file, config dataset or preset (repeatable)");
  auto* pair = app.add_subcommand("pair", "One source/target/method run");
  pair->add_option("--source", source)->required();
  pair->add_option("--target", target)->required();
  pair->add_option("--method", method);
  auto* matrix = app.add_subcommand("matrix", "All ordered pairs, all methods");
  matrix->add_option("--data", data, "CSV file, config dataset or preset (repeatable)");
  auto* sweep = app.add_subcommand("sweep", "AUC across source:target mixes");
  sweep->add_option("--source", source)->required();
  sweep->add_option("--target", target)->required();
  std::string sweepMethod = "union";
  sweep->add_option("--method", sweepMethod);
  sweep->add_option("--mixes", mixes, "Comma-separated ratios");
  for (auto* sub : {gen, feat, pair, matrix, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) return cmdGenerate(ctx, presets);
    if (*feat) return cmdFeatures(ctx, data);
    if (*pair) return cmdPair(ctx, source, target, method);
    if (*matrix) return cmdMatrix(ctx, data);
    if (*sweep) return cmdSweep(ctx, source, target, sweepMethod, mixes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
