// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ariadapt/adapt.hpp"
#include "ariadapt/config.hpp"
#include "ariadapt/harness.hpp"
#include "ariadapt/learn.hpp"
#include "ariadapt/preprocess.hpp"
#include "ariadapt/report.hpp"
#include "suites.hpp"

using namespace ariadapt;
using namespace testsupport;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::uint64_t> seeds20() {
  std::vector<std::uint64_t> s(20);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  return s;
}

// Mean AUC of method m from source to target over 20 seeds.
std::optional<double> meanOver20(const NamedDataset& source, const NamedDataset& target, Method m,
                                 const ProtocolOptions& opts) {
  std::vector<TransferResult> rs;
  for (auto s : seeds20()) rs.push_back(runSingle(source, target, {m, {}}, s, opts));
  return meanAuc(rs);
}

struct Fold {
  Dataset train;
  Dataset test;
};

Fold split(const Dataset& d, Rng& rng) {
  const auto s = stratifiedSplit(d, 0.2, rng);
  return {d.selectRows(s.first), d.selectRows(s.second)};
}

const std::vector<NamedDataset>& suite03() {
  static const auto s = controlSuite(0.3, 0, 2000);
  return s;
}

Outcome aucOracle() {
  Rng rng(1001);
  const auto t0 = Clock::now();
  double worst = 0.0;
  int tieCases = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + rng.below(150);
    const std::size_t levels = 1 + rng.below(trial % 2 ? 6 : 1000);
    std::vector<double> s(n);
    std::vector<std::uint8_t> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(levels)) * 0.37 - 2.0;
      y[i] = rng.bernoulli(0.3 + 0.4 * rng.uniform());
    }
    y[0] = 1;
    y[1] = 0;
    std::set<double> distinct(s.begin(), s.end());
    tieCases += distinct.size() < n;
    worst = std::max(worst, std::abs(*auc(s, y) - bruteAuc(s, y)));
  }
  const double secs = secondsSince(t0);
  return {worst <= 1e-12 && secs < 5.0 && tieCases > 0,
          "max diff " + fmt("%.2e", worst) + ", " + std::to_string(tieCases) + " cases with ties, " +
              fmt("%.2f", secs) + " s"};
}

Outcome learner() {
  Rng rng(1002);
  double worstGrad = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = Design::fromDataset(randomLogisticDataset(rng, 60 + rng.below(60), 1 + rng.below(5)));
    std::vector<double> params(d.cols + 1);
    for (auto& p : params) p = 2.0 * rng.uniform() - 1.0;
    const double ridge = trial % 2 ? 0.0 : 0.2;
    const auto g = logisticObjective(d, params, ridge).gradient;
    for (std::size_t j = 0; j < params.size(); ++j) {
      const double h = 1e-5;
      auto up = params, down = params;
      up[j] += h;
      down[j] -= h;
      const double fd =
          (logisticObjective(d, up, ridge).value - logisticObjective(d, down, ridge).value) / (2 * h);
      worstGrad = std::max(worstGrad, std::abs(g[j] - fd) / std::max(1.0, std::abs(fd)));
    }
  }

  int checked = 0;
  double worstCoef = 0.0;
  bool allConverged = true;
  while (checked < 50) {
    const auto ds = randomLogisticDataset(rng, 250, 1 + rng.below(5));
    if (separatedByOneColumn(ds)) continue;
    const auto c = fitLogistic(ds);
    ++checked;
    allConverged = allConverged && c.converged && c.ridgeUsed == 0.0;
    const auto ref = referenceNewtonFit(Design::fromDataset(ds), 0.0);
    worstCoef = std::max(worstCoef, std::abs(c.intercept - ref[0]));
    for (std::size_t j = 0; j < c.coefficients.size(); ++j)
      worstCoef = std::max(worstCoef, std::abs(c.coefficients[j] - ref[j + 1]));
  }

  std::vector<std::vector<int>> rows;
  std::vector<int> y;
  for (int i = 0; i < 200; ++i) {
    rows.push_back({i % 2, (i / 2) % 3 == 0});
    y.push_back(i % 2);
  }
  bool separableOk = false;
  try {
    const auto c = fitLogistic(makeDataset({"x", "z"}, rows, y));
    separableOk = c.converged && c.ridgeUsed > 0.0 && std::isfinite(c.coefficients[0]);
  } catch (...) {
  }
  return {worstGrad <= 1e-5 && worstCoef <= 1e-4 && allConverged && separableOk,
          "gradient rel err " + fmt("%.2e", worstGrad) + ", coef diff " + fmt("%.2e", worstCoef) +
              ", separable fallback " + (separableOk ? "ok" : "failed")};
}

Outcome fedaLaws() {
  Rng rng(1003);
  const std::vector<std::string> pool = {"cough", "fever", "rash", "chills", "male", "age_0_4",
                                         "headache", "cough&fever", "male&rash", "nausea", "female"};
  std::size_t violations = 0, rowsChecked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto pick = [&] {
      std::vector<std::string> names;
      for (const auto& n : pool)
        if (rng.bernoulli(0.5)) names.push_back(n);
      if (names.empty()) names.push_back(pool[rng.below(pool.size())]);
      rng.shuffle(names);
      return names;
    };
    auto random = [&](const std::vector<std::string>& names) {
      const std::size_t n = 1 + rng.below(20);
      std::vector<std::vector<int>> x(n, std::vector<int>(names.size()));
      std::vector<int> yy(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (auto& v : x[i]) v = rng.bernoulli(0.5);
        yy[i] = rng.bernoulli(0.5);
      }
      return makeDataset(names, x, yy);
    };
    const auto sNames = pick(), tNames = pick();
    const auto source = random(sNames), target = random(tNames);
    const auto al = alignSpaces(source.space(), target.space());
    const auto aug = fedaAugment(source, target, al);
    std::size_t overlap = 0;
    for (const auto& n : sNames) overlap += std::count(tNames.begin(), tNames.end(), n);
    if (aug.cols() != sNames.size() + overlap + tNames.size() || aug.sharedBlock != overlap) ++violations;
    for (std::size_t i = 0; i < aug.rows(); ++i) {
      ++rowsChecked;
      const bool fromSource = i < source.rows();
      const auto& orig = fromSource ? source : target;
      const std::size_t r = fromSource ? i : i - source.rows();
      const auto row = aug.row(i);
      const std::size_t zeroStart = fromSource ? aug.sourceBlock + aug.sharedBlock : 0;
      const std::size_t zeroLen = fromSource ? aug.targetBlock : aug.sourceBlock;
      bool ok = true;
      for (std::size_t j = 0; j < zeroLen; ++j) ok = ok && row[zeroStart + j] == 0;
      const std::size_t ownStart = fromSource ? 0 : aug.sourceBlock + aug.sharedBlock;
      for (std::size_t j = 0; j < orig.cols(); ++j) ok = ok && row[ownStart + j] == orig.at(r, j);
      for (std::size_t k = 0; k < al.shared.size(); ++k)
        ok = ok && row[aug.sourceBlock + k] == orig.at(r, *orig.space().indexOf(al.shared[k]));
      violations += !ok;
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations over 200 pairs, " + std::to_string(rowsChecked) + " rows"};
}

Outcome linIntEndpoints() {
  Rng rng(1004);
  int exact = 0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const auto source = generate(controlProfile(1500), rng);
    const auto f = split(generate(controlProfile(1000), rng), rng);
    const auto al = alignSpaces(source.space(), f.train.space());
    LinIntOptions one, zero;
    one.lambdas = {1.0};
    zero.lambdas = {0.0};
    const auto atOne = runLinInt(source, f.train, f.test, al, one, rng);
    const auto atZero = runLinInt(source, f.train, f.test, al, zero, rng);
    if (atOne.ok() && atZero.ok() && atOne.scores == runBaseline(f.train, f.test).scores &&
        atZero.scores == runSourceOnly(source, f.test, al).scores)
      ++exact;
  }
  return {exact == trials, std::to_string(exact) + "/" + std::to_string(trials) + " bit-identical at both ends"};
}

Outcome predConstant() {
  Rng rng(1005);
  int compared = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = split(generate(controlProfile(1200), rng), rng);
    const auto al = alignSpaces(f.train.space(), f.train.space());
    TrainedClassifier constant;
    for (const auto& n : al.shared) constant.featureNames.push_back(n.str());
    constant.coefficients.assign(al.shared.size(), 0.0);
    constant.intercept = 0.7 * rng.uniform() - 0.35;
    constant.converged = true;
    const auto pred = runPRED(constant, f.train, f.test, al);
    const auto base = runBaseline(f.train, f.test);
    if (!pred.ok() || !base.ok() || pred.ridgeUsed != 0.0 || base.ridgeUsed != 0.0) continue;
    ++compared;
    worst = std::max(worst, std::abs(*auc(pred.scores, f.test.labels()) - *auc(base.scores, f.test.labels())));
  }
  return {compared >= 10 && worst <= 1e-6,
          std::to_string(compared) + " unregularized fits, max AUC diff " + fmt("%.2e", worst)};
}

Outcome covariateShift() {
  // Source 90% profile A, 10% profile B; target the reverse.
  auto twoProfiles = [](int nA, int nB) {
    std::vector<std::vector<int>> rows;
    std::vector<int> y;
    for (int i = 0; i < nA + nB; ++i) {
      rows.push_back({i < nA, i >= nA});
      y.push_back(i % 2);
    }
    return makeDataset({"cough", "fever"}, rows, y);
  };
  const auto source = twoProfiles(90, 10), target = twoProfiles(10, 90);
  const double massB = 10 * (91.0 / 11.0), massA = 90 * (11.0 / 91.0);
  const double expectedB = massB / (massA + massB);
  Rng rng(1006);
  const std::size_t m = 50000;
  const auto out = covariateShiftResample(source, target, m, rng);
  std::size_t b = 0;
  for (std::size_t i = 0; i < out.rows(); ++i) b += out.at(i, 1);
  const double fracB = static_cast<double>(b) / m;
  const double tv = 0.5 * (std::abs(fracB - expectedB) + std::abs((1 - fracB) - (1 - expectedB)));
  return {out.rows() == m && tv <= 0.05,
          "TV " + fmt("%.4f", tv) + " (B share " + fmt("%.4f", fracB) + " vs " + fmt("%.4f", expectedB) + ")"};
}

Outcome classRatio() {
  Rng rng(1007);
  auto labelled = [](std::size_t pos, std::size_t neg) {
    std::vector<std::vector<int>> rows;
    std::vector<int> y;
    for (std::size_t i = 0; i < pos + neg; ++i) {
      rows.push_back({static_cast<int>(i % 3 == 0)});
      y.push_back(i < pos);
    }
    return makeDataset({"cough"}, rows, y);
  };
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto source = labelled(1 + rng.below(150), 1 + rng.below(150));
    const std::size_t tp = rng.below(100), tn = rng.below(100) + (tp == 0);
    const auto target = labelled(tp, tn);
    const std::size_t m = 1 + rng.below(1000);
    const auto idx = classBalanceIndices(source, target, m, rng);
    std::size_t pos = 0;
    for (auto i : idx) pos += source.label(i);
    const double wanted = static_cast<double>(m) * tp / (tp + tn);
    worst = std::max(worst, std::abs(static_cast<double>(pos) - wanted));
    if (idx.size() != m) worst = 1e9;
  }
  return {worst <= 1.0, "max positives off by " + fmt("%.3f", worst)};
}

Outcome identicalDomain() {
  const ProtocolOptions opts;
  const auto& s = suite03();
  const auto so = meanOver20(s[1], s[0], Method::sourceOnly, opts);
  const auto base = meanOver20(s[0], s[0], Method::baseline, opts);
  if (!so || !base) return {false, "NA mean"};
  const double gap = std::abs(*so - *base);
  return {gap <= 0.03, "SourceOnly " + fmt("%.4f", *so) + ", Baseline " + fmt("%.4f", *base) + ", gap " +
                           fmt("%.4f", gap)};
}

Outcome shiftOrdering() {
  const ProtocolOptions opts;
  const auto& s = suite03();
  const auto so = meanOver20(s[2], s[0], Method::sourceOnly, opts);
  if (!so) return {false, "SourceOnly NA"};
  bool pass = true;
  std::string detail = "SourceOnly " + fmt("%.4f", *so);
  for (Method m : {Method::feda, Method::pred, Method::linInt}) {
    const auto v = meanOver20(s[2], s[0], m, opts);
    pass = pass && v && *v >= *so;
    detail += ", " + std::string(methodName(m)) + " " + (v ? fmt("%.4f", *v) : "NA");
  }
  return {pass, detail};
}

Outcome unionSweep() {
  const auto& s = suite03();
  const auto pts = runSweep(s[2], s[0], {Method::unionAll, {}}, {1.0, 2.0, 4.0}, seeds20(), ProtocolOptions{});
  bool pass = pts.size() == 3;
  std::string detail;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].auc) return {false, "NA at mix " + fmt("%g", pts[i].mix)};
    if (i > 0) pass = pass && *pts[i].auc <= *pts[i - 1].auc + 0.01;
    detail += (i ? ", " : "") + fmt("%g:1 ", pts[i].mix) + fmt("%.4f", *pts[i].auc);
  }
  return {pass, detail};
}

Outcome naPathway() {
  Rng rng(1011);
  const auto [source, target] = engineeredPair(rng);
  const ProtocolOptions opts;
  const auto so = runSingle(source, target, {Method::sourceOnly, {}}, 0, opts);
  const auto feda = runSingle(source, target, {Method::feda, {}}, 0, opts);
  return {!so.auc && so.naReason && feda.auc,
          "SourceOnly " + (so.auc ? fmt("%.4f", *so.auc) : "NA (" + so.naReason.value_or("") + ")") +
              ", FEDA " + (feda.auc ? fmt("%.4f", *feda.auc) : "NA")};
}

Outcome endToEnd() {
  const auto cfg = loadExperimentConfig(readConfig(ARIADAPT_SIX_PRESETS));
  auto once = [&](double& secs) {
    const auto t0 = Clock::now();
    const auto sets = materializeDatasets(cfg.datasets, cfg.protocol.rootSeed);
    const auto report = runMatrix(sets, cfg);
    secs = secondsSince(t0);
    std::ostringstream out;
    writeResultsCsv(out, report.results);
    for (const auto& m : report.matrices) writeMatrixCsv(out, report, m);
    writeBaselineCsv(out, report);
    return std::make_pair(out.str(), report);
  };
  double first = 0.0, second = 0.0;
  const auto [a, report] = once(first);
  const auto b = once(second).first;
  const std::size_t expected = cfg.seeds.size() * 6 * (1 + 5 * 5);
  const bool shape = cfg.datasets.size() == 6 && cfg.methods.size() == 5 && report.results.size() == expected;
  return {shape && a == b && std::max(first, second) < 300.0,
          std::to_string(report.results.size()) + " runs, " + fmt("%.1f", first) + " s and " +
              fmt("%.1f", second) + " s, outputs " + (a == b ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 AUC oracle equivalence", aucOracle},
      {"2 learner correctness", learner},
      {"3 augmented block laws", fedaLaws},
      {"4 LinInt endpoints", linIntEndpoints},
      {"5 PRED constant-feature invariance", predConstant},
      {"6 covariate-shift fidelity", covariateShift},
      {"7 class-ratio matching", classRatio},
      {"8 identical-domain transfer", identicalDomain},
      {"9 shift ordering", shiftOrdering},
      {"10 Union sweep", unionSweep},
      {"11 NA pathway", naPathway},
      {"12 end-to-end budget and determinism", endToEnd},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
