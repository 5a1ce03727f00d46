#pragma once

// Helpers and independent oracles shared by the unit and acceptance tests.
// Nothing here calls into the code it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ariadapt/core.hpp"
#include "ariadapt/learn.hpp"
#include "ariadapt/random.hpp"
#include "ariadapt/synth.hpp"

namespace testsupport {

using ariadapt::Dataset;
using ariadapt::FeatureName;
using ariadapt::FeatureSpace;
using ariadapt::Rng;

inline FeatureName feature(const std::string& label) { return FeatureName::parse(label); }

inline FeatureSpace space(const std::vector<std::string>& labels) {
  std::vector<FeatureName> names;
  for (const auto& l : labels) names.push_back(feature(l));
  return FeatureSpace(names);
}

inline Dataset makeDataset(const std::vector<std::string>& labels,
                           const std::vector<std::vector<int>>& rows, const std::vector<int>& y,
                           std::vector<double> w = {}) {
  std::vector<std::uint8_t> x;
  for (const auto& r : rows)
    for (int v : r) x.push_back(static_cast<std::uint8_t>(v));
  std::vector<std::uint8_t> yy(y.begin(), y.end());
  if (w.empty()) w.assign(y.size(), 1.0);
  return Dataset(space(labels), std::move(x), std::move(yy), std::move(w));
}

/// Symptom columns s0..s{cols-1}, each set with probability `density`;
/// labels drawn from a logistic model with coefficients in [-1.5, 1.5].
inline Dataset randomLogisticDataset(Rng& rng, std::size_t rows, std::size_t cols,
                                     double density = 0.5) {
  std::vector<FeatureName> names;
  for (std::size_t j = 0; j < cols; ++j) names.push_back(FeatureName::symptom("s" + std::to_string(j)));
  std::vector<double> beta(cols + 1);
  for (auto& b : beta) b = 3.0 * rng.uniform() - 1.5;
  std::vector<std::uint8_t> x(rows * cols), y(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    double z = beta[0];
    for (std::size_t j = 0; j < cols; ++j) {
      x[i * cols + j] = rng.bernoulli(density) ? 1 : 0;
      z += beta[j + 1] * x[i * cols + j];
    }
    y[i] = rng.bernoulli(1.0 / (1.0 + std::exp(-z))) ? 1 : 0;
  }
  return Dataset(FeatureSpace(names), std::move(x), std::move(y));
}

/// Counts (positive, negative) pairs directly; ties score one half.
inline double bruteAuc(const std::vector<double>& s, const std::vector<std::uint8_t>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

/// Weighted log-likelihood minus ridge/2 |params|^2, written out naively.
inline double penalizedLogLik(const ariadapt::Design& d, const std::vector<double>& params,
                              double ridge) {
  double ll = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double z = params[0];
    for (std::size_t j = 0; j < d.cols; ++j) z += params[j + 1] * d.x[i * d.cols + j];
    const double logP = -std::log1p(std::exp(-z));
    const double logQ = -z - std::log1p(std::exp(-z));
    ll += d.w[i] * (d.y[i] ? logP : logQ);
  }
  double sq = 0.0;
  for (double v : params) sq += v * v;
  return ll - 0.5 * ridge * sq;
}

inline std::vector<double> penalizedGradient(const ariadapt::Design& d,
                                             const std::vector<double>& params, double ridge) {
  std::vector<double> g(params.size(), 0.0);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    double z = params[0];
    for (std::size_t j = 0; j < d.cols; ++j) z += params[j + 1] * d.x[i * d.cols + j];
    const double r = d.w[i] * (d.y[i] - 1.0 / (1.0 + std::exp(-z)));
    g[0] += r;
    for (std::size_t j = 0; j < d.cols; ++j) g[j + 1] += r * d.x[i * d.cols + j];
  }
  for (std::size_t j = 0; j < g.size(); ++j) g[j] -= ridge * params[j];
  return g;
}

/// Some column splits the rows so that its 1-rows or its 0-rows hold one
/// class only, i.e. the maximum-likelihood fit does not exist.
inline bool separatedByOneColumn(const Dataset& d) {
  for (std::size_t j = 0; j < d.cols(); ++j) {
    std::size_t count[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < d.rows(); ++i) ++count[d.at(i, j)][d.label(i)];
    for (int v = 0; v < 2; ++v) {
      const std::size_t other = count[1 - v][0] + count[1 - v][1];
      if (other > 0 && (count[v][0] + count[v][1]) > 0 && (count[v][0] == 0 || count[v][1] == 0)) return true;
    }
  }
  return false;
}

/// Reference optimizer: row-by-row dense Newton with step halving, solved by
/// Gaussian elimination with partial pivoting. Shares no code with the learner.
inline std::vector<double> referenceNewtonFit(const ariadapt::Design& d, double ridge,
                                              double tolerance = 1e-11, int maxIter = 200) {
  const std::size_t k = d.cols + 1;
  std::vector<double> params(k, 0.0);
  double f = penalizedLogLik(d, params, ridge);
  for (int it = 0; it < maxIter; ++it) {
    const auto g = penalizedGradient(d, params, ridge);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    if (std::sqrt(gn) < tolerance) break;
    std::vector<double> h(k * (k + 1), 0.0);
    for (std::size_t i = 0; i < d.rows(); ++i) {
      std::vector<double> x(k, 1.0);
      for (std::size_t j = 0; j < d.cols; ++j) x[j + 1] = d.x[i * d.cols + j];
      double z = 0.0;
      for (std::size_t j = 0; j < k; ++j) z += params[j] * x[j];
      const double pr = 1.0 / (1.0 + std::exp(-z));
      const double wi = d.w[i] * pr * (1.0 - pr);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) h[a * (k + 1) + b] += wi * x[a] * x[b];
    }
    for (std::size_t a = 0; a < k; ++a) {
      h[a * (k + 1) + a] += ridge;
      h[a * (k + 1) + k] = g[a];
    }
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < k; ++r)
        if (std::abs(h[r * (k + 1) + c]) > std::abs(h[piv * (k + 1) + c])) piv = r;
      for (std::size_t j = 0; j <= k; ++j) std::swap(h[c * (k + 1) + j], h[piv * (k + 1) + j]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == c) continue;
        const double m = h[r * (k + 1) + c] / h[c * (k + 1) + c];
        for (std::size_t j = c; j <= k; ++j) h[r * (k + 1) + j] -= m * h[c * (k + 1) + j];
      }
    }
    double step = 1.0;
    for (;;) {
      std::vector<double> next(k);
      for (std::size_t j = 0; j < k; ++j)
        next[j] = params[j] + step * h[j * (k + 1) + k] / h[j * (k + 1) + j];
      const double fn = penalizedLogLik(d, next, ridge);
      if (fn >= f || step < 1e-10) {
        params = std::move(next);
        f = fn;
        break;
      }
      step *= 0.5;
    }
  }
  return params;
}

/// Seven informative symptoms, uniform demographics, mild noise, no inclusion filter.
inline ariadapt::StudyProfile controlProfile(std::size_t n = 2000) {
  ariadapt::StudyProfile p;
  p.name = "control";
  p.n = n;
  p.prevalence = 0.3;
  p.reportNoise = 0.05;
  p.inclusionRule = 0;
  p.symptoms = {"cough", "fever", "sorethroat", "muscle", "runnynose", "headache", "fatigue"};
  p.rates = {{0.85, 0.35}, {0.75, 0.2}, {0.6, 0.3}, {0.55, 0.2}, {0.6, 0.45}, {0.5, 0.3}, {0.6, 0.35}};
  p.demographicsMix.fill(0.1);
  return p;
}

}  // namespace testsupport
