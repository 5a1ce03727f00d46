#include "ariadapt/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <Eigen/Dense>

#include "ariadapt/error.hpp"

namespace ariadapt {

namespace {

std::string profileKey(std::span<const std::uint8_t> row) {
  return {reinterpret_cast<const char*>(row.data()), row.size()};
}

std::unordered_map<std::string, std::size_t> profileCounts(const Dataset& d) {
  std::unordered_map<std::string, std::size_t> counts;
  counts.reserve(d.rows());
  for (std::size_t i = 0; i < d.rows(); ++i) ++counts[profileKey(d.row(i))];
  return counts;
}

void requireSameSpace(const Dataset& a, const Dataset& b, const char* what) {
  if (!(a.space() == b.space()))
    throw Error(std::string(what) + ": source and target must share a feature space");
}

}  // namespace

ProfileWeightTable::ProfileWeightTable(const Dataset& source, const Dataset& target, double alpha)
    : alpha_(alpha) {
  requireSameSpace(source, target, "profile weights");
  if (!(alpha > 0.0)) throw Error("smoothing alpha must be positive");
  if (source.empty()) throw Error("profile weights: empty source");
  const auto sc = profileCounts(source);
  const auto tc = profileCounts(target);
  std::unordered_set<std::string> all;
  for (const auto& [k, _] : sc) all.insert(k);
  for (const auto& [k, _] : tc) all.insert(k);
  distinct_ = all.size();

  const double k = static_cast<double>(distinct_);
  const double ns = static_cast<double>(source.rows()) + alpha * k;
  const double nt = static_cast<double>(target.rows()) + alpha * k;
  for (const auto& [key, count] : sc) {
    auto it = tc.find(key);
    const double ct = it == tc.end() ? 0.0 : static_cast<double>(it->second);
    const double ps = (static_cast<double>(count) + alpha) / ns;
    const double pt = (ct + alpha) / nt;
    weights_.emplace(key, pt / ps);
  }
}

double ProfileWeightTable::weight(std::span<const std::uint8_t> profile) const {
  auto it = weights_.find(profileKey(profile));
  if (it == weights_.end()) throw Error("profile not present in the source");
  return it->second;
}

std::vector<std::size_t> covariateShiftIndices(const Dataset& sourceProfiles,
                                               const Dataset& targetProfiles, std::size_t m,
                                               Rng& rng, double alpha) {
  if (m == 0) throw Error("covariate shift resample: m must be at least 1");
  if (sourceProfiles.empty()) throw Error("covariate shift resample: empty source");
  const ProfileWeightTable table(sourceProfiles, targetProfiles, alpha);
  std::vector<double> rowWeights(sourceProfiles.rows());
  for (std::size_t i = 0; i < sourceProfiles.rows(); ++i)
    rowWeights[i] = table.weight(sourceProfiles.row(i)) * sourceProfiles.weight(i);
  const WeightedSampler sampler(rowWeights);
  std::vector<std::size_t> out(m);
  for (auto& idx : out) idx = sampler(rng);
  return out;
}

Dataset covariateShiftResample(const Dataset& source, const Dataset& target, std::size_t m,
                               Rng& rng) {
  requireSameSpace(source, target, "covariate shift resample");
  const auto idx = covariateShiftIndices(source, target, m, rng);
  return source.selectRows(idx, /*resetWeights=*/true);
}

std::size_t balancedPositiveCount(const Dataset& target, std::size_t m) {
  if (target.empty()) throw Error("class balance: empty target");
  const double frac = static_cast<double>(target.countLabel(1)) / static_cast<double>(target.rows());
  return static_cast<std::size_t>(std::llround(static_cast<double>(m) * frac));
}

std::vector<std::size_t> classBalanceIndices(const Dataset& source, const Dataset& target,
                                             std::size_t m, Rng& rng) {
  if (m == 0) throw Error("class balance: m must be at least 1");
  const std::size_t wantPos = balancedPositiveCount(target, m);
  const std::size_t want[2] = {m - wantPos, wantPos};

  std::vector<std::size_t> out;
  out.reserve(m);
  for (std::uint8_t cls : {std::uint8_t{1}, std::uint8_t{0}}) {
    if (want[cls] == 0) continue;
    std::vector<std::size_t> rows;
    std::vector<double> weights;
    for (std::size_t i = 0; i < source.rows(); ++i) {
      if (source.label(i) == cls && source.weight(i) > 0.0) {
        rows.push_back(i);
        weights.push_back(source.weight(i));
      }
    }
    if (rows.empty()) throw Error("missing class " + std::to_string(cls) + " in source");
    const WeightedSampler sampler(weights);
    for (std::size_t k = 0; k < want[cls]; ++k) out.push_back(rows[sampler(rng)]);
  }
  return out;
}

Dataset classBalanceResample(const Dataset& source, const Dataset& target, std::size_t m,
                             Rng& rng) {
  const auto idx = classBalanceIndices(source, target, m, rng);
  return source.selectRows(idx, /*resetWeights=*/true);
}

std::vector<FeatureName> FeatureSelection::names() const {
  std::vector<FeatureName> out;
  out.reserve(features.size());
  for (const auto& f : features) out.push_back(f.name);
  return out;
}

namespace {

// Columns (in the given order, after an implicit intercept) that are not
// linear combinations of the ones before them. Incremental Cholesky of the
// weighted Gram matrix; a column whose pivot collapses is aliased.
std::vector<std::size_t> aliasFreeColumns(const Dataset& d, const std::vector<std::size_t>& cols) {
  const std::size_t p = cols.size() + 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  std::vector<Eigen::Index> nz;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    nz.assign(1, 0);
    const auto row = d.row(i);
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (row[cols[k]]) nz.push_back(static_cast<Eigen::Index>(k + 1));
    const double w = d.weight(i);
    for (std::size_t a = 0; a < nz.size(); ++a)
      for (std::size_t b = a; b < nz.size(); ++b) gram(nz[a], nz[b]) += w;
  }
  gram = gram.selfadjointView<Eigen::Upper>();

  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(gram.rows(), gram.cols());
  std::vector<Eigen::Index> basis;
  std::vector<std::size_t> out;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(p); ++j) {
    double pivot = gram(j, j);
    for (std::size_t a = 0; a < basis.size(); ++a) pivot -= lower(j, a) * lower(j, a);
    if (!(pivot > kAliasTolerance * gram(j, j))) continue;
    const double root = std::sqrt(pivot);
    const auto col = static_cast<Eigen::Index>(basis.size());
    lower(j, col) = root;
    for (Eigen::Index r = j + 1; r < static_cast<Eigen::Index>(p); ++r) {
      double v = gram(r, j);
      for (Eigen::Index a = 0; a < col; ++a) v -= lower(r, a) * lower(j, a);
      lower(r, col) = v / root;
    }
    basis.push_back(j);
    if (j > 0) out.push_back(cols[static_cast<std::size_t>(j - 1)]);
  }
  return out;
}

}  // namespace

FeatureSelection selectSignificantFeatures(const Dataset& d, double pThreshold) {
  if (d.rows() < 2) throw Error("feature selection needs at least 2 rows");
  if (d.countLabel(0) == 0 || d.countLabel(1) == 0)
    throw Error("feature selection needs both classes");

  // An all-zero column has no estimable coefficient; leaving it out is the
  // same as pinning its coefficient at zero. A column that is only ever set
  // on rows of one class has an unbounded maximum-likelihood coefficient and
  // a Wald p-value tending to 1, so it is left out as well.
  std::vector<std::size_t> candidates;
  FeatureSelection sel;
  for (std::size_t j = 0; j < d.cols(); ++j) {
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < d.rows() && !(pos && neg); ++i) {
      if (!d.at(i, j)) continue;
      (d.label(i) ? pos : neg) = true;
    }
    if (!pos && !neg) {
      ++sel.droppedEmptyColumns;
    } else if (!pos || !neg) {
      ++sel.droppedSeparatingColumns;
    } else {
      candidates.push_back(j);
    }
  }

  std::vector<FeatureName> kept;
  for (std::size_t j : aliasFreeColumns(d, candidates)) kept.push_back(d.space()[j]);
  sel.droppedAliasedColumns = candidates.size() - kept.size();
  Dataset work = projectDataset(d, kept);

  sel.fit = fitLogistic(work);
  // Separation spread over several columns: drop the diverging ones and refit.
  for (int round = 0; round < kSeparationRounds && sel.fit.converged && sel.fit.ridgeUsed > 0.0;
       ++round) {
    std::vector<FeatureName> bounded;
    for (std::size_t j = 0; j < kept.size(); ++j)
      if (std::abs(sel.fit.coefficients[j]) <= kSeparationBound) bounded.push_back(kept[j]);
    if (bounded.size() == kept.size()) break;
    sel.droppedSeparatingColumns += kept.size() - bounded.size();
    kept = std::move(bounded);
    work = projectDataset(d, kept);
    sel.fit = fitLogistic(work);
  }
  if (sel.fit.converged && !sel.fit.hasWald()) {
    sel.fit = fitLogistic(work, FitOptions{.ridge = kFallbackRidge});
  }
  if (!sel.fit.converged)
    throw ConvergenceError("feature selection fit did not converge", sel.fit.iterations,
                           sel.fit.gradientNorm);
  if (!sel.fit.hasWald())
    throw Error("feature selection: information matrix is singular even with ridge");
  sel.degenerate = sel.fit.ridgeUsed > 0.0;

  for (std::size_t j = 0; j < kept.size(); ++j) {
    if (sel.fit.wald[j].p < pThreshold)
      sel.features.push_back({kept[j], sel.fit.coefficients[j], sel.fit.wald[j].p});
  }
  std::stable_sort(sel.features.begin(), sel.features.end(),
                   [](const SignificantFeature& a, const SignificantFeature& b) { return a.p < b.p; });
  return sel;
}

}  // namespace ariadapt
