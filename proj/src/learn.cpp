#include "ariadapt/learn.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "ariadapt/error.hpp"
#include "ariadapt/kernels.hpp"

namespace ariadapt {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// Relative eigenvalue floor below which the information matrix counts as singular.
constexpr double kRankTolerance = 1e-10;

struct Grouped {
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<double> weightPos;
  std::vector<double> weightNeg;

  kernels::GroupedDesign view() const { return {x, cols, weightPos, weightNeg}; }
};

// Collapses identical rows. Groups are ordered by their byte pattern, so the
// result does not depend on the input row order.
Grouped groupRows(const Design& d) {
  const std::size_t f = d.cols;
  const auto* bytes = reinterpret_cast<const char*>(d.x.data());
  const std::size_t rowBytes = f * sizeof(double);
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(d.rows());
  std::vector<std::string_view> keys;
  std::vector<double> wp, wn;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    std::string_view key(bytes + i * rowBytes, rowBytes);
    auto [it, fresh] = index.emplace(key, keys.size());
    if (fresh) {
      keys.push_back(key);
      wp.push_back(0.0);
      wn.push_back(0.0);
    }
    (d.y[i] ? wp : wn)[it->second] += d.w[i];
  }
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

  Grouped g;
  g.cols = f;
  g.x.resize(order.size() * f);
  g.weightPos.resize(order.size());
  g.weightNeg.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    std::memcpy(g.x.data() + k * f, keys[order[k]].data(), rowBytes);
    g.weightPos[k] = wp[order[k]];
    g.weightNeg[k] = wn[order[k]];
  }
  return g;
}

struct PenalizedSystem {
  kernels::NewtonSystem sys;
  double objective = 0.0;
};

PenalizedSystem evaluate(const Grouped& g, const std::vector<double>& params, double ridge) {
  PenalizedSystem out{kernels::newtonSystem(g.view(), params), 0.0};
  const std::size_t p = params.size();
  double sq = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    sq += params[j] * params[j];
    out.sys.gradient[j] -= ridge * params[j];
    out.sys.information[j * p + j] += ridge;
  }
  out.objective = out.sys.logLikelihood - 0.5 * ridge * sq;
  return out;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Newton direction. Cholesky when the information is comfortably positive
// definite, otherwise a pseudo-inverse so collinear designs still make progress
// along the identifiable directions.
Vector newtonStep(const std::vector<double>& info, const std::vector<double>& grad) {
  const auto p = static_cast<Eigen::Index>(grad.size());
  Eigen::Map<const Matrix> h(info.data(), p, p);
  Eigen::Map<const Vector> g(grad.data(), p);
  Eigen::LLT<Matrix> llt(h);
  if (llt.info() == Eigen::Success) {
    const double maxDiag = h.diagonal().maxCoeff();
    const Vector pivots = llt.matrixLLT().diagonal();
    const double minPivot = pivots.minCoeff();
    if (minPivot * minPivot > kRankTolerance * maxDiag) return llt.solve(g);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Vector& vals = eig.eigenvalues();
  const double floor = kRankTolerance * std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  Vector coord = eig.eigenvectors().transpose() * g;
  for (Eigen::Index k = 0; k < p; ++k) coord[k] = vals[k] > floor ? coord[k] / vals[k] : 0.0;
  return eig.eigenvectors() * coord;
}

// True when some 0/1 column has only one class among its 1-rows or its 0-rows.
bool hasSeparatingColumn(const Grouped& g) {
  const std::size_t rows = g.weightPos.size();
  for (std::size_t j = 0; j < g.cols; ++j) {
    double w[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    bool binary = true;
    for (std::size_t r = 0; r < rows && binary; ++r) {
      const double v = g.x[r * g.cols + j];
      binary = v == 0.0 || v == 1.0;
      const int k = v == 1.0;
      w[k][1] += g.weightPos[r];
      w[k][0] += g.weightNeg[r];
    }
    if (!binary) continue;
    const bool bothLevels = w[0][0] + w[0][1] > 0.0 && w[1][0] + w[1][1] > 0.0;
    if (bothLevels && (w[0][0] == 0.0 || w[0][1] == 0.0 || w[1][0] == 0.0 || w[1][1] == 0.0)) return true;
  }
  return false;
}

enum class Outcome { converged, maxIter, separated, stalled };

struct Attempt {
  Outcome outcome = Outcome::maxIter;
  std::vector<double> params;
  PenalizedSystem last;
  int iterations = 0;
};

Attempt newtonRaphson(const Grouped& g, double ridge, const FitOptions& opts) {
  const std::size_t p = g.cols + 1;
  Attempt a;
  a.params.assign(p, 0.0);
  const double sp = std::accumulate(g.weightPos.begin(), g.weightPos.end(), 0.0);
  const double sn = std::accumulate(g.weightNeg.begin(), g.weightNeg.end(), 0.0);
  a.params[0] = std::log(sp / sn);
  a.last = evaluate(g, a.params, ridge);

  for (a.iterations = 0; a.iterations < opts.maxIter; ++a.iterations) {
    if (norm(a.last.sys.gradient) <= opts.gradientTolerance) {
      a.outcome = Outcome::converged;
      return a;
    }
    const Vector step = newtonStep(a.last.sys.information, a.last.sys.gradient);
    if (!step.allFinite()) {
      a.outcome = Outcome::separated;
      return a;
    }
    const double slack = 1e-12 * (1.0 + std::abs(a.last.objective));
    double t = 1.0;
    bool accepted = false;
    std::vector<double> candidate(p);
    for (int halving = 0; halving < 50; ++halving, t *= 0.5) {
      for (std::size_t j = 0; j < p; ++j) candidate[j] = a.params[j] + t * step[static_cast<Eigen::Index>(j)];
      PenalizedSystem next = evaluate(g, candidate, ridge);
      if (std::isfinite(next.objective) && next.objective >= a.last.objective - slack) {
        a.params = candidate;
        a.last = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      a.outcome = Outcome::stalled;
      return a;
    }
    if (ridge == 0.0) {
      for (double v : a.params) {
        if (!std::isfinite(v) || std::abs(v) > kSeparationBound) {
          a.outcome = Outcome::separated;
          return a;
        }
      }
    }
  }
  a.outcome = norm(a.last.sys.gradient) <= opts.gradientTolerance ? Outcome::converged
                                                                   : Outcome::maxIter;
  return a;
}

// Wald statistics from the inverse information, when it is invertible.
void attachWald(TrainedClassifier& c, const std::vector<double>& info) {
  const auto p = static_cast<Eigen::Index>(c.coefficients.size() + 1);
  Eigen::Map<const Matrix> h(info.data(), p, p);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) return;
  const Vector& vals = eig.eigenvalues();
  if (!(vals.minCoeff() > kRankTolerance * vals.cwiseAbs().maxCoeff())) return;
  const Matrix cov = eig.eigenvectors() * vals.cwiseInverse().asDiagonal() *
                     eig.eigenvectors().transpose();
  auto stat = [](double beta, double var) {
    const double z = beta / std::sqrt(var);
    return WaldStatistic{z, std::erfc(std::abs(z) / std::sqrt(2.0))};
  };
  c.interceptWald = stat(c.intercept, cov(0, 0));
  c.wald.reserve(c.coefficients.size());
  for (Eigen::Index j = 1; j < p; ++j) c.wald.push_back(stat(c.coefficients[static_cast<std::size_t>(j - 1)], cov(j, j)));
}

void checkClasses(const Design& d) {
  if (d.rows() < 2) throw Error("logistic fit needs at least 2 rows");
  double pos = 0.0, neg = 0.0;
  for (std::size_t i = 0; i < d.rows(); ++i) (d.y[i] ? pos : neg) += d.w[i];
  if (!(pos > 0.0) || !(neg > 0.0))
    throw Error("logistic fit needs both classes with positive weight");
}

}  // namespace

Design Design::fromDataset(const Dataset& d) {
  Design out;
  out.cols = d.cols();
  out.x.assign(d.values().begin(), d.values().end());
  out.y = d.labels();
  out.w = d.weights();
  out.columnNames.reserve(d.cols());
  for (const auto& f : d.space()) out.columnNames.push_back(f.str());
  return out;
}

Design Design::withPrependedColumn(std::string name, std::span<const double> values) const {
  if (values.size() != rows()) throw Error("prepended column length differs from row count");
  Design out;
  out.cols = cols + 1;
  out.x.resize(rows() * out.cols);
  for (std::size_t i = 0; i < rows(); ++i) {
    out.x[i * out.cols] = values[i];
    std::copy_n(x.begin() + static_cast<std::ptrdiff_t>(i * cols), cols,
                out.x.begin() + static_cast<std::ptrdiff_t>(i * out.cols + 1));
  }
  out.y = y;
  out.w = w;
  out.columnNames.reserve(out.cols);
  out.columnNames.push_back(std::move(name));
  out.columnNames.insert(out.columnNames.end(), columnNames.begin(), columnNames.end());
  return out;
}

TrainedClassifier fitLogistic(const Design& d, const FitOptions& opts) {
  if (opts.ridge < 0.0) throw Error("ridge must be non-negative");
  checkClasses(d);
  const Grouped g = groupRows(d);

  double ridge = opts.ridge;
  Attempt a;
  if (ridge == 0.0 && hasSeparatingColumn(g)) a.outcome = Outcome::separated;
  else a = newtonRaphson(g, ridge, opts);
  if (a.outcome != Outcome::converged && ridge == 0.0) {
    ridge = kFallbackRidge;
    a = newtonRaphson(g, ridge, opts);
  }

  TrainedClassifier c;
  c.featureNames = d.columnNames;
  c.intercept = a.params[0];
  c.coefficients.assign(a.params.begin() + 1, a.params.end());
  c.converged = a.outcome == Outcome::converged;
  c.iterations = a.iterations;
  c.gradientNorm = norm(a.last.sys.gradient);
  c.ridgeUsed = ridge;
  attachWald(c, a.last.sys.information);
  return c;
}

TrainedClassifier fitLogistic(const Dataset& d, const FitOptions& opts) {
  return fitLogistic(Design::fromDataset(d), opts);
}

std::vector<double> predictProb(const TrainedClassifier& c, const Design& d) {
  if (d.cols != c.coefficients.size())
    throw Error("design has " + std::to_string(d.cols) + " columns, model expects " +
                std::to_string(c.coefficients.size()));
  std::vector<double> params;
  params.reserve(d.cols + 1);
  params.push_back(c.intercept);
  params.insert(params.end(), c.coefficients.begin(), c.coefficients.end());
  std::vector<double> out(d.rows());
  kernels::linearScores(d.x, d.cols, params, out);
  for (double& v : out) v = kernels::sigmoid(v);
  return out;
}

std::vector<double> predictProb(const TrainedClassifier& c, const Dataset& d) {
  return predictProb(c, Design::fromDataset(d));
}

ObjectiveValue logisticObjective(const Design& d, std::span<const double> params, double ridge) {
  if (params.size() != d.cols + 1) throw Error("parameter vector has the wrong length");
  const Grouped g = groupRows(d);
  const PenalizedSystem s = evaluate(g, {params.begin(), params.end()}, ridge);
  return {s.objective, s.sys.gradient};
}

std::optional<double> auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw Error("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rankSumPos = 0.0;
  std::size_t nPos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // ranks i+1 .. j share the midrank (i+1+j)/2
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        rankSumPos += midrank;
        ++nPos;
      }
    }
    i = j;
  }
  const std::size_t nNeg = n - nPos;
  if (nPos == 0 || nNeg == 0) return std::nullopt;
  const double np = static_cast<double>(nPos);
  const double u = rankSumPos - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(nNeg));
}

void writeModel(std::ostream& out, const TrainedClassifier& c) {
  auto pText = [](const WaldStatistic* w) {
    if (!w) return std::string("NA");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", w->p);
    return std::string(buf);
  };
  char buf[64];
  for (std::size_t j = 0; j < c.coefficients.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.10g", c.coefficients[j]);
    const std::string name = j < c.featureNames.size() ? c.featureNames[j] : "x" + std::to_string(j);
    out << name << '\t' << buf << '\t' << pText(c.hasWald() ? &c.wald[j] : nullptr) << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.10g", c.intercept);
  out << "__intercept__\t" << buf << '\t'
      << pText(c.interceptWald ? &*c.interceptWald : nullptr) << '\n';
}

}  // namespace ariadapt
