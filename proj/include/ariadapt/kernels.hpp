#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

// Inner loops of the logistic learner. Each kernel has an OpenMP version used
// in production and a plain serial version kept as the reference in tests and
// benchmarks.
//
// The parallel versions split rows into a fixed number of chunks that depends
// only on the row count, and reduce the per-chunk partials in chunk order.
// Results are therefore bitwise identical for any thread count.

namespace ariadapt::kernels {

/// Row-major design of unique rows, each carrying the summed weight of its
/// positive and negative observations. The intercept column is implicit.
struct GroupedDesign {
  std::span<const double> x;
  std::size_t cols = 0;
  std::span<const double> weightPos;
  std::span<const double> weightNeg;

  std::size_t rows() const noexcept { return weightPos.size(); }
};

/// Gradient and information of the weighted log-likelihood at `params`
/// (params[0] is the intercept). `information` is the full (cols+1)^2
/// row-major matrix X'WX, i.e. the negated Hessian.
struct NewtonSystem {
  std::vector<double> gradient;
  std::vector<double> information;
  double logLikelihood = 0.0;
};

NewtonSystem newtonSystem(const GroupedDesign& d, std::span<const double> params);

/// out[i] = params[0] + x_i . params[1..]
void linearScores(std::span<const double> x, std::size_t cols, std::span<const double> params,
                  std::span<double> out);

/// Number of row chunks used by the parallel kernels.
std::size_t chunkCount(std::size_t rows);

namespace serial {

NewtonSystem newtonSystem(const GroupedDesign& d, std::span<const double> params);
void linearScores(std::span<const double> x, std::size_t cols, std::span<const double> params,
                  std::span<double> out);

}  // namespace serial

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

inline double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

}  // namespace ariadapt::kernels
