#include <omp.h>

#include <algorithm>

#include "ariadapt/kernels.hpp"

namespace ariadapt::kernels {

namespace {

constexpr std::size_t kRowsPerChunk = 512;
constexpr std::size_t kMaxChunks = 16;

struct Partial {
  std::vector<double> gradient;
  std::vector<double> upper;  // packed upper triangle, row-major
  double logLikelihood = 0.0;
};

// Rows are mostly binary indicators, so only nonzero entries take part in the
// rank-one update.
void accumulateRange(const GroupedDesign& d, std::span<const double> params, std::size_t begin,
                     std::size_t end, Partial& acc) {
  const std::size_t p = d.cols + 1;
  std::vector<std::size_t> nzIndex;
  std::vector<double> nzValue;
  nzIndex.reserve(p);
  nzValue.reserve(p);
  for (std::size_t i = begin; i < end; ++i) {
    const double* row = d.x.data() + i * d.cols;
    nzIndex.clear();
    nzValue.clear();
    nzIndex.push_back(0);
    nzValue.push_back(1.0);
    double eta = params[0];
    for (std::size_t j = 0; j < d.cols; ++j) {
      if (row[j] != 0.0) {
        nzIndex.push_back(j + 1);
        nzValue.push_back(row[j]);
        eta += row[j] * params[j + 1];
      }
    }
    const double prob = sigmoid(eta);
    const double wp = d.weightPos[i];
    const double wn = d.weightNeg[i];
    const double resid = wp * (1.0 - prob) - wn * prob;
    const double curv = (wp + wn) * prob * (1.0 - prob);
    acc.logLikelihood -= wp * softplus(-eta) + wn * softplus(eta);
    const std::size_t k = nzIndex.size();
    for (std::size_t a = 0; a < k; ++a) {
      const std::size_t ia = nzIndex[a];
      const double va = nzValue[a];
      acc.gradient[ia] += resid * va;
      const double cva = curv * va;
      // packed offset of row ia: ia*p - ia*(ia-1)/2, column ib >= ia
      const std::size_t rowOffset = ia * p - ia * (ia - 1) / 2 - ia;
      for (std::size_t b = a; b < k; ++b) acc.upper[rowOffset + nzIndex[b]] += cva * nzValue[b];
    }
  }
}

}  // namespace

std::size_t chunkCount(std::size_t rows) {
  return std::clamp<std::size_t>(rows / kRowsPerChunk, 1, kMaxChunks);
}

NewtonSystem newtonSystem(const GroupedDesign& d, std::span<const double> params) {
  const std::size_t p = d.cols + 1;
  const std::size_t packed = p * (p + 1) / 2;
  const std::size_t n = d.rows();
  const std::size_t chunks = chunkCount(n);
  std::vector<Partial> partials(chunks);

#pragma omp parallel for schedule(static) if (chunks > 1)
  for (std::size_t c = 0; c < chunks; ++c) {
    Partial& acc = partials[c];
    acc.gradient.assign(p, 0.0);
    acc.upper.assign(packed, 0.0);
    accumulateRange(d, params, c * n / chunks, (c + 1) * n / chunks, acc);
  }

  NewtonSystem out{std::vector<double>(p, 0.0), std::vector<double>(p * p, 0.0), 0.0};
  std::vector<double> upper(packed, 0.0);
  for (const auto& part : partials) {
    out.logLikelihood += part.logLikelihood;
    for (std::size_t a = 0; a < p; ++a) out.gradient[a] += part.gradient[a];
    for (std::size_t k = 0; k < packed; ++k) upper[k] += part.upper[k];
  }
  std::size_t k = 0;
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = a; b < p; ++b, ++k) {
      out.information[a * p + b] = upper[k];
      out.information[b * p + a] = upper[k];
    }
  }
  return out;
}

void linearScores(std::span<const double> x, std::size_t cols, std::span<const double> params,
                  std::span<double> out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static) if (n > 4096)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double* row = x.data() + static_cast<std::size_t>(i) * cols;
    double eta = params[0];
    for (std::size_t j = 0; j < cols; ++j) eta += row[j] * params[j + 1];
    out[static_cast<std::size_t>(i)] = eta;
  }
}

}  // namespace ariadapt::kernels
