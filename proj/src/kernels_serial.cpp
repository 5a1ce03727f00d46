#include "ariadapt/kernels.hpp"

namespace ariadapt::kernels::serial {

NewtonSystem newtonSystem(const GroupedDesign& d, std::span<const double> params) {
  const std::size_t p = d.cols + 1;
  NewtonSystem out{std::vector<double>(p, 0.0), std::vector<double>(p * p, 0.0), 0.0};
  std::vector<double> v(p);
  for (std::size_t i = 0; i < d.rows(); ++i) {
    v[0] = 1.0;
    for (std::size_t j = 0; j < d.cols; ++j) v[j + 1] = d.x[i * d.cols + j];
    double eta = 0.0;
    for (std::size_t j = 0; j < p; ++j) eta += v[j] * params[j];
    const double prob = sigmoid(eta);
    const double wp = d.weightPos[i];
    const double wn = d.weightNeg[i];
    const double resid = wp * (1.0 - prob) - wn * prob;
    const double curv = (wp + wn) * prob * (1.0 - prob);
    out.logLikelihood -= wp * softplus(-eta) + wn * softplus(eta);
    for (std::size_t a = 0; a < p; ++a) {
      out.gradient[a] += resid * v[a];
      for (std::size_t b = 0; b < p; ++b) out.information[a * p + b] += curv * v[a] * v[b];
    }
  }
  return out;
}

void linearScores(std::span<const double> x, std::size_t cols, std::span<const double> params,
                  std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    double eta = params[0];
    for (std::size_t j = 0; j < cols; ++j) eta += x[i * cols + j] * params[j + 1];
    out[i] = eta;
  }
}

}  // namespace ariadapt::kernels::serial
