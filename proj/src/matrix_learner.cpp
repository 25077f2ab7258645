#include "csgap/matrix_learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "csgap/errors.hpp"
#include "csgap/rng.hpp"

namespace csgap {
namespace {

struct Iterate {
  Matrix margins;
  double trace = 0.0;
};

// Margins 2 s U sinh(S) V^T and capped trace from the singular values of K;
// the eigenvalues of sym K are +-sigma_i plus |n - m| zeros. Everything is
// computed relative to exp(sigma_max) so large spectra do not overflow.
Iterate evaluate(const Matrix& k, double tau) {
  const auto n = k.rows();
  const auto m = k.cols();
  Eigen::JacobiSVD<Matrix> svd(k, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double top = sigma.size() ? sigma.maxCoeff() : 0.0;
  double rel = static_cast<double>(std::abs(n - m)) * std::exp(-top);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) rel += std::exp(sigma(i) - top) + std::exp(-sigma(i) - top);
  const double log_raw = std::log(2.0 * rel) + top;
  const double log_s = std::min(0.0, std::log(tau) - log_raw);
  Eigen::VectorXd coef(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) coef(i) = std::exp(log_s + sigma(i)) - std::exp(log_s - sigma(i));
  Iterate it;
  it.margins = svd.matrixU() * coef.asDiagonal() * svd.matrixV().transpose();
  it.trace = std::exp(log_s + log_raw);
  return it;
}

}  // namespace

MatrixScores matrix_mw_learn(std::span<const CellExample> cells, int n, int m, const MatrixLearnerConfig& cfg) {
  if (n < 1 || m < 1) throw UsageError("matrix dimensions must be positive");
  if (!(cfg.beta > 0)) throw UsageError("beta must be positive");
  if (!(cfg.eta > 0) || !std::isfinite(cfg.eta)) throw UsageError("eta must be positive");
  if (cfg.epochs < 1) throw UsageError("epochs must be >= 1");
  for (const auto& c : cells) {
    if (c.row < 1 || c.row > n || c.col < 1 || c.col > m) throw UsageError("cell outside the matrix");
    if (c.label != 1 && c.label != -1) throw UsageError("cell label must be +1 or -1");
  }
  const double tau = cfg.tau > 0 ? cfg.tau : 2.0 * cfg.beta * (n + m);

  Matrix k = Matrix::Zero(n, m);
  Iterate cur = evaluate(k, tau);
  Matrix sum = Matrix::Zero(n, m);
  long pending = 0;
  MatrixScores out;
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    // Fisher-Yates on rng.below keeps the order independent of the standard library.
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    for (const auto idx : order) {
      const auto& c = cells[idx];
      ++pending;
      ++out.steps;
      const double margin = cur.margins(c.row - 1, c.col - 1);
      if (c.label * margin >= 1.0) continue;
      sum += static_cast<double>(pending) * cur.margins;
      pending = 0;
      k(c.row - 1, c.col - 1) += 0.5 * cfg.eta * c.label;
      cur = evaluate(k, tau);
      if (!cur.margins.allFinite() || !std::isfinite(cur.trace)) {
        throw NumericalFailure("matrix learner diverged in epoch " + std::to_string(epoch) +
                               " (non-finite loss; reduce eta)");
      }
      ++out.updates;
      if (cfg.on_update) cfg.on_update(cur.trace);
    }
  }
  sum += static_cast<double>(pending) * cur.margins;
  out.scores = out.steps > 0 ? Matrix(sum / static_cast<double>(out.steps)) : Matrix(cur.margins);
  out.final_trace = cur.trace;
  return out;
}

}  // namespace csgap
