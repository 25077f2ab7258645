#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "csgap/decompmat.hpp"

namespace csgap {

/// A labeled 1-based cell of an n x m sign matrix.
struct CellExample {
  int row = 1;
  int col = 1;
  int label = 1;
};

struct MatrixLearnerConfig {
  double beta = 1.0;   ///< decomposability budget
  double eta = 1.0;    ///< step size
  int epochs = 10;
  double tau = 0.0;    ///< trace cap; <= 0 means 2 * beta * (n + m)
  std::uint64_t seed = 0;
  /// Called after every update with trace(P) + trace(N).
  std::function<void(double)> on_update;
};

struct MatrixScores {
  Matrix scores;        ///< averaged margins (P - N)[row, n + col]
  long updates = 0;
  long steps = 0;
  double final_trace = 0.0;
};

/// Matrix exponentiated gradient on the hinge loss with unit margin.
///
/// The PSD variable is Z = s * exp(blockdiag(sym K, -sym K)) with blocks
/// (P, N), where K accumulates eta/2 * y * E_{row,col} on every margin
/// violation and s = min(1, tau / trace) enforces the trace cap. Scores are
/// the average of the pre-update margins over all steps (online-to-batch).
/// Example order is reshuffled every epoch from the seed.
MatrixScores matrix_mw_learn(std::span<const CellExample> cells, int n, int m, const MatrixLearnerConfig& cfg);

}  // namespace csgap
