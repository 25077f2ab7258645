#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "csgap/predictors.hpp"
#include "csgap/rational.hpp"
#include "csgap/realizations.hpp"
#include "csgap/sparse.hpp"

namespace csgap {

enum class ExecutionPolicy { Serial, Parallel };

struct LearnerConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  /// Matrix learner budget; <= 0 means beta_scale * log2(n), at least 1.
  double beta = 0.0;
  double beta_scale = 4.0;
  double eta = 1.0;
  int epochs = 10;
  double tau = 0.0;  ///< <= 0 means 2 * beta * (rows + cols)
  /// Learn the A^{+-1} parts with the matrix learner instead of by majority.
  bool matrix_singletons = false;
  /// Lift the n <= 24 guard of the exhaustive learner.
  bool force = false;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;

  /// Throws UsageError when a field is out of range.
  void validate() const;
  double beta_for(int n) const;
};

/// Per-instance majority label, ties and unseen instances -> +1.
PredictorPtr table_majority_learn(const Sample& s);

struct PartStats {
  PartId part;
  std::int64_t count = 0;
  Rational mass;         ///< count / |S|
  Rational train_error;  ///< child's error on its slice (0 for an empty slice)
};

/// Parts in PartId order; only parts that received examples are listed.
struct PartitionReport {
  std::vector<PartStats> parts;
  std::int64_t total = 0;
  /// Sum over parts of mass * train_error.
  Rational weighted_error() const;
};

/// Trains one part from its slice (instances already transformed by the router).
using PartLearner = std::function<PredictorPtr(const PartId&, const Sample&)>;

struct PartitionResult {
  std::shared_ptr<const CompositePredictor> predictor;
  PartitionReport report;
};

/// Splits S by part (order preserved), trains each slice, and glues the
/// children behind a router. Parts may train concurrently; failures are
/// rethrown with the part name prepended.
PartitionResult partition_learn(const Sample& s, Router router, const PartLearner& learner,
                                ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Five A^r parts: r in {0, +-2} via realize_c2 + matrix_mw_learn, r = +-1 by
/// majority (or matrix learner when cfg.matrix_singletons).
PredictorPtr learn_h2(const Sample& s, const LearnerConfig& cfg);
/// D_{i,b} parts (stripped, then learn_h2) and the residual part (learn_h2).
PredictorPtr learn_h3(const Sample& s, const LearnerConfig& cfg);

/// Proper exhaustive ERM over {+1,-1}^n weights.
PredictorPtr erm_binary_learn(const Sample& s, const LearnerConfig& cfg);

enum class Algo { Table, H2, H3, ErmBinary };
Algo parse_algo(std::string_view name);  ///< table | h2 | h3 | erm-binary
std::string algo_name(Algo a);
PredictorPtr train(Algo a, const Sample& s, const LearnerConfig& cfg);

}  // namespace csgap
