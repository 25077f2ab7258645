#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "csgap/learners.hpp"
#include "csgap/rational.hpp"
#include "csgap/rng.hpp"

namespace csgap {

/// |C_{n,3}| restricted to exactly three nonzeros: C(n,3) * 8.
std::int64_t exactly3_count(int n);
/// Uniform instance with exactly three nonzeros.
SparseVector uniform_exactly3(Rng& rng, int n);

struct TradeoffConfig {
  int n = 24;
  std::vector<Algo> algos{Algo::Table, Algo::H3};
  std::vector<std::int64_t> sizes;  ///< training set sizes (nested prefixes)
  int trials = 10;
  std::int64_t test_size = 4000;
  std::uint64_t seed = 0;
  LearnerConfig learner;

  void validate() const;
};

struct TradeoffRow {
  Algo algo = Algo::Table;
  int n = 0;
  std::int64_t m = 0;
  int trial = 0;
  std::optional<Rational> train_error;  ///< none when m = 0
  Rational test_error;
  double wall_ms = 0.0;
};

/// Each trial draws a target h_{psi,0} with uniform psi in {+1,-1}^n, a pool
/// of max(sizes) uniform exactly-3-sparse training instances and a fixed
/// test set, labels both with the target, and trains every algorithm on
/// every prefix size. Trials may run concurrently; rows come back ordered
/// by (trial, size, algo).
std::vector<TradeoffRow> run_tradeoff(const TradeoffConfig& cfg);

/// Columns algo,n,m,trial,train_err,test_err,wall_ms.
void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows);

/// Provenance record written next to every CSV.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> flags;
  std::vector<std::uint64_t> seeds;
  std::string version;
  double wall_ms = 0.0;
  std::vector<std::string> outputs;

  std::string to_json() const;
  /// Writes to `<path>.manifest.json`; returns the manifest path.
  std::string save_beside(const std::string& path) const;
};

}  // namespace csgap
