#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "csgap/formulas.hpp"
#include "csgap/learners.hpp"
#include "csgap/rational.hpp"

namespace csgap {

struct RefuterConfig {
  Rational fraction{1, 2};   ///< |S1| = ceil(fraction * |S|), in (0, 1]
  Rational threshold{3, 8};  ///< Exceptional iff Err_S(h) <= threshold, in (0, 1)
  Algo learner = Algo::ErmBinary;
  LearnerConfig learner_cfg;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Verdict {
  enum class Kind { Typical, Exceptional };
  Kind kind = Kind::Typical;
  Rational error;
  std::size_t sample_size = 0;
  std::size_t subsample_size = 0;
};

std::string verdict_name(Verdict::Kind k);  ///< "typical" | "exceptional"

/// Draws S from phi (formula_to_sample), trains on ceil(fraction |S|)
/// examples drawn from S with replacement, and compares the error on all of
/// S with the threshold. Sub-seeds are derived from cfg.seed.
Verdict refute(const Formula& phi, const RefuterConfig& cfg);

enum class GameMode { Planted, Uniform };
std::string mode_name(GameMode m);

struct GameConfig {
  int n = 16;
  double delta = 8.0;  ///< clauses = llround(delta * n^(1 + mu))
  double mu = 0.0;     ///< in [0, 0.5]
  int trials = 100;    ///< rounds per mode
  std::vector<GameMode> modes{GameMode::Planted, GameMode::Uniform};
  std::uint64_t base_seed = 0;
  ExecutionPolicy policy = ExecutionPolicy::Parallel;

  void validate() const;
  int clauses() const;
};

struct GameRound {
  GameMode mode = GameMode::Uniform;
  int trial = 0;
  Verdict verdict;
  double wall_ms = 0.0;
};

struct ModeStats {
  GameMode mode = GameMode::Uniform;
  int rounds = 0;
  int exceptional = 0;
  int typical = 0;
  double exceptional_rate = 0.0;
  double typical_rate = 0.0;
  double mean_error = 0.0;
  double mean_wall_ms = 0.0;
};

struct GameResult {
  std::vector<GameRound> rounds;  ///< by mode (config order), then trial
  std::vector<ModeStats> stats;   ///< one per mode
};

/// Round t of a mode uses seed base_seed + t. Planted rounds draw a fresh
/// hidden assignment. Rounds may run concurrently; results are merged in
/// round order.
GameResult refutation_game(const GameConfig& game, const RefuterConfig& refuter);

/// Columns mode,trial,n,delta,mu,fraction,err,verdict,wall_ms.
void write_game_csv(std::ostream& out, const GameConfig& game, const RefuterConfig& refuter, const GameResult& r);

/// Shortest decimal for a double as used in CSV output ("%.10g").
std::string format_real(double v);

}  // namespace csgap
