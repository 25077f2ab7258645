#include "csgap/refutation.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>

#include "csgap/errors.hpp"
#include "csgap/rng.hpp"

namespace csgap {
namespace {

// Sub-stream tags.
constexpr std::uint64_t kSampleTag = 1;
constexpr std::uint64_t kSubsampleTag = 2;
constexpr std::uint64_t kLearnerTag = 3;
constexpr std::uint64_t kFormulaTag = 4;
constexpr std::uint64_t kPlantedTag = 5;
constexpr std::uint64_t kRefuterTag = 6;

}  // namespace

void RefuterConfig::validate() const {
  if (!(fraction > Rational(0, 1) && fraction <= Rational(1, 1))) throw UsageError("fraction must lie in (0,1]");
  if (!(threshold > Rational(0, 1) && threshold < Rational(1, 1))) throw UsageError("threshold must lie in (0,1)");
  learner_cfg.validate();
}

std::string verdict_name(Verdict::Kind k) { return k == Verdict::Kind::Exceptional ? "exceptional" : "typical"; }

Verdict refute(const Formula& phi, const RefuterConfig& cfg) {
  cfg.validate();
  if (phi.size() == 0) throw UsageError("refute needs at least one clause");
  const Sample s = formula_to_sample(phi, derive_seed(cfg.seed, kSampleTag));
  const auto total = static_cast<std::int64_t>(s.size());
  // ceil(fraction * |S|) in integers
  const std::int64_t sub = (cfg.fraction.num() * total + cfg.fraction.den() - 1) / cfg.fraction.den();
  Rng rng(derive_seed(cfg.seed, kSubsampleTag));
  Sample s1(s.dim(), s.sparsity());
  s1.reserve(static_cast<std::size_t>(sub));
  for (std::int64_t k = 0; k < sub; ++k) s1.add(s[rng.below(static_cast<std::uint64_t>(total))]);

  LearnerConfig lc = cfg.learner_cfg;
  lc.seed = derive_seed(cfg.seed, kLearnerTag);
  const auto h = train(cfg.learner, s1, lc);
  Verdict v;
  v.error = empirical_error(h->fn(), s);
  v.kind = v.error <= cfg.threshold ? Verdict::Kind::Exceptional : Verdict::Kind::Typical;
  v.sample_size = s.size();
  v.subsample_size = s1.size();
  return v;
}

std::string mode_name(GameMode m) { return m == GameMode::Planted ? "planted" : "uniform"; }

void GameConfig::validate() const {
  if (n < 3) throw UsageError("game needs n >= 3");
  if (!(delta >= 1) || !std::isfinite(delta)) throw UsageError("delta must be >= 1");
  if (!(mu >= 0 && mu <= 0.5)) throw UsageError("mu must lie in [0, 0.5]");
  if (trials < 1) throw UsageError("trials must be >= 1");
  if (modes.empty()) throw UsageError("no game modes selected");
}

int GameConfig::clauses() const {
  return static_cast<int>(std::llround(delta * std::pow(static_cast<double>(n), 1.0 + mu)));
}

GameResult refutation_game(const GameConfig& game, const RefuterConfig& refuter) {
  game.validate();
  refuter.validate();
  const int m = game.clauses();
  GameResult result;
  result.rounds.resize(game.modes.size() * static_cast<std::size_t>(game.trials));
  std::vector<std::exception_ptr> failures(result.rounds.size());
  const auto total = static_cast<std::int64_t>(result.rounds.size());
#pragma omp parallel for schedule(dynamic, 1) if (game.policy == ExecutionPolicy::Parallel)
  for (std::int64_t k = 0; k < total; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const GameMode mode = game.modes[idx / static_cast<std::size_t>(game.trials)];
    const int trial = static_cast<int>(idx % static_cast<std::size_t>(game.trials));
    try {
      const auto start = std::chrono::steady_clock::now();
      const std::uint64_t seed = game.base_seed + static_cast<std::uint64_t>(trial);
      const std::uint64_t mode_seed = derive_seed(seed, mode == GameMode::Planted ? 11 : 12);
      FormulaSourceConfig src;
      src.n = game.n;
      src.m = m;
      src.seed = derive_seed(mode_seed, kFormulaTag);
      if (mode == GameMode::Planted) {
        Rng rng(derive_seed(mode_seed, kPlantedTag));
        std::vector<int> bits(static_cast<std::size_t>(game.n));
        for (auto& b : bits) b = rng.sign();
        src.planted = BinaryAssignment(std::move(bits));
      }
      const Formula phi = sample_formula(src, ClauseKind::Maj);
      RefuterConfig rc = refuter;
      rc.seed = derive_seed(mode_seed, kRefuterTag);
      auto& round = result.rounds[idx];
      round.mode = mode;
      round.trial = trial;
      round.verdict = refute(phi, rc);
      round.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    } catch (...) {
      failures[idx] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  for (std::size_t mi = 0; mi < game.modes.size(); ++mi) {
    ModeStats st;
    st.mode = game.modes[mi];
    double err_sum = 0.0;
    double ms_sum = 0.0;
    for (int t = 0; t < game.trials; ++t) {
      const auto& r = result.rounds[mi * static_cast<std::size_t>(game.trials) + static_cast<std::size_t>(t)];
      ++st.rounds;
      if (r.verdict.kind == Verdict::Kind::Exceptional) ++st.exceptional;
      else ++st.typical;
      err_sum += r.verdict.error.to_double();
      ms_sum += r.wall_ms;
    }
    st.exceptional_rate = static_cast<double>(st.exceptional) / st.rounds;
    st.typical_rate = static_cast<double>(st.typical) / st.rounds;
    st.mean_error = err_sum / st.rounds;
    st.mean_wall_ms = ms_sum / st.rounds;
    result.stats.push_back(st);
  }
  return result;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_game_csv(std::ostream& out, const GameConfig& game, const RefuterConfig& refuter, const GameResult& r) {
  out << "mode,trial,n,delta,mu,fraction,err,verdict,wall_ms\n";
  for (const auto& round : r.rounds) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", round.wall_ms);
    out << mode_name(round.mode) << ',' << round.trial << ',' << game.n << ',' << format_real(game.delta) << ','
        << format_real(game.mu) << ',' << format_real(refuter.fraction.to_double()) << ','
        << format_real(round.verdict.error.to_double()) << ',' << verdict_name(round.verdict.kind) << ',' << ms
        << '\n';
  }
}

}  // namespace csgap
