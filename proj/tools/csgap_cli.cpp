// csgap: formula tooling, learning, the refutation game, the tradeoff
// experiment and decomposition certificates.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csgap/assignment_search.hpp"
#include "csgap/decompmat.hpp"
#include "csgap/errors.hpp"
#include "csgap/experiments.hpp"
#include "csgap/formulas.hpp"
#include "csgap/learners.hpp"
#include "csgap/predictors.hpp"
#include "csgap/refutation.hpp"
#include "csgap/rng.hpp"

namespace {

using namespace csgap;

constexpr int kExitUsage = 2;
constexpr int kExitGuard = 3;
constexpr int kExitNumerical = 4;

struct LearnerFlags {
  double epsilon = 0.1;
  double delta = 0.1;
  double beta = 0.0;
  double eta = LearnerConfig{}.eta;
  int epochs = LearnerConfig{}.epochs;
  bool force = false;

  void attach(CLI::App* app) {
    app->add_option("--epsilon", epsilon, "target excess error")->capture_default_str();
    app->add_option("--failure-prob", delta, "failure probability delta")->capture_default_str();
    app->add_option("--beta", beta, "matrix learner budget (0: 4 log2 n)")->capture_default_str();
    app->add_option("--eta", eta, "matrix learner step size")->capture_default_str();
    app->add_option("--epochs", epochs, "matrix learner passes")->capture_default_str();
    app->add_flag("--force", force, "lift the n <= 24 guard of exhaustive paths");
  }

  LearnerConfig config(std::uint64_t seed) const {
    LearnerConfig c;
    c.epsilon = epsilon;
    c.delta = delta;
    c.beta = beta;
    c.eta = eta;
    c.epochs = epochs;
    c.force = force;
    c.seed = seed;
    c.validate();
    return c;
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::int64_t parse_size(const std::string& text) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size() && v >= 0) return v;
  } catch (const std::logic_error&) {
  }
  throw UsageError("bad sample size '" + text + "'");
}

Rational parse_rational_flag(const std::string& name, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const UsageError& e) {
    throw UsageError("--" + name + ": " + e.what());
  }
}

void warn_force(int n) {
  std::cerr << "warning: exhaustive search over 2^" << n << " assignments, estimated "
            << format_real(estimate_exhaustive_seconds(n, 8.0)) << " s\n";
}

RunManifest manifest_for(const CLI::App* sub) {
  RunManifest m;
  m.command = sub->get_name();
  m.version = CSGAP_VERSION;
  for (const auto* opt : sub->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
      if (value.empty()) value = "true";
    } else if (opt->get_expected_min() == 0) {
      value = "false";
    } else {
      value = opt->get_default_str();
    }
    m.flags[opt->get_name()] = value;
  }
  return m;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int run(int argc, char** argv) {
  CLI::App app{"Agnostic learning of halfspaces over sparse vectors: learners, refutation game, certificates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CSGAP_VERSION));

  // gen-formula
  auto* gen = app.add_subcommand("gen-formula", "sample a uniform or planted 3CNF/3MAJ formula");
  std::string gen_kind = "3maj", gen_mode = "uniform", gen_out;
  int gen_n = 0, gen_m = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "3cnf | 3maj")->check(CLI::IsMember({"3cnf", "3maj"}))->capture_default_str();
  gen->add_option("--n", gen_n, "variables")->required();
  gen->add_option("--clauses", gen_m, "clauses")->required();
  gen->add_option("--mode", gen_mode, "uniform | planted")
      ->check(CLI::IsMember({"uniform", "planted"}))
      ->capture_default_str();
  gen->add_option("--seed", gen_seed, "seed")->capture_default_str();
  gen->add_option("--out", gen_out, "formula file")->required();

  // val
  auto* val = app.add_subcommand("val", "exact value of a formula (n <= 24 unless --force)");
  std::string val_in;
  bool val_force = false;
  val->add_option("--in", val_in, "formula file")->required();
  val->add_flag("--force", val_force, "lift the n <= 24 guard");

  // to-sample
  auto* tos = app.add_subcommand("to-sample", "one labeled example per MAJ clause");
  std::string tos_in, tos_out;
  std::uint64_t tos_seed = 0;
  tos->add_option("--in", tos_in, "MAJ formula file")->required();
  tos->add_option("--seed", tos_seed, "seed for the clause signs")->capture_default_str();
  tos->add_option("--out", tos_out, "sample file")->required();

  // learn
  auto* learn = app.add_subcommand("learn", "train a predictor");
  std::string learn_algo, learn_train, learn_model;
  std::uint64_t learn_seed = 0;
  LearnerFlags learn_flags;
  learn->add_option("--algo", learn_algo, "table | h2 | h3 | erm-binary")->required();
  learn->add_option("--train", learn_train, "training sample")->required();
  learn->add_option("--model", learn_model, "model output file")->required();
  learn->add_option("--seed", learn_seed, "seed")->capture_default_str();
  learn_flags.attach(learn);

  // eval
  auto* eval = app.add_subcommand("eval", "empirical error of a model");
  std::string eval_model, eval_data;
  eval->add_option("--model", eval_model, "model file")->required();
  eval->add_option("--data", eval_data, "sample file")->required();

  // refute
  auto* ref = app.add_subcommand("refute", "run the refutation algorithm on one MAJ formula");
  std::string ref_in, ref_algo = "erm-binary", ref_fraction = "0.5", ref_threshold = "0.375";
  std::uint64_t ref_seed = 0;
  LearnerFlags ref_flags;
  ref->add_option("--in", ref_in, "MAJ formula file")->required();
  ref->add_option("--algo", ref_algo, "learner")->capture_default_str();
  ref->add_option("--fraction", ref_fraction, "subsample fraction in (0,1]")->capture_default_str();
  ref->add_option("--threshold", ref_threshold, "exceptional iff error <= threshold")->capture_default_str();
  ref->add_option("--seed", ref_seed, "seed")->capture_default_str();
  ref_flags.attach(ref);

  // game
  auto* game = app.add_subcommand("game", "Monte Carlo refutation game over planted and uniform formulas");
  std::string game_algo = "erm-binary", game_fraction = "0.5", game_threshold = "0.375", game_modes = "planted,uniform",
              game_out;
  int game_n = 16, game_trials = 100;
  double game_delta = 8.0, game_mu = 0.0;
  std::uint64_t game_seed = 0;
  LearnerFlags game_flags;
  game->add_option("--n", game_n, "variables")->capture_default_str();
  game->add_option("--delta", game_delta, "clause density")->capture_default_str();
  game->add_option("--mu", game_mu, "density exponent")->capture_default_str();
  game->add_option("--trials", game_trials, "rounds per mode")->capture_default_str();
  game->add_option("--modes", game_modes, "comma list of planted,uniform")->capture_default_str();
  game->add_option("--algo", game_algo, "learner")->capture_default_str();
  game->add_option("--fraction", game_fraction, "subsample fraction")->capture_default_str();
  game->add_option("--threshold", game_threshold, "exceptional threshold")->capture_default_str();
  game->add_option("--seed", game_seed, "base seed")->capture_default_str();
  game->add_option("--out", game_out, "CSV output")->required();
  game_flags.attach(game);

  // tradeoff
  auto* trade = app.add_subcommand("tradeoff", "held-out error versus training-set size");
  std::string trade_algos = "table,h3", trade_sizes, trade_out;
  int trade_n = 24, trade_trials = 10;
  std::int64_t trade_test = 4000;
  std::uint64_t trade_seed = 0;
  LearnerFlags trade_flags;
  trade->add_option("--n", trade_n, "variables")->capture_default_str();
  trade->add_option("--algos", trade_algos, "comma list of table,h2,h3,erm-binary")->capture_default_str();
  trade->add_option("--sizes", trade_sizes, "comma list of training sizes")->required();
  trade->add_option("--trials", trade_trials, "trials")->capture_default_str();
  trade->add_option("--test-size", trade_test, "held-out examples per trial")->capture_default_str();
  trade->add_option("--seed", trade_seed, "seed")->capture_default_str();
  trade->add_option("--out", trade_out, "CSV output")->required();
  trade_flags.attach(trade);

  // certify-beta
  auto* cert = app.add_subcommand("certify-beta", "certified decomposability bound for a sign matrix");
  std::string cert_matrix = "tn", cert_out;
  int cert_n = 0, cert_iter = CertifierConfig{}.max_iterations;
  double cert_tol = CertifierConfig{}.tolerance;
  cert->add_option("--matrix", cert_matrix, "matrix family")->check(CLI::IsMember({"tn"}))->capture_default_str();
  cert->add_option("--n", cert_n, "size")->required();
  cert->add_option("--tol", cert_tol, "bisection tolerance")->capture_default_str();
  cert->add_option("--max-iter", cert_iter, "projection sweeps per feasibility test")->capture_default_str();
  cert->add_option("--out", cert_out, "certificate file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();

  if (gen->parsed()) {
    FormulaSourceConfig src;
    src.n = gen_n;
    src.m = gen_m;
    src.seed = gen_seed;
    if (gen_mode == "planted") {
      if (gen_n < 1) throw UsageError("--n must be positive");
      Rng rng(derive_seed(gen_seed, 0x70));
      std::vector<int> bits(static_cast<std::size_t>(gen_n));
      for (auto& b : bits) b = rng.sign();
      src.planted = BinaryAssignment(std::move(bits));
    }
    const auto phi = sample_formula(src, gen_kind == "3cnf" ? ClauseKind::Cnf : ClauseKind::Maj);
    save_formula(gen_out, phi);
    auto m = manifest_for(gen);
    m.seeds = {gen_seed};
    m.outputs = {gen_out};
    if (src.planted) {
      write_text(gen_out + ".planted", src.planted->str() + "\n");
      m.outputs.push_back(gen_out + ".planted");
    }
    m.wall_ms = elapsed_ms(start);
    m.save_beside(gen_out);
    std::cout << "wrote " << gen_out << " (" << phi.size() << " clauses over " << phi.vars() << " variables)\n";
    return 0;
  }

  if (val->parsed()) {
    const auto phi = load_formula(val_in);
    if (val_force && phi.vars() > kExhaustiveMaxN) warn_force(phi.vars());
    const auto v = formula_value(phi, val_force);
    std::cout << "val=" << format_real(v.value.to_double()) << " (" << v.value.str() << ") witness=" << v.witness.str()
              << '\n';
    return 0;
  }

  if (tos->parsed()) {
    const auto phi = load_formula(tos_in);
    const auto s = formula_to_sample(phi, tos_seed);
    save_sample(tos_out, s);
    auto m = manifest_for(tos);
    m.seeds = {tos_seed};
    m.outputs = {tos_out};
    m.wall_ms = elapsed_ms(start);
    m.save_beside(tos_out);
    std::cout << "wrote " << tos_out << " (" << s.size() << " examples)\n";
    return 0;
  }

  if (learn->parsed()) {
    const auto algo = parse_algo(learn_algo);
    const auto s = load_sample(learn_train);
    const auto cfg = learn_flags.config(learn_seed);
    if (algo == Algo::ErmBinary && cfg.force && s.dim() > kExhaustiveMaxN) warn_force(s.dim());
    const auto h = train(algo, s, cfg);
    save_predictor(learn_model, *h);
    auto m = manifest_for(learn);
    m.seeds = {learn_seed};
    m.outputs = {learn_model};
    m.wall_ms = elapsed_ms(start);
    m.save_beside(learn_model);
    if (!s.empty()) {
      const auto err = empirical_error(h->fn(), s);
      std::cout << "train_err=" << format_real(err.to_double()) << " (" << err.str() << ")\n";
    }
    return 0;
  }

  if (eval->parsed()) {
    const auto h = load_predictor(eval_model);
    const auto s = load_sample(eval_data);
    if (s.empty()) throw UsageError(eval_data + " has no examples");
    const auto err = empirical_error(h->fn(), s);
    std::cout << "err=" << format_real(err.to_double()) << " (" << err.str() << ")\n";
    return 0;
  }

  if (ref->parsed()) {
    RefuterConfig rc;
    rc.fraction = parse_rational_flag("fraction", ref_fraction);
    rc.threshold = parse_rational_flag("threshold", ref_threshold);
    rc.learner = parse_algo(ref_algo);
    rc.learner_cfg = ref_flags.config(ref_seed);
    rc.seed = ref_seed;
    const auto phi = load_formula(ref_in);
    const auto v = refute(phi, rc);
    std::cout << verdict_name(v.kind) << " err=" << format_real(v.error.to_double()) << " (" << v.error.str() << ")\n";
    return 0;
  }

  if (game->parsed()) {
    GameConfig gc;
    gc.n = game_n;
    gc.delta = game_delta;
    gc.mu = game_mu;
    gc.trials = game_trials;
    gc.base_seed = game_seed;
    gc.modes.clear();
    for (const auto& name : split_list(game_modes)) {
      if (name == "planted") gc.modes.push_back(GameMode::Planted);
      else if (name == "uniform") gc.modes.push_back(GameMode::Uniform);
      else throw UsageError("unknown mode '" + name + "'");
    }
    RefuterConfig rc;
    rc.fraction = parse_rational_flag("fraction", game_fraction);
    rc.threshold = parse_rational_flag("threshold", game_threshold);
    rc.learner = parse_algo(game_algo);
    rc.learner_cfg = game_flags.config(game_seed);
    if (rc.learner == Algo::ErmBinary && game_n > kExhaustiveMaxN) {
      if (!game_flags.force) throw GuardViolation("erm-binary with n > 24 needs --force");
      warn_force(game_n);
    }
    const auto result = refutation_game(gc, rc);
    std::ofstream out(game_out);
    if (!out) throw UsageError("cannot write " + game_out);
    write_game_csv(out, gc, rc, result);
    out.close();
    for (const auto& st : result.stats) {
      std::cout << mode_name(st.mode) << ": rounds=" << st.rounds << " exceptional=" << st.exceptional
                << " typical=" << st.typical << " mean_err=" << format_real(st.mean_error) << '\n';
    }
    auto m = manifest_for(game);
    for (int t = 0; t < game_trials; ++t) m.seeds.push_back(game_seed + static_cast<std::uint64_t>(t));
    m.outputs = {game_out};
    m.wall_ms = elapsed_ms(start);
    m.save_beside(game_out);
    return 0;
  }

  if (trade->parsed()) {
    TradeoffConfig tc;
    tc.n = trade_n;
    tc.algos.clear();
    for (const auto& a : split_list(trade_algos)) tc.algos.push_back(parse_algo(a));
    for (const auto& s : split_list(trade_sizes)) tc.sizes.push_back(parse_size(s));
    tc.trials = trade_trials;
    tc.test_size = trade_test;
    tc.seed = trade_seed;
    tc.learner = trade_flags.config(trade_seed);
    for (const auto a : tc.algos) {
      if (a == Algo::ErmBinary && trade_n > kExhaustiveMaxN) {
        if (!trade_flags.force) throw GuardViolation("erm-binary with n > 24 needs --force");
        warn_force(trade_n);
      }
    }
    const auto rows = run_tradeoff(tc);
    std::ofstream out(trade_out);
    if (!out) throw UsageError("cannot write " + trade_out);
    write_tradeoff_csv(out, rows);
    out.close();
    auto m = manifest_for(trade);
    m.seeds = {trade_seed};
    m.outputs = {trade_out};
    m.wall_ms = elapsed_ms(start);
    m.save_beside(trade_out);
    std::cout << "wrote " << trade_out << " (" << rows.size() << " rows)\n";
    return 0;
  }

  if (cert->parsed()) {
    CertifierConfig cc;
    cc.tolerance = cert_tol;
    cc.max_iterations = cert_iter;
    if (cert_n < 1) throw UsageError("--n must be positive");
    if (!(cert_tol > 0)) throw UsageError("--tol must be positive");
    if (cert_iter < 1) throw UsageError("--max-iter must be positive");
    const auto w = triangular_matrix(cert_n);
    const auto r = certify_min_beta(w, cc);
    const auto report = verify_decomposition(w, r.decomposition);
    if (!report.passed) throw NumericalFailure("certificate failed verification: " + report.summary());
    save_decomposition(cert_out, r.decomposition);
    auto m = manifest_for(cert);
    m.outputs = {cert_out};
    m.wall_ms = elapsed_ms(start);
    m.save_beside(cert_out);
    std::cout << "beta_hat=" << format_real(r.beta_hat) << " lower_bound=" << format_real(r.lower_bound)
              << " spectral=" << format_real(spectral_split(symmetrize(w.to_real())).beta) << '\n';
    return 0;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const csgap::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const csgap::GuardViolation& e) {
    std::cerr << "guard: " << e.what() << '\n';
    return kExitGuard;
  } catch (const csgap::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
