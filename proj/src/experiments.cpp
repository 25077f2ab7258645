#include "csgap/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "csgap/errors.hpp"
#include "csgap/refutation.hpp"

namespace csgap {

std::int64_t exactly3_count(int n) {
  if (n < 3) return 0;
  const std::int64_t nn = n;
  return nn * (nn - 1) * (nn - 2) / 6 * 8;
}

SparseVector uniform_exactly3(Rng& rng, int n) {
  if (n < 3) throw UsageError("need n >= 3");
  const auto un = static_cast<std::uint64_t>(n);
  int a = static_cast<int>(rng.below(un)) + 1;
  int b = static_cast<int>(rng.below(un - 1)) + 1;
  if (b >= a) ++b;
  int c = static_cast<int>(rng.below(un - 2)) + 1;
  if (c >= std::min(a, b)) ++c;
  if (c >= std::max(a, b)) ++c;
  return SparseVector(n, {Entry{a, rng.sign()}, Entry{b, rng.sign()}, Entry{c, rng.sign()}});
}

void TradeoffConfig::validate() const {
  if (n < 3) throw UsageError("tradeoff needs n >= 3");
  if (algos.empty()) throw UsageError("no algorithms selected");
  if (sizes.empty()) throw UsageError("no sample sizes given");
  for (auto m : sizes) {
    if (m < 0) throw UsageError("sample sizes must be non-negative");
  }
  if (trials < 1) throw UsageError("trials must be >= 1");
  if (test_size < 1) throw UsageError("test size must be positive");
  learner.validate();
}

std::vector<TradeoffRow> run_tradeoff(const TradeoffConfig& cfg) {
  cfg.validate();
  std::vector<std::int64_t> sizes = cfg.sizes;
  const auto largest = *std::max_element(sizes.begin(), sizes.end());
  const std::size_t per_trial = sizes.size() * cfg.algos.size();
  std::vector<TradeoffRow> rows(per_trial * static_cast<std::size_t>(cfg.trials));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(cfg.trials));

#pragma omp parallel for schedule(dynamic, 1) if (cfg.learner.policy == ExecutionPolicy::Parallel)
  for (int trial = 0; trial < cfg.trials; ++trial) {
    try {
      const std::uint64_t tseed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
      Rng target_rng(derive_seed(tseed, 1));
      std::vector<int> bits(static_cast<std::size_t>(cfg.n));
      for (auto& b : bits) b = target_rng.sign();
      const BinaryAssignment target(std::move(bits));

      Rng pool_rng(derive_seed(tseed, 2));
      std::vector<Example> pool;
      pool.reserve(static_cast<std::size_t>(largest));
      for (std::int64_t k = 0; k < largest; ++k) {
        auto x = uniform_exactly3(pool_rng, cfg.n);
        const int y = eval_halfspace(target, x);
        pool.emplace_back(std::move(x), y);
      }
      Rng test_rng(derive_seed(tseed, 3));
      Sample test(cfg.n, 3);
      test.reserve(static_cast<std::size_t>(cfg.test_size));
      for (std::int64_t k = 0; k < cfg.test_size; ++k) {
        auto x = uniform_exactly3(test_rng, cfg.n);
        const int y = eval_halfspace(target, x);
        test.add(std::move(x), y);
      }

      LearnerConfig lc = cfg.learner;
      lc.seed = derive_seed(tseed, 4);
      lc.policy = ExecutionPolicy::Serial;
      std::size_t slot = static_cast<std::size_t>(trial) * per_trial;
      for (const auto m : sizes) {
        Sample train_set(cfg.n, 3);
        train_set.reserve(static_cast<std::size_t>(m));
        for (std::int64_t k = 0; k < m; ++k) train_set.add(pool[static_cast<std::size_t>(k)]);
        for (const auto algo : cfg.algos) {
          const auto start = std::chrono::steady_clock::now();
          const auto h = train(algo, train_set, lc);
          auto& row = rows[slot++];
          row.algo = algo;
          row.n = cfg.n;
          row.m = m;
          row.trial = trial;
          if (m > 0) row.train_error = empirical_error(h->fn(), train_set);
          row.test_error = empirical_error(h->fn(), test);
          row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        }
      }
    } catch (...) {
      failures[static_cast<std::size_t>(trial)] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return rows;
}

void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows) {
  out << "algo,n,m,trial,train_err,test_err,wall_ms\n";
  for (const auto& r : rows) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out << algo_name(r.algo) << ',' << r.n << ',' << r.m << ',' << r.trial << ','
        << (r.train_error ? format_real(r.train_error->to_double()) : std::string("NA")) << ','
        << format_real(r.test_error.to_double()) << ',' << ms << '\n';
  }
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["flags"] = flags;
  j["seeds"] = seeds;
  j["version"] = version;
  j["wall_ms"] = wall_ms;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

std::string RunManifest::save_beside(const std::string& path) const {
  const std::string target = path + ".manifest.json";
  std::ofstream out(target);
  if (!out) throw UsageError("cannot write " + target);
  out << to_json();
  return target;
}

}  // namespace csgap
