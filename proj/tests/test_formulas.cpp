#include <doctest.h>

#include <set>
#include <sstream>

#include "csgap/errors.hpp"
#include "csgap/formulas.hpp"
#include "csgap/rng.hpp"
#include "oracles.hpp"

using namespace csgap;

namespace {

Clause3 maj(int a, int b, int c) {
  auto lit = [](int v) { return Literal{v < 0 ? -v : v, v < 0 ? -1 : 1}; };
  return Clause3(ClauseKind::Maj, {lit(a), lit(b), lit(c)});
}

oracle::Lits lits_of(const Clause3& c) {
  oracle::Lits out;
  for (const auto& l : c.literals()) out.emplace_back(l.var, l.sign);
  return out;
}

Formula uniform(int n, int m, std::uint64_t seed, ClauseKind kind = ClauseKind::Maj) {
  FormulaSourceConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.seed = seed;
  return sample_formula(cfg, kind);
}

// Every clause over n variables with distinct, increasing variables.
std::vector<Clause3> all_clauses(int n) {
  std::vector<Clause3> out;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      for (int c = b + 1; c <= n; ++c)
        for (int s = 0; s < 8; ++s)
          out.push_back(maj((s & 1) ? -a : a, (s & 2) ? -b : b, (s & 4) ? -c : c));
  return out;
}

constexpr long kFrozenBest = 38;

}  // namespace

TEST_CASE("clause validation") {
  CHECK_THROWS_AS(maj(1, 1, 2), UsageError);
  CHECK_THROWS_AS(maj(1, -1, 2), UsageError);
  CHECK_THROWS_AS(Clause3(ClauseKind::Maj, {Literal{0, 1}, Literal{1, 1}, Literal{2, 1}}), UsageError);
  CHECK_THROWS_AS(Clause3(ClauseKind::Maj, {Literal{1, 0}, Literal{2, 1}, Literal{3, 1}}), UsageError);
  Formula f(3, ClauseKind::Maj);
  CHECK_THROWS_AS(f.add(maj(1, 2, 4)), UsageError);
  CHECK_THROWS_AS(f.add(Clause3(ClauseKind::Cnf, {Literal{1, 1}, Literal{2, 1}, Literal{3, 1}})), UsageError);
}

TEST_CASE("eval_clause examples") {
  CHECK(eval_clause(maj(1, 2, 3), BinaryAssignment({1, 1, -1})));
  CHECK_FALSE(eval_clause(Clause3(ClauseKind::Cnf, {Literal{1, -1}, Literal{2, -1}, Literal{3, -1}}),
                          BinaryAssignment({1, 1, 1})));
  CHECK(eval_clause(maj(-2, 3, 6), BinaryAssignment::ones(6)));
  CHECK_FALSE(eval_clause(maj(-2, -3, 6), BinaryAssignment::ones(6)));
}

TEST_CASE("eval_clause agrees with literal counting") {
  for (const auto& c : all_clauses(4)) {
    for (std::uint64_t code = 0; code < 16; ++code) {
      const auto psi = BinaryAssignment::from_code(code, 4);
      const auto dense = oracle::assignment(code, 4);
      CHECK(eval_clause(c, psi) == oracle::maj_sat(lits_of(c), dense));
      const Clause3 cnf(ClauseKind::Cnf, c.literals());
      CHECK(eval_clause(cnf, psi) == oracle::or_sat(lits_of(c), dense));
    }
  }
}

TEST_CASE("formula_value examples") {
  Formula one(5, ClauseKind::Maj);
  one.add(maj(1, -4, 5));
  CHECK(formula_value(one).value == Rational(1, 1));

  Formula opposite(3, ClauseKind::Maj);
  opposite.add(maj(1, 2, 3));
  opposite.add(maj(-1, -2, -3));
  const auto v = formula_value(opposite);
  CHECK(v.value == Rational(1, 2));
  CHECK(v.witness == BinaryAssignment::ones(3));

  Formula big(25, ClauseKind::Maj);
  big.add(maj(1, 2, 25));
  CHECK_THROWS_AS(formula_value(big), GuardViolation);
}

TEST_CASE("formula_value matches the exhaustive oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    for (auto kind : {ClauseKind::Maj, ClauseKind::Cnf}) {
      const auto phi = uniform(n, 6 * n, seed, kind);
      std::vector<oracle::Lits> cl;
      for (const auto& c : phi.clauses()) cl.push_back(lits_of(c));
      const long best = oracle::max_sat(cl, n, kind == ClauseKind::Maj);
      const auto fast = formula_value(phi);
      const auto slow = formula_value_serial(phi);
      CHECK(oracle::same_fraction(fast.value.num(), fast.value.den(), best, static_cast<std::int64_t>(phi.size())));
      CHECK(fast.value == slow.value);
      CHECK(fast.witness == slow.witness);
      CHECK(oracle::same_fraction(count_satisfied(phi, fast.witness), static_cast<std::int64_t>(phi.size()),
                                  fast.value.num(), fast.value.den()));
    }
  }
}

TEST_CASE("frozen value of a uniform formula at n=10, m=60") {
  const auto phi = uniform(10, 60, 2026);
  std::vector<oracle::Lits> cl;
  for (const auto& c : phi.clauses()) cl.push_back(lits_of(c));
  const long best = oracle::max_sat(cl, 10, true);
  CHECK(formula_value(phi).value == Rational(best, 60));
  INFO("oracle best = " << best);
  // frozen from the oracle above
  CHECK(formula_value(phi).value == Rational(kFrozenBest, 60));
}

TEST_CASE("sample_formula") {
  SUBCASE("planted formulas are satisfied by the hidden assignment") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> bits(10);
      for (auto& b : bits) b = rng.sign();
      FormulaSourceConfig cfg;
      cfg.n = 10;
      cfg.m = 50;
      cfg.seed = static_cast<std::uint64_t>(trial);
      cfg.planted = BinaryAssignment(bits);
      for (auto kind : {ClauseKind::Maj, ClauseKind::Cnf}) {
        const auto phi = sample_formula(cfg, kind);
        CHECK(count_satisfied(phi, *cfg.planted) == 50);
        CHECK(formula_value(phi).value == Rational(1, 1));
      }
    }
  }
  SUBCASE("determinism and seed sensitivity") {
    CHECK(uniform(12, 72, 1) == uniform(12, 72, 1));
    CHECK_FALSE(uniform(12, 72, 1) == uniform(12, 72, 2));
  }
  SUBCASE("a fixed assignment satisfies about half of uniform MAJ clauses") {
    const auto phi = uniform(12, 5000, 77);
    for (std::uint64_t code : {0ULL, 1234ULL, 4095ULL}) {
      const double frac = static_cast<double>(count_satisfied(phi, BinaryAssignment::from_code(code, 12))) / 5000.0;
      CHECK(std::abs(frac - 0.5) <= 0.03);
    }
  }
  SUBCASE("variables and signs are uniform") {
    const auto phi = uniform(9, 9000, 5);
    std::vector<long> var_counts(9, 0), sign_counts(2, 0);
    for (const auto& c : phi.clauses()) {
      std::set<int> vars;
      for (const auto& l : c.literals()) {
        ++var_counts[static_cast<std::size_t>(l.var - 1)];
        ++sign_counts[l.sign > 0 ? 0 : 1];
        vars.insert(l.var);
      }
      CHECK(vars.size() == 3);
    }
    CHECK(oracle::chi_square_p(oracle::chi_square_uniform(var_counts), 8) > 0.001);
    CHECK(oracle::chi_square_p(oracle::chi_square_uniform(sign_counts), 1) > 0.001);
  }
  SUBCASE("bad configs") {
    FormulaSourceConfig cfg;
    cfg.n = 2;
    cfg.m = 1;
    CHECK_THROWS_AS(sample_formula(cfg, ClauseKind::Maj), UsageError);
    cfg.n = 5;
    cfg.m = 0;
    CHECK_THROWS_AS(sample_formula(cfg, ClauseKind::Maj), UsageError);
    cfg.m = 1;
    cfg.planted = BinaryAssignment::ones(4);
    CHECK_THROWS_AS(sample_formula(cfg, ClauseKind::Maj), UsageError);
  }
}

TEST_CASE("clause_to_example examples") {
  const auto e1 = clause_to_example(maj(-2, 3, 6), 6, -1);
  CHECK(e1.x.to_dense() == std::vector<int>{0, 1, -1, 0, 0, -1});
  CHECK(e1.y == -1);
  const auto e2 = clause_to_example(maj(1, -2, 4), 4, 1);
  CHECK(e2.x.to_dense() == std::vector<int>{1, -1, 0, 1});
  CHECK(e2.y == 1);
  const auto e3 = clause_to_example(maj(1, 2, 3), 5, 1);
  CHECK(e3.x.to_dense() == std::vector<int>{1, 1, 1, 0, 0});

  CHECK_THROWS_AS(clause_to_example(Clause3(ClauseKind::Cnf, {Literal{1, 1}, Literal{2, 1}, Literal{3, 1}}), 3, 1),
                  UsageError);
  CHECK_THROWS_AS(clause_to_example(maj(1, 2, 3), 5, 0), UsageError);

  Formula cnf(3, ClauseKind::Cnf);
  cnf.add(Clause3(ClauseKind::Cnf, {Literal{1, 1}, Literal{2, 1}, Literal{3, 1}}));
  CHECK_THROWS_AS(formula_to_sample(cnf, 1), UsageError);
}

TEST_CASE("assignment_to_hypothesis") {
  const auto h = assignment_to_hypothesis(BinaryAssignment({1, -1, 1}));
  CHECK(h.w == std::vector<double>{1, -1, 1});
  CHECK(h.b == 0.0);
  CHECK(eval_halfspace(assignment_to_hypothesis(BinaryAssignment::ones(5)),
                       SparseVector::from_dense(std::vector<int>{1, 1, 1, 0, 0})) == 1);
}

TEST_CASE("correspondence: hypothesis correct iff clause satisfied (exhaustive, n <= 6)") {
  for (int n = 3; n <= 6; ++n) {
    for (const auto& c : all_clauses(n)) {
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        const auto psi = BinaryAssignment::from_code(code, n);
        const auto h = assignment_to_hypothesis(psi);
        const bool sat = oracle::maj_sat(lits_of(c), oracle::assignment(code, n));
        for (int b : {1, -1}) {
          const auto e = clause_to_example(c, n, b);
          const int pred = oracle::halfspace(oracle::assignment(code, n), e.x.to_dense());
          CHECK(((pred == e.y) == sat));
          CHECK(((eval_halfspace(h, e.x) == e.y) == sat));
        }
      }
    }
  }
}

TEST_CASE("two-generator property") {
  const int n = 5;
  for (const auto& xd : oracle::all_sparse(n, 3, true)) {
    int generators = 0;
    for (const auto& c : all_clauses(n)) {
      for (int b : {1, -1}) {
        const auto e = clause_to_example(c, n, b);
        if (e.x.to_dense() == xd) {
          ++generators;
          CHECK(e.y == b);
        }
      }
    }
    CHECK(generators == 2);
  }
}

TEST_CASE("formula_to_sample") {
  const auto phi = uniform(8, 40, 3);
  const auto s1 = formula_to_sample(phi, 10);
  const auto s2 = formula_to_sample(phi, 10);
  REQUIRE(s1.size() == phi.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].x == s2[i].x);
    CHECK(s1[i].y == s2[i].y);
    CHECK(s1[i].x.nnz() == 3);
  }
  // b-invariance: the error of every Psi is the unsatisfied fraction for any seed
  for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
    const auto s = formula_to_sample(phi, seed);
    for (std::uint64_t code = 0; code < 256; code += 7) {
      const auto psi = BinaryAssignment::from_code(code, 8);
      const auto err = empirical_error([&](const SparseVector& x) { return eval_halfspace(psi, x); }, s);
      CHECK(err == Rational(40 - count_satisfied(phi, psi), 40));
    }
  }
}

TEST_CASE("err-val identity for small formulas") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 5 + static_cast<int>(seed % 6);
    const auto phi = uniform(n, 5 * n, seed);
    const auto val = formula_value(phi).value;
    for (std::uint64_t sseed : {3ULL, 4ULL}) {
      const auto s = formula_to_sample(phi, sseed);
      std::int64_t best = -1;
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        const auto psi = oracle::assignment(code, n);
        std::int64_t wrong = 0;
        for (const auto& e : s) wrong += oracle::halfspace(psi, e.x.to_dense()) != e.y ? 1 : 0;
        if (best < 0 || wrong < best) best = wrong;
      }
      CHECK(Rational(best, static_cast<std::int64_t>(s.size())) == Rational(1, 1) - val);
    }
  }
}

TEST_CASE("label balance per position") {
  const auto phi = uniform(10, 20, 8);
  std::vector<long> plus(phi.size(), 0);
  const int seeds = 10000;
  for (int s = 0; s < seeds; ++s) {
    const auto sample = formula_to_sample(phi, static_cast<std::uint64_t>(s));
    for (std::size_t i = 0; i < sample.size(); ++i) plus[i] += sample[i].y > 0 ? 1 : 0;
  }
  for (std::size_t i = 0; i < plus.size(); ++i) {
    const double mean = (2.0 * static_cast<double>(plus[i]) - seeds) / seeds;
    CHECK(std::abs(mean) <= 0.05);
  }
}

TEST_CASE("parse and serialize") {
  const auto a = parse_formula("p maj3 6 1\n-2 3 6 0\n");
  CHECK(a.vars() == 6);
  CHECK(a.kind() == ClauseKind::Maj);
  REQUIRE(a.size() == 1);
  CHECK(a.clauses()[0] == maj(-2, 3, 6));

  const auto b = parse_formula("c comment\np cnf 3 1\n1 -2 3 0\n");
  CHECK(b.kind() == ClauseKind::Cnf);
  CHECK(b.clauses()[0] == Clause3(ClauseKind::Cnf, {Literal{1, 1}, Literal{2, -1}, Literal{3, 1}}));

  CHECK_THROWS_AS(parse_formula("1 2 3 0\n"), UsageError);
  CHECK_THROWS_AS(parse_formula("p maj3 3 1\n1 2 4 0\n"), UsageError);
  CHECK_THROWS_AS(parse_formula("p maj3 3 1\n1 1 2 0\n"), UsageError);
  CHECK_THROWS_AS(parse_formula("p maj3 4 1\n1 2 0\n"), UsageError);
  CHECK_THROWS_AS(parse_formula("p maj3 4 1\n1 2 3 4 0\n"), UsageError);
  CHECK_THROWS_AS(parse_formula("p maj3 4 2\n1 2 3 0\n"), UsageError);
  CHECK_THROWS_AS(parse_formula("p xor 4 1\n1 2 3 0\n"), UsageError);
}

TEST_CASE("round trip on 1000 random formulas") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const int n = 3 + static_cast<int>(rng.below(20));
    const int m = 1 + static_cast<int>(rng.below(30));
    const auto kind = rng.sign() > 0 ? ClauseKind::Maj : ClauseKind::Cnf;
    const auto phi = uniform(n, m, rng(), kind);
    const auto text = serialize_formula(phi);
    const auto back = parse_formula(text);
    CHECK(back == phi);
    CHECK(serialize_formula(back) == text);
  }
}
