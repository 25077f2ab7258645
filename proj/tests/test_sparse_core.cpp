#include <doctest.h>

#include <cmath>
#include <sstream>

#include "csgap/assignment_search.hpp"
#include "csgap/errors.hpp"
#include "csgap/rational.hpp"
#include "csgap/rng.hpp"
#include "csgap/sparse.hpp"
#include "oracles.hpp"

using namespace csgap;

namespace {

SparseVector random_sparse(Rng& rng, int n, int k) {
  std::vector<Entry> entries;
  while (static_cast<int>(entries.size()) < k) {
    const int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(n))) + 1;
    bool dup = false;
    for (const auto& e : entries) dup = dup || e.index == idx;
    if (!dup) entries.push_back({idx, rng.sign()});
  }
  return SparseVector(n, entries);
}

Sample random_sample(Rng& rng, int n, int size, int k = 3) {
  Sample s(n, k);
  for (int i = 0; i < size; ++i) s.add(random_sparse(rng, n, static_cast<int>(rng.below(4)) % (k + 1)), rng.sign());
  return s;
}

}  // namespace

TEST_CASE("sparse vector invariants") {
  const SparseVector x(6, {Entry{6, -1}, Entry{2, 1}, Entry{3, -1}});
  CHECK(x.nnz() == 3);
  CHECK(x.entries()[0].index == 2);
  CHECK(x.entries()[2].index == 6);
  CHECK(x.at(3) == -1);
  CHECK(x.at(4) == 0);
  CHECK(x.coordinate_sum() == -1);
  CHECK(x.to_dense() == std::vector<int>{0, 1, -1, 0, 0, -1});
  CHECK(SparseVector::from_dense(std::vector<int>{0, 1, -1, 0, 0, -1}) == x);
  CHECK(x.without(2) == SparseVector(6, {Entry{3, -1}, Entry{6, -1}}));
  CHECK(x.negated().at(2) == -1);

  CHECK_THROWS_AS(SparseVector(4, {Entry{5, 1}}), UsageError);
  CHECK_THROWS_AS(SparseVector(4, {Entry{0, 1}}), UsageError);
  CHECK_THROWS_AS(SparseVector(4, {Entry{1, 2}}), UsageError);
  CHECK_THROWS_AS(SparseVector(4, {Entry{1, 1}, Entry{1, -1}}), UsageError);
  CHECK_THROWS_AS(SparseVector(5, {Entry{1, 1}, Entry{2, 1}, Entry{3, 1}, Entry{4, 1}}), UsageError);
}

TEST_CASE("halfspace validation") {
  CHECK_THROWS_AS(Halfspace({1.0, std::nan("")}, 0.0), UsageError);
  CHECK_THROWS_AS(Halfspace({1.0}, INFINITY), UsageError);
  CHECK_THROWS_AS(BinaryAssignment(std::vector<int>{1, 0}), UsageError);
  CHECK_THROWS_AS(Example(SparseVector(3), 0), UsageError);
}

TEST_CASE("eval_halfspace examples") {
  const Halfspace ones(std::vector<double>(4, 1.0), 0.0);
  CHECK(eval_halfspace(ones, SparseVector(4, {Entry{1, 1}, Entry{2, -1}})) == 1);

  const BinaryAssignment psi(std::vector<int>(6, 1));
  CHECK(eval_halfspace(psi, SparseVector::from_dense(std::vector<int>{0, 1, -1, 0, 0, -1})) == -1);

  const Halfspace h({3, -1, 0, 0}, -1);
  CHECK(eval_halfspace(h, SparseVector(4, {Entry{1, 1}})) == 1);

  CHECK_THROWS_AS(eval_halfspace(h, SparseVector(5)), UsageError);
}

TEST_CASE("eval_halfspace agrees with the dense oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(9));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (auto& v : w) v = rng.uniform() * 4 - 2;
    const double b = rng.uniform() * 2 - 1;
    const Halfspace h(w, b);
    const auto x = random_sparse(rng, n, static_cast<int>(rng.below(4)) % (std::min(n, 3) + 1));
    CHECK(eval_halfspace(h, x) == oracle::halfspace(w, b, x.to_dense()));
  }
}

TEST_CASE("binary weights on exactly-3-sparse instances never tie; homogeneity") {
  for (const auto& xd : oracle::all_sparse(5, 3, true)) {
    const auto x = SparseVector::from_dense(xd);
    for (std::uint64_t code = 0; code < 32; ++code) {
      const auto w = BinaryAssignment::from_code(code, 5);
      int dot = 0;
      for (const auto& e : x.entries()) dot += w[e.index] * e.value;
      CHECK((dot == -3 || dot == -1 || dot == 1 || dot == 3));
      CHECK(eval_halfspace(w, x.negated()) == -eval_halfspace(w, x));
    }
  }
}

TEST_CASE("assignment codes follow lexicographic order with +1 < -1") {
  for (std::uint64_t code = 0; code < 64; ++code) {
    const auto a = BinaryAssignment::from_code(code, 6);
    CHECK(std::vector<int>(a.bits().begin(), a.bits().end()) == oracle::assignment(code, 6));
    CHECK(a.code() == code);
    CHECK(BinaryAssignment::parse(a.str()) == a);
  }
}

TEST_CASE("empirical_error examples") {
  const SparseVector x(3, {Entry{1, 1}});
  Sample one(3, 3);
  one.add(x, 1);
  CHECK(empirical_error([](const SparseVector&) { return 1; }, one) == Rational(0, 1));

  Sample two(3, 3);
  two.add(x, 1);
  two.add(x, -1);
  CHECK(empirical_error([](const SparseVector&) { return 1; }, two) == Rational(1, 2));
  CHECK(empirical_error([](const SparseVector&) { return -1; }, two) == Rational(1, 2));

  CHECK_THROWS_AS(empirical_error([](const SparseVector&) { return 1; }, Sample(3, 3)), UsageError);
}

TEST_CASE("empirical_error matches a hand recount") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 8;
    const auto s = random_sample(rng, n, 64);
    std::vector<double> w(n);
    for (auto& v : w) v = rng.uniform() * 2 - 1;
    const Halfspace h(w, rng.uniform() - 0.5);
    long wrong = 0;
    for (const auto& e : s) wrong += oracle::halfspace(w, h.b, e.x.to_dense()) != e.y ? 1 : 0;
    const auto err = empirical_error([&](const SparseVector& x) { return eval_halfspace(h, x); }, s);
    CHECK(oracle::same_fraction(err.num(), err.den(), wrong, 64));
    // error * |S| is an integer
    CHECK((err.num() * 64) % err.den() == 0);
  }
}

TEST_CASE("sample validation and text round trip") {
  Sample s(5, 2);
  CHECK_THROWS_AS(s.add(SparseVector(5, {Entry{1, 1}, Entry{2, 1}, Entry{3, 1}}), 1), UsageError);
  CHECK_THROWS_AS(s.add(SparseVector(4), 1), UsageError);

  Rng rng(9);
  const auto big = random_sample(rng, 12, 200);
  std::ostringstream out;
  write_sample(out, big);
  std::istringstream in(out.str());
  const auto back = read_sample(in);
  REQUIRE(back.size() == big.size());
  for (std::size_t i = 0; i < big.size(); ++i) {
    CHECK(back[i].x == big[i].x);
    CHECK(back[i].y == big[i].y);
  }
  std::ostringstream again;
  write_sample(again, back);
  CHECK(again.str() == out.str());
}

TEST_CASE("sample text format details") {
  std::istringstream in("# sparse-sample n=6 k=3\n\n# comment\n-1 2:+1 3:-1 6:-1\n+1\n");
  const auto s = read_sample(in);
  REQUIRE(s.size() == 2);
  CHECK(s[0].y == -1);
  CHECK(s[0].x == SparseVector::from_dense(std::vector<int>{0, 1, -1, 0, 0, -1}));
  CHECK(s[1].x.nnz() == 0);

  std::istringstream descending("# sparse-sample n=6 k=3\n+1 3:+1 2:+1\n");
  CHECK_THROWS_AS(read_sample(descending), UsageError);
  std::istringstream no_header("+1 1:+1\n");
  CHECK_THROWS_AS(read_sample(no_header), UsageError);
  std::istringstream too_dense("# sparse-sample n=6 k=1\n+1 1:+1 2:+1\n");
  CHECK_THROWS_AS(read_sample(too_dense), UsageError);
  std::istringstream bad_label("# sparse-sample n=6 k=3\n0 1:+1\n");
  CHECK_THROWS_AS(read_sample(bad_label), UsageError);
}

TEST_CASE("rational arithmetic and parsing") {
  CHECK(Rational::parse("0.375") == Rational(3, 8));
  CHECK(Rational::parse("3/8") == Rational(6, 16));
  CHECK(Rational::parse("1e-2") == Rational(1, 100));
  CHECK(Rational::parse("-0.5") == Rational(-1, 2));
  CHECK(Rational(3, 8).str() == "3/8");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
  CHECK(Rational(2, 3) * Rational(3, 4) == Rational(1, 2));
  CHECK(Rational(1, 3) < Rational(3, 8));
  CHECK(Rational(3, 8) <= Rational(3, 8));
  CHECK_THROWS_AS(Rational(1, 0), UsageError);
  CHECK_THROWS_AS(Rational::parse("abc"), UsageError);
}

TEST_CASE("rng determinism and uniformity") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
  }
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(Rng(7).split(1)() == Rng(derive_seed(7, 1))());

  Rng r(1);
  std::vector<long> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[r.below(7)];
  CHECK(oracle::chi_square_p(oracle::chi_square_uniform(counts), 6) > 0.001);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
  }
}

TEST_CASE("erm examples") {
  Sample one(2, 3);
  one.add(SparseVector(2, {Entry{1, 1}}), 1);
  const auto r = erm_binary_halfspace(one, 2);
  CHECK(r.error == Rational(0, 1));
  CHECK(r.weights[1] == 1);

  CHECK_THROWS_AS(erm_binary_halfspace(Sample(25, 3), 25), GuardViolation);
  CHECK_THROWS_AS(erm_binary_halfspace(Sample(41, 3), 41, true), GuardViolation);
  CHECK_THROWS_AS(erm_binary_halfspace(Sample(5, 3), 6), UsageError);
}

TEST_CASE("erm is a true minimizer with the documented tie-break") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(9));  // up to 12
    const auto s = random_sample(rng, n, 40);
    const auto fast = erm_binary_halfspace(s, n);
    const auto slow = erm_binary_halfspace_serial(s, n);
    CHECK(fast.weights == slow.weights);
    CHECK(fast.error == slow.error);

    // oracle: smallest error over every psi, first one in code order
    long best = -1;
    std::uint64_t best_code = 0;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
      const auto psi = oracle::assignment(code, n);
      long wrong = 0;
      for (const auto& e : s) wrong += oracle::halfspace(psi, e.x.to_dense()) != e.y ? 1 : 0;
      if (best < 0 || wrong < best) {
        best = wrong;
        best_code = code;
      }
    }
    CHECK(oracle::same_fraction(fast.error.num(), fast.error.den(), best, static_cast<std::int64_t>(s.size())));
    CHECK(fast.weights.code() == best_code);
  }
}

TEST_CASE("parallel and serial assignment kernels agree") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(14));
    std::vector<BitConstraint> cs;
    for (int k = 0; k < 50; ++k) {
      BitConstraint c;
      for (int j = 0; j < 3; ++j) {
        const auto bit = std::uint64_t{1} << rng.below(static_cast<std::uint64_t>(n));
        c.mask |= bit;
        if (rng.sign() < 0) c.negative |= bit;
      }
      c.lo = static_cast<int>(rng.below(2));
      c.hi = c.lo + static_cast<int>(rng.below(3));
      cs.push_back(c);
    }
    const auto a = max_satisfied(cs, n);
    const auto b = max_satisfied_serial(cs, n);
    CHECK(a.code == b.code);
    CHECK(a.satisfied == b.satisfied);
  }
}
