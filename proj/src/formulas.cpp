#include "csgap/formulas.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "csgap/assignment_search.hpp"
#include "csgap/errors.hpp"
#include "csgap/rng.hpp"

namespace csgap {

Clause3::Clause3(ClauseKind kind, std::array<Literal, 3> lits) : kind_(kind), lits_(lits) {
  for (const auto& l : lits_) {
    if (l.var < 1) throw UsageError("literal variable index must be >= 1");
    if (l.sign != 1 && l.sign != -1) throw UsageError("literal sign must be +1 or -1");
  }
  if (lits_[0].var == lits_[1].var || lits_[0].var == lits_[2].var || lits_[1].var == lits_[2].var) {
    throw UsageError("clause repeats a variable");
  }
}

int Clause3::max_var() const { return std::max({lits_[0].var, lits_[1].var, lits_[2].var}); }

Formula::Formula(int n, ClauseKind kind) : n_(n), kind_(kind) {
  if (n < 1) throw UsageError("formula needs at least one variable");
}

void Formula::add(const Clause3& c) {
  if (c.kind() != kind_) throw UsageError("clause kind differs from formula kind");
  if (c.max_var() > n_) throw UsageError("clause variable index out of range");
  clauses_.push_back(c);
}

bool eval_clause(const Clause3& c, const BinaryAssignment& psi) {
  int agree = 0;
  for (const auto& l : c.literals()) {
    if (l.var > psi.dim()) throw UsageError("clause variable index out of range");
    agree += psi[l.var] == l.sign ? 1 : 0;
  }
  return c.kind() == ClauseKind::Cnf ? agree >= 1 : agree >= 2;
}

std::int64_t count_satisfied(const Formula& phi, const BinaryAssignment& psi) {
  std::int64_t count = 0;
  for (const auto& c : phi.clauses()) count += eval_clause(c, psi) ? 1 : 0;
  return count;
}

FormulaValue formula_value(const Formula& phi, bool force) {
  const int n = phi.vars();
  check_exhaustive_guard(n, force);
  if (phi.size() == 0) throw UsageError("value of an empty formula");
  std::vector<BitConstraint> constraints;
  constraints.reserve(phi.size());
  // disagreeing literals: at most 2 for OR, at most 1 for majority
  const int allowed = phi.kind() == ClauseKind::Cnf ? 2 : 1;
  for (const auto& c : phi.clauses()) {
    BitConstraint bc;
    for (const auto& l : c.literals()) {
      const std::uint64_t bit = std::uint64_t{1} << (n - l.var);
      bc.mask |= bit;
      if (l.sign < 0) bc.negative |= bit;
    }
    bc.lo = 0;
    bc.hi = allowed;
    constraints.push_back(bc);
  }
  const auto best = max_satisfied(constraints, n);
  return {Rational(best.satisfied, static_cast<std::int64_t>(phi.size())), BinaryAssignment::from_code(best.code, n)};
}

FormulaValue formula_value_serial(const Formula& phi) {
  const int n = phi.vars();
  check_exhaustive_guard(n, false);
  if (phi.size() == 0) throw UsageError("value of an empty formula");
  std::int64_t best = -1;
  std::uint64_t best_code = 0;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
    const auto count = count_satisfied(phi, BinaryAssignment::from_code(code, n));
    if (count > best) {
      best = count;
      best_code = code;
    }
  }
  return {Rational(best, static_cast<std::int64_t>(phi.size())), BinaryAssignment::from_code(best_code, n)};
}

namespace {

Clause3 uniform_clause(Rng& rng, int n, ClauseKind kind) {
  const auto un = static_cast<std::uint64_t>(n);
  const int a = static_cast<int>(rng.below(un)) + 1;
  int b = static_cast<int>(rng.below(un - 1)) + 1;
  if (b >= a) ++b;
  int c = static_cast<int>(rng.below(un - 2)) + 1;
  // skip the two taken indices in increasing order
  const int lo = std::min(a, b);
  const int hi = std::max(a, b);
  if (c >= lo) ++c;
  if (c >= hi) ++c;
  return Clause3(kind, {Literal{a, rng.sign()}, Literal{b, rng.sign()}, Literal{c, rng.sign()}});
}

}  // namespace

Formula sample_formula(const FormulaSourceConfig& cfg, ClauseKind kind) {
  if (cfg.n < 3) throw UsageError("need at least 3 variables");
  if (cfg.m < 1) throw UsageError("need at least one clause");
  if (cfg.planted && cfg.planted->dim() != cfg.n) throw UsageError("planted assignment has wrong length");
  Rng rng(cfg.seed);
  Formula phi(cfg.n, kind);
  for (int k = 0; k < cfg.m; ++k) {
    auto c = uniform_clause(rng, cfg.n, kind);
    if (cfg.planted) {
      while (!eval_clause(c, *cfg.planted)) c = uniform_clause(rng, cfg.n, kind);
    }
    phi.add(c);
  }
  return phi;
}

Example clause_to_example(const Clause3& c, int n, int b) {
  if (c.kind() != ClauseKind::Maj) throw UsageError("clause_to_example needs a MAJ clause");
  if (b != 1 && b != -1) throw UsageError("b must be +1 or -1");
  if (c.max_var() > n) throw UsageError("clause variable index out of range");
  const auto& l = c.literals();
  SparseVector x(n, {Entry{l[0].var, b * l[0].sign}, Entry{l[1].var, b * l[1].sign}, Entry{l[2].var, b * l[2].sign}});
  return Example(std::move(x), b);
}

Sample formula_to_sample(const Formula& phi, std::uint64_t seed) {
  if (phi.kind() != ClauseKind::Maj) throw UsageError("formula_to_sample needs a MAJ formula");
  Rng rng(seed);
  Sample s(phi.vars(), 3);
  s.reserve(phi.size());
  for (const auto& c : phi.clauses()) s.add(clause_to_example(c, phi.vars(), rng.sign()));
  return s;
}

Halfspace assignment_to_hypothesis(const BinaryAssignment& psi) {
  return Halfspace(std::vector<double>(psi.bits().begin(), psi.bits().end()), 0.0);
}

Formula parse_formula(std::istream& in) {
  std::string line;
  std::optional<Formula> phi;
  long declared = 0;
  std::vector<Literal> pending;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw UsageError("formula line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      if (phi) fail("second header");
      std::string format;
      long n = 0;
      if (!(ls >> format >> n >> declared)) fail("malformed header");
      std::string extra;
      if (ls >> extra) fail("malformed header");
      if (n < 1 || declared < 0) fail("malformed header");
      if (format == "cnf") phi.emplace(static_cast<int>(n), ClauseKind::Cnf);
      else if (format == "maj3") phi.emplace(static_cast<int>(n), ClauseKind::Maj);
      else fail("unknown format '" + format + "'");
      continue;
    }
    if (!phi) fail("clause before header");
    ls.clear();
    ls.str(line);
    std::string token;
    while (ls >> token) {
      long v = 0;
      try {
        std::size_t used = 0;
        v = std::stol(token, &used);
        if (used != token.size()) fail("bad literal '" + token + "'");
      } catch (const std::logic_error&) {
        fail("bad literal '" + token + "'");
      }
      if (v == 0) {
        if (pending.size() != 3) fail("clause must have exactly 3 literals, got " + std::to_string(pending.size()));
        const Literal a = pending[0], b = pending[1], c = pending[2];
        pending.clear();
        for (const auto& l : {a, b, c}) {
          if (l.var > phi->vars()) fail("variable index " + std::to_string(l.var) + " out of range");
        }
        try {
          phi->add(Clause3(phi->kind(), {a, b, c}));
        } catch (const UsageError& e) {
          fail(e.what());
        }
      } else {
        if (pending.size() == 3) fail("clause must have exactly 3 literals");
        pending.push_back(Literal{static_cast<int>(v < 0 ? -v : v), v < 0 ? -1 : 1});
      }
    }
  }
  if (!phi) throw UsageError("missing 'p cnf|maj3 <n> <m>' header");
  if (!pending.empty()) throw UsageError("unterminated clause at end of formula");
  if (static_cast<long>(phi->size()) != declared) {
    throw UsageError("header declares " + std::to_string(declared) + " clauses, found " + std::to_string(phi->size()));
  }
  return *phi;
}

Formula parse_formula(const std::string& text) {
  std::istringstream in(text);
  return parse_formula(in);
}

std::string serialize_formula(const Formula& phi) {
  std::ostringstream out;
  out << "p " << (phi.kind() == ClauseKind::Cnf ? "cnf" : "maj3") << ' ' << phi.vars() << ' ' << phi.size() << '\n';
  for (const auto& c : phi.clauses()) {
    for (const auto& l : c.literals()) out << l.sign * l.var << ' ';
    out << "0\n";
  }
  return out.str();
}

Formula load_formula(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return parse_formula(in);
}

void save_formula(const std::string& path, const Formula& phi) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << serialize_formula(phi);
}

}  // namespace csgap
