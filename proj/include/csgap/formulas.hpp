#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "csgap/rational.hpp"
#include "csgap/sparse.hpp"

namespace csgap {

enum class ClauseKind { Cnf, Maj };

/// Variable index (1-based) with sign -1 for a negated literal.
struct Literal {
  int var = 0;
  int sign = 1;
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// A 3CNF (OR) or 3MAJ (majority) clause over three distinct variables.
class Clause3 {
 public:
  Clause3(ClauseKind kind, std::array<Literal, 3> lits);

  ClauseKind kind() const { return kind_; }
  const std::array<Literal, 3>& literals() const { return lits_; }
  int max_var() const;

  friend bool operator==(const Clause3&, const Clause3&) = default;

 private:
  ClauseKind kind_;
  std::array<Literal, 3> lits_;
};

class Formula {
 public:
  Formula(int n, ClauseKind kind);

  void add(const Clause3& c);
  int vars() const { return n_; }
  ClauseKind kind() const { return kind_; }
  const std::vector<Clause3>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  int n_;
  ClauseKind kind_;
  std::vector<Clause3> clauses_;
};

struct FormulaSourceConfig {
  int n = 0;
  int m = 1;
  /// Hidden assignment for planted mode; uniform mode when empty.
  std::optional<BinaryAssignment> planted;
  std::uint64_t seed = 0;
};

/// CNF: some literal agrees with psi. MAJ: at least two literals agree.
bool eval_clause(const Clause3& c, const BinaryAssignment& psi);
std::int64_t count_satisfied(const Formula& phi, const BinaryAssignment& psi);

struct FormulaValue {
  Rational value;
  BinaryAssignment witness;
};

/// val(phi): maximum satisfied fraction over all 2^n assignments. The
/// witness is the lexicographically smallest maximizer (+1 < -1).
FormulaValue formula_value(const Formula& phi, bool force = false);
/// Reference implementation: eval_clause over every assignment.
FormulaValue formula_value_serial(const Formula& phi);

/// Uniform: three distinct variables uniformly without replacement,
/// independent uniform signs. Planted: each clause rejection-sampled
/// until the hidden assignment satisfies it.
Formula sample_formula(const FormulaSourceConfig& cfg, ClauseKind kind);

/// (x, y) = b * (sum_l sign_l e_{var_l}, 1).
Example clause_to_example(const Clause3& c, int n, int b);
/// One example per clause in clause order, with independent uniform b.
Sample formula_to_sample(const Formula& phi, std::uint64_t seed);
/// Psi(x) = sign(<psi, x>).
Halfspace assignment_to_hypothesis(const BinaryAssignment& psi);

/// DIMACS ("p cnf n m") or its majority extension ("p maj3 n m").
Formula parse_formula(std::istream& in);
Formula parse_formula(const std::string& text);
std::string serialize_formula(const Formula& phi);
Formula load_formula(const std::string& path);
void save_formula(const std::string& path, const Formula& phi);

}  // namespace csgap
