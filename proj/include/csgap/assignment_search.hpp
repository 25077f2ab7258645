#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "csgap/rational.hpp"
#include "csgap/sparse.hpp"

namespace csgap {

/// Default size limit of every 2^n enumeration.
inline constexpr int kExhaustiveMaxN = 24;
/// Hard limit even with force.
inline constexpr int kExhaustiveHardMaxN = 40;

/// One predicate over assignment codes (bit n-i set <=> coordinate i is -1):
/// satisfied iff popcount((code ^ negative) & mask) lies in [lo, hi].
/// The popcount counts literals that disagree with the assignment.
struct BitConstraint {
  std::uint64_t mask = 0;
  std::uint64_t negative = 0;
  int lo = 0;
  int hi = 0;
};

struct SearchResult {
  std::uint64_t code = 0;
  std::int64_t satisfied = 0;
};

/// Code maximizing the number of satisfied constraints; ties go to the
/// smallest code. OpenMP over blocks of high bits, Gray-code walk inside
/// each block with incremental per-variable updates.
SearchResult max_satisfied(std::span<const BitConstraint> constraints, int n);
/// Reference: plain loop over codes, recounting every constraint.
SearchResult max_satisfied_serial(std::span<const BitConstraint> constraints, int n);

/// Throws GuardViolation when n exceeds the exhaustive limit (or the hard
/// limit under force).
void check_exhaustive_guard(int n, bool force);
/// Rough seconds for 2^n steps of `work_per_step` operations.
double estimate_exhaustive_seconds(int n, double work_per_step);

/// Encodes "h_{w,0}(x) == y" as a BitConstraint.
BitConstraint constraint_for_example(const Example& e, int n);

struct BinaryErm {
  BinaryAssignment weights;
  Rational error;
};

/// Brute-force ERM over homogeneous halfspaces with weights in {+1,-1}^n.
/// Ties go to the lexicographically smallest weight vector with +1 < -1.
BinaryErm erm_binary_halfspace(const Sample& s, int n, bool force = false);
/// Reference implementation: evaluates every candidate with eval_halfspace.
BinaryErm erm_binary_halfspace_serial(const Sample& s, int n);

}  // namespace csgap
