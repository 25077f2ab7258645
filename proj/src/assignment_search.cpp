#include "csgap/assignment_search.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "csgap/errors.hpp"

namespace csgap {
namespace {

bool better(const SearchResult& a, const SearchResult& b) {
  return a.satisfied > b.satisfied || (a.satisfied == b.satisfied && a.code < b.code);
}

bool holds(int disagreements, const BitConstraint& c) { return disagreements >= c.lo && disagreements <= c.hi; }

}  // namespace

void check_exhaustive_guard(int n, bool force) {
  const int limit = force ? kExhaustiveHardMaxN : kExhaustiveMaxN;
  if (n > limit) {
    std::ostringstream msg;
    msg << "exhaustive search over 2^" << n << " assignments exceeds the n <= " << limit << " guard";
    if (!force) msg << " (use --force to override)";
    throw GuardViolation(msg.str());
  }
  if (n < 1) throw UsageError("dimension must be positive");
}

double estimate_exhaustive_seconds(int n, double work_per_step) {
  // ~1e9 simple operations per second.
  return std::ldexp(1.0, n) * (work_per_step + 4.0) / 1e9;
}

SearchResult max_satisfied(std::span<const BitConstraint> constraints, int n) {
  if (n < 1 || n > kExhaustiveHardMaxN) throw GuardViolation("assignment search dimension out of range");
  const int high_bits = std::min(n, 6);
  const int low_bits = n - high_bits;
  const std::int64_t blocks = std::int64_t{1} << high_bits;
  const std::uint64_t steps = std::uint64_t{1} << low_bits;

  // constraints touching each low bit position
  std::vector<std::vector<int>> touching(static_cast<std::size_t>(std::max(low_bits, 1)));
  for (std::size_t e = 0; e < constraints.size(); ++e) {
    for (int p = 0; p < low_bits; ++p) {
      if ((constraints[e].mask >> p) & 1U) touching[static_cast<std::size_t>(p)].push_back(static_cast<int>(e));
    }
  }

  SearchResult best{0, -1};
#pragma omp parallel
  {
    SearchResult local{0, -1};
    std::vector<int> disagree(constraints.size());
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t block = 0; block < blocks; ++block) {
      std::uint64_t code = static_cast<std::uint64_t>(block) << low_bits;
      std::int64_t count = 0;
      for (std::size_t e = 0; e < constraints.size(); ++e) {
        const auto& c = constraints[e];
        disagree[e] = std::popcount((code ^ c.negative) & c.mask);
        count += holds(disagree[e], c) ? 1 : 0;
      }
      SearchResult cur{code, count};
      if (better(cur, local)) local = cur;
      for (std::uint64_t k = 1; k < steps; ++k) {
        const int p = std::countr_zero(k);
        code ^= std::uint64_t{1} << p;
        for (int e : touching[static_cast<std::size_t>(p)]) {
          const auto& c = constraints[static_cast<std::size_t>(e)];
          int& d = disagree[static_cast<std::size_t>(e)];
          const bool before = holds(d, c);
          d += (((code ^ c.negative) >> p) & 1U) ? 1 : -1;
          count += static_cast<int>(holds(d, c)) - static_cast<int>(before);
        }
        if (count > local.satisfied || (count == local.satisfied && code < local.code)) local = {code, count};
      }
    }
#pragma omp critical
    if (better(local, best)) best = local;
  }
  return best;
}

SearchResult max_satisfied_serial(std::span<const BitConstraint> constraints, int n) {
  if (n < 1 || n > kExhaustiveHardMaxN) throw GuardViolation("assignment search dimension out of range");
  SearchResult best{0, -1};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t code = 0; code < total; ++code) {
    std::int64_t count = 0;
    for (const auto& c : constraints) count += holds(std::popcount((code ^ c.negative) & c.mask), c) ? 1 : 0;
    if (count > best.satisfied) best = {code, count};
  }
  return best;
}

BitConstraint constraint_for_example(const Example& e, int n) {
  BitConstraint c;
  for (const auto& entry : e.x.entries()) {
    const std::uint64_t bit = std::uint64_t{1} << (n - entry.index);
    c.mask |= bit;
    if (entry.value < 0) c.negative |= bit;
  }
  // <w,x> = nnz - 2 * disagreements, predicted +1 iff that is >= 0.
  const int nnz = e.x.nnz();
  if (e.y > 0) {
    c.lo = 0;
    c.hi = nnz / 2;
  } else {
    c.lo = nnz / 2 + 1;
    c.hi = nnz;
  }
  return c;
}

BinaryErm erm_binary_halfspace(const Sample& s, int n, bool force) {
  check_exhaustive_guard(n, force);
  if (s.dim() != n) throw UsageError("sample dimension does not match n");
  if (s.empty()) return {BinaryAssignment::ones(n), Rational(0, 1)};
  std::vector<BitConstraint> constraints;
  constraints.reserve(s.size());
  for (const auto& e : s) constraints.push_back(constraint_for_example(e, n));
  const auto best = max_satisfied(constraints, n);
  const auto total = static_cast<std::int64_t>(s.size());
  return {BinaryAssignment::from_code(best.code, n), Rational(total - best.satisfied, total)};
}

BinaryErm erm_binary_halfspace_serial(const Sample& s, int n) {
  check_exhaustive_guard(n, false);
  if (s.dim() != n) throw UsageError("sample dimension does not match n");
  if (s.empty()) return {BinaryAssignment::ones(n), Rational(0, 1)};
  const std::uint64_t total = std::uint64_t{1} << n;
  std::int64_t best_errors = -1;
  std::uint64_t best_code = 0;
  for (std::uint64_t code = 0; code < total; ++code) {
    const auto w = BinaryAssignment::from_code(code, n);
    std::vector<double> weights(w.bits().begin(), w.bits().end());
    const Halfspace h(std::move(weights), 0.0);
    const auto errors = count_errors([&](const SparseVector& x) { return eval_halfspace(h, x); }, s);
    if (best_errors < 0 || errors < best_errors) {
      best_errors = errors;
      best_code = code;
    }
  }
  return {BinaryAssignment::from_code(best_code, n), Rational(best_errors, static_cast<std::int64_t>(s.size()))};
}

}  // namespace csgap
