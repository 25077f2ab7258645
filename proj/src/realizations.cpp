#include "csgap/realizations.hpp"

#include <cstdio>
#include <sstream>

#include "csgap/errors.hpp"

namespace csgap {

std::string part_name(const PartId& p) {
  struct Visitor {
    std::string operator()(const C2Part& c) const { return "r=" + std::to_string(c.r); }
    std::string operator()(const C3Part& c) const {
      return "D(" + std::to_string(c.i) + "," + (c.b > 0 ? "+1" : "-1") + ")";
    }
    std::string operator()(const C3Residual&) const { return "residual"; }
    std::string operator()(const WholePart&) const { return "whole"; }
  };
  return std::visit(Visitor{}, p);
}

PartId parse_part_name(const std::string& text) {
  if (text == "residual") return C3Residual{};
  if (text == "whole") return WholePart{};
  int a = 0, b = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "r=%d%c", &a, &tail) == 1 && a >= -2 && a <= 2) return C2Part{a};
  if (std::sscanf(text.c_str(), "D(%d,%d)%c", &a, &b, &tail) == 2 && a >= 1 && (b == 1 || b == -1)) {
    return C3Part{a, b};
  }
  throw UsageError("unknown part '" + text + "'");
}

C2Part part_of_c2(const SparseVector& x) {
  if (x.nnz() > 2) throw UsageError("instance has more than 2 nonzeros");
  return C2Part{x.coordinate_sum()};
}

CellRef realize_c2(const SparseVector& x) {
  const auto part = part_of_c2(x);
  const auto e = x.entries();
  switch (part.r) {
    case 0:
      if (x.nnz() == 0) return {1, 1, part};
      // entries are index-sorted; the +1 entry is the row
      return e[0].value > 0 ? CellRef{e[0].index, e[1].index, part} : CellRef{e[1].index, e[0].index, part};
    case 1:
    case -1:
      return {e[0].index, e[0].index, part};
    default:
      return {e[0].index, e[1].index, part};
  }
}

std::vector<SparseVector> c2_part_instances(C2Part part, int n) {
  if (n < 2) throw UsageError("need n >= 2");
  std::vector<SparseVector> out;
  switch (part.r) {
    case 0:
      out.emplace_back(n);
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= n; ++j) {
          if (i != j) out.push_back(SparseVector(n, {Entry{i, 1}, Entry{j, -1}}));
        }
      }
      break;
    case 1:
    case -1:
      for (int i = 1; i <= n; ++i) out.push_back(SparseVector(n, {Entry{i, part.r}}));
      break;
    case 2:
    case -2:
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) out.push_back(SparseVector(n, {Entry{i, part.r / 2}, Entry{j, part.r / 2}}));
      }
      break;
    default:
      throw UsageError("C2 part r out of range");
  }
  return out;
}

SignMatrix hypothesis_matrix(const Halfspace& h, C2Part part, int n) {
  if (h.dim() != n) throw UsageError("halfspace dimension does not match n");
  SignMatrix w(n, n);
  for (const auto& x : c2_part_instances(part, n)) {
    const auto cell = realize_c2(x);
    const int y = eval_halfspace(h, x);
    w.set(cell.row - 1, cell.col - 1, y);
    if (part.r == 2 || part.r == -2) w.set(cell.col - 1, cell.row - 1, y);
  }
  return w;
}

Stripped strip_first_nonzero(const SparseVector& x) {
  if (x.nnz() == 0) throw UsageError("cannot strip the zero vector");
  const auto first = x.entries()[0];
  return {first.index, first.value, x.without(first.index)};
}

PartId part_of_c3(const SparseVector& x) {
  if (x.nnz() > 3) throw UsageError("instance has more than 3 nonzeros");
  if (x.nnz() == 0) return C3Residual{};
  const auto first = x.entries()[0];
  if (first.index <= x.dim() - 2) return C3Part{first.index, first.value};
  return C3Residual{};
}

}  // namespace csgap
