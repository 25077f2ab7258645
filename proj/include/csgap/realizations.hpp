#pragma once

#include <compare>
#include <string>
#include <variant>
#include <vector>

#include "csgap/decompmat.hpp"
#include "csgap/sparse.hpp"

namespace csgap {

/// A^r_n: instances of C_{n,2} whose coordinates sum to r.
struct C2Part {
  int r = 0;
  friend auto operator<=>(const C2Part&, const C2Part&) = default;
};
/// D_{n,i,b}: instances of C_{n,3} whose first nonzero is x_i = b, i <= n-2.
struct C3Part {
  int i = 1;
  int b = 1;
  friend auto operator<=>(const C3Part&, const C3Part&) = default;
};
/// C_{n,3} instances outside every D_{n,i,b}: first nonzero at n-1 or n,
/// and the zero vector. Learned directly as a C_{n,2} problem.
struct C3Residual {
  friend auto operator<=>(const C3Residual&, const C3Residual&) = default;
};
/// The whole instance space (single-part routing).
struct WholePart {
  friend auto operator<=>(const WholePart&, const WholePart&) = default;
};

using PartId = std::variant<C2Part, C3Part, C3Residual, WholePart>;

/// "r=-2", "D(3,+1)", "residual", "whole".
std::string part_name(const PartId& p);
/// Inverse of part_name.
PartId parse_part_name(const std::string& text);

/// A 1-based cell of the n x n hypothesis matrix of `part`.
struct CellRef {
  int row = 1;
  int col = 1;
  C2Part part;
  friend bool operator==(const CellRef&, const CellRef&) = default;
};

C2Part part_of_c2(const SparseVector& x);
/// r=0: e_i - e_j -> (i,j), zero -> (1,1); r=+-2: +-(e_i + e_j), i<j -> (i,j);
/// r=+-1: +-e_i -> (i,i).
CellRef realize_c2(const SparseVector& x);
/// Every instance of the part, in a fixed order.
std::vector<SparseVector> c2_part_instances(C2Part part, int n);

/// W[realize_c2(x)] = h(x) on the part; r=+-2 cells are mirrored to (j,i);
/// unconstrained cells are +1.
SignMatrix hypothesis_matrix(const Halfspace& h, C2Part part, int n);

struct Stripped {
  int i = 0;
  int b = 0;
  SparseVector rest;
};
/// First nonzero coordinate, its value, and x with that coordinate zeroed.
Stripped strip_first_nonzero(const SparseVector& x);
PartId part_of_c3(const SparseVector& x);

}  // namespace csgap
