#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csgap/rational.hpp"

namespace csgap {

/// A nonzero coordinate: 1-based index and value +1 or -1.
struct Entry {
  int index = 0;
  int value = 0;
  friend auto operator<=>(const Entry&, const Entry&) = default;
};

/// Element of C_{n,k} for k <= 3: a vector in {-1,0,1}^n stored as its
/// nonzeros in increasing index order.
class SparseVector {
 public:
  static constexpr int kMaxNonzeros = 3;

  SparseVector() = default;
  /// Zero vector of dimension n.
  explicit SparseVector(int n);
  /// Entries may come in any order; they are sorted and validated.
  SparseVector(int n, std::initializer_list<Entry> entries);
  SparseVector(int n, std::span<const Entry> entries);

  static SparseVector from_dense(std::span<const int> dense);
  std::vector<int> to_dense() const;

  int dim() const { return n_; }
  int nnz() const { return count_; }
  std::span<const Entry> entries() const { return {entries_.data(), static_cast<std::size_t>(count_)}; }
  /// Coordinate value (0 when absent). index is 1-based.
  int at(int index) const;
  /// Sum of the coordinates.
  int coordinate_sum() const;

  SparseVector negated() const;
  SparseVector scaled(int sign) const { return sign < 0 ? negated() : *this; }
  /// Copy with coordinate `index` zeroed.
  SparseVector without(int index) const;

  friend bool operator==(const SparseVector& a, const SparseVector& b);
  friend std::strong_ordering operator<=>(const SparseVector& a, const SparseVector& b);

 private:
  int n_ = 0;
  int count_ = 0;
  std::array<Entry, kMaxNonzeros> entries_{};
};

/// x -> sign(<w, x> + b) with sign(0) = +1.
struct Halfspace {
  std::vector<double> w;
  double b = 0.0;

  Halfspace() = default;
  Halfspace(std::vector<double> weights, double bias);
  int dim() const { return static_cast<int>(w.size()); }
};

/// A vector in {+1,-1}^n. Serves both as a boolean assignment and as the
/// weight vector of a homogeneous binary-weight halfspace.
class BinaryAssignment {
 public:
  BinaryAssignment() = default;
  explicit BinaryAssignment(std::vector<int> bits);
  /// All +1.
  static BinaryAssignment ones(int n) { return BinaryAssignment(std::vector<int>(n, 1)); }
  /// Bit (n - i) of `code` set <=> coordinate i is -1, so numeric order of
  /// codes is lexicographic order of assignments with +1 < -1.
  static BinaryAssignment from_code(std::uint64_t code, int n);
  std::uint64_t code() const;

  int dim() const { return static_cast<int>(bits_.size()); }
  /// 1-based.
  int operator[](int index) const { return bits_[static_cast<std::size_t>(index - 1)]; }
  std::span<const int> bits() const { return bits_; }
  std::string str() const;
  static BinaryAssignment parse(std::string_view text);

  friend bool operator==(const BinaryAssignment&, const BinaryAssignment&) = default;

 private:
  std::vector<int> bits_;
};

struct Example {
  SparseVector x;
  int y = 1;

  Example() = default;
  Example(SparseVector instance, int label);
};

/// Ordered list of examples over C_{n,k}.
class Sample {
 public:
  Sample() = default;
  Sample(int n, int k);

  void add(Example e);
  void add(SparseVector x, int y) { add(Example(std::move(x), y)); }
  void reserve(std::size_t count) { items_.reserve(count); }

  int dim() const { return n_; }
  int sparsity() const { return k_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Example& operator[](std::size_t i) const { return items_[i]; }
  std::span<const Example> items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<Example> items_;
};

bool is_label(int y);
int sign_of(double v);

int eval_halfspace(const Halfspace& h, const SparseVector& x);
int eval_halfspace(const BinaryAssignment& w, const SparseVector& x);

using PredictFn = std::function<int(const SparseVector&)>;

/// Number of items with p(x) != y.
std::int64_t count_errors(const PredictFn& p, const Sample& s);
/// Exact misclassification rate. Throws UsageError on an empty sample.
Rational empirical_error(const PredictFn& p, const Sample& s);

/// Text format: "# sparse-sample n=<N> k=<K>" then "<label> <idx>:<val> ...".
Sample read_sample(std::istream& in);
void write_sample(std::ostream& out, const Sample& s);
Sample load_sample(const std::string& path);
void save_sample(const std::string& path, const Sample& s);

/// "<idx>:<val> ..." (empty for the zero vector).
std::string format_instance(const SparseVector& x);
SparseVector parse_instance(std::string_view text, int n);
std::string format_label(int y);
int parse_label(std::string_view token);

}  // namespace csgap
