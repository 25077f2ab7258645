#include "csgap/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "csgap/errors.hpp"

namespace csgap {

bool is_label(int y) { return y == 1 || y == -1; }

int sign_of(double v) { return v >= 0.0 ? 1 : -1; }

SparseVector::SparseVector(int n) : n_(n) {
  if (n < 1) throw UsageError("dimension must be positive");
}

SparseVector::SparseVector(int n, std::initializer_list<Entry> entries)
    : SparseVector(n, std::span<const Entry>(entries.begin(), entries.size())) {}

SparseVector::SparseVector(int n, std::span<const Entry> entries) : SparseVector(n) {
  if (entries.size() > static_cast<std::size_t>(kMaxNonzeros)) {
    throw UsageError("sparse vector has more than " + std::to_string(kMaxNonzeros) + " nonzeros");
  }
  std::copy(entries.begin(), entries.end(), entries_.begin());
  count_ = static_cast<int>(entries.size());
  std::sort(entries_.begin(), entries_.begin() + count_);
  for (int k = 0; k < count_; ++k) {
    const auto& e = entries_[static_cast<std::size_t>(k)];
    if (e.index < 1 || e.index > n) {
      throw UsageError("index " + std::to_string(e.index) + " outside [1," + std::to_string(n) + "]");
    }
    if (!is_label(e.value)) throw UsageError("sparse vector values must be +1 or -1");
    if (k > 0 && entries_[static_cast<std::size_t>(k - 1)].index == e.index) {
      throw UsageError("repeated index " + std::to_string(e.index));
    }
  }
}

SparseVector SparseVector::from_dense(std::span<const int> dense) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0) entries.push_back({static_cast<int>(i) + 1, dense[i]});
  }
  return SparseVector(static_cast<int>(dense.size()), entries);
}

std::vector<int> SparseVector::to_dense() const {
  std::vector<int> dense(static_cast<std::size_t>(n_), 0);
  for (const auto& e : entries()) dense[static_cast<std::size_t>(e.index - 1)] = e.value;
  return dense;
}

int SparseVector::at(int index) const {
  for (const auto& e : entries()) {
    if (e.index == index) return e.value;
  }
  return 0;
}

int SparseVector::coordinate_sum() const {
  int s = 0;
  for (const auto& e : entries()) s += e.value;
  return s;
}

SparseVector SparseVector::negated() const {
  SparseVector out = *this;
  for (int k = 0; k < count_; ++k) out.entries_[static_cast<std::size_t>(k)].value *= -1;
  return out;
}

SparseVector SparseVector::without(int index) const {
  SparseVector out(n_);
  for (const auto& e : entries()) {
    if (e.index != index) out.entries_[static_cast<std::size_t>(out.count_++)] = e;
  }
  return out;
}

bool operator==(const SparseVector& a, const SparseVector& b) {
  return a.n_ == b.n_ && std::ranges::equal(a.entries(), b.entries());
}

std::strong_ordering operator<=>(const SparseVector& a, const SparseVector& b) {
  if (a.n_ != b.n_) return a.n_ <=> b.n_;
  return std::lexicographical_compare_three_way(a.entries().begin(), a.entries().end(), b.entries().begin(),
                                                b.entries().end());
}

Halfspace::Halfspace(std::vector<double> weights, double bias) : w(std::move(weights)), b(bias) {
  if (w.empty()) throw UsageError("halfspace needs at least one weight");
  if (!std::isfinite(b) || !std::ranges::all_of(w, [](double v) { return std::isfinite(v); })) {
    throw UsageError("halfspace entries must be finite");
  }
}

BinaryAssignment::BinaryAssignment(std::vector<int> bits) : bits_(std::move(bits)) {
  if (!std::ranges::all_of(bits_, is_label)) throw UsageError("assignment entries must be +1 or -1");
}

BinaryAssignment BinaryAssignment::from_code(std::uint64_t code, int n) {
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) bits[static_cast<std::size_t>(i - 1)] = ((code >> (n - i)) & 1U) ? -1 : 1;
  return BinaryAssignment(std::move(bits));
}

std::uint64_t BinaryAssignment::code() const {
  if (bits_.size() > 64) throw UsageError("assignment too long to encode");
  std::uint64_t code = 0;
  for (int b : bits_) code = (code << 1) | (b < 0 ? 1U : 0U);
  return code;
}

std::string BinaryAssignment::str() const {
  std::string out;
  for (int b : bits_) out += b > 0 ? '+' : '-';
  return out;
}

BinaryAssignment BinaryAssignment::parse(std::string_view text) {
  std::vector<int> bits;
  for (char c : text) {
    if (c == '+') bits.push_back(1);
    else if (c == '-') bits.push_back(-1);
    else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
    else throw UsageError("assignment must be a string of '+' and '-'");
  }
  return BinaryAssignment(std::move(bits));
}

Example::Example(SparseVector instance, int label) : x(std::move(instance)), y(label) {
  if (!is_label(y)) throw UsageError("label must be +1 or -1");
}

Sample::Sample(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw UsageError("sample dimension must be positive");
  if (k < 0 || k > SparseVector::kMaxNonzeros) throw UsageError("sparsity bound must be in [0,3]");
}

void Sample::add(Example e) {
  if (e.x.dim() != n_) throw UsageError("example dimension does not match sample");
  if (e.x.nnz() > k_) throw UsageError("example exceeds the sample's sparsity bound");
  items_.push_back(std::move(e));
}

int eval_halfspace(const Halfspace& h, const SparseVector& x) {
  if (h.dim() != x.dim()) throw UsageError("halfspace/instance dimension mismatch");
  double s = h.b;
  for (const auto& e : x.entries()) s += h.w[static_cast<std::size_t>(e.index - 1)] * e.value;
  return sign_of(s);
}

int eval_halfspace(const BinaryAssignment& w, const SparseVector& x) {
  if (w.dim() != x.dim()) throw UsageError("assignment/instance dimension mismatch");
  int s = 0;
  for (const auto& e : x.entries()) s += w[e.index] * e.value;
  return s >= 0 ? 1 : -1;
}

std::int64_t count_errors(const PredictFn& p, const Sample& s) {
  std::int64_t errors = 0;
  for (const auto& ex : s) errors += p(ex.x) != ex.y ? 1 : 0;
  return errors;
}

Rational empirical_error(const PredictFn& p, const Sample& s) {
  if (s.empty()) throw UsageError("empirical error of an empty sample");
  return Rational(count_errors(p, s), static_cast<std::int64_t>(s.size()));
}

std::string format_label(int y) { return y > 0 ? "+1" : "-1"; }

int parse_label(std::string_view token) {
  if (token == "+1" || token == "1") return 1;
  if (token == "-1") return -1;
  throw UsageError("bad label '" + std::string(token) + "'");
}

std::string format_instance(const SparseVector& x) {
  std::string out;
  for (const auto& e : x.entries()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e.index) + ':' + format_label(e.value);
  }
  return out;
}

SparseVector parse_instance(std::string_view text, int n) {
  std::vector<Entry> entries;
  std::istringstream in{std::string(text)};
  std::string token;
  int last = 0;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw UsageError("bad coordinate '" + token + "'");
    int index = 0;
    try {
      std::size_t used = 0;
      index = std::stoi(token.substr(0, colon), &used);
      if (used != colon) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("bad index in '" + token + "'");
    }
    if (index <= last) throw UsageError("indices must be strictly increasing");
    last = index;
    if (entries.size() == static_cast<std::size_t>(SparseVector::kMaxNonzeros)) {
      throw UsageError("instance has more than 3 nonzeros");
    }
    entries.push_back({index, parse_label(std::string_view(token).substr(colon + 1))});
  }
  return SparseVector(n, entries);
}

Sample read_sample(std::istream& in) {
  std::string line;
  Sample out;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (!header) {
        std::istringstream h(line.substr(first + 1));
        std::string tag, nf, kf;
        h >> tag >> nf >> kf;
        if (tag == "sparse-sample") {
          if (nf.rfind("n=", 0) != 0 || kf.rfind("k=", 0) != 0) throw UsageError("malformed sparse-sample header");
          try {
            out = Sample(std::stoi(nf.substr(2)), std::stoi(kf.substr(2)));
          } catch (const std::logic_error&) {
            throw UsageError("malformed sparse-sample header");
          }
          header = true;
        }
      }
      continue;
    }
    if (!header) throw UsageError("missing '# sparse-sample n=<N> k=<K>' header");
    std::istringstream ls(line);
    std::string label;
    ls >> label;
    std::string rest;
    std::getline(ls, rest);
    try {
      out.add(parse_instance(rest, out.dim()), parse_label(label));
    } catch (const UsageError& e) {
      throw UsageError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!header) throw UsageError("missing '# sparse-sample n=<N> k=<K>' header");
  return out;
}

void write_sample(std::ostream& out, const Sample& s) {
  out << "# sparse-sample n=" << s.dim() << " k=" << s.sparsity() << '\n';
  for (const auto& ex : s) {
    out << format_label(ex.y);
    if (ex.x.nnz() > 0) out << ' ' << format_instance(ex.x);
    out << '\n';
  }
}

Sample load_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_sample(in);
}

void save_sample(const std::string& path, const Sample& s) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  write_sample(out, s);
}

}  // namespace csgap
