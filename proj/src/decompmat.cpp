#include "csgap/decompmat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "csgap/errors.hpp"

namespace csgap {

SignMatrix::SignMatrix(int rows, int cols, int fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
  if (rows < 0 || cols < 0) throw UsageError("negative matrix size");
  if (fill != 1 && fill != -1) throw UsageError("sign matrix entries must be +1 or -1");
}

SignMatrix SignMatrix::from_real(const Matrix& m) {
  SignMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < out.rows_; ++i) {
    for (int j = 0; j < out.cols_; ++j) {
      if (m(i, j) != 1.0 && m(i, j) != -1.0) throw UsageError("sign matrix entries must be +1 or -1");
      out.set(i, j, m(i, j) > 0 ? 1 : -1);
    }
  }
  return out;
}

void SignMatrix::set(int i, int j, int v) {
  if (v != 1 && v != -1) throw UsageError("sign matrix entries must be +1 or -1");
  data_[static_cast<std::size_t>(i * cols_ + j)] = v;
}

Matrix SignMatrix::to_real() const {
  Matrix m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

std::string VerifyReport::summary() const {
  std::ostringstream out;
  out << (passed ? "pass" : "FAIL");
  if (!dimensions_ok) {
    out << " (dimension mismatch)";
    return out.str();
  }
  out << " asym=" << max_asymmetry << " recon=" << max_reconstruction_error << " mineig(P)=" << min_eigenvalue_P
      << " mineig(N)=" << min_eigenvalue_N << " diag_excess=" << max_diagonal_excess;
  return out.str();
}

Matrix symmetrize(const Matrix& w) {
  const auto n = w.rows();
  const auto m = w.cols();
  Matrix s = Matrix::Zero(n + m, n + m);
  s.topRightCorner(n, m) = w;
  s.bottomLeftCorner(m, n) = w.transpose();
  return s;
}

Matrix tensor_product(const Matrix& a, const Matrix& b) {
  const double cells = static_cast<double>(a.rows()) * static_cast<double>(b.rows()) *
                       static_cast<double>(a.cols()) * static_cast<double>(b.cols());
  if (cells > 1.0e8) throw UsageError("tensor product too large");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::SelfAdjointEigenSolver<Matrix> symmetric_eigen(const Matrix& m, bool vectors) {
  const int options = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, options);
  if (solver.info() == Eigen::Success) return solver;
  const Matrix rounded = (sym * 1e12).array().round() / 1e12;
  solver.compute(rounded, options);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigensolver did not converge");
  return solver;
}

double min_eigenvalue(const Matrix& symmetric) {
  if (symmetric.rows() == 0) return 0.0;
  return symmetric_eigen(symmetric, false).eigenvalues()(0);
}

VerifyReport verify_decomposition(const Matrix& w, const Decomposition& dec, const VerifyTolerances& tol) {
  VerifyReport r;
  const auto d = w.rows() + w.cols();
  r.dimensions_ok = dec.P.rows() == d && dec.P.cols() == d && dec.N.rows() == d && dec.N.cols() == d;
  if (!r.dimensions_ok) return r;
  r.max_asymmetry = std::max((dec.P - dec.P.transpose()).cwiseAbs().maxCoeff(),
                             (dec.N - dec.N.transpose()).cwiseAbs().maxCoeff());
  r.max_reconstruction_error = (symmetrize(w) - (dec.P - dec.N)).cwiseAbs().maxCoeff();
  const Matrix p = 0.5 * (dec.P + dec.P.transpose());
  const Matrix n = 0.5 * (dec.N + dec.N.transpose());
  r.min_eigenvalue_P = min_eigenvalue(p);
  r.min_eigenvalue_N = min_eigenvalue(n);
  r.max_diagonal_excess = std::max(dec.P.diagonal().maxCoeff(), dec.N.diagonal().maxCoeff()) - dec.beta;
  r.passed = r.max_asymmetry <= tol.symmetry && r.max_reconstruction_error <= tol.reconstruction &&
             r.min_eigenvalue_P >= -tol.psd && r.min_eigenvalue_N >= -tol.psd &&
             r.max_diagonal_excess <= tol.diagonal && dec.beta >= 0.0;
  return r;
}

Decomposition spectral_split(const Matrix& m) {
  if (m.rows() != m.cols()) throw UsageError("spectral_split needs a square matrix");
  if (m.rows() == 0) return {};
  const auto solver = symmetric_eigen(m);
  const auto& lambda = solver.eigenvalues();
  const auto& v = solver.eigenvectors();
  Decomposition dec;
  dec.P = v * lambda.cwiseMax(0.0).asDiagonal() * v.transpose();
  dec.N = v * (-lambda).cwiseMax(0.0).asDiagonal() * v.transpose();
  dec.P = 0.5 * (dec.P + dec.P.transpose()).eval();
  dec.N = 0.5 * (dec.N + dec.N.transpose()).eval();
  dec.beta = std::max({0.0, dec.P.diagonal().maxCoeff(), dec.N.diagonal().maxCoeff()});
  return dec;
}

Decomposition tensor_decomposition(const Decomposition& dec, const Matrix& a, double psd_tol) {
  if (a.rows() != a.cols()) throw UsageError("tensor factor must be square");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw UsageError("tensor factor must be symmetric");
  if (min_eigenvalue(a) < -psd_tol) throw UsageError("tensor factor is not PSD");
  const double alpha = std::max(0.0, a.diagonal().maxCoeff());
  return {tensor_product(dec.P, a), tensor_product(dec.N, a), alpha * dec.beta};
}

namespace {

Decomposition principal(const Decomposition& dec, const std::vector<int>& coords) {
  const auto k = static_cast<Eigen::Index>(coords.size());
  Decomposition out;
  out.beta = dec.beta;
  out.P.resize(k, k);
  out.N.resize(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      out.P(a, b) = dec.P(coords[static_cast<std::size_t>(a)], coords[static_cast<std::size_t>(b)]);
      out.N(a, b) = dec.N(coords[static_cast<std::size_t>(a)], coords[static_cast<std::size_t>(b)]);
    }
  }
  return out;
}

}  // namespace

Decomposition delete_rowcol_decomposition(const Decomposition& dec, int source_rows, RowCol which) {
  const int d = dec.dim();
  const int source_cols = d - source_rows;
  if (source_rows < 0 || source_cols < 0) throw UsageError("source row count exceeds decomposition size");
  const bool row = which.axis == RowCol::Axis::Row;
  const int limit = row ? source_rows : source_cols;
  if (which.index < 0 || which.index >= limit) throw UsageError("row/column index out of range");
  const int drop = row ? which.index : source_rows + which.index;
  std::vector<int> coords;
  coords.reserve(static_cast<std::size_t>(d - 1));
  for (int c = 0; c < d; ++c) {
    if (c != drop) coords.push_back(c);
  }
  return principal(dec, coords);
}

Decomposition restrict_decomposition(const Decomposition& dec, int source_rows, std::span<const int> rows,
                                     std::span<const int> cols) {
  const int source_cols = dec.dim() - source_rows;
  std::vector<int> coords;
  coords.reserve(rows.size() + cols.size());
  for (int r : rows) {
    if (r < 0 || r >= source_rows) throw UsageError("row index out of range");
    coords.push_back(r);
  }
  for (int c : cols) {
    if (c < 0 || c >= source_cols) throw UsageError("column index out of range");
    coords.push_back(source_rows + c);
  }
  return principal(dec, coords);
}

SignMatrix triangular_matrix(int n) {
  if (n < 1) throw UsageError("triangular matrix size must be positive");
  SignMatrix t(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) t.set(i, j, -1);
  }
  return t;
}

SignMatrix row_threshold_matrix(std::span<const int> thresholds) {
  const int n = static_cast<int>(thresholds.size());
  if (n < 1) throw UsageError("need at least one threshold");
  SignMatrix w(n, n);
  for (int i = 0; i < n; ++i) {
    const int t = thresholds[static_cast<std::size_t>(i)];
    if (t < 0 || t > n) throw UsageError("threshold out of [0,n]");
    for (int j = 1; j <= t; ++j) w.set(i, j - 1, -1);
  }
  return w;
}

Decomposition diagonal_decomposition(std::span<const double> diagonal) {
  const auto n = static_cast<Eigen::Index>(diagonal.size());
  Decomposition dec{Matrix::Zero(2 * n, 2 * n), Matrix::Zero(2 * n, 2 * n), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = diagonal[static_cast<std::size_t>(i)];
    if (!std::isfinite(v)) throw UsageError("diagonal entries must be finite");
    const double a = std::abs(v);
    dec.P(i, i) = a;
    dec.P(n + i, n + i) = a;
    dec.P(i, n + i) = v;
    dec.P(n + i, i) = v;
    dec.N(i, i) = a;
    dec.N(n + i, n + i) = a;
    dec.beta = std::max(dec.beta, a);
  }
  return dec;
}

Decomposition ones_decomposition(int rows, int cols) {
  if (rows < 1 || cols < 1) throw UsageError("matrix size must be positive");
  const Eigen::Index d = rows + cols;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(d);
  v.tail(cols).setConstant(-1.0);
  return {0.5 * Matrix::Ones(d, d), 0.5 * v * v.transpose(), 0.5};
}

ThresholdDecomposition row_threshold_decomposition(std::span<const int> thresholds, CertificateCache& cache) {
  const int n = static_cast<int>(thresholds.size());
  ThresholdDecomposition out;
  out.w = row_threshold_matrix(thresholds);

  // Sort rows by threshold.
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return thresholds[static_cast<std::size_t>(a)] < thresholds[static_cast<std::size_t>(b)];
  });
  std::vector<int> distinct;
  for (int r : order) {
    const int t = thresholds[static_cast<std::size_t>(r)];
    if (distinct.empty() || distinct.back() != t) distinct.push_back(t);
  }
  const int groups = static_cast<int>(distinct.size());

  // Row group p (1-based) is -1 exactly on column blocks c < p, where block
  // c of column j counts the distinct thresholds below j. Row group p and
  // block p share T index p + offset; block 0 needs its own index when
  // nonempty.
  const int offset = distinct.front() >= 1 ? 1 : 0;
  // T_s for the smallest sufficient s; s <= n unless the thresholds are a
  // permutation of 1..n, which needs T_{n+1}.
  const int tsize = groups + offset;
  auto group_of = [&](int t) {
    return static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), t) - distinct.begin()) + 1;
  };
  auto block_of = [&](int j) {
    return static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), j) - distinct.begin());
  };

  std::vector<int> row_t(static_cast<std::size_t>(n));
  std::vector<int> col_t(static_cast<std::size_t>(n));
  std::map<int, int> row_mult, col_mult;
  for (int i = 0; i < n; ++i) {
    row_t[static_cast<std::size_t>(i)] = group_of(thresholds[static_cast<std::size_t>(i)]) + offset;
    ++row_mult[row_t[static_cast<std::size_t>(i)]];
  }
  for (int j = 1; j <= n; ++j) {
    const int c = block_of(j);
    col_t[static_cast<std::size_t>(j - 1)] = c == 0 ? 1 : c + offset;
    ++col_mult[col_t[static_cast<std::size_t>(j - 1)]];
  }
  int k = 1;
  for (const auto& [idx, count] : row_mult) k = std::max(k, count);
  for (const auto& [idx, count] : col_mult) k = std::max(k, count);

  const Decomposition& tcert = cache.triangular(tsize);
  const Decomposition tensored = tensor_decomposition(tcert, Matrix::Ones(k, k));

  // Pick one copy of the matching T row per sorted row, then list the rows
  // in their original order (undoing the sort).
  std::map<int, int> row_used, col_used;
  std::vector<int> sorted_pick(static_cast<std::size_t>(n));
  for (int r : order) {
    const int t = row_t[static_cast<std::size_t>(r)];
    sorted_pick[static_cast<std::size_t>(r)] = (t - 1) * k + row_used[t]++;
  }
  std::vector<int> col_pick(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int t = col_t[static_cast<std::size_t>(j)];
    col_pick[static_cast<std::size_t>(j)] = (t - 1) * k + col_used[t]++;
  }
  out.decomposition = restrict_decomposition(tensored, tsize * k, sorted_pick, col_pick);
  out.triangular_size = tsize;
  out.ones_size = k;
  return out;
}

void write_decomposition(std::ostream& out, const Decomposition& dec) {
  const int d = dec.dim();
  out << std::setprecision(17);
  out << "beta " << dec.beta << '\n' << "dim " << d << '\n';
  for (const auto* m : {&dec.P, &dec.N}) {
    out << (m == &dec.P ? "P" : "N") << '\n';
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) out << (j ? " " : "") << (*m)(i, j);
      out << '\n';
    }
  }
}

Decomposition read_decomposition(std::istream& in) {
  std::string tag;
  Decomposition dec;
  int d = 0;
  if (!(in >> tag) || tag != "beta" || !(in >> dec.beta)) throw UsageError("decomposition file: expected 'beta <v>'");
  if (!(in >> tag) || tag != "dim" || !(in >> d) || d < 0) throw UsageError("decomposition file: expected 'dim <d>'");
  for (auto* m : {&dec.P, &dec.N}) {
    const char* want = m == &dec.P ? "P" : "N";
    if (!(in >> tag) || tag != want) throw UsageError(std::string("decomposition file: expected '") + want + "'");
    m->resize(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (!(in >> (*m)(i, j))) throw UsageError("decomposition file: truncated matrix");
      }
    }
  }
  return dec;
}

void save_decomposition(const std::string& path, const Decomposition& dec) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  write_decomposition(out, dec);
}

Decomposition load_decomposition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_decomposition(in);
}

CertificateCache::CertificateCache(std::string directory, CertifierConfig cfg)
    : directory_(std::move(directory)), cfg_(cfg) {}

const Decomposition& CertificateCache::triangular(int n) {
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(n); it != cache_.end()) return it->second;
  if (!directory_.empty()) {
    const std::string path = directory_ + "/tn_" + std::to_string(n) + ".dec";
    std::ifstream in(path);
    if (in) {
      auto dec = read_decomposition(in);
      if (!verify_decomposition(triangular_matrix(n), dec).passed) {
        throw NumericalFailure("cached certificate " + path + " does not verify");
      }
      return cache_.emplace(n, std::move(dec)).first->second;
    }
  }
  return cache_.emplace(n, certify_min_beta(triangular_matrix(n), cfg_).decomposition).first->second;
}

CertificateCache& default_certificate_cache() {
  static CertificateCache cache([] {
    const char* dir = std::getenv("CSGAP_CERT_DIR");
    return std::string(dir ? dir : "");
  }());
  return cache;
}

}  // namespace csgap
