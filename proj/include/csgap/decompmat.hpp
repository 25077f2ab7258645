#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace csgap {

using Matrix = Eigen::MatrixXd;

/// Dense matrix with entries in {+1, -1}.
class SignMatrix {
 public:
  SignMatrix() = default;
  /// Filled with `fill`.
  SignMatrix(int rows, int cols, int fill = 1);
  static SignMatrix from_real(const Matrix& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  /// 0-based.
  int operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  void set(int i, int j, int v);
  Matrix to_real() const;

  friend bool operator==(const SignMatrix&, const SignMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> data_;
};

/// sym(W) = P - N with P, N PSD and every diagonal entry at most beta.
struct Decomposition {
  Matrix P;
  Matrix N;
  double beta = 0.0;

  int dim() const { return static_cast<int>(P.rows()); }
};

struct VerifyTolerances {
  double symmetry = 1e-12;
  double reconstruction = 1e-9;
  double psd = 1e-8;
  double diagonal = 1e-9;
};

struct VerifyReport {
  bool passed = false;
  bool dimensions_ok = false;
  double max_asymmetry = 0.0;
  double max_reconstruction_error = 0.0;
  double min_eigenvalue_P = 0.0;
  double min_eigenvalue_N = 0.0;
  /// max over diagonals of P and N of (entry - beta); <= 0 when within bound
  double max_diagonal_excess = 0.0;

  std::string summary() const;
};

/// [[0, W], [W^T, 0]].
Matrix symmetrize(const Matrix& w);
Matrix tensor_product(const Matrix& a, const Matrix& b);
double min_eigenvalue(const Matrix& symmetric);
/// Symmetric eigensolver over the symmetric part of m. If Eigen's QR
/// iteration fails to converge (seen on near-degenerate iterates), retries
/// once on m rounded to 1e-12; throws NumericalFailure if that fails too.
Eigen::SelfAdjointEigenSolver<Matrix> symmetric_eigen(const Matrix& m, bool vectors = true);

VerifyReport verify_decomposition(const Matrix& w, const Decomposition& dec, const VerifyTolerances& tol = {});
inline VerifyReport verify_decomposition(const SignMatrix& w, const Decomposition& dec,
                                         const VerifyTolerances& tol = {}) {
  return verify_decomposition(w.to_real(), dec, tol);
}

/// P = positive eigen-part of m, N = negative eigen-part, beta = max diagonal.
Decomposition spectral_split(const Matrix& m);

/// (P (x) A, N (x) A, alpha * beta) where alpha = max diagonal of A.
Decomposition tensor_decomposition(const Decomposition& dec, const Matrix& a, double psd_tol = 1e-8);

/// Which source index of W to delete.
struct RowCol {
  enum class Axis { Row, Col } axis;
  int index;  ///< 0-based row of W or column of W
};

/// Principal minor after deleting one row or column of the n x m source W.
Decomposition delete_rowcol_decomposition(const Decomposition& dec, int source_rows, RowCol which);
/// Keeps the given 0-based rows and columns of W (any order, repeats
/// allowed) in one pass; equivalent to a sequence of deletions followed by
/// a permutation when the kept indices are distinct.
Decomposition restrict_decomposition(const Decomposition& dec, int source_rows, std::span<const int> rows,
                                     std::span<const int> cols);

/// +1 on and above the diagonal, -1 below.
SignMatrix triangular_matrix(int n);
/// W_ij = -1 for j <= thresholds[i], +1 otherwise (j 1-based).
SignMatrix row_threshold_matrix(std::span<const int> thresholds);

/// Per-coordinate 2x2 construction; beta = max |d_i|.
Decomposition diagonal_decomposition(std::span<const double> diagonal);
/// All-ones n x m matrix: P = half of the all-ones (n+m) matrix, N = half
/// of v v^T with v = (1,..,1,-1,..,-1). Diagonal entries are 1/2.
Decomposition ones_decomposition(int rows, int cols);

struct CertifierConfig {
  double tolerance = 1e-3;      ///< bisection stops when the bracket is this narrow
  int max_iterations = 1500;    ///< projection sweeps per feasibility test
  double beta_lo = 0.0;
  double beta_hi = 0.0;         ///< <= 0 means "use the spectral-split bound"
  int repair_every = 10;        ///< sweeps between certificate repairs
};

struct CertifyResult {
  double beta_hat = 0.0;
  /// ||W||_tr / (2 sqrt(nm)); no decomposition of W has a smaller beta.
  double lower_bound = 0.0;
  Decomposition decomposition;
  int feasibility_tests = 0;
  long total_sweeps = 0;
};

/// Smallest beta found by bisection with cyclic (Dykstra) projections onto
/// {P - N = sym(W)}, PSD x PSD and the diagonal cap. beta_hat is always an
/// upper bound certified by the returned decomposition. The bracket starts
/// at [max(beta_lo, trace-norm bound), spectral split], so it is empty when
/// the spectral split is already optimal. Requires n + m <= 256; throws
/// NumericalFailure when beta_hi is given and nothing at or below it is
/// certified.
CertifyResult certify_min_beta(const SignMatrix& w, const CertifierConfig& cfg = {});

/// Source of cached triangular-matrix certificates.
class CertificateCache {
 public:
  CertificateCache() = default;
  /// Loads tn_<n>.dec files from `directory` when present.
  explicit CertificateCache(std::string directory, CertifierConfig cfg = {});

  const Decomposition& triangular(int n);

 private:
  std::string directory_;
  CertifierConfig cfg_;
  std::mutex mu_;
  std::map<int, Decomposition> cache_;
};

/// Process-wide cache (reads $CSGAP_CERT_DIR when set).
CertificateCache& default_certificate_cache();

struct ThresholdDecomposition {
  SignMatrix w;
  Decomposition decomposition;
  int triangular_size = 0;  ///< size of the T certificate used
  int ones_size = 0;        ///< size of the J factor
};

/// Builds W from the thresholds and a decomposition by sorting rows,
/// tensoring a T certificate with J, deleting rows/columns, and undoing the
/// row permutation.
ThresholdDecomposition row_threshold_decomposition(std::span<const int> thresholds,
                                                   CertificateCache& cache = default_certificate_cache());

/// Cache file format: "beta <v>", "dim <d>", "P", d rows, "N", d rows.
void write_decomposition(std::ostream& out, const Decomposition& dec);
Decomposition read_decomposition(std::istream& in);
void save_decomposition(const std::string& path, const Decomposition& dec);
Decomposition load_decomposition(const std::string& path);

}  // namespace csgap
