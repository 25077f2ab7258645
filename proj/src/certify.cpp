#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "csgap/decompmat.hpp"
#include "csgap/errors.hpp"

namespace csgap {
namespace {

Matrix proj_psd(const Matrix& m) {
  const auto solver = symmetric_eigen(m);
  const auto& v = solver.eigenvectors();
  Matrix out = v * solver.eigenvalues().cwiseMax(0.0).asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

double max_diag(const Decomposition& d) { return std::max(d.P.diagonal().maxCoeff(), d.N.diagonal().maxCoeff()); }

// Turns an approximate pair into an exact certificate: keep P PSD, force
// P - N = S, then shift both by a multiple of I until N is PSD too. The
// mirrored variant starts from N; the smaller beta wins.
Decomposition repair(const Matrix& s, const Matrix& p, const Matrix& n) {
  const auto d = s.rows();
  auto build = [&](const Matrix& psd_part, bool p_first) {
    Decomposition dec;
    if (p_first) {
      dec.P = proj_psd(psd_part);
      dec.N = dec.P - s;
    } else {
      dec.N = proj_psd(psd_part);
      dec.P = dec.N + s;
    }
    Matrix& other = p_first ? dec.N : dec.P;
    const double lambda = min_eigenvalue(other);
    if (lambda < 0) {
      const double shift = -lambda + 1e-10;
      dec.P += shift * Matrix::Identity(d, d);
      dec.N += shift * Matrix::Identity(d, d);
    }
    dec.beta = max_diag(dec);
    return dec;
  };
  auto a = build(p, true);
  auto b = build(n, false);
  return a.beta <= b.beta ? a : b;
}

struct Pair {
  Matrix P;
  Matrix N;
};

// Dykstra's cyclic projections onto the affine set, the PSD cone pair and
// the diagonal cap at `beta`. Returns the best repaired certificate seen.
// The iterate is updated in place so the next call can warm-start from it.
Decomposition feasibility(const Matrix& s, double beta, Pair& x, const CertifierConfig& cfg, double accept,
                          long& sweeps) {
  const auto d = s.rows();
  Pair inc_a{Matrix::Zero(d, d), Matrix::Zero(d, d)};
  Pair inc_b = inc_a;
  Pair inc_c = inc_a;
  Decomposition best;
  best.beta = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    ++sweeps;
    // affine: P - N = S
    {
      Matrix p = x.P + inc_a.P;
      Matrix n = x.N + inc_a.N;
      const Matrix r = p - n - s;
      x.P = p - 0.5 * r;
      x.N = n + 0.5 * r;
      inc_a.P = p - x.P;
      inc_a.N = n - x.N;
    }
    // PSD x PSD
    {
      Matrix p = x.P + inc_b.P;
      Matrix n = x.N + inc_b.N;
      x.P = proj_psd(p);
      x.N = proj_psd(n);
      inc_b.P = p - x.P;
      inc_b.N = n - x.N;
    }
    // diagonal cap
    {
      Matrix p = x.P + inc_c.P;
      Matrix n = x.N + inc_c.N;
      x.P = p;
      x.N = n;
      for (Eigen::Index i = 0; i < d; ++i) {
        x.P(i, i) = std::min(x.P(i, i), beta);
        x.N(i, i) = std::min(x.N(i, i), beta);
      }
      inc_c.P = p - x.P;
      inc_c.N = n - x.N;
    }
    if (!x.P.allFinite() || !x.N.allFinite()) throw NumericalFailure("certifier iterate is not finite");
    if (it % std::max(1, cfg.repair_every) == 0 || it == cfg.max_iterations) {
      auto cert = repair(s, x.P, x.N);
      if (cert.beta < best.beta) best = std::move(cert);
      if (best.beta <= accept) break;
    }
  }
  return best;
}

}  // namespace

CertifyResult certify_min_beta(const SignMatrix& w, const CertifierConfig& cfg) {
  if (w.rows() < 1 || w.cols() < 1) throw UsageError("empty matrix");
  if (w.rows() + w.cols() > 256) throw UsageError("certifier supports n + m <= 256");
  if (!(cfg.tolerance > 0)) throw UsageError("tolerance must be positive");
  if (cfg.beta_lo < 0) throw UsageError("beta_lo must be non-negative");
  if (cfg.max_iterations < 1) throw UsageError("max_iterations must be positive");
  const Matrix s = symmetrize(w.to_real());
  CertifyResult result;
  result.decomposition = spectral_split(s);
  result.beta_hat = result.decomposition.beta;

  const Eigen::JacobiSVD<Matrix> svd(w.to_real());
  if (svd.info() != Eigen::Success) throw NumericalFailure("singular value decomposition failed");
  result.lower_bound = svd.singularValues().sum() / (2.0 * std::sqrt(static_cast<double>(w.rows()) * w.cols()));
  double lo = std::max({0.0, cfg.beta_lo, result.lower_bound});
  double hi = cfg.beta_hi > 0 ? cfg.beta_hi : result.beta_hat;
  Pair x{result.decomposition.P, result.decomposition.N};
  while (hi - lo > cfg.tolerance) {
    const double mid = 0.5 * (lo + hi);
    ++result.feasibility_tests;
    auto cert = feasibility(s, mid, x, cfg, mid + 0.25 * cfg.tolerance, result.total_sweeps);
    if (cert.beta < result.beta_hat) {
      result.beta_hat = cert.beta;
      result.decomposition = cert;
    }
    if (cert.beta <= mid + 0.25 * cfg.tolerance) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (cfg.beta_hi > 0 && result.beta_hat > cfg.beta_hi + cfg.tolerance) {
    throw NumericalFailure("no feasible beta found below beta_hi within the iteration budget");
  }
  return result;
}

}  // namespace csgap
