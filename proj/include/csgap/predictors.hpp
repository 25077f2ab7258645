#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "csgap/decompmat.hpp"
#include "csgap/realizations.hpp"
#include "csgap/sparse.hpp"

namespace csgap {

/// A trained hypothesis. Immutable after construction; safe to evaluate
/// concurrently.
class Predictor {
 public:
  virtual ~Predictor() = default;
  /// +1 or -1 for every well-formed instance.
  virtual int predict(const SparseVector& x) const = 0;
  /// Tagged textual node; see read_predictor.
  virtual void write(std::ostream& out) const = 0;

  PredictFn fn() const {
    return [this](const SparseVector& x) { return predict(x); };
  }
};

using PredictorPtr = std::shared_ptr<const Predictor>;

/// Stored label per seen instance; everything else gets +1.
class MajorityTable final : public Predictor {
 public:
  explicit MajorityTable(int n, std::map<SparseVector, int> labels = {});

  int predict(const SparseVector& x) const override;
  void write(std::ostream& out) const override;

  int dim() const { return n_; }
  const std::map<SparseVector, int>& labels() const { return labels_; }

 private:
  int n_;
  std::map<SparseVector, int> labels_;
};

/// Real score per cell of a part's n x n realization; predicts the sign of
/// the score at realize_c2(x), with 0 -> +1.
class MatrixPredictor final : public Predictor {
 public:
  MatrixPredictor(C2Part part, Matrix scores);

  int predict(const SparseVector& x) const override;
  void write(std::ostream& out) const override;

  /// 1-based cell.
  int predict_cell(int row, int col) const;
  C2Part part() const { return part_; }
  const Matrix& scores() const { return scores_; }

 private:
  C2Part part_;
  Matrix scores_;
};

/// How a composite maps an instance to (part, instance handed to the child).
enum class Router {
  Single,  ///< one part, instance unchanged
  C2,      ///< A^r parts, instance unchanged
  C3,      ///< D_{i,b} parts receive strip_first_nonzero(x).rest; the residual gets x
};

std::string router_name(Router r);
Router parse_router(const std::string& text);
std::pair<PartId, SparseVector> route(Router r, const SparseVector& x);

/// Routes each instance to its part's child; parts without a child get +1.
class CompositePredictor final : public Predictor {
 public:
  CompositePredictor(Router router, std::map<PartId, PredictorPtr> children);

  int predict(const SparseVector& x) const override;
  void write(std::ostream& out) const override;

  Router router() const { return router_; }
  const std::map<PartId, PredictorPtr>& children() const { return children_; }

 private:
  Router router_;
  std::map<PartId, PredictorPtr> children_;
};

/// x -> sign(<psi, x>).
class BinaryHalfspacePredictor final : public Predictor {
 public:
  explicit BinaryHalfspacePredictor(BinaryAssignment psi) : psi_(std::move(psi)) {}

  int predict(const SparseVector& x) const override { return eval_halfspace(psi_, x); }
  void write(std::ostream& out) const override;

  const BinaryAssignment& weights() const { return psi_; }

 private:
  BinaryAssignment psi_;
};

/// Node formats:
///   table n=<n> default=+1 rows=<k>      then k lines "<instance> -> <label>"
///   matrix r=<r> n=<n>                   then n rows of n scores
///   composite router=<single|c2|c3> parts=<k>
///                                        then k times "part <name>" + child node
///   binary n=<n>                         then one line of '+'/'-'
PredictorPtr read_predictor(std::istream& in);
std::string serialize_predictor(const Predictor& p);
PredictorPtr parse_predictor(const std::string& text);
void save_predictor(const std::string& path, const Predictor& p);
PredictorPtr load_predictor(const std::string& path);

}  // namespace csgap
