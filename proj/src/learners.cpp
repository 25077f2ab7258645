#include "csgap/learners.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include "csgap/assignment_search.hpp"
#include "csgap/errors.hpp"
#include "csgap/matrix_learner.hpp"
#include "csgap/rng.hpp"

namespace csgap {
namespace {

// Stable per-part seed tag.
std::uint64_t part_tag(const PartId& p) {
  if (const auto* c = std::get_if<C2Part>(&p)) return static_cast<std::uint64_t>(c->r + 2);
  if (const auto* c = std::get_if<C3Part>(&p)) return 16 + 2 * static_cast<std::uint64_t>(c->i) + (c->b > 0 ? 1 : 0);
  if (std::holds_alternative<C3Residual>(p)) return 8;
  return 9;
}

[[noreturn]] void rethrow_annotated(const std::exception_ptr& e, const std::string& where) {
  try {
    std::rethrow_exception(e);
  } catch (const UsageError& x) {
    throw UsageError(where + ": " + x.what());
  } catch (const GuardViolation& x) {
    throw GuardViolation(where + ": " + x.what());
  } catch (const NumericalFailure& x) {
    throw NumericalFailure(where + ": " + x.what());
  } catch (const std::exception& x) {
    throw std::runtime_error(where + ": " + x.what());
  }
}

void require_sparsity(const Sample& s, int k, const char* who) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].x.nnz() > k) {
      throw UsageError(std::string(who) + ": example " + std::to_string(i + 1) + " has more than " +
                       std::to_string(k) + " nonzeros");
    }
  }
}

}  // namespace

void LearnerConfig::validate() const {
  if (!(epsilon > 0 && epsilon < 1)) throw UsageError("epsilon must lie in (0,1)");
  if (!(delta > 0 && delta < 1)) throw UsageError("delta must lie in (0,1)");
  if (!(beta >= 0) || !std::isfinite(beta)) throw UsageError("beta must be a finite non-negative number");
  if (!(beta_scale > 0) || !std::isfinite(beta_scale)) throw UsageError("beta scale must be positive");
  if (!(eta > 0) || !std::isfinite(eta)) throw UsageError("eta must be positive");
  if (epochs < 1) throw UsageError("epochs must be >= 1");
  if (!std::isfinite(tau)) throw UsageError("tau must be finite");
}

double LearnerConfig::beta_for(int n) const {
  if (beta > 0) return beta;
  return std::max(1.0, beta_scale * std::log2(static_cast<double>(std::max(n, 1))));
}

PredictorPtr table_majority_learn(const Sample& s) {
  std::map<SparseVector, int> votes;
  for (const auto& e : s) votes[e.x] += e.y;
  for (auto& [x, v] : votes) v = v >= 0 ? 1 : -1;
  return std::make_shared<MajorityTable>(std::max(1, s.dim()), std::move(votes));
}

Rational PartitionReport::weighted_error() const {
  Rational sum(0, 1);
  for (const auto& p : parts) sum = sum + p.mass * p.train_error;
  return sum;
}

PartitionResult partition_learn(const Sample& s, Router router, const PartLearner& learner, ExecutionPolicy policy) {
  PartitionResult result;
  result.report.total = static_cast<std::int64_t>(s.size());
  const int slice_k = router == Router::C3 ? std::min(s.sparsity(), 2) : s.sparsity();
  std::map<PartId, Sample> slices;
  for (const auto& e : s) {
    auto [part, inner] = route(router, e.x);
    auto it = slices.find(part);
    if (it == slices.end()) it = slices.emplace(part, Sample(s.dim(), slice_k)).first;
    it->second.add(std::move(inner), e.y);
  }

  std::vector<PartId> parts;
  std::vector<const Sample*> data;
  for (const auto& [part, slice] : slices) {
    parts.push_back(part);
    data.push_back(&slice);
  }
  const auto count = static_cast<std::int64_t>(parts.size());
  std::vector<PredictorPtr> children(parts.size());
  std::vector<std::int64_t> errors(parts.size(), 0);
  std::vector<std::exception_ptr> failures(parts.size());
#pragma omp parallel for schedule(dynamic, 1) if (policy == ExecutionPolicy::Parallel && count > 1)
  for (std::int64_t k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    try {
      children[i] = learner(parts[i], *data[i]);
      if (!children[i]) throw std::runtime_error("learner returned no predictor");
      errors[i] = count_errors(children[i]->fn(), *data[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }

  std::map<PartId, PredictorPtr> glued;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (failures[i]) rethrow_annotated(failures[i], "part " + part_name(parts[i]));
    const auto n_i = static_cast<std::int64_t>(data[i]->size());
    result.report.parts.push_back({parts[i], n_i, Rational(n_i, result.report.total), Rational(errors[i], n_i)});
    glued.emplace(parts[i], children[i]);
  }
  result.predictor = std::make_shared<CompositePredictor>(router, std::move(glued));
  return result;
}

PredictorPtr learn_h2(const Sample& s, const LearnerConfig& cfg) {
  cfg.validate();
  require_sparsity(s, 2, "learn_h2");
  const int n = std::max(1, s.dim());
  const double beta = cfg.beta_for(n);
  auto learner = [&](const PartId& id, const Sample& slice) -> PredictorPtr {
    const auto part = std::get<C2Part>(id);
    const bool singleton = part.r == 1 || part.r == -1;
    if (singleton && !cfg.matrix_singletons) return table_majority_learn(slice);
    std::vector<CellExample> cells;
    cells.reserve(2 * slice.size());
    for (const auto& e : slice) {
      const auto cell = realize_c2(e.x);
      cells.push_back({cell.row, cell.col, e.y});
      if (part.r == 2 || part.r == -2) cells.push_back({cell.col, cell.row, e.y});
    }
    MatrixLearnerConfig mc;
    mc.beta = beta;
    mc.eta = cfg.eta;
    mc.epochs = cfg.epochs;
    mc.tau = cfg.tau;
    mc.seed = derive_seed(cfg.seed, part_tag(id));
    return std::make_shared<MatrixPredictor>(part, matrix_mw_learn(cells, n, n, mc).scores);
  };
  return partition_learn(s, Router::C2, learner, cfg.policy).predictor;
}

PredictorPtr learn_h3(const Sample& s, const LearnerConfig& cfg) {
  cfg.validate();
  require_sparsity(s, 3, "learn_h3");
  auto learner = [&](const PartId& id, const Sample& slice) -> PredictorPtr {
    LearnerConfig child = cfg;
    child.seed = derive_seed(cfg.seed, part_tag(id));
    return learn_h2(slice, child);
  };
  return partition_learn(s, Router::C3, learner, cfg.policy).predictor;
}

PredictorPtr erm_binary_learn(const Sample& s, const LearnerConfig& cfg) {
  return std::make_shared<BinaryHalfspacePredictor>(erm_binary_halfspace(s, s.dim(), cfg.force).weights);
}

Algo parse_algo(std::string_view name) {
  if (name == "table") return Algo::Table;
  if (name == "h2") return Algo::H2;
  if (name == "h3") return Algo::H3;
  if (name == "erm-binary" || name == "erm") return Algo::ErmBinary;
  throw UsageError("unknown algorithm '" + std::string(name) + "' (table|h2|h3|erm-binary)");
}

std::string algo_name(Algo a) {
  switch (a) {
    case Algo::Table:
      return "table";
    case Algo::H2:
      return "h2";
    case Algo::H3:
      return "h3";
    case Algo::ErmBinary:
      return "erm-binary";
  }
  return "?";
}

PredictorPtr train(Algo a, const Sample& s, const LearnerConfig& cfg) {
  switch (a) {
    case Algo::Table:
      return table_majority_learn(s);
    case Algo::H2:
      return learn_h2(s, cfg);
    case Algo::H3:
      return learn_h3(s, cfg);
    case Algo::ErmBinary:
      return erm_binary_learn(s, cfg);
  }
  throw UsageError("unknown algorithm");
}

}  // namespace csgap
