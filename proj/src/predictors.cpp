#include "csgap/predictors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "csgap/errors.hpp"

namespace csgap {
namespace {

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "key=value" lookup on a header line.
std::string field(const std::string& header, const std::string& key) {
  std::istringstream in(header);
  std::string token;
  while (in >> token) {
    if (token.rfind(key + "=", 0) == 0) return token.substr(key.size() + 1);
  }
  throw UsageError("model header '" + header + "' lacks " + key + "=");
}

int int_field(const std::string& header, const std::string& key) {
  const auto v = field(header, key);
  try {
    std::size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used == v.size()) return out;
  } catch (const std::logic_error&) {
  }
  throw UsageError("model header field " + key + "=" + v + " is not an integer");
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

PredictorPtr read_node(std::istream& in) {
  std::string header;
  if (!next_line(in, header)) throw UsageError("model: unexpected end of input");
  std::istringstream hs(header);
  std::string tag;
  hs >> tag;
  if (tag == "table") {
    const int n = int_field(header, "n");
    const int rows = int_field(header, "rows");
    if (field(header, "default") != "+1") throw UsageError("model: table default must be +1");
    if (rows < 0) throw UsageError("model: negative row count");
    std::map<SparseVector, int> labels;
    std::string line;
    for (int k = 0; k < rows; ++k) {
      if (!next_line(in, line)) throw UsageError("model: truncated table");
      const auto arrow = line.find("->");
      if (arrow == std::string::npos) throw UsageError("model: table row lacks '->'");
      std::istringstream ls(line.substr(arrow + 2));
      std::string label;
      ls >> label;
      labels[parse_instance(line.substr(0, arrow), n)] = parse_label(label);
    }
    return std::make_shared<MajorityTable>(n, std::move(labels));
  }
  if (tag == "matrix") {
    const int r = int_field(header, "r");
    const int n = int_field(header, "n");
    if (n < 1) throw UsageError("model: matrix size must be positive");
    Matrix scores(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!(in >> scores(i, j))) throw UsageError("model: truncated matrix");
      }
    }
    return std::make_shared<MatrixPredictor>(C2Part{r}, std::move(scores));
  }
  if (tag == "composite") {
    const Router router = parse_router(field(header, "router"));
    const int parts = int_field(header, "parts");
    std::map<PartId, PredictorPtr> children;
    std::string line;
    for (int k = 0; k < parts; ++k) {
      if (!next_line(in, line)) throw UsageError("model: truncated composite");
      std::istringstream ls(line);
      std::string word, name;
      if (!(ls >> word >> name) || word != "part") throw UsageError("model: expected 'part <name>'");
      children[parse_part_name(name)] = read_node(in);
    }
    return std::make_shared<CompositePredictor>(router, std::move(children));
  }
  if (tag == "binary") {
    const int n = int_field(header, "n");
    std::string line;
    if (!next_line(in, line)) throw UsageError("model: truncated binary node");
    auto psi = BinaryAssignment::parse(line);
    if (psi.dim() != n) throw UsageError("model: binary weight length differs from n");
    return std::make_shared<BinaryHalfspacePredictor>(std::move(psi));
  }
  throw UsageError("model: unknown node '" + tag + "'");
}

}  // namespace

MajorityTable::MajorityTable(int n, std::map<SparseVector, int> labels) : n_(n), labels_(std::move(labels)) {
  if (n < 1) throw UsageError("dimension must be positive");
}

int MajorityTable::predict(const SparseVector& x) const {
  const auto it = labels_.find(x);
  return it == labels_.end() ? 1 : it->second;
}

void MajorityTable::write(std::ostream& out) const {
  out << "table n=" << n_ << " default=+1 rows=" << labels_.size() << '\n';
  for (const auto& [x, y] : labels_) out << format_instance(x) << " -> " << format_label(y) << '\n';
}

MatrixPredictor::MatrixPredictor(C2Part part, Matrix scores) : part_(part), scores_(std::move(scores)) {
  if (part.r < -2 || part.r > 2) throw UsageError("C2 part r out of range");
  if (scores_.rows() != scores_.cols() || scores_.rows() < 1) throw UsageError("score matrix must be square");
  if (!scores_.allFinite()) throw NumericalFailure("score matrix is not finite");
}

int MatrixPredictor::predict_cell(int row, int col) const {
  if (row < 1 || col < 1 || row > scores_.rows() || col > scores_.cols()) throw UsageError("cell out of range");
  return sign_of(scores_(row - 1, col - 1));
}

int MatrixPredictor::predict(const SparseVector& x) const {
  const auto cell = realize_c2(x);
  if (cell.part != part_) throw UsageError("instance outside the predictor's part");
  return predict_cell(cell.row, cell.col);
}

void MatrixPredictor::write(std::ostream& out) const {
  out << "matrix r=" << part_.r << " n=" << scores_.rows() << '\n';
  for (Eigen::Index i = 0; i < scores_.rows(); ++i) {
    for (Eigen::Index j = 0; j < scores_.cols(); ++j) out << (j ? " " : "") << format_score(scores_(i, j));
    out << '\n';
  }
}

std::string router_name(Router r) {
  switch (r) {
    case Router::Single:
      return "single";
    case Router::C2:
      return "c2";
    case Router::C3:
      return "c3";
  }
  return "?";
}

Router parse_router(const std::string& text) {
  if (text == "single") return Router::Single;
  if (text == "c2") return Router::C2;
  if (text == "c3") return Router::C3;
  throw UsageError("unknown router '" + text + "'");
}

std::pair<PartId, SparseVector> route(Router r, const SparseVector& x) {
  switch (r) {
    case Router::Single:
      return {WholePart{}, x};
    case Router::C2:
      return {part_of_c2(x), x};
    case Router::C3: {
      const auto part = part_of_c3(x);
      if (std::holds_alternative<C3Part>(part)) return {part, strip_first_nonzero(x).rest};
      return {part, x};
    }
  }
  throw UsageError("unknown router");
}

CompositePredictor::CompositePredictor(Router router, std::map<PartId, PredictorPtr> children)
    : router_(router), children_(std::move(children)) {
  for (const auto& [part, child] : children_) {
    if (!child) throw UsageError("composite child for part " + part_name(part) + " is null");
  }
}

int CompositePredictor::predict(const SparseVector& x) const {
  auto [part, inner] = route(router_, x);
  const auto it = children_.find(part);
  return it == children_.end() ? 1 : it->second->predict(inner);
}

void CompositePredictor::write(std::ostream& out) const {
  out << "composite router=" << router_name(router_) << " parts=" << children_.size() << '\n';
  for (const auto& [part, child] : children_) {
    out << "part " << part_name(part) << '\n';
    child->write(out);
  }
}

void BinaryHalfspacePredictor::write(std::ostream& out) const {
  out << "binary n=" << psi_.dim() << '\n' << psi_.str() << '\n';
}

PredictorPtr read_predictor(std::istream& in) {
  auto p = read_node(in);
  std::string rest;
  if (next_line(in, rest)) throw UsageError("model: trailing content '" + rest + "'");
  return p;
}

std::string serialize_predictor(const Predictor& p) {
  std::ostringstream out;
  p.write(out);
  return out.str();
}

PredictorPtr parse_predictor(const std::string& text) {
  std::istringstream in(text);
  return read_predictor(in);
}

void save_predictor(const std::string& path, const Predictor& p) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  p.write(out);
}

PredictorPtr load_predictor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_predictor(in);
}

}  // namespace csgap
