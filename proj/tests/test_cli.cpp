#include <doctest.h>

#include <algorithm>
#include <map>
#include <regex>

#include "cli_runner.hpp"
#include "csgap/decompmat.hpp"
#include "csgap/formulas.hpp"
#include "csgap/predictors.hpp"
#include "csgap/sparse.hpp"

using namespace csgap;
namespace fs = std::filesystem;

namespace {

double field(const std::string& out, const std::string& key) {
  const std::regex re(key + "=([-0-9.eE+]+)");
  std::smatch m;
  REQUIRE(std::regex_search(out, m, re));
  return std::stod(m[1]);
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(cli::run("--help").code == 0);
  CHECK(cli::run("").code == 2);
  CHECK(cli::run("frobnicate").code == 2);
  CHECK(cli::run("val").code == 2);
  CHECK(cli::run("val --in /nonexistent/formula.cnf").code == 2);
  CHECK(cli::run("gen-formula --n 5 --clauses 3 --kind 4sat --out /tmp/x").code == 2);
}

TEST_CASE("gen-formula, val, to-sample") {
  const auto dir = cli::scratch("gen");
  const auto planted = dir / "planted.maj";
  auto r = cli::run("gen-formula --kind 3maj --n 10 --clauses 50 --mode planted --seed 3 --out " + q(planted));
  REQUIRE(r.code == 0);
  CHECK(fs::exists(planted.string() + ".planted"));
  CHECK(fs::exists(planted.string() + ".manifest.json"));
  r = cli::run("val --in " + q(planted));
  CHECK(r.code == 0);
  CHECK(r.out.find("val=1 (1/1)") != std::string::npos);
  // the sidecar holds an assignment satisfying every clause
  const auto psi = BinaryAssignment::parse(cli::slurp(planted.string() + ".planted").substr(0, 10));
  CHECK(count_satisfied(load_formula(planted.string()), psi) == 50);

  const auto a = dir / "a.maj", a2 = dir / "a2.maj", b = dir / "b.maj";
  REQUIRE(cli::run("gen-formula --kind 3maj --n 12 --clauses 72 --seed 7 --out " + q(a)).code == 0);
  REQUIRE(cli::run("gen-formula --kind 3maj --n 12 --clauses 72 --seed 7 --out " + q(a2)).code == 0);
  REQUIRE(cli::run("gen-formula --kind 3maj --n 12 --clauses 72 --seed 8 --out " + q(b)).code == 0);
  CHECK(cli::slurp(a) == cli::slurp(a2));
  CHECK(cli::slurp(a) != cli::slurp(b));
  CHECK(serialize_formula(load_formula(a.string())) == cli::slurp(a));

  const auto cnf = dir / "c.cnf";
  REQUIRE(cli::run("gen-formula --kind 3cnf --n 8 --clauses 20 --seed 1 --out " + q(cnf)).code == 0);
  CHECK(cli::slurp(cnf).find("p cnf 8 20") != std::string::npos);

  const auto s = dir / "a.sample";
  REQUIRE(cli::run("to-sample --in " + q(a) + " --seed 4 --out " + q(s)).code == 0);
  CHECK(load_sample(s.string()).size() == 72);
  // one line per clause plus the header
  const auto text = cli::slurp(s);
  CHECK(std::count(text.begin(), text.end(), '\n') == 73);

  // a CNF formula cannot be turned into a sample
  CHECK(cli::run("to-sample --in " + q(cnf) + " --out " + q(dir / "x.sample")).code == 2);
}

TEST_CASE("val guard") {
  const auto dir = cli::scratch("guard");
  const auto f = dir / "big.maj";
  REQUIRE(cli::run("gen-formula --kind 3maj --n 30 --clauses 10 --seed 1 --out " + q(f)).code == 0);
  CHECK(cli::run("val --in " + q(f)).code == 3);
}

TEST_CASE("learn and eval") {
  const auto dir = cli::scratch("learn");
  const auto f = dir / "f.maj", s = dir / "s.sample";
  REQUIRE(cli::run("gen-formula --kind 3maj --n 10 --clauses 120 --seed 11 --out " + q(f)).code == 0);
  REQUIRE(cli::run("to-sample --in " + q(f) + " --seed 2 --out " + q(s)).code == 0);

  std::map<std::string, double> err;
  for (const std::string algo : {"table", "h3", "erm-binary"}) {
    const auto model = dir / (algo + ".model");
    const auto r = cli::run("learn --algo " + algo + " --train " + q(s) + " --model " + q(model) + " --seed 5");
    REQUIRE(r.code == 0);
    CHECK(fs::exists(model.string() + ".manifest.json"));
    const auto e = cli::run("eval --model " + q(model) + " --data " + q(s));
    REQUIRE(e.code == 0);
    err[algo] = field(e.out, "err");
    CHECK(e.out.find('/') != std::string::npos);
    // the model file reparses to the same text
    CHECK(serialize_predictor(*load_predictor(model.string())) == cli::slurp(model));
  }
  CHECK(err["table"] <= err["erm-binary"]);

  const auto empty = dir / "empty.sample";
  std::ofstream(empty) << "# sparse-sample n=10 k=3\n";
  CHECK(cli::run("eval --model " + q(dir / "table.model") + " --data " + q(empty)).code == 2);
  CHECK(cli::run("learn --algo svm --train " + q(s) + " --model " + q(dir / "x")).code == 2);
  CHECK(cli::run("learn --algo h3 --epochs 0 --train " + q(s) + " --model " + q(dir / "x")).code == 2);
}

TEST_CASE("refute") {
  const auto dir = cli::scratch("refute");
  const auto planted = dir / "p.maj", uniform = dir / "u.maj";
  REQUIRE(cli::run("gen-formula --kind 3maj --n 12 --clauses 72 --mode planted --seed 1 --out " + q(planted)).code == 0);
  REQUIRE(cli::run("gen-formula --kind 3maj --n 12 --clauses 72 --seed 2 --out " + q(uniform)).code == 0);
  auto r = cli::run("refute --in " + q(planted) + " --seed 3");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("exceptional err=0", 0) == 0);
  // the verdict follows the printed error and the default threshold
  for (const std::string fraction : {"0.05", "0.5", "1"}) {
    r = cli::run("refute --in " + q(uniform) + " --fraction " + fraction + " --seed 3");
    CHECK(r.code == 0);
    const bool exceptional = r.out.rfind("exceptional", 0) == 0;
    CHECK((exceptional || r.out.rfind("typical", 0) == 0));
    CHECK(exceptional == (field(r.out, "err") <= 0.375));
  }
  r = cli::run("refute --in " + q(uniform) + " --threshold 0.000001 --seed 3");
  CHECK(r.out.rfind("typical", 0) == 0);
  CHECK(cli::run("refute --in " + q(uniform) + " --fraction 1.5").code == 2);
  CHECK(cli::run("refute --help").out.find("0.375") != std::string::npos);
}

TEST_CASE("game and tradeoff are reproducible") {
  const auto dir = cli::scratch("repro");
  const std::string game = "game --n 10 --delta 4 --trials 5 --seed 9 --out ";
  REQUIRE(cli::run(game + q(dir / "g1.csv")).code == 0);
  REQUIRE(cli::run(game + q(dir / "g2.csv")).code == 0);
  CHECK(cli::drop_last_column(cli::slurp(dir / "g1.csv")) == cli::drop_last_column(cli::slurp(dir / "g2.csv")));
  CHECK(fs::exists(dir / "g1.csv.manifest.json"));
  const auto manifest = cli::slurp(dir / "g1.csv.manifest.json");
  CHECK(manifest.find("\"command\": \"game\"") != std::string::npos);
  CHECK(manifest.find("\"wall_ms\"") != std::string::npos);

  const std::string trade = "tradeoff --n 8 --sizes 0,40,200 --trials 2 --test-size 500 --seed 4 --out ";
  REQUIRE(cli::run(trade + q(dir / "t1.csv")).code == 0);
  REQUIRE(cli::run(trade + q(dir / "t2.csv")).code == 0);
  const auto t1 = cli::slurp(dir / "t1.csv");
  CHECK(cli::drop_last_column(t1) == cli::drop_last_column(cli::slurp(dir / "t2.csv")));
  CHECK(t1.find(",NA,") != std::string::npos);

  CHECK(cli::run("game --n 30 --trials 1 --out " + q(dir / "g.csv")).code == 3);
  CHECK(cli::run("tradeoff --sizes 10,x --out " + q(dir / "t.csv")).code == 2);
}

TEST_CASE("certify-beta") {
  const auto dir = cli::scratch("cert");
  double prev = 0;
  for (int n : {4, 8, 16}) {
    const auto out = dir / ("tn_" + std::to_string(n) + ".dec");
    const auto r = cli::run("certify-beta --matrix tn --n " + std::to_string(n) + " --out " + q(out));
    REQUIRE(r.code == 0);
    const double beta = field(r.out, "beta_hat");
    CHECK(beta >= prev);
    CHECK(beta >= 0.5);
    CHECK(beta <= field(r.out, "spectral") + 1e-6);
    prev = beta;
    const auto dec = load_decomposition(out.string());
    CHECK(verify_decomposition(triangular_matrix(n), dec).passed);
  }
  // min beta(T_4) = cos(pi/8) by an independent SDP solve
  const auto r4 = cli::run("certify-beta --n 4 --out " + q(dir / "t4.dec"));
  CHECK(field(r4.out, "beta_hat") >= 0.9238795 - 1e-3);
  CHECK(cli::run("certify-beta --n 0 --out " + q(dir / "x.dec")).code == 2);
  CHECK(cli::run("certify-beta --matrix jn --n 4 --out " + q(dir / "x.dec")).code == 2);
}
