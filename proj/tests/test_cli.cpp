#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cex/cli.hpp"

using nlohmann::json;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::vector<const char*> argv{"cex"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cex::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_CASE("gallery list carries the catalog") {
  CliRun r = run({"gallery", "list"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["tool_version"] == "0.1.0");
  bool has_schwarz = false, has_xlnx = false;
  for (const auto& row : j["tables"][0]["rows"]) {
    std::string name = row[0];
    if (name == "schwarz") has_schwarz = true;
    if (name == "xlnx") has_xlnx = true;
    CHECK(!row[3].get<std::string>().empty());  // every entry carries a note
  }
  CHECK(has_schwarz);
  CHECK(has_xlnx);
}

TEST_CASE("verify theorem3 passes and reports the diagonal table") {
  CliRun r = run({"verify", "theorem3", "--u", "geometric:0.5", "--depth", "10"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["config"]["depth"] == 10);
  bool all_pass = true;
  for (const auto& v : j["verdicts"]) all_pass = all_pass && v["status"] == "pass";
  CHECK(all_pass);
  bool found_table = false;
  for (const auto& t : j["tables"]) {
    if (t["name"] != "diagonal_variation") continue;
    found_table = true;
    for (const auto& row : t["rows"]) {
      // exact rationals render as num/den pairs; variation at N is N/1
      CHECK(row[1]["num"] == row[0].get<std::int64_t>());
      CHECK(row[1]["den"] == 1);
    }
  }
  CHECK(found_table);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({"verify", "theorem3", "--depth", "0"}).code == 2);
  CHECK(run({"verify", "unknown-target"}).code == 2);
  CHECK(run({"compute", "frobnicate", "--f", "xlnx"}).code == 2);
  CHECK(run({"compute", "variation"}).code == 2);  // missing --f
  CHECK(run({"compute", "norm", "--f", "octonion", "--p", "2"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("runtime failures exit with code 1") {
  // sine-square is Lipschitz: the witness search must fail, and that is an
  // execution error rather than a usage error
  CliRun r = run({"verify", "theorem2", "--f", "sine-square", "--levels", "3"});
  CHECK(r.code == 1);
  CHECK(r.err.find("witness") != std::string::npos);
}

TEST_CASE("compute norm reproduces the gamma values") {
  CliRun r = run({"compute", "norm", "--f", "xlnx-derivative", "--p", "2"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  auto row = j["tables"][0]["rows"][0];
  CHECK(std::fabs(row[1].get<double>() - 2.0) <= 1e-8);  // integral = Gamma(3)
}

TEST_CASE("compute variation emits an increasing per-depth table") {
  CliRun r = run({"compute", "variation", "--f", "sqrt-sine", "--from", "0.0009765625", "--depth", "16"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  const auto& rows = j["tables"][0]["rows"];
  REQUIRE(rows.size() > 3);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i][1].get<double>() >= rows[i - 1][1].get<double>() - 1e-12);
}

TEST_CASE("compute lipschitz on a built zigzag returns 1") {
  CliRun r = run({"compute", "lipschitz", "--f", "zigzag:sqrt:4"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  CHECK(std::fabs(j["tables"][0]["rows"][0][0].get<double>() - 1.0) <= 1e-9);
}

TEST_CASE("reports are byte-identical across runs") {
  std::vector<std::string> args{"verify", "schauder", "--count", "5"};
  CliRun a = run(args);
  CliRun b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::vector<std::string> seeded{"compute", "lipschitz", "--f", "sine-square", "--seed", "12345"};
  CHECK(run(seeded).out == run(seeded).out);
}

TEST_CASE("csv output renders one table per block with RFC quoting") {
  CliRun r = run({"compute", "norm", "--f", "xlnx-derivative", "--p", "1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("table,verdicts") != std::string::npos);
  CHECK(r.out.find("table,lp_norms") != std::string::npos);
  CHECK(r.out.find("p,integral,norm,method,converged") != std::string::npos);
  // options reach the nested gallery list subcommand
  CliRun g = run({"gallery", "list", "--format", "csv"});
  CHECK(g.code == 0);
  CHECK(g.out.find("table,gallery") != std::string::npos);
  CHECK(g.out.find("\"Q = [0,1]^2\"") != std::string::npos);  // comma forces quoting
}

TEST_CASE("compute ac-modulus and distribution round out the command set") {
  CliRun r = run({"compute", "ac-modulus", "--f", "sqrt-sine", "--delta", "0.1", "0.2", "--grid", "512"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["tables"][0]["rows"].size() == 2);
  CHECK(j["tables"][0]["rows"][0][3].get<double>() < 0.1);  // chosen length stays under delta

  CliRun d = run({"compute", "distribution", "--f", "xlnx-derivative", "--alpha", "4", "--method", "exact"});
  CHECK(d.code == 0);
  json jd = json::parse(d.out);
  CHECK(std::fabs(jd["tables"][0]["rows"][0][1].get<double>() - std::exp(-4.0)) <= 1e-15);
}

TEST_CASE("csv files land one table per path") {
  std::string base = "/tmp/cex_csv_test";
  CliRun r = run({"compute", "norm", "--f", "xlnx-derivative", "--p", "2", "--format", "csv", "--out", base});
  CHECK(r.code == 0);
  std::ifstream f(base + ".lp_norms.csv");
  REQUIRE(f.good());
  std::string header;
  std::getline(f, header);
  CHECK(header.find("p,integral,norm") == 0);
}

TEST_CASE("verify corollary3 and fichtenholz bundles pass end to end") {
  CHECK(run({"verify", "corollary3", "--depth", "12"}).code == 0);
  CliRun r = run({"verify", "fichtenholz", "--f", "xlnx", "--levels", "6"});
  CHECK(r.code == 0);
  json j = json::parse(r.out);
  bool witness_claims = false;
  for (const auto& v : j["verdicts"])
    if (v["claim"].get<std::string>().rfind("fich.witness", 0) == 0) witness_claims = true;
  CHECK(witness_claims);
}
