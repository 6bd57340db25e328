#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "jobs.hpp"
#include "json.hpp"

using grushin::cli::run;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  Outcome r;
  r.code = run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(invoke({"verify", "dims", "--n", "2", "--m", "2", "--alpha", "1", "--kmax", "6"}).code == 0);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"verify", "frob"}).code == 1);
  CHECK(invoke({"table", "frob"}).code == 1);
  CHECK(invoke({"verify", "dims", "--bogus"}).code == 1);
  CHECK(invoke({"verify", "basis", "--n", "1", "--m", "1", "--alpha", "1"}).code == 1);
  CHECK(invoke({"table", "exponents", "--n", "2", "--m", "2", "--alpha", "2"}).code == 1);
  CHECK(invoke({"verify", "norms", "--bound", "ratio"}).code == 1);
  CHECK(invoke({"verify", "norms", "--all", "--n", "2"}).code == 1);
  CHECK(invoke({"verify", "norms", "--tol", "1e-30"}).code == 2);
}

TEST_CASE("report streams and schema") {
  auto r = invoke({"verify", "norms"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["job"] == "verify norms");
  CHECK(j["pass"] == true);
  CHECK(r.err.find("verify norms: PASS") != std::string::npos);
}

TEST_CASE("exponent table as CSV") {
  auto r = invoke({"table", "exponents", "--all", "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# schema_version: 1\n", 0) == 0);
  CHECK(r.out.find("m,n,alpha,p,q,r\n") != std::string::npos);
  CHECK(r.out.find("\n1,3,1,3/2,3,3\n") != std::string::npos);
  CHECK(r.out.find("\n2,2,1,5/3,5/2,5\n") != std::string::npos);
  CHECK(r.out.find("\n1,2,3,7/4,7/3,7\n") != std::string::npos);
}

TEST_CASE("tables for kernels and bases") {
  auto k = invoke({"table", "kernel", "--n", "2", "--m", "2", "--alpha", "1", "--format", "csv"});
  REQUIRE(k.code == 0);
  CHECK(k.out.find("phi1,phi2,cos_tau1,cos_tau2,value\n") != std::string::npos);
  auto b = invoke({"table", "basis", "--n", "2", "--m", "2", "--alpha", "1", "--kmax", "2"});
  REQUIRE(b.code == 0);
  auto j = nlohmann::json::parse(b.out);
  CHECK(j["elements"].size() == 4);
  CHECK(j["schema_version"] == 1);
}

TEST_CASE("runs are deterministic across seeds and threads") {
  const std::vector<std::string> base = {"verify", "addition", "--seed", "7"};
  auto a = invoke(base);
  auto b = invoke(base);
  auto args = base;
  args.insert(args.end(), {"--threads", "3"});
  auto c = invoke(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  auto d = invoke({"verify", "addition", "--seed", "8"});
  CHECK(d.code == 0);
  CHECK(nlohmann::json::parse(d.out)["seed"] == 8);
}

TEST_CASE("output file receives the report") {
  const auto path = std::filesystem::temp_directory_path() / "grushin_cli_test.csv";
  std::filesystem::remove(path);
  auto r = invoke({"table", "exponents", "--all", "--format", "csv", "--output", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().rfind("# schema_version: 1\n", 0) == 0);
  CHECK(r.out.find("table exponents") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("bounds by name") {
  auto r = invoke({"verify", "bounds", "--bound", "ratio"});
  CHECK(r.code == 0);
  CHECK(invoke({"verify", "bounds", "--bound", "nope"}).code == 1);
}
