#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include "cpsc/frontend.hpp"
#include "cpsc/normalize.hpp"
#include "cpsc/term.hpp"
#include "doctest.h"
#include "json.hpp"
#include "proc_support.hpp"

namespace {

const std::string cli = CPSC_CLI_PATH;
const std::string data = CPSC_TESTDATA_DIR;

std::string dataFile(const std::string& name) { return data + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("run evaluates a program against integer arguments") {
  auto r = proc::run(cli + " run " + dataFile("gcd.ps") + " --args 12,8");
  CHECK(r.code == 0);
  CHECK(r.out == "4\n");
  CHECK(r.err.empty());

  CHECK(proc::run(cli + " run " + dataFile("gcd.ps") + " --args 0,9").out == "9\n");
  CHECK(proc::run(cli + " run " + dataFile("gcd.ps") + " --args 21,14").out == "7\n");
  CHECK(proc::run(cli + " run " + dataFile("count5.ps")).out == "5\n");
}

TEST_CASE("run prints unit results") {
  auto r = proc::run(cli + " run " + dataFile("get_assert.ps"));
  CHECK(r.code == 0);
  CHECK(r.out == "()\n");
}

TEST_CASE("run respects the evaluation order flag") {
  auto r = proc::run(cli + " run " + dataFile("gcd.ps") + " --eval-order rtl --args 12,8");
  CHECK(r.code == 0);
  CHECK(r.out == "4\n");
}

TEST_CASE("run reports budget exhaustion without output") {
  auto r = proc::run(cli + " run " + dataFile("gcd.ps") + " --args 1,1000 --max-steps 10");
  CHECK(r.code == 5);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "exceeded"));
}

TEST_CASE("run reports failed assertions as runtime errors") {
  auto r = proc::run(cli + " run -", "assert (1 == 2)\n0\n");
  CHECK(r.code == 4);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "assertion"));
}

TEST_CASE("compile output matches the library renderer and is stable") {
  auto r = proc::run(cli + " compile " + dataFile("gcd.ps"));
  REQUIRE(r.code == 0);
  cpsc::Term t = cpsc::frontend::elaborate(cpsc::frontend::parse(slurp(dataFile("gcd.ps"))));
  CHECK(r.out == cpsc::renderText(t) + "\n");
  auto again = proc::run(cli + " compile " + dataFile("gcd.ps"));
  CHECK(again.out == r.out);
}

TEST_CASE("compile --normalize prints a parseable fixed point program") {
  auto r = proc::run(cli + " compile " + dataFile("gcd.ps") + " --normalize");
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "fix("));
  CHECK_FALSE(contains(r.out, "exit"));
  std::string text = r.out;
  REQUIRE(!text.empty());
  text.pop_back();  // trailing newline
  cpsc::Term parsed = cpsc::parseTermText(text);
  cpsc::Term t = cpsc::frontend::elaborate(cpsc::frontend::parse(slurp(dataFile("gcd.ps"))));
  auto norm = cpsc::betaEtaNormalize(t);
  REQUIRE(norm.ok());
  CHECK(cpsc::alphaEq(parsed, *norm.term));
}

TEST_CASE("compile --format json emits tagged nodes") {
  auto r = proc::run(cli + " compile " + dataFile("gcd.ps") + " --format json");
  REQUIRE(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("tag") == "Abs");
  CHECK(j.contains("body"));
}

TEST_CASE("check accepts well scoped programs") {
  auto r = proc::run(cli + " check " + dataFile("gcd.ps"));
  CHECK(r.code == 0);
  CHECK(r.out == "ok\n");
}

TEST_CASE("check rejects assignments outside the defining body") {
  auto r = proc::run(cli + " check " + dataFile("counter.ps"));
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "counter.ps:7:5: i cannot be assigned here."));
}

TEST_CASE("stdin input is diagnosed as <stdin>") {
  auto r = proc::run(cli + " check -", "val x =\n");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(contains(r.err, "<stdin>:"));
}

TEST_CASE("unsupported constructs exit with the parse code") {
  auto r = proc::run(cli + " check -", "[1, 2]\n");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(proc::run(cli).code == 1);
  CHECK(proc::run(cli + " frobnicate x.ps").code == 1);
  CHECK(proc::run(cli + " run " + dataFile("gcd.ps") + " --wibble").code == 1);
  CHECK(proc::run(cli + " compile " + dataFile("gcd.ps") + " --args 1,2").code == 1);
  CHECK(proc::run(cli + " run " + dataFile("gcd.ps") + " --max-steps 0").code == 1);
  auto missing = proc::run(cli + " run /nonexistent/nowhere.ps");
  CHECK(missing.code == 1);
  CHECK(contains(missing.err, "cannot open"));
  auto badArgs = proc::run(cli + " run " + dataFile("gcd.ps") + " --args 12,x");
  CHECK(badArgs.code == 1);
  CHECK(contains(badArgs.err, "--args"));
}
