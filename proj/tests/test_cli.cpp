#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  static int counter = 0;
  std::string file = "ahres_cli_test_" + std::to_string(counter++) + ".out";
  std::string cmd = std::string(AHRES_CLI) + " " + args + " > " + file + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(file);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  std::remove(file.c_str());
  return r;
}

}  // namespace

TEST_CASE("resonances") {
  Run r = run("resonances --k 0 --ell-max 1 --N 48 --window \"|sigma|<=4,im>=-2\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("# config") != std::string::npos);
  CHECK(r.out.find("\"k\":0") != std::string::npos);
  CHECK(r.out.find("-5.000000") != std::string::npos);  // sigma = -i/2

  Run j = run("resonances --k 0 --ell-max 0 --N 48 --window \"|sigma|<=4,im>=-2\" --format json");
  CHECK(j.code == 0);
  Run j2 = run("resonances --k 0 --ell-max 0 --N 48 --window \"|sigma|<=4,im>=-2\" --format json");
  CHECK(j.out == j2.out);
}

TEST_CASE("configuration errors exit with 1") {
  CHECK(run("resonances --metric /nonexistent/metric.json").code == 1);
  CHECK(run("resonances --k 3").code == 1);
  CHECK(run("resonances --window nonsense").code == 1);
  CHECK(run("frobnicate").code == 1);
}

TEST_CASE("verify") {
  CHECK(run("verify --ell-max 1").code == 0);
  CHECK(run("verify --ell-max 1 --corrupt-fixture").code == 3);
}

TEST_CASE("oracle and export") {
  Run o = run("oracle --k 0 --ell-max 2");
  CHECK(o.code == 0);
  CHECK(o.out.find("gamma-pole") != std::string::npos);
  CHECK(run("oracle --k 1").code != 0);
  Run e = run("export --k 1 --ell 1");
  CHECK(e.code == 0);
  CHECK(e.out.find("coefficients") != std::string::npos);
}
