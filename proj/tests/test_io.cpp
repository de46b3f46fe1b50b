#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/io.hpp"

#include <sstream>

using namespace ahres;

TEST_CASE("metric JSON round trip") {
  MetricSpec m = perturbed_h2();
  MetricSpec back = metric_from_json(metric_to_json(m));
  CHECK(back.warp == m.warp);
  CHECK(back.mu_left == m.mu_left);
  CHECK(back.mu_right == m.mu_right);
  CHECK(back.kind == m.kind);

  json j = metric_to_json(m);
  j["colour"] = "blue";
  CHECK_THROWS_AS(metric_from_json(j), Error);
  json k = metric_to_json(m);
  k.erase("warp");
  CHECK_THROWS_AS(metric_from_json(k), Error);
}

TEST_CASE("load_metric") {
  CHECK(load_metric("exact-h2").kind == MetricKind::ExactHyperbolic);
  CHECK(load_metric("perturbed-h2").kind == MetricKind::Perturbed);
  try {
    load_metric("/nonexistent/metric.json");
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    CHECK(std::string(e.what()).find("/nonexistent/metric.json") != std::string::npos);
  }
}

TEST_CASE("scan CSV") {
  ScanRow r;
  r.sigma = cplx(5, -0.5);
  r.norm = 4.0;
  r.ratio = 0.8;
  r.s = 2;
  std::ostringstream os;
  write_scan_csv(os, {r});
  std::istringstream is(os.str());
  std::string header, line;
  std::getline(is, header);
  std::getline(is, line);
  CHECK(header == "sigma_re,sigma_im,norm,ratio,s,k,ell_max");
  CHECK(line.rfind("5.000000000000e+00,-5.000000000000e-01,", 0) == 0);
}

TEST_CASE("resonance output") {
  ResonanceResult r;
  r.sigma = cplx(0, -0.5);
  r.flags = kStable;
  r.residue_rank = 1;
  json j = resonances_to_json({r});
  REQUIRE(j.is_array());
  CHECK(j[0]["residue_rank"] == 1);
  std::ostringstream os;
  write_resonances_csv(os, {r});
  CHECK(os.str().find("stable") != std::string::npos);
}

TEST_CASE("header comments carry the configuration") {
  std::ostringstream os;
  json c;
  c["k"] = 0;
  write_header_comments(os, c);
  CHECK(os.str().rfind("# ahres " + std::string(kVersion), 0) == 0);
  CHECK(os.str().find("# config {\"k\":0}") != std::string::npos);
}

TEST_CASE("exported pencil keeps exact coefficients") {
  OperatorPencil p = build_pencil_ambient(exact_h2(), 0, 0);
  json j = pencil_to_json(p);
  std::string text = j["coefficients"].dump();
  // rationals are written as strings; no floating-point literal may appear
  CHECK(text.find('.') == std::string::npos);
  CHECK(text.find("e-") == std::string::npos);
}
