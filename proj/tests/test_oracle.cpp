#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/oracle.hpp"

using namespace ahres::oracle;

namespace {

cplx bump(double mu) {
  if (mu <= 0) return 0.0;
  double r = r_of_mu(mu);
  return r * r / std::pow(std::cosh(r), 20);
}

}  // namespace

TEST_CASE("gamma poles, confirmed by Frobenius matching") {
  OracleWindow w{6.0, -2.5};
  auto r0 = gamma_pole_resonances(0, 0, w);
  REQUIRE(!r0.empty());
  CHECK(std::abs(r0[0].sigma - cplx(0, -0.5)) < 1e-14);
  for (int ell = 0; ell <= 5; ++ell)
    for (auto& r : gamma_pole_resonances(0, ell, w)) {
      CHECK(r.certainty < 1e-8);
      CHECK(r.multiplicity == 1);
      CHECK_FALSE(r.window_too_deep);
      // reality symmetry sigma -> -conj(sigma): the poles sit on the imaginary axis
      CHECK(std::abs(r.sigma + std::conj(r.sigma)) < 1e-14);
    }
  // mode 3 starts at -3.5i, outside the window
  CHECK(gamma_pole_resonances(0, 3, w).empty());
  CHECK(gamma_pole_resonances(0, -2, w).size() == gamma_pole_resonances(0, 2, w).size());
}

TEST_CASE("Wronskian zero count") {
  CHECK(frobenius_zero_count(0, cplx(0, -0.5), 0.1) == 1);
  CHECK(frobenius_zero_count(1, cplx(0.7, 0.3), 0.2) == 0);
  CHECK(std::abs(frobenius_zero(1, cplx(0.02, -1.48)) - cplx(0, -1.5)) < 1e-12);
}

TEST_CASE("only functions are covered") {
  try {
    gamma_pole_resonances(1, 1, {});
    FAIL("k = 1 accepted");
  } catch (const ahres::Error& e) {
    CHECK(e.code() == ahres::ErrorCode::UnsupportedWhich);
  }
}

TEST_CASE("direct scan") {
  const cplx sigma(0, 3);
  SUBCASE("self-convergence") {
    auto a = direct_scan(0, 2, sigma, bump, 96), b = direct_scan(0, 2, sigma, bump, 144);
    double err = 0;
    for (double r = 0.05; r < 6.0; r += 0.1) err = std::max(err, std::abs(a.interpolate_U(r) - b.interpolate_U(r)));
    CHECK(err < 1e-8);
  }
  SUBCASE("linearity") {
    auto a = direct_scan(0, 1, sigma, bump, 96);
    auto b = direct_scan(0, 1, sigma, [](double mu) { return 2.0 * bump(mu); }, 96);
    CHECK((b.U - 2.0 * a.U).norm() == 0.0);
  }
  SUBCASE("mode equation holds") {
    // U'' + coth(r) U' - ell^2 / sinh^2(r) U + (sigma^2 + 1/4) U = f, by finite differences
    const int ell = 1;
    auto a = direct_scan(0, ell, sigma, bump, 128);
    const double h = 1e-3;
    for (double r : {0.5, 1.0, 2.0}) {
      cplx u0 = a.interpolate_U(r), up = a.interpolate_U(r + h), um = a.interpolate_U(r - h);
      cplx res = (up - 2.0 * u0 + um) / (h * h) + (up - um) / (2 * h) / std::tanh(r) -
                 double(ell * ell) / std::pow(std::sinh(r), 2) * u0 + (sigma * sigma + 0.25) * u0 -
                 bump(mu_of_r(r));
      CHECK(std::abs(res) < 1e-5);
    }
  }
  SUBCASE("needs large Im sigma") {
    CHECK_THROWS_AS(direct_scan(0, 0, cplx(1, 1), bump), ahres::Error);
  }
}
