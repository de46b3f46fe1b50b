#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/extension.hpp"

#include <algorithm>
#include <random>

using namespace ahres;

namespace {

bool same_multiset(std::vector<cplx> a, std::vector<cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const cplx& x : a) {
    auto it = std::min_element(b.begin(), b.end(),
                               [&](cplx p, cplx q) { return std::abs(p - x) < std::abs(q - x); });
    if (std::abs(*it - x) > tol) return false;
    b.erase(it);
  }
  return true;
}

}  // namespace

TEST_CASE("spectral parameter") {
  CHECK(std::abs(sigma_lambda(2, 0, cplx(0, 0.5)).lambda) < 1e-15);
  CHECK(std::abs(sigma_lambda(2, 1, 0.0).lambda - 0.25) < 1e-15);
  SpectralParameter sp = sigma_lambda(2, 1, cplx(1.5, -0.3));
  CHECK(std::abs(sp.lambda - sp.sigma * sp.sigma - 0.25) < 1e-15);
  CHECK(std::abs(sp.sigma_tilde - sp.sigma - cplx(0, -0.5)) < 1e-15);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 100; ++i) {
    cplx s(u(rng), u(rng));
    int k = i % 3;
    SpectralParameter a = sigma_lambda(2, k, s);
    SpectralParameter b = lambda_sigma(2, k, a.lambda, a.sheet);
    CHECK(std::abs(b.sigma - s) < 1e-14 * (1 + std::abs(s)));
  }
  CHECK(lambda_sigma(2, 0, 0.25, 1).branch_point);
}

TEST_CASE("model operator at mu = 0") {
  OperatorPencil p = build_pencil_ambient(exact_h2(), 0, 0);
  CHECK(std::abs(p.A_at(1, 1, 0.0)(0, 0) - cplx(0, -4)) < 1e-14);
  CHECK(std::abs(p.A_at(1, 0, 0.0)(0, 0) - 4.0) < 1e-14);
  CHECK(std::abs(p.A_at(2, 0, 0.0)(0, 0)) < 1e-14);
  CHECK(std::abs(p.A_derivative_at(2, 0, 0.0, 1)(0, 0) - 4.0) < 1e-14);
  for (MetricSpec m : {exact_h2(), perturbed_h2()})
    for (int k = 0; k <= 2; ++k)
      for (int ell = 0; ell <= 3; ++ell) {
        ModelCheck mc = check_model_structure(build_pencil_ambient(m, k, ell));
        CHECK_MESSAGE(mc.ok, "k = " << k << " ell = " << ell);
      }
}

TEST_CASE("indicial roots") {
  OperatorPencil p = build_pencil_ambient(exact_h2(), 1, 1);
  REQUIRE(p.rank() == 3);
  std::vector<cplx> expect;
  for (int i = 0; i < 3; ++i) {
    expect.push_back(0.0);
    expect.push_back(cplx(0, 2));
  }
  CHECK(same_multiset(indicial_roots(p, 2.0), expect, 1e-12));
  OperatorPencil p0 = build_pencil_ambient(exact_h2(), 0, 0);
  CHECK(same_multiset(indicial_roots(p0, 0.0), {0.0, 0.0}, 1e-12));
  CHECK(same_multiset(indicial_roots(p0, cplx(0, -1)), {0.0, 1.0}, 1e-12));
}

TEST_CASE("the two routes agree exactly") {
  for (MetricSpec m : {exact_h2(), perturbed_h2()})
    for (int k = 0; k <= 2; ++k)
      for (int ell = 0; ell <= 3; ++ell) {
        OperatorPencil a = build_pencil_ambient(m, k, ell);
        OperatorPencil c = build_pencil_conjugated(m, k, ell);
        CHECK_MESSAGE(a.raw == c.raw, "k = " << k << " ell = " << ell);
        CHECK(a.cleared == c.cleared);
      }
}

TEST_CASE("Mellin shift") {
  MetricSpec m = exact_h2();
  for (int k = 0; k <= 2; ++k) {
    OperatorPencil shifted = build_pencil_ambient(m, k, 1);
    OperatorPencil unshifted = build_pencil_ambient_unshifted(m, k, 1);
    // sigma_tilde = sigma + i c
    QC c = QC::frac(2 - 2 * k - 1, 2);
    CHECK(unshifted.raw.substitute(QC(1), QC::I() * c) == shifted.raw);
  }
}

TEST_CASE("star intertwines k and n + 1 - k") {
  for (int k = 0; k <= 3; ++k)
    for (int ell = 0; ell <= 2; ++ell) CHECK(star_intertwines(perturbed_h2(), k, ell));
}

TEST_CASE("smoothness report") {
  OperatorPencil p = build_pencil_ambient(exact_h2(), 1, 2);
  SmoothnessReport r = smoothness_report(p);
  CHECK(r.all_smooth);
  CHECK(r.max_degree > 0);
  CHECK(smoothness_report(build_pencil_ambient(exact_h2(), 0, 0)).rank == 1);

  OperatorPencil bad = p;
  bad.raw(0, 0) += OpEntry(RatFunc(Poly(1), Poly::x()));
  SmoothnessReport rb = smoothness_report(bad);
  CHECK_FALSE(rb.all_smooth);
  CHECK(rb.flags.size() == 1);
}

TEST_CASE("non-clearable pencils are rejected") {
  MetricSpec m = exact_h2();
  MuOp raw = build_pencil_ambient(m, 0, 0).raw;
  raw(0, 0) += OpEntry(RatFunc(Poly(1), Poly::x()));
  try {
    make_pencil(m, 0, 0, raw, "fixture");
    FAIL("accepted a 1/mu coefficient");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPolynomialCoefficient);
  }
}
