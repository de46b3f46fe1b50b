#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/oracle.hpp"
#include "ahres/resolvent.hpp"

#include <random>

using namespace ahres;

namespace {

// smooth on the plane: r^ell times an even function of the geodesic distance r
std::function<cplx(double)> smooth_datum(int ell) {
  return [ell](double mu) -> cplx {
    if (mu <= 0) return 0.0;
    double r = oracle::r_of_mu(mu);
    return std::pow(r, ell) / std::pow(std::cosh(r), 20);
  };
}

}  // namespace

TEST_CASE("schur_invert") {
  using M = Eigen::MatrixXcd;
  SUBCASE("scalar blocks") {
    M A(1, 1), B(1, 1), C(1, 1), D(1, 1);
    A << 1.0;
    B << 2.0;
    C << 3.0;
    D << 7.0;
    M full(2, 2);
    full << 1.0, 2.0, 3.0, 7.0;
    for (Corner c : {Corner::D, Corner::A})
      CHECK((full * schur_invert(A, B, C, D, c) - M::Identity(2, 2)).norm() < 1e-14);
  }
  SUBCASE("random blocks") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    auto rnd = [&](int r, int c) {
      M X(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) X(i, j) = cplx(g(rng), g(rng));
      return X;
    };
    M A = rnd(4, 4), B = rnd(4, 4), C = rnd(4, 4), D = rnd(4, 4) + 6.0 * M::Identity(4, 4);
    M full(8, 8);
    full << A, B, C, D;
    CHECK((full * schur_invert(A, B, C, D) - M::Identity(8, 8)).norm() < 1e-10);
    CHECK((full * schur_invert(A + 6.0 * M::Identity(4, 4), B, C, D, Corner::A)).rows() == 8);
  }
  SUBCASE("singular inner block") {
    M A = M::Identity(2, 2), B = M::Identity(2, 2), C = M::Identity(2, 2), D = M::Zero(2, 2);
    try {
      schur_invert(A, B, C, D);
      FAIL("inverted a singular D");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularInnerBlock);
    }
  }
}

TEST_CASE("strip parsing") {
  Strip s = parse_strip("im=-0.5,re=5:40:5");
  CHECK(s.im == -0.5);
  CHECK(s.re_min == 5.0);
  CHECK(s.re_max == 40.0);
  CHECK(s.re_step == 5.0);
  CHECK(parse_strip(strip_string(s)).re_max == 40.0);
  CHECK_THROWS_AS(parse_strip("im=-2,re=5:40:5"), Error);  // |Im sigma| >= C0
  CHECK_THROWS_AS(parse_strip("im=-0.5,re=5:40"), Error);
  CHECK_THROWS_AS(parse_strip("imag=0"), Error);
  CHECK_THROWS_AS(parse_strip("im=x"), Error);
}

TEST_CASE("which tags") {
  for (Which w : {Which::DeltaD, Which::DDelta, Which::Full}) CHECK(which_from_name(which_name(w)) == w);
  CHECK_THROWS_AS(which_from_name("dd"), Error);
}

TEST_CASE("weighted Sobolev norms") {
  const int N = 32;
  const double a = 0.5, b = 3.5;
  auto g = chebyshev_grid(N, a, b);
  Eigen::VectorXcd u(N);
  for (int i = 0; i < N; ++i) u(i) = std::sin(3 * g.nodes(i)) + cplx(0, 1) * g.nodes(i);
  NormSpec ns;
  ns.sigma_scale = 1.0;
  double prev = 0;
  for (double s : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    ns.s = s;
    double v = (norm_matrix(ns, N, a, b, 1) * u).norm();
    CHECK(v >= prev * (1 - 1e-12));
    prev = v;
  }
  // s = 0: discrete L^2 with Clenshaw-Curtis weights, exact for polynomials of degree < N
  ns.s = 0;
  Eigen::VectorXcd one = Eigen::VectorXcd::Ones(N);
  CHECK((norm_matrix(ns, N, a, b, 0) * one).norm() == doctest::Approx(std::sqrt(b - a)).epsilon(1e-12));
  // s = 1, ell = 0, sigma_scale = 1: ||u||^2 + ||u'||^2, here u = mu
  ns.s = 1;
  Eigen::VectorXcd lin = g.nodes.cast<cplx>();
  double h1 = (b * b * b - a * a * a) / 3 + (b - a);
  CHECK((norm_matrix(ns, N, a, b, 0) * lin).norm() == doctest::Approx(std::sqrt(h1)).epsilon(1e-10));
}

TEST_CASE("power_norm") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(12, 9);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 9; ++j) A(i, j) = cplx(g(rng), g(rng));
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  int it = 0;
  CHECK(power_norm(A, 500, 1e-10, &it) == doctest::Approx(svd.singularValues()(0)).epsilon(1e-6));
  CHECK(it > 0);
}

TEST_CASE("delta d resolvent satisfies the resolvent identity") {
  // (-Delta + sigma^2 + 1/4) (delta d R f) = delta d f, checked on the output grid away from the
  // pole, where differentiating twice on that grid amplifies solution errors by ~N^4
  MetricSpec m = exact_h2();
  const int ell = 1;
  ResolventQuery q;
  q.k = 0;
  q.ell = ell;
  q.spectral = sigma_lambda(2, 0, cplx(0.5, 2.5));
  q.rhs = {smooth_datum(ell)};
  ResolventOutput o = resolvent_apply(q, m, 96);
  LaplacianBlocks lb = laplacian_blocks(form_slots(2, 0, ell), m);
  ResolventContext ctx = make_context(m, 0, ell, 96);
  Eigen::MatrixXcd f(o.mu.size(), 1);
  for (int i = 0; i < o.mu.size(); ++i) f(i, 0) = q.rhs[0](o.mu(i));
  Eigen::MatrixXcd lhs = -apply_on_grid(lb.laplacian, ctx.out, o.values) + q.spectral.lambda * o.values;
  Eigen::MatrixXcd rhs = apply_on_grid(lb.delta_d, ctx.out, f);
  double err = 0, scale = rhs.cwiseAbs().maxCoeff();
  for (int i = 1; i < o.mu.size() - 1; ++i)
    if (o.mu(i) > 0.05 && o.mu(i) < 2.0) err = std::max(err, std::abs(lhs(i, 0) - rhs(i, 0)));
  CHECK(err < 1e-7 * scale);
  CHECK(o.solve_residual < 1e-6);
}

TEST_CASE("full resolvent") {
  MetricSpec m = exact_h2();
  SUBCASE("reconstruction from the two restrictions") {
    const int ell = 1;
    ResolventQuery q;
    q.k = 1;
    q.ell = ell;
    q.spectral = sigma_lambda(2, 1, cplx(0.3, 2.0));
    auto f = smooth_datum(1);
    q.rhs = {f, [&](double mu) { return 0.5 * f(mu) * mu; }};
    q.which = Which::DeltaD;
    ResolventOutput dd = resolvent_apply(q, m, 48);
    q.which = Which::DDelta;
    ResolventOutput ddl = resolvent_apply(q, m, 48);
    q.which = Which::Full;
    ResolventOutput full = resolvent_full(q, m, 48);
    CHECK(dd.values.norm() > 0);
    CHECK(ddl.values.norm() > 0);
    Eigen::MatrixXcd rec = dd.values + ddl.values + q.spectral.lambda * full.values;
    double err = 0;
    for (int i = 0; i < full.mu.size(); ++i)
      for (int s = 0; s < 2; ++s) {
        cplx fi = q.rhs[s](full.mu(i));
        err = std::max(err, std::abs(rec(i, s) + fi));
      }
    CHECK(err < 1e-8 * (1 + full.values.cwiseAbs().maxCoeff()));
  }
  SUBCASE("lambda = 0 in the middle degree") {
    ResolventQuery q;
    q.k = 1;
    q.ell = 1;
    q.spectral = sigma_lambda(2, 1, cplx(0, 0.5));
    q.rhs = {smooth_datum(1), smooth_datum(1)};
    try {
      resolvent_full(q, m, 32);
      FAIL("no pole reported");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PoleOfVarpi);
    }
  }
  SUBCASE("near a resonance") {
    ResolventQuery q;
    q.k = 0;
    q.ell = 0;
    q.spectral = sigma_lambda(2, 0, cplx(0, -0.5));
    q.rhs = {smooth_datum(0)};
    try {
      resolvent_apply(q, m, 48);
      FAIL("resonance not detected");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NearResonance);
    }
  }
}

TEST_CASE("d delta vanishes on functions; delta d vanishes on top forms") {
  MetricSpec m = exact_h2();
  ResolventQuery q;
  q.k = 0;
  q.ell = 1;
  q.spectral = sigma_lambda(2, 0, cplx(0, 2));
  q.rhs = {smooth_datum(1)};
  q.which = Which::DDelta;
  CHECK(resolvent_apply(q, m, 32).values.norm() == 0.0);
  q.k = 2;
  q.spectral = sigma_lambda(2, 2, cplx(0, 2));
  q.which = Which::DeltaD;
  CHECK(resolvent_apply(q, m, 32).values.norm() == 0.0);
}
