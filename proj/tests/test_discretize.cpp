#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/discretize.hpp"

using namespace ahres;

TEST_CASE("chebyshev grid") {
  SUBCASE("differentiates monomials") {
    for (int N : {32, 48}) {
      auto g = chebyshev_grid(N, -0.5, 4.0);
      for (int p = 1; p <= 8; ++p) {
        Eigen::VectorXd f = g.nodes.array().pow(p);
        Eigen::VectorXd df = p * g.nodes.array().pow(p - 1);
        CHECK((g.D * f - df).lpNorm<Eigen::Infinity>() < 1e-10 * std::pow(4.0, p));
      }
    }
    auto g = chebyshev_grid(32, -0.5, 4.0);
    Eigen::VectorXd f = g.nodes.array().cube();
    Eigen::VectorXd df = 3 * g.nodes.array().square();
    CHECK((g.D * f - df).lpNorm<Eigen::Infinity>() < 1e-10);
  }
  SUBCASE("nodes") {
    auto g = chebyshev_grid(8, 0.0, 1.0);
    CHECK(g.nodes(0) == 0.0);
    CHECK(g.nodes(7) == 1.0);
    for (int i = 1; i < 8; ++i) CHECK(g.nodes(i) > g.nodes(i - 1));
  }
  SUBCASE("too few nodes") {
    for (int N : {4, 7}) {
      try {
        chebyshev_grid(N, 0.0, 1.0);
        FAIL("accepted N = " << N);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BadInterval);
      }
    }
    CHECK_THROWS_AS(chebyshev_grid(16, 1.0, 0.0), Error);
  }
}

TEST_CASE("collocation reproduces operator application") {
  // w = 1 + mu/2 has no zero on [-0.5, 2]: plain collocation with a capped last node
  MetricSpec m = make_metric(2, {1.0, 0.5}, -0.5, 2.0, MetricKind::Perturbed);
  const int N = 40;
  auto g = chebyshev_grid(N, m.mu_left, m.mu_right);
  const cplx sigma(1.0, 0.5);
  for (int k = 0; k <= 1; ++k) {
    OperatorPencil p = build_pencil_ambient(m, k, 2);
    DiscretePencil dp = assemble(p, g);
    CHECK(dp.cavity);
    const int r = p.rank();
    // polynomial test section of degree N/4 in each slot
    std::vector<Poly> v;
    for (int s = 0; s < r; ++s) {
      std::vector<QC> c;
      for (int d = 0; d <= N / 4; ++d) c.push_back(QC::frac((d * 7 + s * 3) % 11 - 5, 7 + d));
      v.push_back(Poly(c));
    }
    Eigen::VectorXcd x(r * N);
    for (int s = 0; s < r; ++s)
      for (int i = 0; i < N; ++i) x(s * N + i) = v[s].eval(cplx(g.nodes(i), 0));
    Eigen::VectorXcd y = dp.at(sigma) * x;
    double err = 0, scale = 0;
    for (int i = 0; i < N - 1; ++i) {
      std::vector<Eigen::VectorXcd> jet(3, Eigen::VectorXcd(r));
      for (int s = 0; s < r; ++s) {
        Poly q = v[s];
        for (int j = 0; j < 3; ++j) {
          jet[j](s) = q.eval(cplx(g.nodes(i), 0));
          q = q.derivative();
        }
      }
      Eigen::VectorXcd ref = p.cleared.apply_at(sigma, g.nodes(i), jet);
      for (int s = 0; s < r; ++s) {
        err = std::max(err, std::abs(y(s * N + i) - ref(s)));
        scale = std::max(scale, std::abs(ref(s)));
      }
    }
    CHECK(err < 1e-9 * scale);
  }
}

TEST_CASE("absorber support") {
  MetricSpec m = exact_h2();
  auto g = chebyshev_grid(48, m.mu_left, m.mu_right);
  OperatorPencil p = build_pencil_ambient(m, 1, 1);
  AbsorberSpec a;
  a.mu_left = m.mu_left;
  a.delta1 = 0.1;
  a.strength = 2.0;
  for (AbsorberOrder o : {AbsorberOrder::Zeroth, AbsorberOrder::Second}) {
    a.order = o;
    DiscretePencil plain = assemble(p, g), absorbed = assemble(p, g, a);
    const int N = g.N;
    bool touched = false;
    for (int s = 0; s < p.rank(); ++s)
      for (int i = 0; i < N; ++i) {
        bool same = (plain.P0.row(s * N + i) - absorbed.P0.row(s * N + i)).norm() == 0.0;
        if (g.nodes(i) >= -0.1) CHECK(same);
        else touched = touched || !same;
      }
    CHECK(touched);
    CHECK(plain.P1 == absorbed.P1);
  }
  CHECK(a.chi(-0.1) == 0.0);
  CHECK(a.chi(m.mu_left) == doctest::Approx(1.0));
}

TEST_CASE("sigma^2 coefficient") {
  // sigma^2 drops out of the conjugated wave operator: A_{j,2} = 0 and P2 = 0
  MetricSpec m = perturbed_h2();
  auto g = chebyshev_grid(32, m.mu_left, m.mu_right);
  for (int k = 0; k <= 2; ++k) {
    OperatorPencil p = build_pencil_ambient(m, k, 1);
    CHECK(p.sigma_degree() <= 1);
    CHECK(assemble(p, g).P2.norm() == 0.0);
  }
}

TEST_CASE("polar regularization") {
  MetricSpec m = exact_h2();
  auto g = chebyshev_grid(32, m.mu_left, m.mu_right);
  DiscretePencil dp = assemble(build_pencil_ambient(m, 1, 2), g);
  CHECK_FALSE(dp.cavity);
  CHECK(dp.polar_orders == polar_vanishing_orders(mode_bundle(2, 1, 2)));
  // smooth forms of mode 2: dtheta coefficient vanishes to order 2, dmu to order 1, functions to order 2
  CHECK(dp.polar_orders == std::vector<int>{2, 1, 2});
}
