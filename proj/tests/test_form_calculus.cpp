#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/form_calculus.hpp"

using namespace ahres;

namespace {

// derivative data of slot functions at a point: derivs[j][c]
std::vector<Eigen::VectorXcd> jet(const std::vector<std::vector<std::complex<double>>>& d) {
  std::vector<Eigen::VectorXcd> out;
  for (auto& row : d) out.push_back(Eigen::Map<const Eigen::VectorXcd>(row.data(), row.size()));
  return out;
}

RatFunc mu() { return RatFunc(Poly::x()); }

}  // namespace

TEST_CASE("bundle ranks") {
  CHECK(mode_bundle(2, 0, 3).rank == 1);
  CHECK(mode_bundle(2, 1, 3).rank == 3);
  CHECK(mode_bundle(2, 2, 3).rank == 3);
  CHECK(form_slots(2, 1, 0).labels == std::vector<std::string>{"dtheta", "dmu"});
  CHECK(form_slots(2, 3, 0).rank() == 0);
}

TEST_CASE("d_matrix") {
  SUBCASE("k = 1, ell = 2 on (mu dtheta, dmu)") {
    MuOp d = d_matrix(form_slots(2, 1, 2));
    REQUIRE(d.rows() == 1);
    // a = mu, b = 1: values (mu, 1), first derivatives (1, 0)
    auto v = d.apply_at(0.0, 0.7, jet({{0.7, 1.0}, {1.0, 0.0}, {0.0, 0.0}}));
    CHECK(std::abs(v(0) - std::complex<double>(1, -2)) < 1e-14);
  }
  SUBCASE("d of a constant") {
    MuOp d = d_matrix(form_slots(2, 0, 0));
    auto v = d.apply_at(0.0, 0.3, jet({{1.0}, {0.0}, {0.0}}));
    CHECK(v.norm() == 0.0);
  }
  for (int ell = 0; ell <= 3; ++ell) {
    MuOp dd = d_matrix(form_slots(2, 1, ell)) * d_matrix(form_slots(2, 0, ell));
    CHECK(dd.is_zero());
  }
  try {
    d_matrix(form_slots(2, 3, 0));
    FAIL("degree 3 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegreeOutOfRange);
  }
}

TEST_CASE("delta_matrix") {
  MetricSpec m = exact_h2();
  CHECK(delta_matrix(form_slots(2, 0, 1), m).is_zero());
  for (int ell = 0; ell <= 3; ++ell) {
    MuOp dd = delta_matrix(form_slots(2, 1, ell), m) * delta_matrix(form_slots(2, 2, ell), m);
    CHECK(dd.is_zero());
  }
  // dmu component of delta on 1-forms: -4 mu^2 d_mu - 2 mu + mu^2 gamma, gamma(0) = -2 w'(0)/w(0) = 1
  MuOp del = delta_matrix(form_slots(2, 1, 0), m);
  RatFunc c0 = del(0, 1).coeff(0, 0);
  CHECK(del(0, 1).coeff(0, 1) == RatFunc(Poly(std::vector<QC>{QC(0), QC(0), QC(-4)})));
  RatFunc gamma = (c0 + RatFunc(2) * mu()) / (mu() * mu());
  CHECK(gamma.eval(QC(0)) == QC(1));
}

TEST_CASE("Laplacian blocks") {
  for (MetricSpec m : {exact_h2(), perturbed_h2()})
    for (int k = 0; k <= 2; ++k)
      for (int ell = 0; ell <= 3; ++ell) {
        LaplacianBlocks b = laplacian_blocks(form_slots(2, k, ell), m);
        CHECK(b.d_delta + b.delta_d == b.laplacian);
      }
  // on functions: -4 mu^2 d^2 - (2 mu^2 w'/w + 2 mu) d + ell^2 mu / w
  MetricSpec m = perturbed_h2();
  const int ell = 2;
  RatFunc w = m.w();
  MuOp lap = laplacian_blocks(form_slots(2, 0, ell), m).laplacian;
  CHECK(lap(0, 0).coeff(0, 2) == RatFunc(-4) * mu() * mu());
  CHECK(lap(0, 0).coeff(0, 1) == -(RatFunc(2) * mu() * mu() * w.derivative() / w + RatFunc(2) * mu()));
  CHECK(lap(0, 0).coeff(0, 0) == RatFunc(ell * ell) * mu() / w);
}

TEST_CASE("Hodge star") {
  MetricSpec m = exact_h2();
  for (int ell = 0; ell <= 2; ++ell) {
    HodgeStar s1 = hodge_star(form_slots(2, 1, ell), m);
    HodgeStar ss = compose(s1, s1);
    // kappa R with kappa = mu^a w^b; for ** the powers are integers
    REQUIRE(ss.mu_power.get_den() == 1);
    REQUIRE(ss.w_power.get_den() == 1);
    RatFunc kappa(1);
    for (long i = 0; i < ss.mu_power.get_num().get_si(); ++i) kappa *= mu();
    for (long i = 0; i < ss.w_power.get_num().get_si(); ++i) kappa *= m.w();
    CHECK(kappa * ss.R == RatFunc(-1) * MuOp::identity(2));
    HodgeStar s0 = hodge_star(form_slots(2, 0, ell), m);
    CHECK(s0.from_k == 0);
    CHECK(s0.to_k == 2);
    CHECK(s0.R.rows() == 1);
    CHECK(s0.R.cols() == 1);
    // the volume form dmu dtheta sqrt(w) / (2 mu^{3/2}) carries sqrt(w)
    CHECK(s0.w_power == mpq_class(1, 2));
  }
}

TEST_CASE("ambient complex") {
  for (int k = 0; k <= 2; ++k)
    for (int ell = 0; ell <= 2; ++ell) CHECK((ambient_d(k + 1, ell) * ambient_d(k, ell)).is_zero());

  SUBCASE("d mu") {
    MuOp d = ambient_d(0, 0);
    auto slots = ambient_slots(1);
    auto v = d.apply_at(0.0, 0.4, jet({{0.4}, {1.0}, {0.0}}));
    for (size_t i = 0; i < slots.size(); ++i)
      CHECK(std::abs(v(i) - (slots[i].mask == 2 ? 1.0 : 0.0)) < 1e-15);
  }
  SUBCASE("restriction to X-forms") {
    for (int k = 0; k <= 1; ++k) {
      int nx = form_slots(2, k, 1).rank(), nx1 = form_slots(2, k + 1, 1).rank();
      MuOp d = ambient_d(k, 1).block(0, 0, nx1, nx).eval_param(QC(0));
      CHECK(d == d_matrix(form_slots(2, k, 1)));
    }
  }
  SUBCASE("delta squared") {
    AmbientMetric a = ambient_metric(exact_h2());
    for (int ell = 0; ell <= 2; ++ell) {
      // delta_2 lowers the homogeneity by 2
      MuOp dd = ambient_delta(1, ell, a).substitute(QC(1), QC(-2)) * ambient_delta(2, ell, a);
      CHECK(dd.is_zero());
    }
  }
}
