#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahres/mu_operator.hpp"

using namespace ahres;

TEST_CASE("gaussian rationals") {
  QC a(mpq_class(1, 2), mpq_class(3)), b(2, -1);
  QC p = a * b;
  CHECK(p == QC(mpq_class(4), mpq_class(11, 2)));
  CHECK((p / b) == a);
  CHECK(QC::I() * QC::I() == QC(-1));
}

TEST_CASE("polynomial division and gcd") {
  Poly x = Poly::x();
  Poly f = (x - Poly(1)) * (x - Poly(2)) * (x + Poly(3));
  Poly g = (x - Poly(1)) * (x + Poly(5));
  Poly q, r;
  Poly::divmod(f, g, q, r);
  CHECK(q * g + r == f);
  CHECK(r.degree() < g.degree());
  CHECK(Poly::gcd(f, g).monic() == x - Poly(1));
  CHECK(f.derivative() == Poly(3) * x * x - Poly(7));
  CHECK(f.compose_affine(QC(1), QC(1)).eval(QC(0)) == QC(0));
}

TEST_CASE("rational functions reduce") {
  Poly x = Poly::x();
  RatFunc f(x * x - Poly(1), x - Poly(1));
  CHECK(f.is_polynomial());
  CHECK(f == RatFunc(x + Poly(1)));
  RatFunc g(Poly(1), x);
  CHECK_FALSE(g.is_polynomial());
  CHECK(g.derivative() == RatFunc(Poly(-1), x * x));
  CHECK((g * RatFunc(x)) == RatFunc(1));
}

TEST_CASE("operator composition follows the Leibniz rule") {
  Poly x = Poly::x();
  OpEntry d = OpEntry::dmu();
  OpEntry mu(RatFunc{x});
  // d o mu = mu d + 1
  OpEntry lhs = compose(d, mu);
  OpEntry rhs = compose(mu, d) + OpEntry(1);
  CHECK(lhs == rhs);
  // conjugation by mu^a: mu^{-a} d mu^a = d + a/mu
  OpEntry r = OpEntry(RatFunc(Poly(3), x));
  CHECK(d.conjugate_log(r) == d + OpEntry(RatFunc(Poly(3), x)));
}

TEST_CASE("parameter substitution") {
  OpEntry e = OpEntry::param(2) + OpEntry::param(1);
  // t = 2 u + 1: t^2 + t = 4u^2 + 6u + 2
  OpEntry s = e.substitute(QC(2), QC(1));
  CHECK(s.coeff(2, 0) == RatFunc(4));
  CHECK(s.coeff(1, 0) == RatFunc(6));
  CHECK(s.coeff(0, 0) == RatFunc(2));
  CHECK(e.eval_param(QC(3)).coeff(0, 0) == RatFunc(12));
}
