#include "ahres/oracle.hpp"

#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>

namespace ahres::oracle {

namespace {

using hp = boost::multiprecision::cpp_complex_50;
using hr = boost::multiprecision::cpp_bin_float_50;

hp H(cplx z) { return hp(hr(z.real()), hr(z.imag())); }
cplx D(const hp& z) { return cplx(static_cast<double>(z.real()), static_cast<double>(z.imag())); }

// Radial equation of mode ell in q = e^{-2r} (q = mu/4):
//   4(1-q)^2 D^2 u - 2(1-q^2) D u - 4 q ell^2 u + (sigma^2 + 1/4)(1-q)^2 u = 0,  D = q d/dq.
// Boundary-adapted solution u_L = q^beta sum c_j q^j, beta = (1/2 - i sigma)/2;
// centre-regular solution u_R = sum e_j p^{ell+j}, p = 1 - q.
constexpr int kTerms = 320;

struct Pair {
  hp u, du;  // value and d/dq at q = 1/2
};

Pair left_solution(int ell, const hp& s) {
  const hp lam = s * s + hp(0.25);
  const hp beta = (hp(0.5) - hp(0, 1) * s) / hp(2);
  const hp L2 = hp(double(ell) * ell);
  auto L0 = [&](const hp& x) { return hp(4) * x * x - hp(2) * x + lam; };
  auto L1 = [&](const hp& x) { return hp(-8) * x * x - hp(4) * L2 - hp(2) * lam; };
  auto L2f = [&](const hp& x) { return hp(4) * x * x + hp(2) * x + lam; };
  const hp q = hp(0.5);
  hp cm2 = 0, cm1 = 1, v = 1, dv = 0, qp = 1;
  for (int j = 1; j < kTerms; ++j) {
    hp num = L1(beta + hp(j - 1)) * cm1;
    if (j >= 2) num += L2f(beta + hp(j - 2)) * cm2;
    hp c = -num / L0(beta + hp(j));
    dv += hp(j) * c * qp;  // d/dq of c q^j
    qp *= q;
    v += c * qp;
    cm2 = cm1;
    cm1 = c;
  }
  hp qb = exp(beta * log(q));
  return {qb * v, qb * (beta * v / q + dv)};
}

Pair right_solution(int ell, const hp& s) {
  const hp lam = s * s + hp(0.25);
  const hp l2 = hp(double(ell) * ell);
  auto M0 = [&](const hp& x) { return hp(4) * (x * x - l2); };
  auto M1 = [&](const hp& x) { return hp(-8) * x * (x - hp(1)) - hp(10) * x + hp(4) * l2; };
  auto M2 = [&](const hp& x) { return hp(4) * x * (x - hp(1)) + hp(6) * x + lam; };
  const hp p = hp(0.5);
  hp em2 = 0, em1 = 1;
  hp pl = pow(p, ell);
  hp u = pl, dudp = (ell > 0) ? hp(ell) * pl / p : hp(0);
  hp pp = pl;
  for (int j = 1; j < kTerms; ++j) {
    hp x = hp(ell + j);
    hp num = M1(x - hp(1)) * em1;
    if (j >= 2) num += M2(x - hp(2)) * em2;
    hp e = -num / M0(x);
    dudp += x * e * pp;
    pp *= p;
    u += e * pp;
    em2 = em1;
    em1 = e;
  }
  return {u, -dudp};  // d/dq = -d/dp
}

hp wronskian_hp(int ell, const hp& s) {
  Pair L = left_solution(ell, s), R = right_solution(ell, s);
  return L.u * R.du - L.du * R.u;
}

}  // namespace

cplx frobenius_wronskian(int ell, cplx sigma) { return D(wronskian_hp(std::abs(ell), H(sigma))); }

cplx frobenius_zero(int ell, cplx sigma0, int* iterations) {
  ell = std::abs(ell);
  hp s = H(sigma0);
  const hp h = hp(hr("1e-15"));
  int it = 0;
  for (; it < 60; ++it) {
    hp w = wronskian_hp(ell, s);
    hp dw = (wronskian_hp(ell, s + h) - wronskian_hp(ell, s - h)) / (hp(2) * h);
    hp step = w / dw;
    s -= step;
    if (abs(step) < hr("1e-40")) break;
  }
  if (iterations) *iterations = it;
  return D(s);
}

int frobenius_zero_count(int ell, cplx c, double r) {
  ell = std::abs(ell);
  const int M = 96;
  double total = 0;
  cplx prev = frobenius_wronskian(ell, c + r);
  for (int i = 1; i <= M; ++i) {
    double t = 2 * M_PI * i / M;
    cplx cur = frobenius_wronskian(ell, c + r * std::exp(cplx(0, t)));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

std::vector<OracleResonance> gamma_pole_resonances(int k, int ell, const OracleWindow& w) {
  if (k != 0)
    throw Error(ErrorCode::UnsupportedWhich,
                "exact-model oracle covers k = 0 only (k = " + std::to_string(k) + ")");
  const int l = std::abs(ell);
  std::vector<OracleResonance> out;
  // centre-regular solution = q^beta (1-q)^l 2F1(l + 1/2 - i sigma, l + 1/2; 1 - i sigma; q) up to the
  // coefficient of the singular branch, Gamma(1 - i sigma) Gamma(2l) / (Gamma(l + 1/2 - i sigma) Gamma(l + 1/2));
  // it vanishes at the poles of Gamma(l + 1/2 - i sigma)
  for (int j = 0;; ++j) {
    cplx sg(0, -(l + 0.5 + j));
    if (std::abs(sg) > w.radius || sg.imag() < w.im_min) break;
    OracleResonance r;
    r.sigma = sg;
    r.k = k;
    r.ell = ell;
    cplx fz = frobenius_zero(l, sg + cplx(0.013, 0.009));
    r.certainty = std::abs(fz - sg);
    r.multiplicity = frobenius_zero_count(l, sg, 0.1);
    if (!(r.certainty < 1e-8)) r.window_too_deep = true;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Direct solve in geodesic polar distance r on [0, R], R = r(mu_min).

namespace {

struct Cheb {
  Eigen::VectorXd x, wts;
  Eigen::MatrixXd D;
};

// Chebyshev points of the second kind on [a, b] with barycentric weights
Cheb cheb(int N, double a, double b) {
  Cheb c;
  c.x.resize(N);
  c.wts.resize(N);
  for (int j = 0; j < N; ++j) {
    c.x(j) = a + (b - a) * 0.5 * (1.0 - std::cos(M_PI * j / (N - 1)));
    c.wts(j) = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == N - 1) ? 0.5 : 1.0);
  }
  c.D = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j)
      if (i != j) c.D(i, j) = (c.wts(j) / c.wts(i)) / (c.x(i) - c.x(j));
    c.D(i, i) = -c.D.row(i).sum();
  }
  return c;
}

cplx barycentric(const Eigen::VectorXd& x, const Eigen::VectorXcd& f, double t) {
  const int N = x.size();
  cplx num = 0;
  double den = 0;
  for (int j = 0; j < N; ++j) {
    double wj = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == N - 1) ? 0.5 : 1.0);
    double d = t - x(j);
    if (d == 0.0) return f(j);
    num += wj / d * f(j);
    den += wj / d;
  }
  return num / den;
}

}  // namespace

cplx DirectSolution::interpolate_U(double t) const { return barycentric(r, U, t); }
cplx DirectSolution::interpolate_deltad(double t) const {
  return lambda * interpolate_U(t) - rhs(mu_of_r(t));
}

DirectSolution direct_scan(int k, int ell, cplx sigma, const std::function<cplx(double)>& rhs, int N,
                           double mu_min) {
  if (k != 0)
    throw Error(ErrorCode::UnsupportedWhich, "direct scan covers k = 0 only");
  if (sigma.imag() < 2.0)
    throw Error(ErrorCode::IllConditioned, "direct scan needs Im sigma >= 2");
  const int l = std::abs(ell);
  DirectSolution s;
  s.R = r_of_mu(mu_min);
  Cheb c = cheb(N, 0.0, s.R);
  s.r = c.x;
  Eigen::MatrixXd D2 = c.D * c.D;
  const cplx lam = sigma * sigma + 0.25;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  s.f.resize(N);
  Eigen::VectorXcd b(N);
  for (int i = 0; i < N; ++i) s.f(i) = rhs(mu_of_r(c.x(i)));
  for (int i = 1; i < N - 1; ++i) {
    double t = c.x(i);
    A.row(i) = (D2.row(i) + (1.0 / std::tanh(t)) * c.D.row(i)).cast<cplx>();
    A(i, i) += lam - double(l) * l / (std::sinh(t) * std::sinh(t));
    b(i) = s.f(i);
  }
  // centre: regularity
  if (l == 0)
    A.row(0) = c.D.row(0).cast<cplx>();
  else
    A(0, 0) = 1.0;
  b(0) = 0.0;
  // far end: outgoing solution q^beta (1 + c1 q + c2 q^2 + ...), q = e^{-2r}; Robin row u' = g u
  {
    const cplx beta = (0.5 - cplx(0, 1) * sigma) / 2.0;
    auto L0 = [&](cplx x) { return 4.0 * x * x - 2.0 * x + lam; };
    auto L1 = [&](cplx x) { return -8.0 * x * x - 4.0 * double(l) * l - 2.0 * lam; };
    auto L2 = [&](cplx x) { return 4.0 * x * x + 2.0 * x + lam; };
    double q = std::exp(-2.0 * s.R);
    cplx cm2 = 0, cm1 = 1, v = 1, Dv = beta, qp = 1;
    for (int j = 1; j < 8; ++j) {
      cplx num = L1(beta + double(j - 1)) * cm1;
      if (j >= 2) num += L2(beta + double(j - 2)) * cm2;
      cplx cj = -num / L0(beta + double(j));
      qp *= q;
      v += cj * qp;
      Dv += (beta + double(j)) * cj * qp;
      cm2 = cm1;
      cm1 = cj;
    }
    cplx g = -2.0 * Dv / v;  // d/dr = -2 q d/dq
    A.row(N - 1) = c.D.row(N - 1).cast<cplx>();
    A(N - 1, N - 1) -= g;
    b(N - 1) = 0.0;
  }
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  s.U = lu.solve(b);
  if (!s.U.allFinite()) throw Error(ErrorCode::IllConditioned, "direct scan solve failed");
  s.deltad = lam * s.U - s.f;
  s.lambda = lam;
  s.rhs = rhs;
  return s;
}

}  // namespace ahres::oracle
