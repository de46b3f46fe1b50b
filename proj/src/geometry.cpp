#include "ahres/geometry.hpp"

#include <cmath>

namespace ahres {

const char* kind_name(MetricKind k) {
  return k == MetricKind::ExactHyperbolic ? "exact-hyperbolic" : "perturbed";
}

MetricKind kind_from_name(const std::string& s) {
  if (s == "exact-hyperbolic") return MetricKind::ExactHyperbolic;
  if (s == "perturbed") return MetricKind::Perturbed;
  throw Error(ErrorCode::ConfigError, "unknown metric kind '" + s + "'");
}

Poly warp_exact_hyperbolic(int n) {
  if (n < 2) throw Error(ErrorCode::UnsupportedDimension, "n must be >= 2");
  // sinh r = (1 - x^2/4)/x with x = 2 e^{-r}; independent of n
  return Poly(std::vector<QC>{QC(1), QC::frac(-1, 2), QC::frac(1, 16)});
}

namespace {

int zero_order(const Poly& p, const QC& x) {
  int k = 0;
  Poly q = p;
  while (!q.is_zero() && q.eval(x).is_zero()) {
    q = q.derivative();
    ++k;
  }
  return k;
}

// smallest value of w on a fine sample of (a, b) together with all real roots inside
bool has_interior_nonpositive(const Poly& w, double a, double b) {
  const int M = 2000;
  for (int i = 1; i < M; ++i) {
    double mu = a + (b - a) * i / M;
    if (w.eval(std::complex<double>(mu, 0)).real() <= 0) return true;
  }
  int d = w.degree();
  if (d >= 1) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    auto lead = w.lead().to_complex();
    for (int i = 0; i < d; ++i) C(0, i) = -w.coeff(d - 1 - i).to_complex() / lead;
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    for (int i = 0; i < d; ++i) {
      auto r = es.eigenvalues()(i);
      double span = b - a;
      if (std::abs(r.imag()) < 1e-7 && r.real() > a + 1e-9 * span && r.real() < b - 1e-6 * span)
        return true;
    }
  }
  return false;
}

}  // namespace

MetricSpec make_metric(int n, const std::vector<double>& warp, double mu_left, double mu_right,
                       MetricKind kind) {
  if (n < 2) throw Error(ErrorCode::UnsupportedDimension, "n must be >= 2");
  if (!(mu_left < 0) || !(mu_right > 0))
    throw Error(ErrorCode::ConfigError, "need mu_left < 0 < mu_right");
  MetricSpec m;
  m.n = n;
  m.warp_coeffs = warp;
  m.warp = Poly::from_doubles(warp);
  m.mu_left = mu_left;
  m.mu_right = mu_right;
  m.kind = kind;
  if (m.warp.is_zero() || sgn(m.warp.coeff(0).re) <= 0)
    throw Error(ErrorCode::NonPositiveBoundaryMetric, "w(0) <= 0");
  for (auto& c : m.warp.coeffs())
    if (sgn(c.im) != 0) throw Error(ErrorCode::ConfigError, "warp must be real");
  if (kind == MetricKind::ExactHyperbolic && m.warp != warp_exact_hyperbolic(n))
    throw Error(ErrorCode::ConfigError, "exact-hyperbolic kind requires w = (1 - mu/4)^2");
  if (has_interior_nonpositive(m.warp, mu_left, mu_right))
    throw Error(ErrorCode::InteriorSignChange, "w <= 0 inside (mu_left, mu_right)");
  QC r(rational_from_double(mu_right));
  int ord = zero_order(m.warp, r);
  if (ord > 0) {
    // a smooth polar point needs sqrt(w) to vanish simply, i.e. w to vanish to order two
    if (ord != 2)
      throw Error(ErrorCode::NonSimpleInteriorZero,
                  "sqrt(w) must vanish simply at mu_right (w has a zero of order " +
                      std::to_string(ord) + ")");
    m.polar = true;
    // w ~ a (mu_right - mu)^2 and ds = dmu / (2 mu) make the circles of radius s have length
    // 2 pi * 2 sqrt(a mu_right) s
    double a = m.warp.derivative().derivative().eval(std::complex<double>(mu_right, 0)).real() / 2;
    m.cone = 2.0 * std::sqrt(a * mu_right);
  }
  return m;
}

MetricSpec exact_h2(double mu_left) {
  return make_metric(2, {1.0, -0.5, 0.0625}, mu_left, 4.0, MetricKind::ExactHyperbolic);
}

MetricSpec perturbed_h2(double eps, double mu_left) {
  // (1 - mu/2 + mu^2/16)(1 + eps mu^2)
  std::vector<double> c{1.0, -0.5, 0.0625 + eps, -0.5 * eps, 0.0625 * eps};
  return make_metric(2, c, mu_left, 4.0, MetricKind::Perturbed);
}

AmbientMetric ambient_metric(const MetricSpec& m) {
  if (m.n != 2) throw Error(ErrorCode::UnsupportedDimension, "ambient metric built for n = 2");
  AmbientMetric a;
  a.base = m;
  RatFunc w = m.w();
  RatFunc mu(Poly::x());
  a.g[0][0] = {0, mu};
  a.g[0][1] = a.g[1][0] = {1, RatFunc(QC::frac(1, 2))};
  a.g[1][1] = {0, RatFunc()};
  a.g[2][2] = {2, -w};
  a.G[0][0] = {0, RatFunc()};
  a.G[0][1] = a.G[1][0] = {-1, RatFunc(2)};
  a.G[1][1] = {-2, RatFunc(-4) * mu};
  a.G[2][2] = {-2, -w.inverse()};
  for (int i = 0; i < 2; ++i) {
    a.g[i][2] = a.g[2][i] = {0, RatFunc()};
    a.G[i][2] = a.G[2][i] = {0, RatFunc()};
  }
  a.density_rho_power = 2;
  a.dlog_density_mu = w.derivative() * RatFunc(QC::frac(1, 2)) * w.inverse();
  return a;
}

Eigen::Matrix3d AmbientMetric::components(double rho, double mu) const {
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = g[i][j].eval(rho, mu);
  return M;
}

Eigen::Matrix3d AmbientMetric::dual(double rho, double mu) const {
  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = G[i][j].eval(rho, mu);
  return M;
}

double AmbientMetric::density(double rho, double mu) const {
  return std::pow(rho, density_rho_power) * density_coeff.get_d() * std::sqrt(base.w_at(mu));
}

RatFunc gauss_curvature(const MetricSpec& m) {
  if (m.n != 2) throw Error(ErrorCode::UnsupportedDimension, "curvature defined for n = 2");
  // E = 1/(4 mu^2), G = w/mu in (mu, theta); S2 = E G
  RatFunc w = m.w();
  RatFunc mu(Poly::x());
  RatFunc G = w * mu.inverse();
  RatFunc S2 = w * RatFunc(Poly::monomial(3, QC(4))).inverse();
  RatFunc G1 = G.derivative(), G2 = G1.derivative(), S21 = S2.derivative();
  RatFunc numer = G2 * S2 - G1 * S21 * RatFunc(QC::frac(1, 2));
  return -(numer / (RatFunc(2) * S2 * S2));
}

double curvature_check(const MetricSpec& m, const std::vector<double>& samples) {
  RatFunc K = gauss_curvature(m);
  double worst = 0;
  for (double mu : samples)
    worst = std::max(worst, std::abs(K.eval(std::complex<double>(mu, 0)) + 1.0));
  return worst;
}

}  // namespace ahres
