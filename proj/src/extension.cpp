#include "ahres/extension.hpp"

#include <cmath>
#include <sstream>

namespace ahres {

namespace {

QC shift_q(int n, int k) { return QC::frac(n - 2 * k - 1, 2); }

int sheet_of(cplx s) {
  if (s.imag() > 0) return 1;
  if (s.imag() < 0) return -1;
  return s.real() >= 0 ? 1 : -1;
}

RatFunc inv_mu() { return RatFunc(Poly::x()).inverse(); }

}  // namespace

double weight_shift(int n, int k) { return (n - 2.0 * k - 1.0) / 2.0; }

SpectralParameter sigma_lambda(int n, int k, cplx sigma) {
  SpectralParameter sp;
  sp.n = n;
  sp.k = k;
  double c = weight_shift(n, k), c2 = weight_shift(n, k) + 1.0;
  sp.sigma = sigma;
  sp.sigma_tilde = sigma + cplx(0, c);
  sp.lambda = sigma * sigma + c * c;
  sp.sheet = sheet_of(sigma);
  cplx r = std::sqrt(sp.lambda - c2 * c2);
  sp.sigma_next = sheet_of(r) > 0 ? r : -r;
  sp.branch_point = (sigma == cplx(0, 0));
  return sp;
}

SpectralParameter lambda_sigma(int n, int k, cplx lambda, int sheet) {
  double c = weight_shift(n, k);
  cplx r = std::sqrt(lambda - c * c);
  cplx s = (sheet_of(r) == sheet) ? r : -r;
  SpectralParameter sp = sigma_lambda(n, k, s);
  sp.lambda = lambda;
  sp.sheet = sheet;
  sp.branch_point = (lambda == cplx(c * c, 0));
  return sp;
}

Poly OperatorPencil::A(int j, int p, int r, int c) const {
  return cleared(r, c).coeff(p, j).num();
}

Eigen::MatrixXcd OperatorPencil::A_at(int j, int p, double mu) const {
  return A_derivative_at(j, p, mu, 0);
}

Eigen::MatrixXcd OperatorPencil::A_derivative_at(int j, int p, double mu, int order) const {
  int n = rank();
  Eigen::MatrixXcd M(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      Poly q = A(j, p, r, c);
      for (int i = 0; i < order; ++i) q = q.derivative();
      M(r, c) = q.eval(cplx(mu, 0));
    }
  return M;
}

MuOp block_operator(const MetricSpec& m, int k, int ell) {
  ModeBundle b = mode_bundle(m.n, k, ell);
  int nt = b.top.rank(), nb = b.bottom.rank();
  MuOp B(b.rank, b.rank);
  QC c = shift_q(m.n, k);
  QC c2 = c + QC(2);
  OpEntry s2 = OpEntry::param(2);
  if (nt > 0) {
    MuOp L = laplacian_blocks(b.top, m).laplacian;
    MuOp top = MuOp::identity(nt);
    for (int i = 0; i < nt; ++i) top(i, i) = s2 + OpEntry(RatFunc(c * c));
    B.set_block(0, 0, top - L);
  }
  if (nb > 0) {
    MuOp L = laplacian_blocks(b.bottom, m).laplacian;
    MuOp bot = MuOp::identity(nb);
    for (int i = 0; i < nb; ++i) bot(i, i) = s2 + OpEntry(RatFunc(c2 * c2));
    B.set_block(nt, nt, bot - L);
  }
  if (nt > 0 && nb > 0) {
    B.set_block(0, nt, RatFunc(-2) * d_matrix(b.bottom));
    B.set_block(nt, 0, RatFunc(2) * delta_matrix(b.top, m));
  }
  return B;
}

MuOp j_matrix(int k, int ell, bool inverse) {
  ModeBundle b = mode_bundle(2, k, ell);
  MuOp J = MuOp::identity(b.rank);
  if (b.top.rank() > 0 && b.bottom.rank() > 0) {
    RatFunc f = RatFunc(QC::frac(inverse ? -1 : 1, 2)) * inv_mu();
    J.set_block(0, b.top.rank(), f * wedge_dmu(b.bottom));
    // restore identity on the diagonal blocks overwritten by set_block (none overlap)
  }
  return J;
}

OperatorPencil make_pencil(const MetricSpec& m, int k, int ell, MuOp raw, const std::string& route,
                           bool validate) {
  OperatorPencil p;
  p.bundle = mode_bundle(m.n, k, ell);
  p.mu_left = m.mu_left;
  p.mu_right = m.mu_right;
  p.polar = m.polar;
  p.route = route;
  p.raw = raw;
  int n = raw.rows();
  p.row_factor.assign(n, Poly(1));
  p.cleared = MuOp(n, raw.cols());
  for (int r = 0; r < n; ++r) {
    Poly D(1);
    for (int c = 0; c < raw.cols(); ++c)
      for (auto& [key, f] : raw(r, c).terms())
        if (f.den().degree() > 0) D = lcm(D, f.den());
    QC d0 = D.eval(QC(0));
    if (d0.is_zero()) {
      if (validate)
        throw Error(ErrorCode::NonPolynomialCoefficient,
                    route + " pencil row " + std::to_string(r) + " has a denominator vanishing at mu = 0");
      p.row_factor[r] = D;
    } else {
      p.row_factor[r] = D * (QC(1) / d0);
    }
    if (validate && D.degree() > 0) {
      // denominators may only vanish at the polar endpoint
      for (int i = 0; i <= 400; ++i) {
        double mu = m.mu_left + (m.mu_right - m.mu_left) * i / 400.0;
        if (i == 400 && m.polar) break;
        if (std::abs(D.eval(cplx(mu, 0))) < 1e-14 * D.max_abs_coeff())
          throw Error(ErrorCode::NonPolynomialCoefficient, "denominator vanishes inside the domain");
      }
    }
    for (int c = 0; c < raw.cols(); ++c) p.cleared(r, c) = RatFunc(p.row_factor[r]) * raw(r, c);
  }
  return p;
}

OperatorPencil build_pencil_ambient(const MetricSpec& m, int k, int ell) {
  AmbientMetric a = ambient_metric(m);
  MuOp box = ambient_box(k, ell, a);
  // s = i sigma - c
  return make_pencil(m, k, ell, box.substitute(QC(0, 1), -shift_q(m.n, k)), "ambient");
}

OperatorPencil build_pencil_ambient_unshifted(const MetricSpec& m, int k, int ell) {
  AmbientMetric a = ambient_metric(m);
  MuOp box = ambient_box(k, ell, a);
  return make_pencil(m, k, ell, box.substitute(QC(0, 1), QC(0)), "ambient-unshifted");
}

OperatorPencil build_pencil_conjugated(const MetricSpec& m, int k, int ell) {
  MuOp B = block_operator(m, k, ell);
  MuOp E = j_matrix(k, ell, false) * B * j_matrix(k, ell, true);
  // F^{-a} E F^{a}, F = sqrt(mu), a = -i sigma + c
  OpEntry a = OpEntry::term(1, 0, RatFunc(QC(0, -1))) + OpEntry(RatFunc(shift_q(m.n, k)));
  OpEntry r = RatFunc(QC::frac(1, 2)) * inv_mu() * a;
  MuOp raw = inv_mu() * E.conjugate_log(r);
  return make_pencil(m, k, ell, raw, "conjugated");
}

std::vector<cplx> indicial_roots(const OperatorPencil& p, cplx sigma) {
  int n = p.rank();
  Eigen::MatrixXcd A2p = p.A_derivative_at(2, 0, 0.0, 1);
  Eigen::MatrixXcd A1 = Eigen::MatrixXcd::Zero(n, n);
  for (int q = 0; q <= std::max(p.sigma_degree(), 0); ++q) A1 += std::pow(sigma, q) * p.A_at(1, q, 0.0);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(A2p);
  if (!lu.isInvertible() || std::abs(A2p.determinant()) < 1e-12 * std::pow(A2p.norm(), n))
    throw Error(ErrorCode::DegenerateTopCoefficient, "d/dmu A_2(0) is singular");
  Eigen::MatrixXcd M = lu.solve(A1);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  std::vector<cplx> roots;
  for (int i = 0; i < n; ++i) roots.push_back(0.0);
  for (int i = 0; i < n; ++i) roots.push_back(1.0 - es.eigenvalues()(i));
  return roots;
}

SmoothnessReport smoothness_report(const OperatorPencil& p) {
  SmoothnessReport rep;
  rep.rank = p.rank();
  for (int r = 0; r < p.raw.rows(); ++r)
    for (int c = 0; c < p.raw.cols(); ++c)
      for (auto& [key, f] : p.raw(r, c).terms()) {
        EntryReport e;
        e.row = r;
        e.col = c;
        e.sigma_power = key.first;
        e.order = key.second;
        e.num_degree = f.num().degree();
        e.den_degree = f.den().degree();
        e.max_coeff = f.num().max_abs_coeff();
        e.polynomial = f.is_polynomial();
        e.smooth_at_zero = !f.den().eval(QC(0)).is_zero();
        Poly cl = (RatFunc(p.row_factor[r]) * f).num();
        rep.max_degree = std::max(rep.max_degree, cl.degree());
        if (!e.smooth_at_zero) {
          rep.all_smooth = false;
          std::ostringstream os;
          os << "entry (" << r << "," << c << ") sigma^" << key.first << " d^" << key.second
             << " has denominator " << f.den().str() << " vanishing at mu = 0";
          rep.flags.push_back(os.str());
        }
        rep.entries.push_back(e);
      }
  return rep;
}

ModelCheck check_model_structure(const OperatorPencil& p) {
  ModelCheck mc;
  int n = p.rank();
  auto note = [&](const std::string& what, double defect) {
    mc.defect = std::max(mc.defect, defect);
    if (defect > 1e-12) {
      mc.ok = false;
      mc.failures.push_back(what);
    }
  };
  for (int q = 1; q <= std::max(p.sigma_degree(), 0); ++q)
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (!p.A(2, q, r, c).is_zero()) note("sigma enters the top order", 1.0);
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  note("A_{2,0}(0) != 0", p.A_at(2, 0, 0.0).norm());
  note("A_{2,0}'(0) != 4", (p.A_derivative_at(2, 0, 0.0, 1) - 4.0 * I).norm());
  note("A_{1,1}(0) != -4i", (p.A_at(1, 1, 0.0) - cplx(0, -4) * I).norm());
  note("A_{1,0}(0) != 4", (p.A_at(1, 0, 0.0) - 4.0 * I).norm());
  return mc;
}

bool star_intertwines(const MetricSpec& m, int k, int ell) {
  OperatorPencil pk = build_pencil_ambient(m, k, ell);
  OperatorPencil pd = build_pencil_ambient(m, 3 - k, ell);
  AmbientMetric a = ambient_metric(m);
  MuOp R = ambient_star(k, a).R;
  RatFunc w = m.w();
  RatFunc half_dlog = RatFunc(QC::frac(1, 2)) * w.derivative() * w.inverse();
  MuOp lhs = R * pk.raw;
  MuOp rhs = pd.raw.conjugate_log(OpEntry(half_dlog)) * R;
  return lhs == rhs;
}

}  // namespace ahres
