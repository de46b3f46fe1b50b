#include "ahres/discretize.hpp"

namespace ahres {

AbsorberSpec default_absorber(const MetricSpec& m, double strength, AbsorberOrder order) {
  AbsorberSpec a;
  a.mu_left = m.mu_left;
  a.delta1 = -m.mu_left / 5.0;
  a.strength = strength;
  a.order = order;
  return a;
}

std::vector<int> polar_vanishing_orders(const ModeBundle& b) {
  const int l = std::abs(b.ell);
  std::vector<int> m;
  for (const auto& label : b.component_labels) {
    std::string form = label.substr(label.find(':') + 1);
    if (form == "1")
      m.push_back(l);
    else if (form == "dmu")
      m.push_back(l == 0 ? 1 : l - 1);
    else if (form == "dtheta")
      m.push_back(l == 0 ? 2 : l);
    else
      m.push_back(l + 1);
  }
  return m;
}

namespace {

// J frozen at the pole
MuOp frozen_j(const OperatorPencil& p) {
  MuOp J = MuOp::identity(p.rank());
  const ModeBundle& b = p.bundle;
  if (b.top.rank() > 0 && b.bottom.rank() > 0)
    J.set_block(0, b.top.rank(),
                RatFunc(Poly::from_doubles({0.5 / p.mu_right})) * wedge_dmu(b.bottom));
  return J;
}

}  // namespace

MuOp polar_substitution(const OperatorPencil& p, const std::vector<int>& orders) {
  Poly lin = Poly::from_doubles({1.0, -1.0 / p.mu_right});
  std::vector<OpEntry> phi;
  for (int m : orders) {
    Poly q(1);
    for (int i = 0; i < m; ++i) q = q * lin;
    phi.push_back(OpEntry(RatFunc(q)));
  }
  return frozen_j(p) * MuOp::diag(phi);
}

MuOp polar_regularized(const OperatorPencil& p, const std::vector<int>& orders,
                       std::vector<int>* strip, Eigen::MatrixXcd* lift) {
  const int r = p.rank();
  Poly lin = Poly::from_doubles({1.0, -1.0 / p.mu_right});
  // Regularity is a property of the X-level forms; the slots carry u = F^{-a} J u_X, and near
  // the pole J may be frozen at its value there (the difference is one order higher).
  if (lift) {
    MuOp J = frozen_j(p);
    *lift = Eigen::MatrixXcd::Zero(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) (*lift)(i, j) = J(i, j).coeff(0, 0).eval(cplx(0, 0));
  }
  if (strip) strip->assign(r, 0);
  MuOp op = p.cleared * polar_substitution(p, orders);
  // strip common factors of (1 - mu/mu_right) from each row
  for (int row = 0; row < r; ++row) {
    for (;;) {
      bool divisible = true, any = false;
      for (int col = 0; col < r && divisible; ++col)
        for (auto& [key, f] : op(row, col).terms()) {
          any = true;
          Poly q, rem;
          Poly::divmod(f.num(), lin, q, rem);
          if (!rem.is_zero()) {
            divisible = false;
            break;
          }
        }
      if (!divisible || !any) break;
      for (int col = 0; col < r; ++col) {
        OpEntry e;
        for (auto& [key, f] : op(row, col).terms()) {
          Poly q, rem;
          Poly::divmod(f.num(), lin, q, rem);
          e.set(key.first, key.second, RatFunc(q));
        }
        op(row, col) = e;
      }
      if (strip) ++(*strip)[row];
    }
  }
  return op;
}

DiscretePencil assemble(const OperatorPencil& p, const SpectralGrid<double>& g,
                        const std::optional<AbsorberSpec>& absorber) {
  const double tol = 1e-12 * (1.0 + std::abs(p.mu_right));
  if (g.a < p.mu_left - tol || g.b > p.mu_right + tol)
    throw Error(ErrorCode::DomainMismatch, "grid interval is not inside the pencil domain");
  const int N = g.N, r = p.rank();
  DiscretePencil dp;
  dp.grid = g;
  dp.absorber = absorber;
  dp.rank = r;
  dp.k = p.bundle.k;
  dp.ell = p.bundle.ell;
  dp.n = p.bundle.n;
  dp.provenance = p.route + " pencil, k=" + std::to_string(dp.k) + ", ell=" + std::to_string(dp.ell);

  // at a polar point each slot is written as (1 - mu/mu_right)^m v with the vanishing order
  // of a smooth form's mode-ell coefficient, which excludes the singular Frobenius branch
  MuOp op = p.cleared;
  if (p.polar) {
    dp.polar_orders = polar_vanishing_orders(p.bundle);
    op = polar_regularized(p, dp.polar_orders, &dp.row_strip, &dp.lift);
  }

  std::vector<Eigen::MatrixXd> Dj{Eigen::MatrixXd::Identity(N, N), g.D, g.D * g.D};
  std::vector<Eigen::MatrixXcd*> P{&dp.P0, &dp.P1, &dp.P2};
  for (auto* m : P) *m = Eigen::MatrixXcd::Zero(r * N, r * N);

  for (int row = 0; row < r; ++row)
    for (int col = 0; col < r; ++col)
      for (auto& [key, f] : op(row, col).terms()) {
        int q = key.first, j = key.second;
        if (q > 2 || j > 2) throw Error(ErrorCode::DomainMismatch, "pencil exceeds order 2");
        const Poly& a = f.num();
        Eigen::VectorXcd vals(N);
        for (int i = 0; i < N; ++i) vals(i) = a.eval(cplx(g.nodes(i), 0));
        P[q]->block(row * N, col * N, N, N) += vals.asDiagonal() * Dj[j].cast<cplx>();
      }

  if (absorber) {
    const AbsorberSpec& A = *absorber;
    for (int i = 0; i < N; ++i) {
      double chi = A.chi(g.nodes(i));
      if (chi == 0.0) continue;
      cplx f(0, -A.strength * chi);
      for (int s = 0; s < r; ++s) {
        int R = s * N + i;
        if (A.order == AbsorberOrder::Zeroth) {
          dp.P0(R, R) += f;
        } else {
          for (int j = 0; j < N; ++j) dp.P0(R, s * N + j) += -f * Dj[2](i, j);
          dp.P0(R, R) += f * (1.0 + double(dp.ell) * dp.ell);
        }
      }
    }
  }

  if (p.polar) {
    // At the polar point the collocated rows can degenerate (the equation loses rank there).
    // A row that repeats earlier ones is replaced by the mu-derivative of its equation,
    // which smooth solutions also satisfy.
    const int last = N - 1, L = r * N;
    std::vector<Eigen::RowVectorXd> Drow{Eigen::RowVectorXd::Unit(N, last)};
    for (int m = 1; m <= 7; ++m) Drow.push_back(Drow.back() * g.D);
    auto node_row = [&](int s, int d) {
      Eigen::RowVectorXcd v = Eigen::RowVectorXcd::Zero(3 * L);
      for (int col = 0; col < r; ++col)
        for (auto& [key, f] : op(s, col).terms()) {
          int q = key.first, j = key.second;
          Poly a = f.num();
          double binom = 1.0;
          std::vector<Poly> ders{a};
          for (int i = 1; i <= d; ++i) ders.push_back(ders.back().derivative());
          for (int i = 0; i <= d; ++i) {
            if (i > 0) binom = binom * (d - i + 1) / i;
            cplx coef = binom * ders[d - i].eval(cplx(g.nodes(last), 0));
            if (coef == 0.0) continue;
            v.segment(q * L + col * N, N) += coef * Drow[j + i].cast<cplx>();
          }
        }
      return v;
    };
    std::vector<Eigen::RowVectorXcd> basis;
    for (int s = 0; s < r; ++s) {
      for (int d = 0; d <= 4; ++d) {
        Eigen::RowVectorXcd v = node_row(s, d);
        // dependence is tested at a generic sigma, not coefficientwise
        const cplx t(0.4137, 0.2719);
        Eigen::RowVectorXcd e = v.segment(0, L) + t * v.segment(L, L) + (t * t) * v.segment(2 * L, L);
        double nv = e.norm();
        if (nv == 0) continue;
        Eigen::RowVectorXcd res = e / nv;
        for (auto& b : basis) res -= (res * b.adjoint())(0, 0) * b;
        if (res.norm() < 1e-8) continue;
        basis.push_back(res.normalized());
        if (d > 0) {
          dp.differentiated_rows.push_back(s * N + last);
          for (int q = 0; q < 3; ++q) P[q]->row(s * N + last) = v.segment(q * L, L);
        }
        break;
      }
    }
  }

  if (!p.polar) {
    // artificial cap: Dirichlet rows at the last node
    dp.cavity = true;
    for (int s = 0; s < r; ++s) {
      int R = s * N + N - 1;
      dp.P0.row(R).setZero();
      dp.P1.row(R).setZero();
      dp.P2.row(R).setZero();
      dp.P0(R, R) = 1.0;
    }
  }
  return dp;
}

}  // namespace ahres
