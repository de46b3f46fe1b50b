#include "ahres/resolvent.hpp"

#include "ahres/resonance.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace ahres {

std::string which_name(Which w) {
  switch (w) {
    case Which::DeltaD: return "delta-d";
    case Which::DDelta: return "d-delta";
    case Which::Full: return "full";
  }
  return "?";
}

Which which_from_name(const std::string& s) {
  if (s == "delta-d") return Which::DeltaD;
  if (s == "d-delta") return Which::DDelta;
  if (s == "full") return Which::Full;
  throw Error(ErrorCode::UnsupportedWhich, "unknown resolvent part '" + s + "'");
}

namespace {

// barycentric interpolation from Chebyshev-Lobatto nodes (any affine image) to points t
Eigen::MatrixXd interpolation_matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& t) {
  const int N = x.size();
  Eigen::VectorXd w(N);
  for (int j = 0; j < N; ++j) w(j) = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == N - 1) ? 0.5 : 1.0);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(t.size(), N);
  for (int i = 0; i < t.size(); ++i) {
    int hit = -1;
    for (int j = 0; j < N; ++j)
      if (t(i) == x(j)) hit = j;
    if (hit >= 0) {
      M(i, hit) = 1.0;
      continue;
    }
    double den = 0;
    for (int j = 0; j < N; ++j) {
      double c = w(j) / (t(i) - x(j));
      M(i, j) = c;
      den += c;
    }
    M.row(i) /= den;
  }
  return M;
}

Eigen::VectorXd clenshaw_curtis(int N, double a, double b) {
  const int M = N - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(std::max(M - 1, 0));
  auto theta = [&](int j) { return M_PI * j / M; };
  if (M % 2 == 0) {
    w(0) = w(M) = 1.0 / (double(M) * M - 1.0);
    for (int k = 1; k < M / 2; ++k)
      for (int j = 1; j < M; ++j) v(j - 1) -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
    for (int j = 1; j < M; ++j) v(j - 1) -= std::cos(M * theta(j)) / (double(M) * M - 1.0);
  } else {
    w(0) = w(M) = 1.0 / (double(M) * M);
    for (int k = 1; k <= (M - 1) / 2; ++k)
      for (int j = 1; j < M; ++j) v(j - 1) -= 2.0 * std::cos(2.0 * k * theta(j)) / (4.0 * k * k - 1.0);
  }
  for (int j = 1; j < M; ++j) w(j) = 2.0 * v(j - 1) / M;
  return w * (b - a) / 2.0;
}

// value at the last node from the polynomial through the others (operators with 1/w at a polar point)
void extrapolate_last(const Eigen::VectorXd& x, Eigen::MatrixXcd& v) {
  const int N = x.size(), M = N - 1;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(M);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i)
      if (i != j) w(j) /= (x(j) - x(i));
  // weights of the first form: prod (t - x_i) * sum w_j / (t - x_j) f_j
  double ell = 1.0;
  for (int i = 0; i < M; ++i) ell *= (x(M) - x(i));
  for (int c = 0; c < v.cols(); ++c) {
    cplx s = 0;
    for (int j = 0; j < M; ++j) s += w(j) / (x(M) - x(j)) * v(j, c);
    v(M, c) = ell * s;
  }
}

cplx eval_entry0(const OpEntry& e, double mu) {
  cplx v = 0;
  for (auto& [key, f] : e.terms())
    if (key.second == 0 && key.first == 0) v += f.eval(cplx(mu, 0));
  return v;
}

// pencil right-hand side for X-level datum g (node x slot, the bundle of the pencil)
Eigen::VectorXcd pencil_rhs(const ResolventContext& ctx, cplx sigma, const Eigen::MatrixXcd& g) {
  const DiscretePencil& dp = ctx.dp;
  const OperatorPencil& p = ctx.pencil;
  const int N = dp.grid.N, r = dp.rank;
  const cplx a = cplx(0, -1) * sigma + weight_shift(ctx.metric.n, ctx.degree);
  MuOp J = j_matrix(ctx.degree, ctx.ell, false);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(r * N);
  for (int i = 0; i < N; ++i) {
    double mu = dp.grid.nodes(i);
    if (mu <= 0) continue;  // e_X: extension by zero
    if ((dp.cavity || !dp.polar_orders.empty()) && i == N - 1) continue;
    cplx F = std::pow(cplx(mu, 0), -a / 2.0) / mu;
    for (int s = 0; s < r; ++s) {
      cplx h = 0;
      for (int t = 0; t < r; ++t) {
        cplx jst = eval_entry0(J(s, t), mu);
        if (jst != 0.0) h += jst * g(i, t);
      }
      if (h == 0.0) continue;
      h *= F * p.row_factor[s].eval(cplx(mu, 0));
      if (!dp.row_strip.empty() && dp.row_strip[s] > 0)
        h /= std::pow(1.0 - mu / p.mu_right, dp.row_strip[s]);
      b(s * N + i) = h;
    }
  }
  return b;
}

// outer applied to slots [col0, col0 + outer.cols()) of U = J^{-1} F^a u, as an operator on the
// pencil unknowns: F^{-a} outer J^{-1} F^a composed with the polar substitution
MuOp output_operator(const ResolventContext& ctx, const MuOp& outer, int col0) {
  MuOp Ji = j_matrix(ctx.degree, ctx.ell, true);
  MuOp M = outer * Ji.block(col0, 0, outer.cols(), Ji.cols());
  const RatFunc inv_mu = RatFunc(Poly(1), Poly::x());
  const QC c = QC::frac(ctx.metric.n - 2 * ctx.degree - 1, 4);
  OpEntry r = OpEntry::term(1, 0, RatFunc(Poly(QC(0, mpq_class(-1, 2)))) * inv_mu) +
              OpEntry(RatFunc(Poly(c)) * inv_mu);
  M = M.conjugate_log(r);
  if (!ctx.dp.polar_orders.empty()) M = M * polar_substitution(ctx.pencil, ctx.dp.polar_orders);
  return M;
}

// F^a (M x) at the output nodes; derivatives are taken of the pencil unknowns (polynomials on
// the pencil grid) and interpolated, the coefficients are evaluated at the output nodes
Eigen::MatrixXcd evaluate_output(const ResolventContext& ctx, cplx sigma, const MuOp& M,
                                 const Eigen::MatrixXd& I, const Eigen::VectorXcd& x) {
  const DiscretePencil& dp = ctx.dp;
  const int N = dp.grid.N, r = dp.rank, no = I.rows();
  Eigen::MatrixXcd X(N, r);
  for (int s = 0; s < r; ++s) X.col(s) = x.segment(s * N, N);
  std::vector<Eigen::MatrixXcd> DX{I.cast<cplx>() * X};
  Eigen::MatrixXcd cur = X;
  for (int j = 1; j <= std::max(M.order(), 0); ++j) {
    cur = dp.grid.D.cast<cplx>() * cur;
    DX.push_back(I.cast<cplx>() * cur);
  }
  const cplx a = cplx(0, -1) * sigma + weight_shift(ctx.metric.n, ctx.degree);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(no, M.rows());
  for (int row = 0; row < M.rows(); ++row)
    for (int col = 0; col < M.cols(); ++col)
      for (auto& [key, f] : M(row, col).terms()) {
        cplx pp = std::pow(sigma, key.first);
        for (int i = 0; i < no; ++i) out(i, row) += pp * f.eval(cplx(ctx.out.nodes(i), 0)) * DX[key.second](i, col);
      }
  for (int i = 0; i < no; ++i) out.row(i) *= std::pow(cplx(ctx.out.nodes(i), 0), a / 2.0);
  return out;
}

}  // namespace

Eigen::MatrixXcd apply_on_grid(const MuOp& op, const SpectralGrid<double>& g, const Eigen::MatrixXcd& u,
                               cplx param) {
  const int N = g.N;
  std::vector<Eigen::MatrixXcd> Du{u};
  for (int j = 1; j <= std::max(op.order(), 0); ++j) Du.push_back(g.D.cast<cplx>() * Du.back());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(N, op.rows());
  for (int row = 0; row < op.rows(); ++row)
    for (int col = 0; col < op.cols(); ++col)
      for (auto& [key, f] : op(row, col).terms()) {
        cplx pp = std::pow(param, key.first);
        for (int i = 0; i < N; ++i)
          out(i, row) += pp * f.eval(cplx(g.nodes(i), 0)) * Du[key.second](i, col);
      }
  return out;
}

ResolventContext make_context(const MetricSpec& m, int pencil_degree, int ell, int N, double mu_out,
                              const std::optional<AbsorberSpec>& absorber) {
  ResolventContext c;
  c.metric = m;
  c.degree = pencil_degree;
  c.ell = ell;
  c.pencil = build_pencil_ambient(m, pencil_degree, ell);
  c.dp = assemble(c.pencil, chebyshev_grid(N, m.mu_left, m.mu_right), absorber);
  c.out = chebyshev_grid(N, mu_out, m.mu_right);
  return c;
}

namespace {

struct Solved {
  Eigen::VectorXcd x;
  double residual = 0, conditioning = 0;
};

Solved solve_chain(const ResolventContext& ctx, cplx sigma, const Eigen::MatrixXcd& g) {
  Solved s;
  Eigen::VectorXcd b = pencil_rhs(ctx, sigma, g);
  Eigen::MatrixXcd P = ctx.dp.at(sigma);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(P);
  Eigen::VectorXcd x = lu.solve(b);
  double nb = b.norm();
  s.residual = nb > 0 ? (P * x - b).norm() / nb : 0.0;
  s.conditioning = pencil_residual(ctx.dp, sigma);
  if (!x.allFinite() || s.residual > 1e-6 || s.conditioning < 1e-13)
    throw Error(ErrorCode::NearResonance, "pencil nearly singular at sigma = (" +
                                              std::to_string(sigma.real()) + ", " +
                                              std::to_string(sigma.imag()) + ")");
  s.x = x;
  return s;
}

Eigen::MatrixXcd sample(const std::vector<std::function<cplx(double)>>& f, const Eigen::VectorXd& mu,
                        int offset, int width) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(mu.size(), width);
  for (size_t s = 0; s < f.size(); ++s)
    for (int i = 0; i < mu.size(); ++i)
      if (mu(i) > 0) g(i, offset + static_cast<int>(s)) = f[s](mu(i));
  return g;
}

}  // namespace

ResolventOutput resolvent_apply(const ResolventQuery& q, const ResolventContext& ctx) {
  const MetricSpec& m = ctx.metric;
  FormSlots fs = form_slots(m.n, q.k, q.ell);
  if (static_cast<int>(q.rhs.size()) != fs.rank())
    throw Error(ErrorCode::ConfigError, "rhs needs " + std::to_string(fs.rank()) + " slot functions");
  ResolventOutput out;
  out.mu = ctx.out.nodes;
  out.labels = fs.labels;
  out.pencil_degree = ctx.degree;
  const ModeBundle& b = ctx.pencil.bundle;
  if (q.which == Which::DeltaD) {
    if (ctx.degree != q.k) throw Error(ErrorCode::DomainMismatch, "delta-d needs the degree-k pencil");
    out.sigma_used = q.spectral.sigma;
    if (q.k == m.n) {  // d vanishes on top-degree forms
      out.values = Eigen::MatrixXcd::Zero(out.mu.size(), fs.rank());
      return out;
    }
    Eigen::MatrixXcd g = sample(q.rhs, ctx.dp.grid.nodes, 0, b.rank);
    Solved s = solve_chain(ctx, out.sigma_used, g);
    out.solve_residual = s.residual;
    out.conditioning = s.conditioning;
    MuOp M = output_operator(ctx, laplacian_blocks(fs, m).delta_d, 0);
    out.values = evaluate_output(ctx, out.sigma_used, M, interpolation_matrix(ctx.dp.grid.nodes, out.mu), s.x);
    if (m.polar) extrapolate_last(out.mu, out.values);
  } else if (q.which == Which::DDelta) {
    if (ctx.degree != q.k + 1) throw Error(ErrorCode::DomainMismatch, "d-delta needs the degree k+1 pencil");
    out.sigma_used = q.spectral.sigma_next;
    if (q.k == 0) {  // delta vanishes on functions
      out.values = Eigen::MatrixXcd::Zero(out.mu.size(), fs.rank());
      return out;
    }
    Eigen::MatrixXcd g = sample(q.rhs, ctx.dp.grid.nodes, b.top.rank(), b.rank);
    Solved s = solve_chain(ctx, out.sigma_used, g);
    out.solve_residual = s.residual;
    out.conditioning = s.conditioning;
    MuOp M = output_operator(ctx, laplacian_blocks(fs, m).d_delta, b.top.rank());
    out.values = evaluate_output(ctx, out.sigma_used, M, interpolation_matrix(ctx.dp.grid.nodes, out.mu), s.x);
    if (m.polar) extrapolate_last(out.mu, out.values);
  } else {
    throw Error(ErrorCode::UnsupportedWhich, "use resolvent_full for the full resolvent");
  }
  return out;
}

ResolventOutput resolvent_apply(const ResolventQuery& q, const MetricSpec& m, int N) {
  int degree = q.which == Which::DDelta ? q.k + 1 : q.k;
  return resolvent_apply(q, make_context(m, degree, q.ell, N));
}

ResolventOutput resolvent_full(const ResolventQuery& q, const MetricSpec& m, int N) {
  cplx lam = q.spectral.lambda;
  if (std::abs(lam) < 1e-10 * (1.0 + std::norm(q.spectral.sigma)))
    throw Error(ErrorCode::PoleOfVarpi, "lambda = 0: the full resolvent may have an infinite rank pole");
  ResolventQuery a = q, b = q;
  a.which = Which::DeltaD;
  b.which = Which::DDelta;
  ResolventOutput A = resolvent_apply(a, m, N);
  ResolventOutput B = resolvent_apply(b, m, N);
  ResolventOutput out = A;
  Eigen::MatrixXcd f = sample(q.rhs, A.mu, 0, static_cast<int>(q.rhs.size()));
  out.values = -(f + A.values + B.values) / lam;
  out.solve_residual = std::max(A.solve_residual, B.solve_residual);
  out.conditioning = std::min(A.conditioning == 0 ? 1.0 : A.conditioning,
                              B.conditioning == 0 ? 1.0 : B.conditioning);
  out.sigma_used = q.spectral.sigma;
  return out;
}

Eigen::MatrixXcd schur_invert(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                              const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& D, Corner corner) {
  const int n = A.rows(), m = D.rows();
  Eigen::MatrixXcd M(n + m, n + m);
  auto invert = [](const Eigen::MatrixXcd& X, const char* name) {
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(X);
    if (!lu.isInvertible() || lu.rcond() < 1e-13)
      throw Error(ErrorCode::SingularInnerBlock, std::string(name) + " is singular");
    return Eigen::MatrixXcd(lu.inverse());
  };
  if (corner == Corner::D) {
    Eigen::MatrixXcd Di = invert(D, "D");
    Eigen::MatrixXcd S = invert(A - B * Di * C, "A - B D^{-1} C");
    M.topLeftCorner(n, n) = S;
    M.topRightCorner(n, m) = -S * B * Di;
    M.bottomLeftCorner(m, n) = -Di * C * S;
    M.bottomRightCorner(m, m) = Di + Di * C * S * B * Di;
  } else {
    Eigen::MatrixXcd Ai = invert(A, "A");
    Eigen::MatrixXcd S = invert(D - C * Ai * B, "D - C A^{-1} B");
    M.topLeftCorner(n, n) = Ai + Ai * B * S * C * Ai;
    M.topRightCorner(n, m) = -Ai * B * S;
    M.bottomLeftCorner(m, n) = -S * C * Ai;
    M.bottomRightCorner(m, m) = S;
  }
  return M;
}

SpectralGrid<double> log_mu_grid(int N, double a, double b) {
  if (!(a > 0)) throw Error(ErrorCode::BadInterval, "log grid needs a > 0");
  SpectralGrid<double> g = chebyshev_grid(N, std::log(a), std::log(b));
  g.nodes = g.nodes.array().exp();
  g.nodes(0) = a;
  g.nodes(N - 1) = b;
  g.D = g.nodes.cwiseInverse().asDiagonal() * g.D;
  g.a = a;
  g.b = b;
  return g;
}

Eigen::MatrixXcd norm_matrix(const NormSpec& ns, int N, double a, double b, int ell,
                             const std::string& slot_label) {
  const double ta = ns.log_mu ? std::log(a) : a, tb = ns.log_mu ? std::log(b) : b;
  SpectralGrid<double> g = chebyshev_grid(N, ta, tb);
  Eigen::VectorXd w = clenshaw_curtis(N, ta, tb);
  const double h = 1.0 / ns.sigma_scale, hl2 = h * h * double(ell) * ell;
  // Q_m = sum_j binom(m, j) h^{2j} (D^j)^T W D^j, with the angular factor (1 + h^2 ell^2)^{m-j}
  const int m = std::max(1, static_cast<int>(std::ceil(ns.s)));
  Eigen::MatrixXd W = w.asDiagonal();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(N, N), Dj = Eigen::MatrixXd::Identity(N, N);
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    Q += binom * std::pow(h, 2 * j) * std::pow(1.0 + hl2, m - j) * Dj.transpose() * W * Dj;
    binom = binom * (m - j) / (j + 1);
    Dj = g.D * Dj;
  }
  Eigen::VectorXd ws = w.cwiseSqrt(), wsi = ws.cwiseInverse();
  Eigen::MatrixXd S = wsi.asDiagonal() * Q * wsi.asDiagonal();
  S = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).array().pow(ns.s / (2.0 * m));
  Eigen::MatrixXd Ns = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose() * ws.asDiagonal();
  Eigen::VectorXd weight(N);
  for (int i = 0; i < N; ++i) {
    double mu = ns.log_mu ? std::exp(g.nodes(i)) : g.nodes(i);
    double e = ns.weight_exponent.real() / 2.0;
    if (ns.extra_wedge_weight && slot_label.find("dmu") != std::string::npos)
      e += ns.extra_wedge_weight->real() / 2.0;
    weight(i) = std::pow(mu, e);
  }
  return (Ns * weight.asDiagonal()).cast<cplx>();
}

double power_norm(const Eigen::MatrixXcd& A, int max_iterations, double tol, int* iterations) {
  Eigen::VectorXcd v(A.cols());
  for (int i = 0; i < v.size(); ++i) v(i) = cplx(1.0 + 0.1 * std::sin(0.7 * i), 0.05 * std::cos(1.3 * i));
  v.normalize();
  double est = 0;
  int it = 0;
  for (; it < max_iterations; ++it) {
    Eigen::VectorXcd y = A.adjoint() * (A * v);
    double ny = y.norm();
    if (ny == 0) break;
    double next = std::sqrt(ny);
    v = y / ny;
    if (std::abs(next - est) < tol * next) {
      est = next;
      ++it;
      break;
    }
    est = next;
  }
  if (iterations) *iterations = it;
  return est;
}

Strip parse_strip(const std::string& text) {
  Strip s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "bad strip item '" + item + "'");
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    try {
      if (key == "im") {
        s.im = std::stod(val);
      } else if (key == "C0") {
        s.C0 = std::stod(val);
      } else if (key == "re") {
        auto c1 = val.find(':'), c2 = val.rfind(':');
        if (c1 == std::string::npos || c1 == c2) throw Error(ErrorCode::ConfigError, "re=min:max:step");
        s.re_min = std::stod(val.substr(0, c1));
        s.re_max = std::stod(val.substr(c1 + 1, c2 - c1 - 1));
        s.re_step = std::stod(val.substr(c2 + 1));
      } else {
        throw Error(ErrorCode::ConfigError, "unknown strip key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::ConfigError, "bad number in strip item '" + item + "'");
    }
  }
  if (!(std::abs(s.im) < s.C0) || !(s.re_step > 0) || !(s.re_max >= s.re_min))
    throw Error(ErrorCode::ConfigError, "strip needs |im| < C0 and re_min <= re_max, step > 0");
  return s;
}

std::string strip_string(const Strip& s) {
  std::ostringstream o;
  o << "im=" << s.im << ",re=" << s.re_min << ":" << s.re_max << ":" << s.re_step << ",C0=" << s.C0;
  return o.str();
}

std::vector<ScanRow> highenergy_scan(const MetricSpec& m, int k, double s, const Strip& strip, int ell_max,
                                     const ScanConfig& cfg) {
  if (k < 0 || k > m.n) throw Error(ErrorCode::DegreeOutOfRange, "k = " + std::to_string(k));
  std::vector<cplx> sigmas;
  for (double re = strip.re_min; re <= strip.re_max + 1e-9; re += strip.re_step)
    sigmas.push_back(cplx(re, strip.im));
  const int P = static_cast<int>(sigmas.size()), L = ell_max + 1;
  std::vector<double> norms(P * L, 0.0);
  std::vector<int> iters(P * L, 0);
  const int degree = cfg.which == Which::DDelta ? k + 1 : k;
  std::vector<OperatorPencil> pencils(L);
  parallel_for(L, thread_count(cfg.threads), [&](int ell) { pencils[ell] = build_pencil_ambient(m, degree, ell); });
  const int no = 3 * cfg.N;
  const SpectralGrid<double> out = log_mu_grid(no, cfg.data_min, cfg.data_max);
  const Eigen::VectorXd tdata = log_mu_grid(cfg.N, cfg.data_min, cfg.data_max).nodes.array().log();
  std::vector<int> pencil_sizes(P);
  for (int pi = 0; pi < P; ++pi)
    pencil_sizes[pi] = cfg.pencil_N > 0 ? cfg.pencil_N
                                        : cfg.N + static_cast<int>(std::ceil(cfg.points_per_unit *
                                                                             std::abs(sigmas[pi]) / cfg.data_min));

  parallel_for(P * L, thread_count(cfg.threads), [&](int job) {
    int pi = job / L, ell = job % L;
    if ((cfg.which == Which::DeltaD && k == m.n) || (cfg.which == Which::DDelta && k == 0)) return;
    ResolventContext ctx;
    ctx.metric = m;
    ctx.degree = degree;
    ctx.ell = ell;
    ctx.pencil = pencils[ell];
    ctx.dp = assemble(ctx.pencil, chebyshev_grid(pencil_sizes[pi], m.mu_left, m.mu_right));
    ctx.out = out;
    FormSlots fs = form_slots(m.n, k, ell);
    const ModeBundle& b = ctx.pencil.bundle;
    const int nd = cfg.N, ns = fs.rank(), offset = cfg.which == Which::DDelta ? b.top.rank() : 0;
    SpectralParameter sp = sigma_lambda(m.n, k, sigmas[pi]);
    cplx sg = cfg.which == Which::DDelta ? sp.sigma_next : sp.sigma;

    std::vector<int> idx;
    for (int i = 0; i < ctx.dp.grid.N; ++i) {
      double mu = ctx.dp.grid.nodes(i);
      if (mu >= cfg.data_min && mu <= cfg.data_max) idx.push_back(i);
    }
    // data f = chi p, p a polynomial in log(mu) through the interior data nodes, chi vanishing
    // to order s + 2 at both ends so that the extension by zero stays in the data space
    const double ta = tdata(0), tb = tdata(nd - 1);
    const int vanish = static_cast<int>(std::ceil(s)) + 2;
    auto chi = [&](double t) { return std::pow((t - ta) * (tb - t) * 4.0 / ((tb - ta) * (tb - ta)), vanish); };
    Eigen::VectorXd pts(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) pts(i) = std::log(ctx.dp.grid.nodes(idx[i]));
    Eigen::MatrixXd E = interpolation_matrix(tdata, pts);
    const int nc = ns * nd;
    Eigen::MatrixXcd Bm(ctx.dp.size(), nc);
    for (int sl = 0; sl < ns; ++sl)
      for (int j = 0; j < nd; ++j) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(ctx.dp.grid.N, b.rank);
        for (size_t i = 0; i < idx.size(); ++i) g(idx[i], offset + sl) = chi(pts(i)) * E(i, j);
        Bm.col(sl * nd + j) = pencil_rhs(ctx, sg, g);
      }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ctx.dp.at(sg));
    Eigen::MatrixXcd X = lu.solve(Bm);
    MuOp M = cfg.which == Which::DDelta ? output_operator(ctx, laplacian_blocks(fs, m).d_delta, b.top.rank())
                                        : output_operator(ctx, laplacian_blocks(fs, m).delta_d, 0);
    const Eigen::MatrixXd I = interpolation_matrix(ctx.dp.grid.nodes, ctx.out.nodes);
    Eigen::MatrixXcd T(ns * no, nc);
    for (int c = 0; c < nc; ++c) {
      Eigen::MatrixXcd y = evaluate_output(ctx, sg, M, I, X.col(c));
      for (int sl = 0; sl < ns; ++sl) T.block(sl * no, c, no, 1) = y.col(sl);
    }
    cplx a = cplx(0, -1) * sg + weight_shift(m.n, degree);
    // chi p is a polynomial of degree nd - 1 + 2 vanish in log(mu): its input norm is exact on nd2 nodes
    const int nd2 = nd + 2 * vanish;
    const SpectralGrid<double> fine = chebyshev_grid(nd2, ta, tb);
    Eigen::MatrixXd Lf = interpolation_matrix(tdata, fine.nodes);
    for (int i = 0; i < nd2; ++i) Lf.row(i) *= chi(fine.nodes(i));
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(ns * nd2, nc), Nout = Eigen::MatrixXcd::Zero(ns * no, ns * no);
    for (int sl = 0; sl < ns; ++sl) {
      NormSpec in{s + 1, std::abs(sigmas[pi]), a, std::nullopt, true};
      NormSpec outn{s, std::abs(sigmas[pi]), a, std::nullopt, true};
      if (cfg.which == Which::DDelta) {
        in.extra_wedge_weight = cplx(2.0, 0);
        outn.extra_wedge_weight = cplx(2.0, 0);
      }
      G.block(sl * nd2, sl * nd, nd2, nd) =
          norm_matrix(in, nd2, cfg.data_min, cfg.data_max, ell, fs.labels[sl]) * Lf.cast<cplx>();
      Nout.block(sl * no, sl * no, no, no) = norm_matrix(outn, no, cfg.data_min, cfg.data_max, ell, fs.labels[sl]);
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    Eigen::MatrixXcd R = qr.matrixQR().topRows(nc).triangularView<Eigen::Upper>();
    Eigen::MatrixXcd A = Nout * T * R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(nc, nc));
    norms[job] = power_norm(A, cfg.max_iterations, cfg.tol, &iters[job]);
  });

  std::vector<ScanRow> rows;
  for (int pi = 0; pi < P; ++pi) {
    ScanRow r;
    r.sigma = sigmas[pi];
    r.s = s;
    r.k = k;
    r.ell_max = ell_max;
    for (int ell = 0; ell < L; ++ell)
      if (norms[pi * L + ell] > r.norm) {
        r.norm = norms[pi * L + ell];
        r.worst_ell = ell;
        r.iterations = iters[pi * L + ell];
      }
    r.pencil_N = pencil_sizes[pi];
    r.ratio = r.norm / std::pow(std::abs(r.sigma), cfg.growth_exponent);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ahres
