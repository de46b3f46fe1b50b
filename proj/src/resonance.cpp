#include "ahres/resonance.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace ahres {

namespace {

// D_r P D_c with unit max-abs rows and columns; eigenvalues are unchanged
struct Scaled {
  Eigen::MatrixXcd P0, P1, P2;
  bool quadratic = false;
  Eigen::MatrixXcd at(cplx s) const {
    Eigen::MatrixXcd M = P0 + s * P1;
    if (quadratic) M += (s * s) * P2;
    return M;
  }
  Eigen::MatrixXcd deriv(cplx s) const {
    Eigen::MatrixXcd M = P1;
    if (quadratic) M += (2.0 * s) * P2;
    return M;
  }
};

Scaled equilibrate(const DiscretePencil& dp) {
  Scaled s{dp.P0, dp.P1, dp.P2, dp.P2.cwiseAbs().maxCoeff() > 0};
  const int n = dp.size();
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < n; ++i) {
      double m = std::max({s.P0.row(i).cwiseAbs().maxCoeff(), s.P1.row(i).cwiseAbs().maxCoeff(),
                           s.P2.row(i).cwiseAbs().maxCoeff()});
      if (m > 0) {
        s.P0.row(i) /= m;
        s.P1.row(i) /= m;
        s.P2.row(i) /= m;
      }
    }
    for (int j = 0; j < n; ++j) {
      double m = std::max({s.P0.col(j).cwiseAbs().maxCoeff(), s.P1.col(j).cwiseAbs().maxCoeff(),
                           s.P2.col(j).cwiseAbs().maxCoeff()});
      if (m > 0) {
        s.P0.col(j) /= m;
        s.P1.col(j) /= m;
        s.P2.col(j) /= m;
      }
    }
  }
  return s;
}

Eigen::VectorXcd start_vector(int n, int seed) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i)
    v(i) = cplx(1.0 + 0.37 * std::sin(1.3 * i + seed), 0.21 * std::cos(0.7 * i + 2.0 * seed));
  return v.normalized();
}

double smin_estimate(const Eigen::MatrixXcd& P, const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu) {
  Eigen::VectorXcd v = start_vector(P.rows(), 3);
  for (int it = 0; it < 4; ++it) {
    Eigen::VectorXcd y = lu.adjoint().solve(v);
    Eigen::VectorXcd x = lu.solve(y);
    double nx = x.norm();
    if (!(nx > 0) || !std::isfinite(nx)) return 0.0;
    v = x / nx;
  }
  return (P * v).norm();
}

}  // namespace

std::string flags_string(unsigned f) {
  std::vector<std::string> parts;
  if (f & kStable) parts.push_back("stable");
  if (f & kSpurious) parts.push_back("spurious");
  if (f & kBranchPointNear) parts.push_back("branch-point-near");
  if (f & kCavityConditioned) parts.push_back("cavity-conditioned");
  if (f & kNoConvergence) parts.push_back("no-convergence");
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? "|" : "") + parts[i];
  return s;
}

Window parse_window(const std::string& text) {
  Window w;
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  std::stringstream ss(t);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    try {
      if (item.rfind("|sigma|<=", 0) == 0) {
        w.radius = std::stod(item.substr(9));
      } else if (item.rfind("im>=", 0) == 0) {
        w.im_min = std::stod(item.substr(4));
      } else {
        throw Error(ErrorCode::ConfigError, "bad window clause '" + item + "'");
      }
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::ConfigError, "bad window clause '" + item + "'");
    }
    any = true;
  }
  if (!any) throw Error(ErrorCode::ConfigError, "empty window");
  return w;
}

std::string window_string(const Window& w) {
  std::ostringstream os;
  os << "|sigma|<=" << w.radius << ",im>=" << w.im_min;
  return os.str();
}

std::vector<ResonanceResult> solve_pencil(const DiscretePencil& dp, const Window& w) {
  Scaled s = equilibrate(dp);
  const int n = dp.size();
  if (s.P1.cwiseAbs().maxCoeff() == 0 && !s.quadratic)
    throw Error(ErrorCode::SingularLeadingCoefficient, "pencil does not depend on sigma");
  const cplx shift(0.0731, 0.5 * w.im_min + 0.0417);
  Eigen::VectorXcd theta;
  if (!s.quadratic) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(s.at(shift));
    Eigen::MatrixXcd M = -lu.solve(s.P1);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    theta = es.eigenvalues();
  } else {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2 * n, 2 * n), B = A;
    A.block(0, n, n, n).setIdentity();
    A.block(n, 0, n, n) = -s.P0;
    A.block(n, n, n, n) = -s.P1;
    B.block(0, 0, n, n).setIdentity();
    B.block(n, n, n, n) = s.P2;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A - shift * B);
    Eigen::MatrixXcd M = lu.solve(B);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    theta = es.eigenvalues();
  }
  std::vector<ResonanceResult> out;
  for (int i = 0; i < theta.size(); ++i) {
    if (std::abs(theta(i)) < 1e-14) continue;
    cplx sg = shift + 1.0 / theta(i);
    if (!w.contains(sg, 0.25)) continue;
    ResonanceResult r;
    r.sigma = sg;
    r.k = dp.k;
    r.ell = dp.ell;
    out.push_back(r);
  }
  return out;
}

double pencil_residual(const DiscretePencil& dp, cplx sigma) {
  Scaled s = equilibrate(dp);
  Eigen::MatrixXcd P = s.at(sigma);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(P);
  return smin_estimate(P, lu) / P.norm();
}

ResonanceResult refine(const DiscretePencil& dp, cplx sigma0, double max_move) {
  Scaled s = equilibrate(dp);
  const int n = dp.size();
  ResonanceResult r;
  r.k = dp.k;
  r.ell = dp.ell;
  cplx sg = sigma0;
  Eigen::VectorXcd v = start_vector(n, 1), u = start_vector(n, 2);
  double step = 1.0;
  bool converged = false;
  cplx best = sg;
  double best_r = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < 50; ++it) {
    Eigen::MatrixXcd P = s.at(sg);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(P);
    Eigen::VectorXcd x = lu.solve(v);
    Eigen::VectorXcd y = lu.adjoint().solve(u);
    if (!x.allFinite() || !y.allFinite() || x.norm() == 0 || y.norm() == 0) {
      converged = true;  // exactly singular
      break;
    }
    v = x.normalized();
    u = y.normalized();
    cplx num = u.dot(P * v);
    cplx den = u.dot(s.deriv(sg) * v);
    if (std::abs(den) == 0) break;
    double rel = std::abs(num) / P.norm();
    if (rel < best_r) {
      best_r = rel;
      best = sg;
    }
    cplx d = num / den;
    sg -= d;
    step = std::abs(d);
    if (!std::isfinite(step) || std::abs(sg - sigma0) > max_move) break;
    if (step < 1e-12 * std::max(1.0, std::abs(sg))) {
      converged = true;
      ++it;
      break;
    }
    // clustered eigenvalues: Newton stalls at rounding level
    if (step < 1e-8 * std::max(1.0, std::abs(sg)) && std::abs(num) < 1e-14 * P.norm()) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged && best_r < 1e-15) {
    sg = best;
    converged = true;
  }
  r.sigma = sg;
  r.iterations = it;
  Eigen::MatrixXcd P = s.at(sg);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(P);
  r.residual = smin_estimate(P, lu) / P.norm();
  if (!converged && step > 1e-9 * std::max(1.0, std::abs(sg))) r.flags |= kNoConvergence;
  if (std::abs(sg - sigma0) > max_move || !std::isfinite(std::abs(sg))) r.flags |= kNoConvergence;
  r.lambda = sigma_lambda(dp.n, dp.k, sg).lambda;
  return r;
}

std::vector<ResonanceResult> filter_spurious(const std::vector<ResonanceResult>& coarse,
                                             const std::vector<ResonanceResult>& fine, double tol) {
  struct Pair {
    double d;
    size_t i, j;
  };
  std::vector<Pair> pairs;
  for (size_t i = 0; i < coarse.size(); ++i)
    for (size_t j = 0; j < fine.size(); ++j)
      pairs.push_back({std::abs(coarse[i].sigma - fine[j].sigma), i, j});
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.d < b.d; });
  std::vector<int> match(coarse.size(), -1);
  std::vector<bool> used(fine.size(), false);
  std::vector<double> dist(coarse.size(), -1.0);
  for (auto& p : pairs) {
    if (p.d >= tol) break;
    if (match[p.i] >= 0 || used[p.j]) continue;
    match[p.i] = static_cast<int>(p.j);
    used[p.j] = true;
    dist[p.i] = p.d;
  }
  std::vector<ResonanceResult> out;
  for (size_t i = 0; i < coarse.size(); ++i) {
    ResonanceResult r = coarse[i];
    r.flags &= ~(kStable | kSpurious);
    if (match[i] >= 0) {
      const ResonanceResult& f = fine[match[i]];
      r.stability = dist[i];
      r.sigma = f.sigma;
      r.lambda = f.lambda;
      bool ok = r.residual < 1e-8 && f.residual < 1e-8 && !(r.flags & kNoConvergence) &&
                !(f.flags & kNoConvergence);
      r.residual = f.residual;
      r.flags |= ok ? kStable : kSpurious;
    } else {
      r.stability = -1.0;
      r.flags |= kSpurious;
    }
    out.push_back(r);
  }
  return out;
}

int residue_rank(const DiscretePencil& dp, cplx sigma_star) {
  Scaled s = equilibrate(dp);
  Eigen::MatrixXcd P = s.at(sigma_star);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(P);
  const auto& sv = svd.singularValues();
  double top = sv(0);
  int count = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) <= 1e-8 * top) ++count;  // P(sigma*) = 0 counts as full rank
  return count;
}

void sort_results(std::vector<ResonanceResult>& r) {
  std::stable_sort(r.begin(), r.end(), [](const ResonanceResult& a, const ResonanceResult& b) {
    if (a.sigma.imag() != b.sigma.imag()) return a.sigma.imag() > b.sigma.imag();
    if (a.sigma.real() != b.sigma.real()) return a.sigma.real() < b.sigma.real();
    return a.ell < b.ell;
  });
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AHRES_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? static_cast<int>(h) : 1;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

namespace {

std::vector<ResonanceResult> refined_candidates(const DiscretePencil& dp, const Window& w,
                                               const std::vector<cplx>* near = nullptr) {
  std::vector<ResonanceResult> cand = solve_pencil(dp, w), out;
  // a multiple eigenvalue splits into a small cluster; its mean is the better start
  std::vector<std::vector<cplx>> clusters;
  for (auto& c : cand) {
    bool placed = false;
    for (auto& cl : clusters)
      if (std::abs(cl.front() - c.sigma) < 1e-4 * std::max(1.0, std::abs(c.sigma))) {
        cl.push_back(c.sigma);
        placed = true;
        break;
      }
    if (!placed) clusters.push_back({c.sigma});
  }
  std::vector<cplx> centres;
  for (auto& cl : clusters) {
    cplx mean = 0;
    for (auto& z : cl) mean += z;
    mean /= double(cl.size());
    if (near) {
      bool close = false;
      for (auto& z : *near)
        if (std::abs(z - mean) < 1e-3 * std::max(1.0, std::abs(z))) close = true;
      if (!close) continue;
    }
    centres.push_back(mean);
  }
  for (auto& c : centres) {
    ResonanceResult r = refine(dp, c, 0.5);
    if (!w.contains(r.sigma, 1e-6)) continue;
    bool dup = false;
    for (auto& o : out)
      if (std::abs(o.sigma - r.sigma) < 1e-9 * std::max(1.0, std::abs(r.sigma))) {
        dup = true;
        if (r.residual < o.residual) o = r;
        break;
      }
    if (!dup) out.push_back(r);
  }
  return out;
}

bool near_threshold(int n, int k, cplx s) {
  double c = weight_shift(n, k), c2 = c + 1.0;
  cplx t = std::sqrt(cplx(c2 * c2 - c * c, 0));
  return std::abs(s) < 1e-3 || std::abs(s - t) < 1e-3 || std::abs(s + t) < 1e-3;
}

}  // namespace

std::vector<ResonanceResult> sweep_mode(const MetricSpec& m, int k, int ell, const Window& w,
                                        const SweepConfig& cfg) {
  if (k < 0 || k > m.n) throw Error(ErrorCode::DegreeOutOfRange, "k = " + std::to_string(k));
  OperatorPencil p = build_pencil_ambient(m, k, ell);
  std::optional<AbsorberSpec> ab;
  if (cfg.use_absorber) ab = default_absorber(m, cfg.strength, cfg.order);
  DiscretePencil d1 = assemble(p, chebyshev_grid(cfg.N, m.mu_left, m.mu_right), ab);
  DiscretePencil d2 = assemble(p, chebyshev_grid(2 * cfg.N, m.mu_left, m.mu_right), ab);
  auto c1 = refined_candidates(d1, w);
  std::vector<cplx> seeds;
  for (auto& c : c1) seeds.push_back(c.sigma);
  auto c2 = refined_candidates(d2, w, &seeds);
  auto res = filter_spurious(c1, c2, cfg.tol);
  std::vector<ResonanceResult> out;
  for (auto& r : res) {
    if (!w.contains(r.sigma, cfg.tol)) continue;
    r.k = k;
    r.ell = ell;
    if (near_threshold(m.n, k, r.sigma)) r.flags |= kBranchPointNear;
    if (d1.cavity) r.flags |= kCavityConditioned;
    if (r.flags & kStable) r.residue_rank = residue_rank(d2, r.sigma);
    out.push_back(r);
  }
  return out;
}

std::vector<ResonanceResult> sweep(const MetricSpec& m, int k, int ell_max, const Window& w,
                                   const SweepConfig& cfg) {
  if (k < 0 || k > m.n) throw Error(ErrorCode::DegreeOutOfRange, "k = " + std::to_string(k));
  std::vector<std::vector<ResonanceResult>> per(ell_max + 1);
  parallel_for(ell_max + 1, thread_count(cfg.threads),
               [&](int ell) { per[ell] = sweep_mode(m, k, ell, w, cfg); });
  std::vector<ResonanceResult> all;
  for (auto& v : per) all.insert(all.end(), v.begin(), v.end());
  sort_results(all);
  return all;
}

}  // namespace ahres
