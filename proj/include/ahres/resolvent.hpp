#pragma once

#include "ahres/discretize.hpp"
#include "ahres/form_calculus.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ahres {

enum class Which { DeltaD, DDelta, Full };
std::string which_name(Which w);
Which which_from_name(const std::string& s);

// ||u||_s^2 = u^* W^{1/2} (W^{-1/2} Q_m W^{-1/2})^{s/m} W^{1/2} u, m = max(1, ceil s), with
// Q_m = sum_j binom(m, j) h^{2j} (1 + h^2 ell^2)^{m-j} (D^j)^T W D^j, h = 1/sigma_scale, W the
// quadrature weights; slots weighted by |mu^{weight_exponent/2}|.
struct NormSpec {
  double s = 0.0;
  double sigma_scale = 1.0;
  cplx weight_exponent = 0.0;
  std::optional<cplx> extra_wedge_weight;  // additional weight on the dmu^ components
  bool log_mu = false;                     // nodes and D taken in log(mu) instead of mu
};

// Norm matrix N_s on Chebyshev nodes of [a, b] (one slot): ||u||_s = |N_s u|_2.
// With log_mu the nodes are Chebyshev in log(mu) on [log a, log b].
Eigen::MatrixXcd norm_matrix(const NormSpec& ns, int N, double a, double b, int ell,
                             const std::string& slot_label = "");

struct ResolventQuery {
  int k = 0, ell = 0;
  SpectralParameter spectral;
  // k-form datum, one function of mu per slot of form_slots(n, k, ell); supported in 0 < mu < mu_right
  std::vector<std::function<cplx(double)>> rhs;
  Which which = Which::DeltaD;
};

struct ResolventOutput {
  Eigen::VectorXd mu;       // output nodes, Chebyshev on [mu_out, mu_right]
  Eigen::MatrixXcd values;  // node x slot
  std::vector<std::string> labels;
  double solve_residual = 0.0;
  double conditioning = 0.0;  // scaled smallest singular value of the pencil(s) used
  cplx sigma_used;
  int pencil_degree = 0;
};

// One pencil ready for solves: symbolic pencil, its discretization and the output grid.
struct ResolventContext {
  MetricSpec metric;
  OperatorPencil pencil;
  DiscretePencil dp;
  SpectralGrid<double> out;
  int degree = 0, ell = 0;
};

ResolventContext make_context(const MetricSpec& m, int pencil_degree, int ell, int N = 64,
                              double mu_out = 0.01,
                              const std::optional<AbsorberSpec>& absorber = std::nullopt);

// delta_X d_X (-Delta_X + sigma^2 + c^2)^{-1} f through the extended inverse (DeltaD, context of
// degree k), or d_X delta_X (...)^{-1} f through the degree k+1 pencil at sigma_next (DDelta).
ResolventOutput resolvent_apply(const ResolventQuery& q, const ResolventContext& ctx);
// convenience: builds the needed context(s)
ResolventOutput resolvent_apply(const ResolventQuery& q, const MetricSpec& m, int N = 64);

// (Delta_k - lambda)^{-1} f = -(f + delta d R f + d delta R f) / lambda,  R = (-Delta + sigma^2 + c^2)^{-1}
ResolventOutput resolvent_full(const ResolventQuery& q, const MetricSpec& m, int N = 64);

// discrete X-level operator applied to slot data on a Chebyshev grid (coefficients evaluated at the nodes)
Eigen::MatrixXcd apply_on_grid(const MuOp& op, const SpectralGrid<double>& g, const Eigen::MatrixXcd& u,
                               cplx param = 0.0);

enum class Corner { D, A };
// [[A, B], [C, D]]^{-1} through the Schur complement of D (Corner::D) or of A (Corner::A)
Eigen::MatrixXcd schur_invert(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                              const Eigen::MatrixXcd& C, const Eigen::MatrixXcd& D,
                              Corner corner = Corner::D);

struct Strip {
  double C0 = 1.0;  // |Im sigma| < C0
  double im = -0.5;
  double re_min = 5.0, re_max = 40.0, re_step = 5.0;
};
Strip parse_strip(const std::string& text);  // "im=-0.5,re=5:40:5[,C0=1]"
std::string strip_string(const Strip& s);

struct ScanRow {
  cplx sigma;
  double norm = 0.0, ratio = 0.0;
  double s = 0.0;
  int k = 0, ell_max = 0;
  int worst_ell = 0;
  int iterations = 0;
  int pencil_N = 0;
};

struct ScanConfig {
  int N = 64;                              // data/output nodes, Chebyshev in log(mu)
  double data_min = 0.5, data_max = 3.5;   // data and output live on [data_min, data_max]
  int pencil_N = 0;                        // 0: max(N, N + points_per_unit |sigma| / data_min)
  double points_per_unit = 5.0;
  double growth_exponent = 1.0;            // ratio = norm / |sigma|^growth_exponent
  int max_iterations = 200;
  double tol = 1e-6;
  int threads = 0;
  Which which = Which::DeltaD;
};

// weighted operator norm of the delta d (or d delta) resolvent Y^{s+1} -> X^s on the strip,
// maximized over modes ell <= ell_max
std::vector<ScanRow> highenergy_scan(const MetricSpec& m, int k, double s, const Strip& strip, int ell_max,
                                     const ScanConfig& cfg = {});

// Chebyshev grid in log(mu) on [log a, log b]; nodes are mu values and D differentiates in mu
SpectralGrid<double> log_mu_grid(int N, double a, double b);

// largest singular value by power iteration on A^* A
double power_norm(const Eigen::MatrixXcd& A, int max_iterations, double tol, int* iterations = nullptr);

}  // namespace ahres
