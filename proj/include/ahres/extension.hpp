#pragma once

#include "ahres/form_calculus.hpp"

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace ahres {

using cplx = std::complex<double>;

struct SpectralParameter {
  int n = 2, k = 0;
  cplx sigma, sigma_tilde, lambda;
  int sheet = 1;       // +1: Im sigma > 0 (or real with Re >= 0); -1: the other root
  cplx sigma_next;     // sqrt(lambda - ((n-2k+1)/2)^2) on the physical branch
  bool branch_point = false;
};

double weight_shift(int n, int k);  // (n - 2k - 1)/2
SpectralParameter sigma_lambda(int n, int k, cplx sigma);
SpectralParameter lambda_sigma(int n, int k, cplx lambda, int sheet);

// P(sigma) = sum_{j,p} sigma^p A_{j,p}(mu) d_mu^j with polynomial A after clearing.
struct OperatorPencil {
  ModeBundle bundle;
  double mu_left = -0.5, mu_right = 4.0;
  bool polar = false;
  std::string route;
  MuOp raw;                     // rational in mu, parameter sigma
  std::vector<Poly> row_factor; // cleared row i = row_factor[i] * raw row i, row_factor[i](0) = 1
  MuOp cleared;

  int rank() const { return bundle.rank; }
  int order() const { return cleared.order(); }
  int sigma_degree() const { return cleared.param_degree(); }
  Poly A(int j, int p, int r, int c) const;
  Eigen::MatrixXcd A_at(int j, int p, double mu) const;
  Eigen::MatrixXcd A_derivative_at(int j, int p, double mu, int order) const;
};

// rho^2 box on rho^{i sigma - c} v
OperatorPencil build_pencil_ambient(const MetricSpec& m, int k, int ell);
// same with s = i sigma_tilde (no weight shift)
OperatorPencil build_pencil_ambient_unshifted(const MetricSpec& m, int k, int ell);
OperatorPencil build_pencil_conjugated(const MetricSpec& m, int k, int ell);
// wraps a raw rational operator; throws NonPolynomialCoefficient unless clearable
OperatorPencil make_pencil(const MetricSpec& m, int k, int ell, MuOp raw, const std::string& route,
                           bool validate = true);

// the block operator [[-Delta_k + s^2 + c^2, -2d],[2 delta, -Delta_{k-1} + s^2 + (c+2)^2]]
MuOp block_operator(const MetricSpec& m, int k, int ell);
// J = [[I, dF/F ^],[0, I]] with F = sqrt(mu), and its inverse
MuOp j_matrix(int k, int ell, bool inverse);

std::vector<cplx> indicial_roots(const OperatorPencil& p, cplx sigma);

struct EntryReport {
  int row, col, sigma_power, order;
  int num_degree, den_degree;
  double max_coeff;
  bool polynomial;       // raw entry already polynomial
  bool smooth_at_zero;   // denominator nonvanishing at mu = 0
};

struct SmoothnessReport {
  int rank = 0;
  std::vector<EntryReport> entries;
  int max_degree = 0;
  bool all_smooth = true;
  std::vector<std::string> flags;
};

SmoothnessReport smoothness_report(const OperatorPencil& p);

struct ModelCheck {
  bool ok = true;
  double defect = 0;
  std::vector<std::string> failures;
};
// top order sigma-free, A_{2,0}(0) = 0, A_{2,0}'(0) = 4, A_{1,1}(0) = -4i, A_{1,0}(0) = 4
ModelCheck check_model_structure(const OperatorPencil& p);

// R P_k(sigma) - sqrt(w)^{-1} P_{3-k}(sigma) sqrt(w) R, exact; true when zero
bool star_intertwines(const MetricSpec& m, int k, int ell);

}  // namespace ahres
