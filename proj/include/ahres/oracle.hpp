#pragma once

// Ground truth for the exact hyperbolic plane. Deliberately independent of the
// operator-construction code: only errors.hpp is shared.

#include "ahres/errors.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace ahres::oracle {

using cplx = std::complex<double>;

struct OracleWindow {
  double radius = 6.0;
  double im_min = -2.5;
};

struct OracleResonance {
  cplx sigma;
  int k = 0, ell = 0;
  std::string origin = "gamma-pole";
  double certainty = 1.0;  // |gamma-pole value - Frobenius zero|
  int multiplicity = 1;    // zero count of the Wronskian near sigma
  bool window_too_deep = false;
};

// Exact-model resonances of mode ell. k = 0 from the Gamma-function poles,
// each confirmed by high-precision Frobenius matching.
std::vector<OracleResonance> gamma_pole_resonances(int k, int ell, const OracleWindow& w);

// Wronskian of the boundary-adapted and centre-regular solutions of the radial
// equation, evaluated with 50 significant digits (normalized, double output).
cplx frobenius_wronskian(int ell, cplx sigma);
// Newton refinement of a Wronskian zero from a starting point.
cplx frobenius_zero(int ell, cplx sigma0, int* iterations = nullptr);
// number of Wronskian zeros inside |sigma - c| < r (argument principle)
int frobenius_zero_count(int ell, cplx c, double r);

// Solution of (-Delta + sigma^2 + 1/4) U = f for one Fourier mode of functions on
// the hyperbolic plane, Im sigma >= 2, in geodesic polar distance r from the origin.
struct DirectSolution {
  Eigen::VectorXd r;        // Chebyshev nodes on [0, R]
  Eigen::VectorXcd U;       // resolvent applied to f
  Eigen::VectorXcd deltad;  // Delta U = (sigma^2 + 1/4) U - f
  Eigen::VectorXcd f;
  double R = 0;
  cplx lambda;
  std::function<cplx(double)> rhs;
  cplx interpolate_U(double r) const;
  cplx interpolate_deltad(double r) const;
};

// rhs given as a function of mu = 4 e^{-2r}
DirectSolution direct_scan(int k, int ell, cplx sigma, const std::function<cplx(double)>& rhs,
                           int N = 96, double mu_min = 1e-6);

inline double mu_of_r(double r) { return 4.0 * std::exp(-2.0 * r); }
inline double r_of_mu(double mu) { return -0.5 * std::log(mu / 4.0); }

}  // namespace ahres::oracle
