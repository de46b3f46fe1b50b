#pragma once

#include "ahres/errors.hpp"
#include "ahres/symbolic.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace ahres {

enum class MetricKind { ExactHyperbolic, Perturbed };

const char* kind_name(MetricKind k);
MetricKind kind_from_name(const std::string& s);

// g = (dx^2 + w(x^2) dtheta^2) / x^2 near the boundary, continued to mu = x^2 < 0
// by the same polynomial w.
struct MetricSpec {
  int n = 2;
  Poly warp;
  std::vector<double> warp_coeffs;
  double mu_left = -0.5;
  double mu_right = 4.0;
  MetricKind kind = MetricKind::ExactHyperbolic;
  bool polar = false;  // w(mu_right) == 0: pole of polar coordinates
  double cone = 1.0;   // total angle / 2 pi at the pole; 1 for a smooth pole

  RatFunc w() const { return RatFunc(warp); }
  double w_at(double mu) const { return warp.eval(std::complex<double>(mu, 0)).real(); }
};

MetricSpec make_metric(int n, const std::vector<double>& warp, double mu_left, double mu_right,
                       MetricKind kind);
MetricSpec exact_h2(double mu_left = -0.5);
// (1 - mu/4)^2 (1 + eps mu^2), the perturbed test warp
MetricSpec perturbed_h2(double eps = 0.05, double mu_left = -0.5);

Poly warp_exact_hyperbolic(int n);

// rho^m f(mu)
struct RhoScalar {
  int m = 0;
  RatFunc f;
  double eval(double rho, double mu) const {
    return std::pow(rho, m) * f.eval(std::complex<double>(mu, 0)).real();
  }
};

// Ambient Lorentzian metric in coordinates (rho, mu, theta), n = 2.
struct AmbientMetric {
  MetricSpec base;
  RhoScalar g[3][3];
  RhoScalar G[3][3];
  // sqrt|det g| = rho^density_rho_power * density_coeff * sqrt(w)
  int density_rho_power = 2;
  mpq_class density_coeff{1, 2};
  RatFunc dlog_density_mu;  // d/dmu log sqrt|det g|

  Eigen::Matrix3d components(double rho, double mu) const;
  Eigen::Matrix3d dual(double rho, double mu) const;
  double density(double rho, double mu) const;
};

AmbientMetric ambient_metric(const MetricSpec& m);

// Gauss curvature K(mu) of the n = 2 metric as an exact rational function.
RatFunc gauss_curvature(const MetricSpec& m);
double curvature_check(const MetricSpec& m, const std::vector<double>& samples);

}  // namespace ahres
