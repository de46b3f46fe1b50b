#pragma once

#include "ahres/extension.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace ahres {

template <typename Scalar = double>
struct SpectralGrid {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  int N = 0;
  Scalar a = 0, b = 1;
  Vec nodes;  // increasing
  Mat D;
};

// Chebyshev-Gauss-Lobatto nodes mapped to [a, b] and the collocation derivative.
template <typename Scalar = double>
SpectralGrid<Scalar> chebyshev_grid(int N, Scalar a, Scalar b) {
  using std::cos;
  if (N < 8 || !(a < b))
    throw Error(ErrorCode::BadInterval, "need N >= 8 and a < b (N = " + std::to_string(N) + ")");
  SpectralGrid<Scalar> g;
  g.N = N;
  g.a = a;
  g.b = b;
  const int M = N - 1;
  const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
  typename SpectralGrid<Scalar>::Vec x(N), c(N);
  for (int j = 0; j < N; ++j) {
    x(j) = -cos(pi * Scalar(j) / Scalar(M));
    c(j) = ((j == 0 || j == M) ? Scalar(2) : Scalar(1)) * ((j % 2) ? Scalar(-1) : Scalar(1));
  }
  g.D.resize(N, N);
  for (int i = 0; i < N; ++i) {
    Scalar rowsum = 0;
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      g.D(i, j) = (c(i) / c(j)) / (x(i) - x(j));
      rowsum += g.D(i, j);
    }
    g.D(i, i) = -rowsum;
  }
  Scalar scale = Scalar(2) / (b - a);
  g.D *= scale;
  g.nodes = (x.array() + Scalar(1)) * ((b - a) / Scalar(2)) + a;
  g.nodes(0) = a;
  g.nodes(M) = b;
  return g;
}

enum class AbsorberOrder { Zeroth, Second };

struct AbsorberSpec {
  double mu_left = -0.5;
  double delta1 = 0.1;
  double strength = 1.0;
  AbsorberOrder order = AbsorberOrder::Zeroth;

  // piecewise polynomial ramp t^12, t = (-delta1 - mu)/(-delta1 - mu_left): 0 for mu >= -delta1,
  // 1 at mu_left, C^11 across -delta1 (the only interior break point)
  double chi(double mu) const {
    if (mu >= -delta1) return 0.0;
    double t = std::min(1.0, (-delta1 - mu) / (-delta1 - mu_left));
    return std::pow(t, 12);
  }
};

AbsorberSpec default_absorber(const MetricSpec& m, double strength = 1.0,
                              AbsorberOrder order = AbsorberOrder::Zeroth);

// P(sigma) ~ P0 + sigma P1 + sigma^2 P2, slot-major ordering (slot r occupies rows r*N ...).
struct DiscretePencil {
  Eigen::MatrixXcd P0, P1, P2;
  SpectralGrid<double> grid;
  std::optional<AbsorberSpec> absorber;
  int rank = 1;
  int k = 0, ell = 0, n = 2;
  bool cavity = false;
  std::vector<int> differentiated_rows;
  std::vector<int> polar_orders;
  std::vector<int> row_strip;  // row s of the cleared pencil was divided by (1 - mu/mu_right)^strip_s
  Eigen::MatrixXcd lift;       // u = lift diag((1 - mu/mu_right)^m) v; empty if no polar point
  std::string provenance;

  int size() const { return static_cast<int>(P0.rows()); }
  Eigen::MatrixXcd at(cplx sigma) const { return P0 + sigma * P1 + (sigma * sigma) * P2; }
  Eigen::MatrixXcd derivative(cplx sigma) const { return P1 + (2.0 * sigma) * P2; }
};

std::vector<int> polar_vanishing_orders(const ModeBundle& b);
// u = J_pole diag((1 - mu/mu_right)^orders) v
MuOp polar_substitution(const OperatorPencil& p, const std::vector<int>& orders);
MuOp polar_regularized(const OperatorPencil& p, const std::vector<int>& orders,
                       std::vector<int>* strip = nullptr, Eigen::MatrixXcd* lift = nullptr);

DiscretePencil assemble(const OperatorPencil& p, const SpectralGrid<double>& g,
                        const std::optional<AbsorberSpec>& absorber = std::nullopt);

}  // namespace ahres
