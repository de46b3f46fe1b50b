#pragma once

#include "ahres/geometry.hpp"
#include "ahres/mu_operator.hpp"

#include <string>
#include <vector>

namespace ahres {

// Slots of k-forms on X for one Fourier mode e^{i ell theta}: first the boundary
// part dy^alpha, then the conormal part dmu ^ dy^beta.
struct FormSlots {
  int n = 2, k = 0, ell = 0;
  int nT = 0, nN = 0;
  std::vector<std::string> labels;
  int rank() const { return nT + nN; }
};

FormSlots form_slots(int n, int k, int ell);

// Lambda^k + Lambda^{k-1}, the bundle of the extended operator at degree k.
struct ModeBundle {
  int n = 2, k = 0, ell = 0;
  int rank = 0;
  FormSlots top, bottom;  // degree k and degree k-1 parts
  std::vector<std::string> component_labels;
};

ModeBundle mode_bundle(int n, int k, int ell);

MuOp d_matrix(const FormSlots& in);
MuOp delta_matrix(const FormSlots& in, const MetricSpec& m);

struct LaplacianBlocks {
  MuOp d_delta, delta_d, laplacian;
};
LaplacianBlocks laplacian_blocks(const FormSlots& in, const MetricSpec& m);

// (dmu ^): degree k-1 slots -> degree k slots
MuOp wedge_dmu(const FormSlots& from);

// Order-zero operator kappa * R with kappa = c * mu^a * w^b (a, b rational, possibly
// half-integers) and R a rational slot map.
struct HodgeStar {
  MuOp R;
  mpq_class mu_power{0}, w_power{0};
  int from_k = 0, to_k = 0;
  RatFunc dlog(const MetricSpec& m) const;  // kappa'/kappa
};

HodgeStar hodge_star(const FormSlots& in, const MetricSpec& m);
HodgeStar compose(const HodgeStar& a, const HodgeStar& b);

// Ambient complex on M = (0,inf)_rho x X_even in the block basis
//   [X-forms of degree k] + [(drho/rho) ^ X-forms of degree k-1].
// Operators act on rho^s v and carry the homogeneity weight s as their parameter.
struct AmbientSlot {
  int mask;  // coordinate subset: bit0 rho, bit1 mu, bit2 theta
};
std::vector<AmbientSlot> ambient_slots(int k);
int ambient_rank(int k);

MuOp ambient_d(int k, int ell);
// rho^s v -> rho^{s-2} (delta(s) v)
MuOp ambient_delta(int k, int ell, const AmbientMetric& a);
// rho^s v -> rho^{s-2} (box(s) v)
MuOp ambient_box(int k, int ell, const AmbientMetric& a);

// Ambient Hodge star: rho^s v -> rho^{s+3-2k} sqrt(w) (R v).
struct AmbientStar {
  MuOp R;
  int from_k = 0, to_k = 0;
  int weight_shift = 0;
};
AmbientStar ambient_star(int k, const AmbientMetric& a);

}  // namespace ahres
