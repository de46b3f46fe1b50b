#include "ahres/form_calculus.hpp"

#include <algorithm>
#include <bit>

namespace ahres {

namespace {

// rank of Lambda^j on the circle
int ny(int j) { return (j == 0 || j == 1) ? 1 : 0; }

void check_n(int n) {
  if (n != 2) throw Error(ErrorCode::UnsupportedDimension, "mode reduction implemented for n = 2");
}

FormSlots slots_unchecked(int k, int ell) {
  FormSlots s;
  s.k = k;
  s.ell = ell;
  s.nT = ny(k);
  s.nN = ny(k - 1);
  if (k == 0) s.labels = {"1"};
  if (k == 1) s.labels = {"dtheta", "dmu"};
  if (k == 2) s.labels = {"dmu^dtheta"};
  return s;
}

RatFunc mu_rf() { return RatFunc(Poly::x()); }

// d_Y on Y-degree j, mode ell
MuOp dY(int j, int ell) {
  MuOp m(ny(j + 1), ny(j));
  if (j == 0) m(0, 0) = OpEntry(RatFunc(QC(0, ell)));
  return m;
}

// delta_Y on Y-degree j for h = w dtheta^2
MuOp deltaY(int j, int ell, const RatFunc& w) {
  MuOp m(ny(j - 1), ny(j));
  if (j == 1) m(0, 0) = OpEntry(RatFunc(QC(0, -ell)) * w.inverse());
  return m;
}

MuOp dX(int k, int ell) {
  FormSlots in = slots_unchecked(k, ell), out = slots_unchecked(k + 1, ell);
  MuOp m(out.rank(), in.rank());
  m.set_block(0, 0, dY(k, ell));
  if (out.nN > 0 && in.nT > 0) m(out.nT, 0) = OpEntry::dmu();
  if (out.nN > 0 && in.nN > 0) {
    MuOp b = dY(k - 1, ell);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(out.nT + i, in.nT + j) = -b(i, j);
  }
  return m;
}

MuOp deltaX(int k, int ell, const MetricSpec& met) {
  FormSlots in = slots_unchecked(k, ell), out = slots_unchecked(k - 1, ell);
  MuOp m(out.rank(), in.rank());
  if (in.rank() == 0 || out.rank() == 0) return m;
  RatFunc w = met.w(), mu = mu_rf();
  RatFunc wl = w.derivative() * w.inverse();
  int n = met.n;
  if (in.nT > 0 && out.nT > 0) {
    MuOp b = deltaY(k, ell, w);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(i, j) = mu * b(i, j);
  }
  if (in.nN > 0 && out.nT > 0) {
    RatFunc gamma = RatFunc(-2) * wl + RatFunc(4 * (k - 1)) * wl;
    OpEntry e = RatFunc(-4) * mu * mu * OpEntry::dmu();
    e += OpEntry(RatFunc(2 * (n - 2 * k - 1)) * mu + mu * mu * gamma);
    m(0, in.nT) = e;
  }
  if (in.nN > 0 && out.nN > 0) {
    MuOp b = deltaY(k - 1, ell, w);
    for (int i = 0; i < b.rows(); ++i)
      for (int j = 0; j < b.cols(); ++j) m(out.nT + i, in.nT + j) = -(mu * b(i, j));
  }
  return m;
}

// ---- coordinate engine for the ambient space ----

using RhoPoly = std::map<int, RatFunc>;

RhoPoly rp(int m, RatFunc f) {
  RhoPoly r;
  if (!f.is_zero()) r[m] = std::move(f);
  return r;
}

RhoPoly rp_mul(const RhoPoly& a, const RhoPoly& b) {
  RhoPoly r;
  for (auto& [ma, fa] : a)
    for (auto& [mb, fb] : b) {
      RatFunc& t = r[ma + mb];
      t += fa * fb;
    }
  for (auto it = r.begin(); it != r.end();) it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}

void rp_add(RhoPoly& a, const RhoPoly& b, int sign = 1) {
  for (auto& [m, f] : b) {
    a[m] += sign > 0 ? f : -f;
    if (a[m].is_zero()) a.erase(m);
  }
}

std::vector<int> indices(int mask) {
  std::vector<int> v;
  for (int i = 0; i < 3; ++i)
    if (mask & (1 << i)) v.push_back(i);
  return v;
}

int parity(const std::vector<int>& p) {
  int inv = 0;
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 ? -1 : 1;
}

RhoPoly minor(const RhoScalar M[3][3], int I, int J) {
  auto a = indices(I), b = indices(J);
  RhoPoly total;
  if (a.size() != b.size()) return total;
  if (a.empty()) return rp(0, RatFunc(1));
  std::vector<int> perm(a.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  do {
    RhoPoly term = rp(0, RatFunc(1));
    for (size_t i = 0; i < perm.size() && !term.empty(); ++i) {
      const RhoScalar& e = M[a[i]][b[perm[i]]];
      term = rp_mul(term, rp(e.m, e.f));
    }
    rp_add(total, term, parity(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// sum_m rho^{s+m} (sum_c E_c v_c)
struct SymVal {
  std::map<int, std::vector<OpEntry>> t;
  int nin = 0;
};

SymVal sv_zero(int nin) { return SymVal{{}, nin}; }

void sv_add(SymVal& a, const SymVal& b, int sign = 1) {
  for (auto& [m, row] : b.t) {
    auto& dst = a.t[m];
    if (dst.empty()) dst.resize(a.nin);
    for (int c = 0; c < a.nin; ++c) {
      if (sign > 0)
        dst[c] += row[c];
      else
        dst[c] -= row[c];
    }
  }
}

SymVal sv_mul(const RhoPoly& f, const SymVal& v) {
  SymVal r = sv_zero(v.nin);
  for (auto& [mf, ff] : f)
    for (auto& [mv, row] : v.t) {
      auto& dst = r.t[mf + mv];
      if (dst.empty()) dst.resize(v.nin);
      for (int c = 0; c < v.nin; ++c) dst[c] += ff * row[c];
    }
  return r;
}

SymVal sv_drho(const SymVal& v) {
  SymVal r = sv_zero(v.nin);
  for (auto& [m, row] : v.t) {
    auto& dst = r.t[m - 1];
    if (dst.empty()) dst.resize(v.nin);
    for (int c = 0; c < v.nin; ++c) dst[c] += row[c].times_param(1) + RatFunc(m) * row[c];
  }
  return r;
}

SymVal sv_dmu(const SymVal& v) {
  SymVal r = sv_zero(v.nin);
  for (auto& [m, row] : v.t) {
    auto& dst = r.t[m];
    dst.resize(v.nin);
    for (int c = 0; c < v.nin; ++c) dst[c] = compose(OpEntry::dmu(), row[c]);
  }
  return r;
}

SymVal sv_dtheta(const SymVal& v, int ell) {
  return sv_mul(rp(0, RatFunc(QC(0, ell))), v);
}

std::map<int, SymVal> lower_components(int k, int nin) {
  // covariant coordinate components of rho^s v in block basis
  std::map<int, SymVal> low;
  auto slots = ambient_slots(k);
  for (int b = 0; b < static_cast<int>(slots.size()); ++b) {
    SymVal v = sv_zero(nin);
    int m = (slots[b].mask & 1) ? -1 : 0;
    v.t[m].resize(nin);
    v.t[m][b] = OpEntry(1);
    low[slots[b].mask] = v;
  }
  return low;
}

std::vector<int> masks_of_size(int k) {
  std::vector<int> r;
  for (int m = 0; m < 8; ++m)
    if (std::popcount(static_cast<unsigned>(m)) == k) r.push_back(m);
  return r;
}

std::map<int, SymVal> transform(const RhoScalar M[3][3], const std::map<int, SymVal>& comps,
                                int k, int nin) {
  std::map<int, SymVal> out;
  for (int I : masks_of_size(k)) {
    SymVal acc = sv_zero(nin);
    for (auto& [J, v] : comps) {
      RhoPoly g = minor(M, I, J);
      if (!g.empty()) sv_add(acc, sv_mul(g, v));
    }
    out[I] = acc;
  }
  return out;
}

MuOp to_block(const std::map<int, SymVal>& comps, int k, int nin, int expected_m) {
  auto slots = ambient_slots(k);
  MuOp r(slots.size(), nin);
  for (int b = 0; b < static_cast<int>(slots.size()); ++b) {
    auto it = comps.find(slots[b].mask);
    if (it == comps.end()) continue;
    SymVal v = it->second;
    if (slots[b].mask & 1) v = sv_mul(rp(1, RatFunc(1)), v);
    for (auto& [m, row] : v.t) {
      bool nonzero = std::any_of(row.begin(), row.end(), [](const OpEntry& e) { return !e.is_zero(); });
      if (!nonzero) continue;
      if (m != expected_m)
        throw Error(ErrorCode::NonPolynomialCoefficient, "ambient operator is not homogeneous in rho");
      for (int c = 0; c < nin; ++c) r(b, c) = row[c];
    }
  }
  return r;
}

}  // namespace

FormSlots form_slots(int n, int k, int ell) {
  check_n(n);
  if (k < -1 || k > n + 1) throw Error(ErrorCode::DegreeOutOfRange, "k = " + std::to_string(k));
  FormSlots s = slots_unchecked(k, ell);
  s.n = n;
  return s;
}

ModeBundle mode_bundle(int n, int k, int ell) {
  check_n(n);
  if (k < 0 || k > n + 1) throw Error(ErrorCode::DegreeOutOfRange, "k = " + std::to_string(k));
  ModeBundle b;
  b.n = n;
  b.k = k;
  b.ell = ell;
  b.top = form_slots(n, k, ell);
  b.bottom = form_slots(n, k - 1, ell);
  b.rank = b.top.rank() + b.bottom.rank();
  for (auto& l : b.top.labels) b.component_labels.push_back("T:" + l);
  for (auto& l : b.bottom.labels) b.component_labels.push_back("N:" + l);
  return b;
}

MuOp d_matrix(const FormSlots& in) {
  check_n(in.n);
  if (in.k < 0 || in.k > in.n) throw Error(ErrorCode::DegreeOutOfRange, "d on degree " + std::to_string(in.k));
  return dX(in.k, in.ell);
}

MuOp delta_matrix(const FormSlots& in, const MetricSpec& m) {
  check_n(in.n);
  if (in.k < 0 || in.k > in.n)
    throw Error(ErrorCode::DegreeOutOfRange, "delta on degree " + std::to_string(in.k));
  return deltaX(in.k, in.ell, m);
}

LaplacianBlocks laplacian_blocks(const FormSlots& in, const MetricSpec& m) {
  check_n(in.n);
  if (in.k < 0 || in.k > in.n)
    throw Error(ErrorCode::DegreeOutOfRange, "Laplacian on degree " + std::to_string(in.k));
  LaplacianBlocks L;
  int k = in.k;
  L.d_delta = dX(k - 1, in.ell) * deltaX(k, in.ell, m);
  L.delta_d = deltaX(k + 1, in.ell, m) * dX(k, in.ell);
  L.laplacian = L.d_delta + L.delta_d;
  return L;
}

MuOp wedge_dmu(const FormSlots& from) {
  FormSlots to = slots_unchecked(from.k + 1, from.ell);
  MuOp m(to.rank(), from.rank());
  if (from.nT > 0 && to.nN > 0) m(to.nT, 0) = OpEntry(1);
  return m;
}

RatFunc HodgeStar::dlog(const MetricSpec& m) const {
  RatFunc w = m.w();
  RatFunc r = RatFunc(QC(mu_power)) * RatFunc(Poly::x()).inverse();
  r += RatFunc(QC(w_power)) * w.derivative() * w.inverse();
  return r;
}

HodgeStar hodge_star(const FormSlots& in, const MetricSpec& m) {
  check_n(in.n);
  if (in.k < 0 || in.k > in.n) throw Error(ErrorCode::DegreeOutOfRange, "star on degree " + std::to_string(in.k));
  // orthonormal coframe dmu/(2mu), sqrt(w/mu) dtheta; orientation dmu ^ dtheta
  HodgeStar s;
  s.from_k = in.k;
  s.to_k = in.n - in.k;
  RatFunc w = m.w(), mu = mu_rf();
  if (in.k == 0) {
    s.R = MuOp(1, 1);
    s.R(0, 0) = OpEntry(RatFunc(QC::frac(1, 2)));
    s.mu_power = mpq_class(-3, 2);
    s.w_power = mpq_class(1, 2);
  } else if (in.k == 1) {
    s.R = MuOp(2, 2);
    s.R(0, 1) = OpEntry(2);
    s.R(1, 0) = OpEntry(RatFunc(QC::frac(-1, 2)) * (w * mu).inverse());
    s.mu_power = mpq_class(1, 2);
    s.w_power = mpq_class(1, 2);
  } else {
    s.R = MuOp(1, 1);
    s.R(0, 0) = OpEntry(2);
    s.mu_power = mpq_class(3, 2);
    s.w_power = mpq_class(-1, 2);
  }
  return s;
}

HodgeStar compose(const HodgeStar& a, const HodgeStar& b) {
  HodgeStar c;
  c.R = a.R * b.R;
  c.mu_power = a.mu_power + b.mu_power;
  c.w_power = a.w_power + b.w_power;
  c.from_k = b.from_k;
  c.to_k = a.to_k;
  return c;
}

std::vector<AmbientSlot> ambient_slots(int k) {
  std::vector<AmbientSlot> s;
  auto xmasks = [](int j) -> std::vector<int> {
    if (j == 0) return {0};
    if (j == 1) return {4, 2};
    if (j == 2) return {6};
    return {};
  };
  for (int m : xmasks(k)) s.push_back({m});
  for (int m : xmasks(k - 1)) s.push_back({m | 1});
  return s;
}

int ambient_rank(int k) { return static_cast<int>(ambient_slots(k).size()); }

MuOp ambient_d(int k, int ell) {
  if (k < 0 || k > 3) throw Error(ErrorCode::DegreeOutOfRange, "ambient degree " + std::to_string(k));
  FormSlots inT = slots_unchecked(k, ell), inN = slots_unchecked(k - 1, ell);
  FormSlots outT = slots_unchecked(k + 1, ell);
  MuOp m(ambient_rank(k + 1), ambient_rank(k));
  m.set_block(0, 0, dX(k, ell));
  for (int i = 0; i < inT.rank(); ++i) m(outT.rank() + i, i) = OpEntry::param();
  MuOp dn = dX(k - 1, ell);
  for (int i = 0; i < dn.rows(); ++i)
    for (int j = 0; j < dn.cols(); ++j) m(outT.rank() + i, inT.rank() + j) = -dn(i, j);
  (void)inN;
  return m;
}

MuOp ambient_delta(int k, int ell, const AmbientMetric& a) {
  if (k < 0 || k > 3) throw Error(ErrorCode::DegreeOutOfRange, "ambient degree " + std::to_string(k));
  int nin = ambient_rank(k);
  if (k == 0) return MuOp(0, nin);
  auto low = lower_components(k, nin);
  auto up = transform(a.G, low, k, nin);
  std::map<int, SymVal> div;
  for (int J : masks_of_size(k - 1)) {
    SymVal acc = sv_zero(nin);
    for (int i = 0; i < 3; ++i) {
      if (J & (1 << i)) continue;
      int I = J | (1 << i);
      const SymVal& v = up[I];
      if (v.t.empty()) continue;
      int below = std::popcount(static_cast<unsigned>(J & ((1 << i) - 1)));
      int sign = below % 2 ? -1 : 1;
      SymVal term;
      if (i == 0) {
        term = sv_drho(v);
        sv_add(term, sv_mul(rp(-1, RatFunc(a.density_rho_power)), v));
      } else if (i == 1) {
        term = sv_dmu(v);
        sv_add(term, sv_mul(rp(0, a.dlog_density_mu), v));
      } else {
        term = sv_dtheta(v, ell);
      }
      sv_add(acc, term, -sign);
    }
    div[J] = acc;
  }
  auto lowered = transform(a.g, div, k - 1, nin);
  return to_block(lowered, k - 1, nin, -2);
}

MuOp ambient_box(int k, int ell, const AmbientMetric& a) {
  MuOp box(ambient_rank(k), ambient_rank(k));
  if (k > 0) box += ambient_d(k - 1, ell).substitute(QC(1), QC(-2)) * ambient_delta(k, ell, a);
  if (k < 3) box += ambient_delta(k + 1, ell, a) * ambient_d(k, ell);
  return box;
}

AmbientStar ambient_star(int k, const AmbientMetric& a) {
  if (k < 0 || k > 3) throw Error(ErrorCode::DegreeOutOfRange, "ambient degree " + std::to_string(k));
  int nin = ambient_rank(k);
  auto low = lower_components(k, nin);
  auto up = transform(a.G, low, k, nin);
  std::map<int, SymVal> out;
  RhoPoly vol = rp(a.density_rho_power, RatFunc(QC(a.density_coeff)));
  for (int J : masks_of_size(3 - k)) {
    int I = 7 & ~J;
    auto pi = indices(I), pj = indices(J);
    std::vector<int> perm(pi);
    perm.insert(perm.end(), pj.begin(), pj.end());
    out[J] = sv_mul(rp_mul(vol, rp(0, RatFunc(parity(perm)))), up[I]);
  }
  AmbientStar s;
  s.from_k = k;
  s.to_k = 3 - k;
  s.weight_shift = 3 - 2 * k;
  s.R = to_block(out, 3 - k, nin, s.weight_shift);
  return s;
}

}  // namespace ahres
