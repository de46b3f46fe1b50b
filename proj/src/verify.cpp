#include "ahres/verify.hpp"

#include "ahres/extension.hpp"
#include "ahres/form_calculus.hpp"

#include <random>
#include <sstream>

namespace ahres {

namespace {

bool regular_at_zero(const RatFunc& f) { return f.is_zero() || !f.den().eval(QC(0)).is_zero(); }

RatFunc mu_pow(int p) {
  RatFunc r(1);
  for (int i = 0; i < std::abs(p); ++i) r = r * RatFunc(Poly::x());
  return p >= 0 ? r : r.inverse();
}

// coefficients b_j of the entry written as sum b_j (mu d_mu)^j (order <= 2, parameter power p)
std::vector<RatFunc> b_coefficients(const OpEntry& e, int p) {
  RatFunc a0 = e.coeff(p, 0), a1 = e.coeff(p, 1), a2 = e.coeff(p, 2);
  return {a0, a1 * mu_pow(-1) - a2 * mu_pow(-2), a2 * mu_pow(-2)};
}

// every b-coefficient is mu^gain times something regular at 0
bool b_regular(const MuOp& M, int gain) {
  if (M.order() > 2) return false;
  for (int r = 0; r < M.rows(); ++r)
    for (int c = 0; c < M.cols(); ++c)
      for (int p = 0; p <= std::max(M(r, c).param_degree(), 0); ++p)
        for (const RatFunc& b : b_coefficients(M(r, c), p))
          if (!regular_at_zero(b * mu_pow(-gain))) return false;
  return true;
}

// Laplace-Beltrami on functions of mode ell for g = dmu^2/(4 mu^2) + w dtheta^2 / mu
MuOp scalar_laplacian(const MetricSpec& m, int ell) {
  RatFunc w = m.w(), mu = RatFunc(Poly::x());
  MuOp L(1, 1);
  OpEntry e = OpEntry::term(0, 2, RatFunc(-4) * mu * mu);
  e += OpEntry::term(0, 1, RatFunc(-2) * mu * mu * w.derivative() * w.inverse() - RatFunc(2) * mu);
  e += OpEntry::term(0, 0, RatFunc(QC(long(ell) * ell)) * mu * w.inverse());
  L(0, 0) = e;
  return L;
}

struct Tally {
  IdentityCheck c;
  void add(bool ok, const std::string& what) {
    ++c.cases;
    if (!ok) {
      c.pass = false;
      c.defect += 1.0;
      if (c.detail.size() < 400) c.detail += (c.detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string tag(int k, int ell) { return "k=" + std::to_string(k) + " l=" + std::to_string(ell); }

}  // namespace

std::vector<IdentityCheck> identity_suite(const MetricSpec& m, const SuiteOptions& o) {
  const int n = m.n;
  std::vector<IdentityCheck> out;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> U(-3.0, 3.0);

  Tally dd{{"d^2 = 0"}}, deldel{{"delta^2 = 0"}}, lap{{"d delta + delta d = Delta"}},
      bform{{"d delta, delta d in Diff_b^2"}}, div{{"(dmu^) d delta, delta d (dmu^) divisible by mu"}};
  for (int ell = 0; ell <= o.ell_max; ++ell) {
    for (int k = 0; k + 2 <= n; ++k)
      dd.add(d_matrix(form_slots(n, k + 1, ell)) * d_matrix(form_slots(n, k, ell)) == MuOp(
                 form_slots(n, k + 2, ell).rank(), form_slots(n, k, ell).rank()),
             tag(k, ell));
    for (int k = 2; k <= n; ++k)
      deldel.add(delta_matrix(form_slots(n, k - 1, ell), m) * delta_matrix(form_slots(n, k, ell), m) ==
                     MuOp(form_slots(n, k - 2, ell).rank(), form_slots(n, k, ell).rank()),
                 tag(k, ell));
    // Delta_0 against the Laplace-Beltrami formula; Delta_k against Delta_{n-k} through the star
    lap.add(laplacian_blocks(form_slots(n, 0, ell), m).laplacian == scalar_laplacian(m, ell), tag(0, ell));
    for (int k = 0; k <= n; ++k) {
      HodgeStar s = hodge_star(form_slots(n, k, ell), m);
      MuOp Lk = laplacian_blocks(form_slots(n, k, ell), m).laplacian;
      MuOp Ld = laplacian_blocks(form_slots(n, n - k, ell), m).laplacian;
      lap.add(Ld.conjugate_log(OpEntry(s.dlog(m))) * s.R == s.R * Lk, "star " + tag(k, ell));
      LaplacianBlocks B = laplacian_blocks(form_slots(n, k, ell), m);
      bform.add(b_regular(B.d_delta, 0) && b_regular(B.delta_d, 0), tag(k, ell));
    }
    for (int k = 1; k <= n; ++k) {
      FormSlots lo = form_slots(n, k - 1, ell);
      MuOp W = wedge_dmu(lo);
      div.add(b_regular(W * laplacian_blocks(lo, m).d_delta, 1), "(dmu^) d delta " + tag(k, ell));
      div.add(b_regular(laplacian_blocks(form_slots(n, k, ell), m).delta_d * W, 1),
              "delta d (dmu^) " + tag(k, ell));
    }
  }
  for (Tally* t : {&dd, &deldel, &lap, &bform, &div}) out.push_back(t->c);

  Tally route{{"route equivalence (ambient = conjugated)"}}, shift{{"Mellin shift identity"}},
      star{{"star intertwining of pencils"}}, model{{"model operator structure"}};
  IdentityCheck roots{"indicial roots {0, i sigma}"};
  const MetricSpec pert = perturbed_h2(0.05, m.mu_left);
  for (int k = 0; k <= n; ++k)
    for (int ell = 0; ell <= o.ell_max; ++ell) {
      for (const MetricSpec* mm : {&m, &pert}) {
        OperatorPencil a = build_pencil_ambient(*mm, k, ell);
        OperatorPencil c = build_pencil_conjugated(*mm, k, ell);
        if (o.corrupt_fixture && k == 0 && ell == 0 && mm == &m) c.cleared(0, 0) += OpEntry(1);
        route.add(a.cleared == c.cleared, tag(k, ell) + (mm == &m ? "" : " perturbed"));
      }
      OperatorPencil a = build_pencil_ambient(m, k, ell);
      OperatorPencil u = build_pencil_ambient_unshifted(m, k, ell);
      // rho^{i sigma - c} = rho^{i sigma_tilde} with sigma_tilde = sigma + i c
      QC ic(0, mpq_class(n - 2 * k - 1, 2));
      ic.im.canonicalize();
      shift.add(u.raw.substitute(QC(1), ic) == a.raw, tag(k, ell));
      star.add(star_intertwines(m, k, ell), tag(k, ell));
      ModelCheck mc = check_model_structure(a);
      model.add(mc.ok, tag(k, ell));
      for (int t = 0; t < 3; ++t) {
        cplx sg(U(rng), U(rng) / 3.0);
        std::vector<cplx> r = indicial_roots(a, sg);
        double worst = 0;
        for (cplx z : r) worst = std::max(worst, std::min(std::abs(z), std::abs(z - cplx(0, 1) * sg)));
        bool both = false;
        for (cplx z : r) both |= std::abs(z - cplx(0, 1) * sg) < 1e-9;
        ++roots.cases;
        roots.defect = std::max(roots.defect, worst);
        if (worst > 1e-9 || !both) {
          roots.pass = false;
          if (roots.detail.size() < 400) roots.detail += tag(k, ell) + " ";
        }
      }
    }
  for (Tally* t : {&route, &shift, &star, &model}) out.push_back(t->c);
  out.push_back(roots);
  return out;
}

}  // namespace ahres
