#include "ahres/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace ahres {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v == 0.0 ? 0.0 : v);  // no negative zero
  return buf;
}

json metric_to_json(const MetricSpec& m) {
  json j;
  j["n"] = m.n;
  j["warp"] = m.warp_coeffs;
  j["mu_left"] = m.mu_left;
  j["mu_right"] = m.mu_right;
  j["kind"] = kind_name(m.kind);
  return j;
}

MetricSpec metric_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "metric must be a JSON object");
  static const std::set<std::string> keys{"n", "warp", "mu_left", "mu_right", "kind"};
  for (auto& [k, v] : j.items())
    if (!keys.count(k)) throw Error(ErrorCode::ConfigError, "unknown metric key '" + k + "'");
  for (auto& k : keys)
    if (!j.contains(k)) throw Error(ErrorCode::ConfigError, "metric is missing '" + k + "'");
  try {
    return make_metric(j.at("n").get<int>(), j.at("warp").get<std::vector<double>>(),
                       j.at("mu_left").get<double>(), j.at("mu_right").get<double>(),
                       kind_from_name(j.at("kind").get<std::string>()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad metric field: ") + e.what());
  }
}

MetricSpec load_metric(const std::string& spec) {
  if (spec == "exact-h2") return exact_h2();
  if (spec == "perturbed-h2") return perturbed_h2();
  std::ifstream in(spec);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open metric file '" + spec + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "metric file '" + spec + "' is not valid JSON: " + e.what());
  }
  return metric_from_json(j);
}

namespace {

json qc_json(const QC& q) { return json::array({q.re.get_str(), q.im.get_str()}); }

json poly_json(const Poly& p) {
  json a = json::array();
  for (const QC& c : p.coeffs()) a.push_back(qc_json(c));
  return a;
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < M.cols(); ++j) r.push_back(cplx_json(M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

}  // namespace

json ratfunc_to_json(const RatFunc& f) { return json{{"num", poly_json(f.num())}, {"den", poly_json(f.den())}}; }

json muop_to_json(const MuOp& op) {
  json rows = json::array();
  for (int r = 0; r < op.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < op.cols(); ++c) {
      json terms = json::array();
      for (auto& [key, f] : op(r, c).terms()) {
        json t = ratfunc_to_json(f);
        t["param_power"] = key.first;
        t["d_power"] = key.second;
        terms.push_back(t);
      }
      row.push_back(terms);
    }
    rows.push_back(row);
  }
  return json{{"rows", op.rows()}, {"cols", op.cols()}, {"entries", rows}};
}

json pencil_to_json(const OperatorPencil& p) {
  json j;
  j["k"] = p.bundle.k;
  j["ell"] = p.bundle.ell;
  j["route"] = p.route;
  j["rank"] = p.rank();
  j["slots"] = p.bundle.component_labels;
  j["mu_left"] = p.mu_left;
  j["mu_right"] = p.mu_right;
  json coeffs = json::array();
  for (int q = 0; q <= std::max(p.sigma_degree(), 0); ++q)
    for (int d = 0; d <= std::max(p.order(), 0); ++d) {
      json M = json::array();
      bool any = false;
      for (int r = 0; r < p.rank(); ++r) {
        json row = json::array();
        for (int c = 0; c < p.rank(); ++c) {
          Poly a = p.A(d, q, r, c);
          any |= !a.is_zero();
          row.push_back(poly_json(a));
        }
        M.push_back(row);
      }
      if (any) coeffs.push_back(json{{"sigma_power", q}, {"d_power", d}, {"matrix", M}});
    }
  j["coefficients"] = coeffs;
  return j;
}

json discrete_pencil_to_json(const DiscretePencil& dp) {
  json j;
  j["k"] = dp.k;
  j["ell"] = dp.ell;
  j["N"] = dp.grid.N;
  j["rank"] = dp.rank;
  j["interval"] = json::array({dp.grid.a, dp.grid.b});
  j["absorber"] = dp.absorber.has_value();
  j["cavity"] = dp.cavity;
  j["layout"] = "row-major, [re, im], slot-major unknowns";
  j["P0"] = matrix_json(dp.P0);
  j["P1"] = matrix_json(dp.P1);
  j["P2"] = matrix_json(dp.P2);
  return j;
}

json resonances_to_json(const std::vector<ResonanceResult>& r) {
  json a = json::array();
  for (auto& x : r)
    a.push_back(json{{"k", x.k},
                     {"ell", x.ell},
                     {"sigma", cplx_json(x.sigma)},
                     {"lambda", cplx_json(x.lambda)},
                     {"residual", x.residual},
                     {"stability", x.stability},
                     {"residue_rank", x.residue_rank},
                     {"flags", flags_string(x.flags)}});
  return a;
}

void write_resonances_csv(std::ostream& os, const std::vector<ResonanceResult>& r) {
  os << "k,ell,re_sigma,im_sigma,re_lambda,im_lambda,residual,stability,residue_rank,flags\n";
  for (auto& x : r)
    os << x.k << ',' << x.ell << ',' << fmt(x.sigma.real()) << ',' << fmt(x.sigma.imag()) << ','
       << fmt(x.lambda.real()) << ',' << fmt(x.lambda.imag()) << ',' << fmt(x.residual) << ','
       << fmt(x.stability) << ',' << x.residue_rank << ',' << flags_string(x.flags) << '\n';
}

void write_oracle_csv(std::ostream& os, const std::vector<oracle::OracleResonance>& r) {
  os << "k,ell,re_sigma,im_sigma,re_lambda,im_lambda,residual,stability,residue_rank,flags,origin,certainty\n";
  for (auto& x : r) {
    cplx lam = x.sigma * x.sigma + 0.25;
    os << x.k << ',' << x.ell << ',' << fmt(x.sigma.real()) << ',' << fmt(x.sigma.imag()) << ','
       << fmt(lam.real()) << ',' << fmt(lam.imag()) << ',' << fmt(0.0) << ',' << fmt(0.0) << ','
       << x.multiplicity << ',' << (x.window_too_deep ? "window-too-deep" : "stable") << ',' << x.origin
       << ',' << fmt(x.certainty) << '\n';
  }
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "sigma_re,sigma_im,norm,ratio,s,k,ell_max\n";
  for (auto& r : rows)
    os << fmt(r.sigma.real()) << ',' << fmt(r.sigma.imag()) << ',' << fmt(r.norm) << ',' << fmt(r.ratio)
       << ',' << fmt(r.s) << ',' << r.k << ',' << r.ell_max << '\n';
}

void write_scan_gnuplot(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "# |sigma| ratio\n";
  for (auto& r : rows) os << fmt(std::abs(r.sigma)) << ' ' << fmt(r.ratio) << '\n';
}

json scan_to_json(const std::vector<ScanRow>& rows) {
  json a = json::array();
  for (auto& r : rows)
    a.push_back(json{{"sigma", cplx_json(r.sigma)},
                     {"norm", r.norm},
                     {"ratio", r.ratio},
                     {"s", r.s},
                     {"k", r.k},
                     {"ell_max", r.ell_max},
                     {"worst_ell", r.worst_ell},
                     {"iterations", r.iterations},
                     {"pencil_N", r.pencil_N}});
  return a;
}

json resolvent_to_json(const ResolventOutput& o) {
  json j;
  j["grid"] = json{{"kind", "chebyshev"}, {"mu", std::vector<double>(o.mu.data(), o.mu.data() + o.mu.size())}};
  j["labels"] = o.labels;
  json vals = json::array();
  for (int s = 0; s < o.values.cols(); ++s) {
    json col = json::array();
    for (int i = 0; i < o.values.rows(); ++i) col.push_back(cplx_json(o.values(i, s)));
    vals.push_back(col);
  }
  j["values"] = vals;
  j["sigma_used"] = cplx_json(o.sigma_used);
  j["pencil_degree"] = o.pencil_degree;
  j["solve_residual"] = o.solve_residual;
  j["conditioning"] = o.conditioning;
  return j;
}

void write_header_comments(std::ostream& os, const json& config) {
  os << "# ahres " << kVersion << "\n# config " << config.dump() << "\n";
}

}  // namespace ahres
