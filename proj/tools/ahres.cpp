#include "ahres/io.hpp"
#include "ahres/oracle.hpp"
#include "ahres/resolvent.hpp"
#include "ahres/resonance.hpp"
#include "ahres/verify.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>

using namespace ahres;

namespace {

enum Exit { kOk = 0, kConfig = 1, kDegraded = 2, kIdentityFail = 3 };

struct Options {
  std::string metric = "exact-h2";
  int k = 0;
  int ell_max = 5;
  int N = 64;
  std::string window = "|sigma|<=6,im>=-2.5";
  std::string absorber = "none";
  double strength = 1.0;
  double s = 2.0;
  std::string strip = "im=-0.5,re=5:40:5,C0=1";
  std::string out;
  std::uint64_t seed = 1;
  std::string format = "csv";
  bool corrupt = false;
};

// output goes to --out when given, otherwise to stdout
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

json base_config(const std::string& command, const Options& o, const MetricSpec& m) {
  json c;
  c["command"] = command;
  c["version"] = kVersion;
  c["metric"] = metric_to_json(m);
  c["metric_source"] = o.metric;
  c["extension"] = "polynomial";  // w continued to mu < 0 by the same polynomial
  if (m.polar) c["pole_cone"] = m.cone;
  c["seed"] = o.seed;
  c["format"] = o.format;
  return c;
}

void emit_json(std::ostream& os, const json& config, const json& results) {
  json doc;
  doc["version"] = kVersion;
  doc["config"] = config;
  doc["results"] = results;
  os << doc.dump(2) << "\n";
}

void warn_cone(const MetricSpec& m, int ell_max) {
  if (m.polar && std::abs(m.cone - 1.0) > 1e-12 && ell_max > 0)
    std::cerr << "warning: the pole at mu = " << m.mu_right << " is conical (angle " << m.cone
              << " x 2 pi); modes ell != 0 are not smooth there and will not converge\n";
}

int cmd_resonances(const Options& o) {
  MetricSpec m = load_metric(o.metric);
  warn_cone(m, o.ell_max);
  form_slots(m.n, o.k, 0);  // degree check
  Window w = parse_window(o.window);
  SweepConfig cfg;
  cfg.N = o.N;
  if (o.absorber == "none") {
    cfg.use_absorber = false;
  } else {
    cfg.use_absorber = true;
    cfg.order = o.absorber == "second" ? AbsorberOrder::Second : AbsorberOrder::Zeroth;
  }
  cfg.strength = o.strength;
  json config = base_config("resonances", o, m);
  config["k"] = o.k;
  config["ell_max"] = o.ell_max;
  config["N"] = o.N;
  config["window"] = window_string(w);
  config["absorber"] = o.absorber;
  config["strength"] = o.strength;
  config["tol"] = cfg.tol;

  std::vector<ResonanceResult> r = sweep(m, o.k, o.ell_max, w, cfg);
  Sink sink(o.out);
  if (o.format == "json") {
    emit_json(sink.os(), config, resonances_to_json(r));
  } else {
    write_header_comments(sink.os(), config);
    write_resonances_csv(sink.os(), r);
  }
  int bad = 0;
  for (auto& x : r) bad += (x.flags & kNoConvergence) ? 1 : 0;
  if (!r.empty() && 2 * bad > static_cast<int>(r.size())) {
    std::cerr << "degraded: " << bad << " of " << r.size() << " results did not converge\n";
    return kDegraded;
  }
  return kOk;
}

int cmd_verify(const Options& o) {
  MetricSpec m = load_metric(o.metric);
  SuiteOptions so;
  so.ell_max = o.ell_max;
  so.seed = o.seed;
  so.corrupt_fixture = o.corrupt;
  json config = base_config("verify", o, m);
  config["ell_max"] = o.ell_max;
  config["corrupt_fixture"] = o.corrupt;
  std::vector<IdentityCheck> checks = identity_suite(m, so);
  bool all = true;
  Sink sink(o.out);
  if (o.format == "json") {
    json a = json::array();
    for (auto& c : checks) {
      all &= c.pass;
      a.push_back(json{{"identity", c.name}, {"pass", c.pass}, {"max_defect", c.defect}, {"cases", c.cases},
                       {"detail", c.detail}});
    }
    emit_json(sink.os(), config, a);
  } else {
    write_header_comments(sink.os(), config);
    sink.os() << "identity,result,max_defect,cases,detail\n";
    for (auto& c : checks) {
      all &= c.pass;
      sink.os() << '"' << c.name << "\"," << (c.pass ? "pass" : "FAIL") << ',' << fmt(c.defect) << ','
                << c.cases << ",\"" << c.detail << "\"\n";
    }
  }
  if (!all) std::cerr << "identity suite: failures present\n";
  return all ? kOk : kIdentityFail;
}

int cmd_scan(const Options& o) {
  MetricSpec m = load_metric(o.metric);
  warn_cone(m, o.ell_max);
  form_slots(m.n, o.k, 0);
  Strip strip = parse_strip(o.strip);
  ScanConfig cfg;
  cfg.N = o.N;
  json config = base_config("scan", o, m);
  config["k"] = o.k;
  config["ell_max"] = o.ell_max;
  config["N"] = o.N;
  config["s"] = o.s;
  config["strip"] = strip_string(strip);
  config["data_window"] = json::array({cfg.data_min, cfg.data_max});
  config["points_per_unit"] = cfg.points_per_unit;
  config["growth_exponent"] = cfg.growth_exponent;
  config["which"] = which_name(cfg.which);
  config["max_iterations"] = cfg.max_iterations;
  config["tol"] = cfg.tol;

  std::vector<ScanRow> rows = highenergy_scan(m, o.k, o.s, strip, o.ell_max, cfg);
  Sink sink(o.out);
  if (o.format == "json") {
    emit_json(sink.os(), config, scan_to_json(rows));
  } else {
    write_header_comments(sink.os(), config);
    write_scan_csv(sink.os(), rows);
  }
  if (!o.out.empty()) {
    std::ofstream dat(o.out + ".dat");
    write_header_comments(dat, config);
    write_scan_gnuplot(dat, rows);
    std::ofstream gp(o.out + ".gp");
    gp << "# ahres " << kVersion << "\nset xlabel '|sigma|'\nset ylabel 'norm / |sigma|'\n"
       << "plot '" << o.out << ".dat' using 1:2 with linespoints title 'ratio'\n";
  }
  return kOk;
}

int cmd_oracle(const Options& o) {
  Window w = parse_window(o.window);
  json config = base_config("oracle", o, exact_h2());
  config["k"] = o.k;
  config["ell_max"] = o.ell_max;
  config["window"] = window_string(w);
  std::vector<oracle::OracleResonance> all;
  for (int ell = 0; ell <= o.ell_max; ++ell) {
    auto r = oracle::gamma_pole_resonances(o.k, ell, oracle::OracleWindow{w.radius, w.im_min});
    all.insert(all.end(), r.begin(), r.end());
  }
  Sink sink(o.out);
  write_header_comments(sink.os(), config);
  write_oracle_csv(sink.os(), all);
  return kOk;
}

int cmd_export(const Options& o, int ell, bool discrete) {
  MetricSpec m = load_metric(o.metric);
  OperatorPencil p = build_pencil_ambient(m, o.k, ell);
  json config = base_config("export", o, m);
  config["k"] = o.k;
  config["ell"] = ell;
  json body = pencil_to_json(p);
  if (discrete) {
    config["N"] = o.N;
    body = discrete_pencil_to_json(assemble(p, chebyshev_grid(o.N, m.mu_left, m.mu_right)));
  }
  Sink sink(o.out);
  emit_json(sink.os(), config, body);
  return kOk;
}

bool is_config_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
    case ErrorCode::DegreeOutOfRange:
    case ErrorCode::BadInterval:
    case ErrorCode::UnsupportedDimension:
    case ErrorCode::NonPositiveBoundaryMetric:
    case ErrorCode::NonSimpleInteriorZero:
    case ErrorCode::InteriorSignChange:
    case ErrorCode::WarpZeroInDomain:
    case ErrorCode::UnsupportedWhich:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonances of the form Laplacian on even asymptotically hyperbolic surfaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;
  int ell = 0;
  bool discrete = false;

  auto common = [&](CLI::App* c) {
    c->add_option("--metric", o.metric, "exact-h2, perturbed-h2 or a JSON metric file")->capture_default_str();
    c->add_option("--out", o.out, "output file (default: stdout)");
    c->add_option("--seed", o.seed, "seed for randomized checks")->capture_default_str();
    c->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
  };

  CLI::App* res = app.add_subcommand("resonances", "resonance sweep over modes");
  common(res);
  res->add_option("--k", o.k, "form degree")->capture_default_str();
  res->add_option("--ell-max", o.ell_max, "largest mode")->check(CLI::NonNegativeNumber)->capture_default_str();
  res->add_option("--N", o.N, "collocation points (stability check uses 2N)")->capture_default_str();
  res->add_option("--window", o.window, "e.g. \"|sigma|<=6,im>=-2.5\"")->capture_default_str();
  res->add_option("--absorber", o.absorber, "none, zeroth or second")
      ->check(CLI::IsMember({"none", "zeroth", "second"}))
      ->capture_default_str();
  res->add_option("--strength", o.strength, "absorber strength")->capture_default_str();

  CLI::App* ver = app.add_subcommand("verify", "structural identity suite");
  common(ver);
  ver->add_option("--ell-max", o.ell_max, "largest mode")->check(CLI::NonNegativeNumber)->capture_default_str();
  ver->add_flag("--corrupt-fixture", o.corrupt, "test mode: corrupt one pencil entry");

  CLI::App* scan = app.add_subcommand("scan", "high-energy resolvent norm scan");
  common(scan);
  scan->add_option("--k", o.k, "form degree")->capture_default_str();
  scan->add_option("--ell-max", o.ell_max, "largest mode")->check(CLI::NonNegativeNumber);
  scan->add_option("--N", o.N, "data/output nodes")->capture_default_str();
  scan->add_option("--s", o.s, "Sobolev order of the output space")->capture_default_str();
  scan->add_option("--strip", o.strip, "im=<v>,re=<min>:<max>:<step>[,C0=<c>]")->capture_default_str();

  CLI::App* orc = app.add_subcommand("oracle", "exact-model resonance table (k = 0)");
  common(orc);
  orc->add_option("--k", o.k, "form degree")->capture_default_str();
  orc->add_option("--ell-max", o.ell_max, "largest mode")->check(CLI::NonNegativeNumber)->capture_default_str();
  orc->add_option("--window", o.window, "e.g. \"|sigma|<=6,im>=-2.5\"")->capture_default_str();

  CLI::App* exp = app.add_subcommand("export", "pencil coefficients (or collocation matrices) as JSON");
  common(exp);
  exp->add_option("--k", o.k, "form degree")->capture_default_str();
  exp->add_option("--ell", ell, "mode")->capture_default_str();
  exp->add_option("--N", o.N, "collocation points (with --discrete)")->capture_default_str();
  exp->add_flag("--discrete", discrete, "export P0, P1, P2");

  bool scan_ell_default = true;
  try {
    app.parse(argc, argv);
    scan_ell_default = scan->count("--ell-max") == 0;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }
  if (scan->parsed() && scan_ell_default) o.ell_max = 8;

  try {
    if (res->parsed()) return cmd_resonances(o);
    if (ver->parsed()) return cmd_verify(o);
    if (scan->parsed()) return cmd_scan(o);
    if (orc->parsed()) return cmd_oracle(o);
    if (exp->parsed()) return cmd_export(o, ell, discrete);
  } catch (const Error& e) {
    std::cerr << "ahres: " << e.what() << "\n";
    return is_config_error(e.code()) ? kConfig : kDegraded;
  } catch (const std::exception& e) {
    std::cerr << "ahres: " << e.what() << "\n";
    return kDegraded;
  }
  return kConfig;
}
