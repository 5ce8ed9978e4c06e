// Command-line front end: solve, verify, oracle, count, app, report.
// Exit codes: 0 success, 1 certification/acceptance failure, 2 invalid input.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qes/apps.hpp"
#include "qes/bethe.hpp"
#include "qes/coeff_oracle.hpp"
#include "qes/counting.hpp"
#include "qes/forms.hpp"
#include "qes/json_io.hpp"
#include "qes/report.hpp"
#include "qes/sl2.hpp"

namespace {

using qes::Json;

struct CommonOpts {
  std::string spec_path;
  std::string form_name;
  std::string output_path;
  std::string format = "json";
  int n = -1;
  std::uint64_t seed = 0;
  int restarts = -1;
  double tol = -1.0;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--spec", o.spec_path, "Input JSON file (operator spec or form parameters)");
  sub->add_option("--form", o.form_name,
                  "Canonical form name: heun, gheun1, gheun2, gheun3, gheun4");
  sub->add_option("--n", o.n, "Polynomial degree n");
  sub->add_option("--seed", o.seed, "Deterministic multistart seed");
  sub->add_option("--restarts", o.restarts, "Multistart budget");
  sub->add_option("--tol", o.tol, "Certification tolerance override");
  sub->add_option("--output", o.output_path, "Write output to this file instead of stdout");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
}

qes::SolverConfig build_cfg(const CommonOpts& o) {
  qes::SolverConfig cfg;
  cfg.seed = o.seed;
  if (o.restarts > 0) cfg.restarts = o.restarts;
  if (o.tol > 0.0) cfg.cert_tol = o.tol;
  cfg.validate();
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json_file(const std::string& path) {
  return Json::parse(read_file(path));
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

// Loads the operator spec named by --spec, optionally funneled through a
// canonical form (--form plus --n).  A solve document is accepted as input
// by unwrapping its embedded spec.
qes::OdeSpec load_spec(const CommonOpts& o) {
  if (o.spec_path.empty()) throw std::invalid_argument("--spec <file> is required");
  Json j = parse_json_file(o.spec_path);
  if (!o.form_name.empty()) {
    if (o.n < 0) throw std::invalid_argument("--form requires --n");
    if (j.contains("type")) {
      if (j["type"].get<std::string>() != o.form_name) {
        throw std::invalid_argument("form file type '" + j["type"].get<std::string>() +
                                    "' does not match --form " + o.form_name);
      }
    } else {
      j["type"] = o.form_name;
    }
    return qes::to_spec(qes::form_from_json(j), o.n);
  }
  qes::OdeSpec spec = j.contains("spec") ? qes::spec_from_json(j.at("spec"))
                                         : qes::spec_from_json(j);
  if (o.n >= 0) {
    spec.n = o.n;
    spec.validate();
  }
  return spec;
}

int unsupported_csv(const char* what) {
  std::fprintf(stderr, "error: csv format is only available for solution lists, not %s\n", what);
  return 2;
}

int run_solve(const CommonOpts& o) {
  const qes::OdeSpec spec = load_spec(o);
  const qes::SolverConfig cfg = build_cfg(o);
  const qes::SolveReport rep = qes::solve_all_report(spec, cfg);
  std::string text;
  if (o.format == "json") {
    text = qes::dump_deterministic(qes::solve_document(spec, cfg, rep));
  } else if (o.format == "csv") {
    text = qes::solutions_to_csv(rep);
  } else {
    text = qes::solutions_to_pretty(spec, rep);
  }
  write_output(text, o.output_path);
  return 0;
}

int run_verify(const CommonOpts& o) {
  if (o.spec_path.empty()) throw std::invalid_argument("--spec <solution file> is required");
  const Json j = parse_json_file(o.spec_path);
  if (!j.contains("spec") || !j.contains("solutions")) {
    throw std::invalid_argument("verify expects a solve document with 'spec' and 'solutions'");
  }
  const qes::OdeSpec spec = qes::spec_from_json(j.at("spec"));
  const double tol = o.tol > 0.0 ? o.tol : qes::SolverConfig{}.cert_tol;

  int checked = 0, failed = 0;
  Json failures = Json::array();
  for (const Json& js : j.at("solutions")) {
    qes::BetheSolution sol = qes::solution_from_json(js);
    double bae = 0.0;
    if (!sol.config.roots.empty()) {
      const auto F = qes::bae_residual_cleared(spec, sol.config.roots);
      double m = 0.0;
      for (const auto& f : F) m = std::max(m, std::abs(f));
      bae = m / qes::bae_scale(spec, sol.config.roots);
    }
    const double ode = qes::certify_ode(spec, sol);
    const bool ok = bae <= tol && ode <= tol;
    if (!ok) {
      ++failed;
      failures.push_back(Json{{"index", checked}, {"bae_residual", bae}, {"ode_residual", ode}});
    }
    ++checked;
  }
  if (checked == 0) {
    std::fprintf(stderr, "warning: solution list is empty; nothing to verify\n");
  }
  Json doc;
  doc["schema_version"] = qes::kSchemaVersion;
  doc["kind"] = "verify";
  doc["checked"] = checked;
  doc["failed"] = failed;
  doc["tolerance"] = tol;
  doc["failures"] = std::move(failures);
  if (o.format == "csv") return unsupported_csv("verify reports");
  write_output(qes::dump_deterministic(doc), o.output_path);
  return failed == 0 ? 0 : 1;
}

int run_oracle(const std::string& mode, const CommonOpts& o) {
  const qes::OdeSpec spec = load_spec(o);
  if (mode == "sl2") {
    if (!qes::sl2_dependence_holds(spec)) {
      std::fprintf(stderr,
                   "error: the algebraic dependence b3 = -2(n-1)a4 does not hold; "
                   "the sl2 oracle is undefined for this spec\n");
      return 2;
    }
    const qes::Sl2Matrix H = qes::build_sl2_matrix(spec);
    const auto spectrum = qes::sl2_spectrum(H);
    Json doc;
    doc["schema_version"] = qes::kSchemaVersion;
    doc["kind"] = "oracle.sl2";
    doc["spec"] = qes::spec_to_json(spec);
    Json rows = Json::array();
    for (int r = 0; r < H.entries.rows(); ++r) {
      Json row = Json::array();
      for (int c = 0; c < H.entries.cols(); ++c) {
        row.push_back(qes::cplx_to_json(H.entries(r, c)));
      }
      rows.push_back(std::move(row));
    }
    doc["matrix"] = std::move(rows);
    Json eig = Json::array();
    for (const auto& v : spectrum) eig.push_back(qes::cplx_to_json(v));
    doc["spectrum"] = std::move(eig);
    if (o.format == "csv") return unsupported_csv("operator matrices");
    write_output(qes::dump_deterministic(doc), o.output_path);
    return 0;
  }
  // mode == "coeffs"
  const qes::SolverConfig cfg = build_cfg(o);
  const auto sols = qes::coeff_system_solve(spec, cfg);
  Json doc;
  doc["schema_version"] = qes::kSchemaVersion;
  doc["kind"] = "oracle.coeffs";
  doc["spec"] = qes::spec_to_json(spec);
  doc["seed"] = cfg.seed;
  Json arr = Json::array();
  for (const auto& s : sols) {
    Json js;
    Json sc = Json::array();
    for (const auto& v : s.s) sc.push_back(qes::cplx_to_json(v));
    js["s_coefficients"] = std::move(sc);
    js["c2"] = qes::cplx_to_json(s.c2);
    js["c1"] = qes::cplx_to_json(s.c1);
    js["c0"] = qes::cplx_to_json(s.c0);
    Json rt = Json::array();
    for (const auto& v : s.roots) rt.push_back(qes::cplx_to_json(v));
    js["roots"] = std::move(rt);
    arr.push_back(std::move(js));
  }
  doc["solutions"] = std::move(arr);
  if (o.format == "csv") return unsupported_csv("coefficient-oracle output");
  write_output(qes::dump_deterministic(doc), o.output_path);
  return 0;
}

int run_count_cmd(const CommonOpts& o, const std::string& family, int trials, bool dependent) {
  if (o.n < 0) throw std::invalid_argument("count requires --n");
  const qes::SolverConfig cfg = build_cfg(o);
  const qes::CountReport rep = qes::run_count(family, o.n, trials, cfg, dependent);
  if (o.format == "csv") return unsupported_csv("count reports");
  write_output(qes::dump_deterministic(qes::count_document(rep)), o.output_path);
  return 0;
}

struct AppOpts {
  double delta = 2.0, gamma = 1.0;     // two_electron
  double mu = 1.0;                     // phi6
  double r_minus = 0.25;               // rn
  int mu_branch = -1;
  std::vector<std::string> unknowns;
  double m_e = 1.0, Z = 1.0;           // dirac
  int l = 0;
  bool no_closed_form_start = false;
  double lambda1 = 0.0, lambda2 = 0.0; // decatic
  int bigN = 3;
};

int run_app(const std::string& system, const CommonOpts& o, const AppOpts& a) {
  const qes::SolverConfig cfg = build_cfg(o);
  Json doc;
  if (system == "two_electron") {
    qes::TwoElectronParams p;
    p.delta = a.delta;
    p.gamma = a.gamma;
    p.n = o.n < 0 ? 1 : o.n;
    doc = qes::two_electron_document(p, qes::two_electron_solve(p, cfg));
  } else if (system == "phi6") {
    qes::Phi6Params p;
    p.mu = a.mu;
    p.n = o.n < 0 ? 1 : o.n;
    doc = qes::phi6_document(p, qes::phi6_solve(p, cfg));
  } else if (system == "rn") {
    qes::RNParams p;
    p.r_minus = a.r_minus;
    p.mu_branch = a.mu_branch;
    if (!a.unknowns.empty()) p.unknowns = a.unknowns;
    p.n = o.n < 0 ? 0 : o.n;
    doc = qes::rn_document(p, qes::rn_solve(p, cfg));
  } else if (system == "dirac") {
    qes::DiracParams p;
    p.m_e = a.m_e;
    p.l = a.l;
    p.Z = a.Z;
    p.n = o.n < 0 ? 0 : o.n;
    p.use_closed_form_start = !a.no_closed_form_start;
    doc = qes::dirac_document(p, qes::dirac_solve(p, cfg));
  } else if (system == "decatic") {
    qes::DecaticParams p;
    p.lambda1 = a.lambda1;
    p.lambda2 = a.lambda2;
    p.bigN = a.bigN;
    p.l = a.l;
    p.n = o.n < 0 ? 0 : o.n;
    doc = qes::decatic_document(p, qes::decatic_solve(p, cfg));
  } else {
    throw std::invalid_argument("unknown application system: " + system);
  }
  if (o.format == "csv") return unsupported_csv("application reports");
  write_output(qes::dump_deterministic(doc), o.output_path);
  return 0;
}

int run_report_cmd(const CommonOpts& o) {
  const Json doc = qes::validation_document(o.seed);
  if (o.format == "csv") return unsupported_csv("validation reports");
  if (o.format == "pretty") {
    std::ostringstream out;
    for (const Json& c : doc.at("criteria")) {
      out << "criterion " << c.at("id").get<int>() << " ("
          << c.at("name").get<std::string>() << "): "
          << (c.at("passed").get<bool>() ? "PASS" : "FAIL") << " ["
          << c.at("seconds").get<double>() << "s] " << c.at("detail").get<std::string>()
          << "\n";
    }
    out << "seed variation: "
        << (doc.at("seed_variation").at("identical").get<bool>() ? "PASS" : "FAIL") << " — "
        << doc.at("seed_variation").at("detail").get<std::string>() << "\n";
    out << "total: " << doc.at("total_seconds").get<double>() << "s; overall "
        << (doc.at("all_passed").get<bool>() ? "PASS" : "FAIL") << "\n";
    write_output(out.str(), o.output_path);
  } else {
    write_output(qes::dump_deterministic(doc), o.output_path);
  }
  return doc.at("all_passed").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial solutions of second-order ODEs: Bethe-ansatz solver and toolkit"};
  app.require_subcommand(1);

  CommonOpts solve_o, verify_o, oracle_o, count_o, app_o, report_o;
  std::string oracle_mode, app_system, count_family = "heun";
  int count_trials = 3;
  bool count_dependent = false;
  AppOpts app_params;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Enumerate certified polynomial solutions");
  add_common(solve_cmd, solve_o);

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Re-certify the solutions in a solve document");
  add_common(verify_cmd, verify_o);

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Independent cross-checks");
  oracle_cmd->add_option("mode", oracle_mode, "sl2 | coeffs")
      ->required()
      ->check(CLI::IsMember({"sl2", "coeffs"}));
  add_common(oracle_cmd, oracle_o);

  CLI::App* count_cmd =
      app.add_subcommand("count", "Empirical Van Vleck count for a random generic family");
  count_cmd->add_option("--family", count_family, "heun (cubic X) or gheun1 (quartic X)")
      ->check(CLI::IsMember({"heun", "gheun1"}));
  count_cmd->add_option("--trials", count_trials, "Random specs per family");
  count_cmd->add_flag("--dependent", count_dependent, "Impose b3 = -2(n-1)a4");
  add_common(count_cmd, count_o);

  CLI::App* app_cmd = app.add_subcommand("app", "Physical application solvers");
  app_cmd->add_option("system", app_system,
                      "two_electron | phi6 | rn | dirac | decatic")
      ->required()
      ->check(CLI::IsMember({"two_electron", "phi6", "rn", "dirac", "decatic"}));
  app_cmd->add_option("--delta", app_params.delta, "Confinement anisotropy (two_electron)");
  app_cmd->add_option("--gamma", app_params.gamma, "Interaction strength (two_electron)");
  app_cmd->add_option("--mu", app_params.mu, "Mass scale (phi6)");
  app_cmd->add_option("--r-minus", app_params.r_minus, "Inner horizon radius (rn)");
  app_cmd->add_option("--mu-branch", app_params.mu_branch, "Exponent branch sign +1/-1 (rn)");
  app_cmd->add_option("--unknowns", app_params.unknowns, "Unknown subset of a,m_s,g_m (rn)")
      ->delimiter(',');
  app_cmd->add_option("--m-e", app_params.m_e, "Electron mass (dirac)");
  app_cmd->add_option("--Z", app_params.Z, "Nuclear charge (dirac)");
  app_cmd->add_option("--l", app_params.l, "Angular momentum (dirac, decatic)");
  app_cmd->add_flag("--no-closed-form-start", app_params.no_closed_form_start,
                    "Do not seed the n=0 closed form (dirac)");
  app_cmd->add_option("--lambda1", app_params.lambda1, "Coupling lambda1 (decatic)");
  app_cmd->add_option("--lambda2", app_params.lambda2, "Coupling lambda2 (decatic)");
  app_cmd->add_option("--big-n", app_params.bigN, "Dimension-like parameter N (decatic)");
  add_common(app_cmd, app_o);

  CLI::App* report_cmd = app.add_subcommand("report", "Run the full validation suite");
  add_common(report_cmd, report_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_o);
    if (verify_cmd->parsed()) return run_verify(verify_o);
    if (oracle_cmd->parsed()) return run_oracle(oracle_mode, oracle_o);
    if (count_cmd->parsed()) return run_count_cmd(count_o, count_family, count_trials,
                                                 count_dependent);
    if (app_cmd->parsed()) return run_app(app_system, app_o, app_params);
    if (report_cmd->parsed()) return run_report_cmd(report_o);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "error: malformed JSON input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
