#include "qes/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qes {

namespace {

std::string format_double_17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        out += Json(it.key()).dump();
        out += ": ";
        dump_rec(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Compact layout for flat numeric pairs ([re, im]) keeps files readable.
      bool flat = true;
      for (const auto& v : j) {
        if (v.is_structured()) flat = false;
      }
      if (flat && j.size() <= 4) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          dump_rec(j[i], out, indent, depth + 1);
          if (i + 1 < j.size()) out += ", ";
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump_rec(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double_17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

Json cplx_to_json(const Cplx& v) {
  return Json::array({v.real(), v.imag()});
}

Cplx cplx_from_json(const Json& j) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return Cplx(j[0].get<double>(), j[1].get<double>());
  }
  throw std::invalid_argument("expected a number or [re, im] pair");
}

Json poly_to_json(const ComplexPoly& p) {
  Json arr = Json::array();
  for (const Cplx& c : p.coeffs()) arr.push_back(cplx_to_json(c));
  return arr;
}

Json spec_to_json(const OdeSpec& spec) {
  Json j;
  j["a"] = Json::array();
  for (const Cplx& c : spec.a) j["a"].push_back(cplx_to_json(c));
  j["b"] = Json::array();
  for (const Cplx& c : spec.b) j["b"].push_back(cplx_to_json(c));
  j["n"] = spec.n;
  return j;
}

OdeSpec spec_from_json(const Json& j) {
  OdeSpec spec;
  if (!j.is_object() || !j.contains("a") || !j.contains("b") || !j.contains("n")) {
    throw std::invalid_argument("operator document needs fields a, b, n");
  }
  const Json& a = j["a"];
  const Json& b = j["b"];
  if (!a.is_array() || a.size() > 5 || !b.is_array() || b.size() > 4) {
    throw std::invalid_argument("operator document: a has at most 5 entries, b at most 4");
  }
  for (std::size_t k = 0; k < a.size(); ++k) spec.a[k] = cplx_from_json(a[k]);
  for (std::size_t k = 0; k < b.size(); ++k) spec.b[k] = cplx_from_json(b[k]);
  if (!j["n"].is_number_integer()) throw std::invalid_argument("operator document: n must be an integer");
  spec.n = j["n"].get<int>();
  spec.validate();
  return spec;
}

namespace {

template <std::size_t N>
Json cplx_array_json(const std::array<Cplx, N>& arr) {
  Json out = Json::array();
  for (const Cplx& v : arr) out.push_back(cplx_to_json(v));
  return out;
}

template <std::size_t N>
std::array<Cplx, N> cplx_array_from(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    throw std::invalid_argument(std::string("expected an array of ") + std::to_string(N) +
                                " complex entries for " + what);
  }
  std::array<Cplx, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = cplx_from_json(j[i]);
  return out;
}

}  // namespace

Json form_to_json(const AnyForm& form) {
  Json j;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, HeunForm>) {
          j["type"] = "heun";
          j["d"] = cplx_array_json(f.d);
          j["alpha"] = cplx_array_json(f.alpha);
        } else if constexpr (std::is_same_v<F, GHeun1Form>) {
          j["type"] = "gheun1";
          j["e"] = cplx_array_json(f.e);
          j["mu"] = cplx_array_json(f.mu);
        } else if constexpr (std::is_same_v<F, GHeun2Form>) {
          j["type"] = "gheun2";
          j["f"] = cplx_array_json(f.f);
          j["nu_s"] = cplx_array_json(f.nu_s);
          j["nu"] = cplx_to_json(f.nu);
        } else if constexpr (std::is_same_v<F, GHeun3Form>) {
          j["type"] = "gheun3";
          j["g1"] = cplx_to_json(f.g1);
          j["g2"] = cplx_to_json(f.g2);
          j["sigma1"] = cplx_to_json(f.sigma1);
          j["sigma2"] = cplx_to_json(f.sigma2);
          j["sigma"] = cplx_to_json(f.sigma);
          j["kappa"] = cplx_to_json(f.kappa);
        } else {
          j["type"] = "gheun4";
          j["h"] = cplx_to_json(f.h);
          j["eta"] = cplx_to_json(f.eta);
          j["lambda"] = cplx_to_json(f.lambda);
          j["gamma"] = cplx_to_json(f.gamma);
          j["delta"] = cplx_to_json(f.delta);
        }
      },
      form);
  return j;
}

AnyForm form_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
    throw std::invalid_argument("form document needs a string field 'type'");
  }
  const std::string type = j["type"].get<std::string>();
  if (type == "heun") {
    HeunForm f;
    f.d = cplx_array_from<3>(j.at("d"), "d");
    f.alpha = cplx_array_from<3>(j.at("alpha"), "alpha");
    return f;
  }
  if (type == "gheun1") {
    GHeun1Form f;
    f.e = cplx_array_from<4>(j.at("e"), "e");
    f.mu = cplx_array_from<4>(j.at("mu"), "mu");
    return f;
  }
  if (type == "gheun2") {
    GHeun2Form f;
    f.f = cplx_array_from<3>(j.at("f"), "f");
    f.nu_s = cplx_array_from<3>(j.at("nu_s"), "nu_s");
    f.nu = cplx_from_json(j.at("nu"));
    return f;
  }
  if (type == "gheun3") {
    GHeun3Form f;
    f.g1 = cplx_from_json(j.at("g1"));
    f.g2 = cplx_from_json(j.at("g2"));
    f.sigma1 = cplx_from_json(j.at("sigma1"));
    f.sigma2 = cplx_from_json(j.at("sigma2"));
    f.sigma = cplx_from_json(j.at("sigma"));
    f.kappa = cplx_from_json(j.at("kappa"));
    return f;
  }
  if (type == "gheun4") {
    GHeun4Form f;
    f.h = cplx_from_json(j.at("h"));
    f.eta = cplx_from_json(j.at("eta"));
    f.lambda = cplx_from_json(j.at("lambda"));
    f.gamma = cplx_from_json(j.at("gamma"));
    f.delta = cplx_from_json(j.at("delta"));
    return f;
  }
  throw std::invalid_argument("unknown form type: " + type);
}

Json solution_to_json(const BetheSolution& sol) {
  Json j;
  j["roots"] = Json::array();
  for (const Cplx& z : sol.config.roots) j["roots"].push_back(cplx_to_json(z));
  j["c2"] = cplx_to_json(sol.c2);
  j["c1"] = cplx_to_json(sol.c1);
  j["c0"] = cplx_to_json(sol.c0);
  j["bae_residual"] = sol.bae_residual;
  j["ode_residual"] = sol.ode_residual;
  j["certified"] = sol.certified;
  return j;
}

BetheSolution solution_from_json(const Json& j) {
  BetheSolution sol;
  if (!j.is_object() || !j.contains("roots")) {
    throw std::invalid_argument("solution document needs a 'roots' array");
  }
  for (const Json& r : j["roots"]) sol.config.roots.push_back(cplx_from_json(r));
  if (j.contains("c2")) sol.c2 = cplx_from_json(j["c2"]);
  if (j.contains("c1")) sol.c1 = cplx_from_json(j["c1"]);
  if (j.contains("c0")) sol.c0 = cplx_from_json(j["c0"]);
  if (j.contains("bae_residual")) sol.bae_residual = j["bae_residual"].get<double>();
  if (j.contains("ode_residual")) sol.ode_residual = j["ode_residual"].get<double>();
  if (j.contains("certified")) sol.certified = j["certified"].get<bool>();
  return sol;
}

Json solve_document(const OdeSpec& spec, const SolverConfig& cfg, const SolveReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "solve";
  j["spec"] = spec_to_json(spec);
  j["seed"] = cfg.seed;
  j["restarts"] = cfg.restarts;
  j["x_has_multiple_roots"] = report.x_has_multiple_roots;
  j["starts_attempted"] = report.starts_attempted;
  j["starts_converged"] = report.starts_converged;
  j["solutions"] = Json::array();
  for (const BetheSolution& s : report.solutions) j["solutions"].push_back(solution_to_json(s));
  return j;
}

Json count_document(const CountReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "count";
  j["family"] = report.family;
  j["n"] = report.n;
  j["deg_x"] = report.deg_x;
  j["dependent"] = report.dependent;
  j["expected"] = report.expected;
  j["found"] = report.found;
  j["per_trial_found"] = report.per_trial_found;
  j["restarts_used"] = report.restarts_used;
  j["residuals"] = report.residuals;
  return j;
}

Json augmented_solutions_json(const std::vector<AugmentedSolution>& sols) {
  Json arr = Json::array();
  for (const AugmentedSolution& s : sols) {
    Json j;
    j["params"] = Json::object();
    for (std::size_t k = 0; k < s.params.size(); ++k) {
      j["params"][s.param_names[k]] = cplx_to_json(s.params[k]);
    }
    j["solution"] = solution_to_json(s.solution);
    j["realized_spec"] = spec_to_json(s.realized_spec);
    j["constraint_residual"] = s.constraint_residual;
    j["stationarity"] = s.stationarity;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json two_electron_document(const TwoElectronParams& p, const TwoElectronReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "app.two_electron";
  j["units"] = r.units;
  j["params"] = {{"delta", p.delta}, {"gamma", p.gamma}, {"n", p.n}};
  j["solutions"] = Json::array();
  for (const TwoElectronSolution& s : r.solutions) {
    Json sj;
    sj["E"] = s.E;
    sj["R"] = s.R;
    sj["discarded"] = s.discarded;
    sj["roots"] = Json::array();
    for (const Cplx& z : s.roots) sj["roots"].push_back(cplx_to_json(z));
    sj["wavefunction_poly_u"] = poly_to_json(s.wavefunction.poly_factor);
    sj["certification"] = solution_to_json(s.certified);
    j["solutions"].push_back(std::move(sj));
  }
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

Json phi6_document(const Phi6Params& p, const Phi6Report& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "app.phi6";
  j["units"] = r.units;
  j["params"] = {{"mu", p.mu}, {"n", p.n}};
  j["discarded_nonreal_params"] = r.discarded_nonreal_params;
  j["solutions"] = Json::array();
  for (const Phi6Solution& s : r.solutions) {
    Json sj;
    sj["E"] = s.E;
    sj["E_c0_check"] = s.E_c0_check;
    sj["inv_eps_sq"] = cplx_to_json(s.inv_eps_sq);
    sj["inv_eps_free"] = s.inv_eps_free;
    sj["unstable_mode"] = s.unstable;
    sj["roots"] = Json::array();
    for (const Cplx& z : s.roots) sj["roots"].push_back(cplx_to_json(z));
    sj["constraint_residual"] = s.inner.constraint_residual;
    sj["certification"] = solution_to_json(s.inner.solution);
    j["solutions"].push_back(std::move(sj));
  }
  return j;
}

Json rn_document(const RNParams& p, const RNReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "app.rn";
  j["units"] = r.units;
  j["params"] = {{"r_minus", p.r_minus}, {"mu_branch", p.mu_branch}, {"n", p.n}};
  j["unknowns"] = p.unknowns;
  j["discarded_nonreal_params"] = r.discarded_nonreal_params;
  j["solutions"] = Json::array();
  for (const RNSolution& s : r.solutions) {
    Json sj;
    sj["a"] = s.a;
    sj["m_s"] = s.m_s;
    sj["g_m"] = s.g_m;
    sj["mu"] = cplx_to_json(s.mu);
    sj["trivial_profile"] = s.trivial_profile;
    sj["roots"] = Json::array();
    for (const Cplx& z : s.roots) sj["roots"].push_back(cplx_to_json(z));
    sj["profile_exponents"] = Json::array();
    for (const auto& [pole, expn] : s.profile_exponents) {
      Json ej;
      ej["pole"] = cplx_to_json(pole);
      ej["exponent"] = cplx_to_json(expn);
      sj["profile_exponents"].push_back(std::move(ej));
    }
    sj["constraint_residual"] = s.inner.constraint_residual;
    sj["certification"] = solution_to_json(s.inner.solution);
    j["solutions"].push_back(std::move(sj));
  }
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

Json dirac_document(const DiracParams& p, const DiracReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "app.dirac";
  j["units"] = r.units;
  j["params"] = {{"m_e", p.m_e}, {"l", p.l}, {"Z", p.Z}, {"n", p.n}};
  j["discarded_nonreal_params"] = r.discarded_nonreal_params;
  j["solutions"] = Json::array();
  for (const DiracSolution& s : r.solutions) {
    Json sj;
    sj["E"] = s.E;
    sj["eB"] = s.eB;
    sj["xi"] = s.xi;
    sj["r0"] = s.r0;
    sj["roots"] = Json::array();
    for (const Cplx& z : s.roots) sj["roots"].push_back(cplx_to_json(z));
    sj["constraint_residual"] = s.inner.constraint_residual;
    sj["certification"] = solution_to_json(s.inner.solution);
    j["solutions"].push_back(std::move(sj));
  }
  return j;
}

Json decatic_document(const DecaticParams& p, const DecaticReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "app.decatic";
  j["units"] = r.units;
  j["params"] = {{"lambda1", p.lambda1}, {"lambda2", p.lambda2}, {"N", p.bigN},
                 {"l", p.l},             {"n", p.n}};
  j["discarded_unphysical"] = r.discarded_unphysical;
  j["solutions"] = Json::array();
  for (const DecaticSolution& s : r.solutions) {
    Json sj;
    sj["E"] = s.E;
    sj["lambda3"] = s.lambda3;
    sj["lambda4"] = s.lambda4;
    sj["roots_z"] = Json::array();
    for (const Cplx& z : s.roots) sj["roots_z"].push_back(cplx_to_json(z));
    sj["constraint_residual"] = s.inner.constraint_residual;
    sj["certification"] = solution_to_json(s.inner.solution);
    j["solutions"].push_back(std::move(sj));
  }
  return j;
}

std::string dump_deterministic(const Json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

std::string solutions_to_csv(const SolveReport& report) {
  std::size_t max_roots = 0;
  for (const BetheSolution& s : report.solutions) {
    max_roots = std::max(max_roots, s.config.roots.size());
  }
  std::ostringstream out;
  out << "index,certified,bae_residual,ode_residual,c2_re,c2_im,c1_re,c1_im,c0_re,c0_im";
  for (std::size_t k = 0; k < max_roots; ++k) {
    out << ",root" << (k + 1) << "_re,root" << (k + 1) << "_im";
  }
  out << "\n";
  for (std::size_t i = 0; i < report.solutions.size(); ++i) {
    const BetheSolution& s = report.solutions[i];
    out << i << "," << (s.certified ? "true" : "false") << "," << format_double_17(s.bae_residual)
        << "," << format_double_17(s.ode_residual);
    for (const Cplx& c : {s.c2, s.c1, s.c0}) {
      out << "," << format_double_17(c.real()) << "," << format_double_17(c.imag());
    }
    for (std::size_t k = 0; k < max_roots; ++k) {
      if (k < s.config.roots.size()) {
        out << "," << format_double_17(s.config.roots[k].real()) << ","
            << format_double_17(s.config.roots[k].imag());
      } else {
        out << ",,";  // padded to the widest solution
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string format_complex_pretty(const Cplx& v) {
  char buf[128];
  if (is_effectively_real(v)) {
    std::snprintf(buf, sizeof(buf), "%.12g (real)", v.real());
    return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", v.real(), v.imag());
  return buf;
}

std::string solutions_to_pretty(const OdeSpec& spec, const SolveReport& report) {
  std::ostringstream out;
  out << "degree n = " << spec.n << ", deg X = " << spec.X().degree() << ", solutions: "
      << report.solutions.size() << " (starts " << report.starts_converged << "/"
      << report.starts_attempted << " converged)\n";
  if (report.x_has_multiple_roots) {
    out << "warning: X has a (near-)multiple root; certification excludes its zeros\n";
  }
  for (std::size_t i = 0; i < report.solutions.size(); ++i) {
    const BetheSolution& s = report.solutions[i];
    out << "solution " << (i + 1) << (s.certified ? "  [certified]" : "  [NOT certified]")
        << "\n";
    out << "  Z coefficients: c2 = " << format_complex_pretty(s.c2)
        << ", c1 = " << format_complex_pretty(s.c1) << ", c0 = " << format_complex_pretty(s.c0)
        << "\n";
    out << "  residuals: balance " << format_double_17(s.bae_residual) << ", operator "
        << format_double_17(s.ode_residual) << "\n";
    for (const Cplx& z : s.config.roots) {
      out << "    root: " << format_complex_pretty(z) << "\n";
    }
  }
  return out.str();
}

}  // namespace qes
