#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qes/apps.hpp"

namespace qes {

namespace {

struct RNMode {
  bool g_m_unknown = false;
};

RNMode classify_unknowns(const std::vector<std::string>& unknowns) {
  std::vector<std::string> sorted = unknowns;
  std::sort(sorted.begin(), sorted.end());
  if (sorted == std::vector<std::string>{"a", "m_s"}) return RNMode{false};
  if (sorted == std::vector<std::string>{"a", "g_m", "m_s"}) return RNMode{true};
  throw std::invalid_argument(
      "rn_solve: supported unknown sets are {a, m_s} and {a, m_s, g_m}");
}

Cplx mu_of(const Cplx& a, int branch) {
  return 0.5 * (1.0 + static_cast<double>(branch) * std::sqrt(1.0 - 8.0 * a * a));
}

OdeSpec build_spec(const Cplx& a, const Cplx& m_s, const Cplx& r_minus, int branch, int n) {
  const Cplx mu = mu_of(a, branch);
  OdeSpec spec;
  spec.n = n;
  spec.a[3] = Cplx(1, 0);
  spec.a[2] = -(1.0 + r_minus);
  spec.a[1] = r_minus;
  spec.b[3] = -2.0 * m_s;
  spec.b[2] = 2.0 * mu + 2.0 + 2.0 * m_s * (1.0 + r_minus);
  spec.b[1] = -(2.0 * mu + 1.0) * (1.0 + r_minus) - 2.0 * m_s * r_minus;
  spec.b[0] = 2.0 * mu * r_minus;
  return spec;
}

// Required quadratic-coefficient values from the matter parameters.
struct RequiredC {
  Cplx c2, c1, c0;
};

RequiredC required_coeffs(const Cplx& a, const Cplx& m_s, const Cplx& g_m, const Cplx& r_minus,
                          int branch) {
  const Cplx mu = mu_of(a, branch);
  const Cplx a2 = a * a;
  const Cplx ms2 = m_s * m_s;
  const Cplx gm2 = g_m * g_m;
  RequiredC rc;
  rc.c2 = 2.0 * a2 * (1.0 + 1.0 / r_minus) - 2.0 * m_s * (mu + 1.0) +
          (gm2 * (a2 + ms2 * r_minus) - ms2 * (1.0 + r_minus * r_minus) + 2.0 * a2 / r_minus) /
              (1.0 - r_minus);
  rc.c1 = (m_s * (2.0 * mu + 1.0) + mu) * (r_minus + 1.0) -
          2.0 * a2 * (r_minus + 1.0) * (r_minus + 1.0) / r_minus -
          (gm2 * (a2 + ms2) * r_minus - ms2 * (1.0 + r_minus * r_minus) * r_minus +
           2.0 * a2 / r_minus) /
              (1.0 - r_minus);
  rc.c0 = 2.0 * a2 + 2.0 * (a2 - mu * (m_s + 1.0)) * r_minus;
  return rc;
}

}  // namespace

RNReport rn_solve(const RNParams& p, const SolverConfig& cfg) {
  if (!(p.r_minus > 0.0 && p.r_minus < 1.0)) {
    throw std::invalid_argument("rn_solve: inner horizon must lie in (0, 1)");
  }
  if (p.mu_branch != 1 && p.mu_branch != -1) {
    throw std::invalid_argument("rn_solve: exponent branch must be +1 or -1");
  }
  if (p.n < 0) throw std::invalid_argument("rn_solve: negative degree");
  const RNMode mode = classify_unknowns(p.unknowns);
  const int branch = p.mu_branch;
  const int n = p.n;
  const double r_minus_given = p.r_minus;

  AugmentedSystem sys;
  sys.n = n;
  if (!mode.g_m_unknown) {
    sys.param_names = {"a", "m_s"};
    sys.param_boxes = {ParamBox{-0.3, 0.3, 0.0, 0.0}, ParamBox{-0.5, 0.5, 0.0, 0.0}};
    sys.param_real = {true, true};
  } else {
    sys.param_names = {"a", "m_s", "g_m"};
    sys.param_boxes = {ParamBox{-0.3, 0.3, 0.0, 0.0}, ParamBox{-0.5, 0.5, 0.0, 0.0},
                       ParamBox{0.1, 1.2, 0.0, 0.0}};
    sys.param_real = {true, true, true};
  }

  auto r_minus_of = [mode, r_minus_given](const std::vector<Cplx>& params) -> Cplx {
    if (mode.g_m_unknown) return params.at(2) * params.at(2) / 2.0;
    return Cplx(r_minus_given, 0);
  };
  auto g_m_of = [mode, r_minus_given](const std::vector<Cplx>& params) -> Cplx {
    if (mode.g_m_unknown) return params.at(2);
    return Cplx(std::sqrt(2.0 * r_minus_given), 0);
  };

  sys.spec_builder = [branch, n, r_minus_of](const std::vector<Cplx>& params) {
    return build_spec(params.at(0), params.at(1), r_minus_of(params), branch, n);
  };

  for (int which = 2; which >= 0; --which) {
    sys.constraints.push_back(
        [branch, n, which, r_minus_of, g_m_of](const std::vector<Cplx>& params,
                                               const std::vector<Cplx>& roots) -> Cplx {
          const Cplx rm = r_minus_of(params);
          const RequiredC rc = required_coeffs(params.at(0), params.at(1), g_m_of(params), rm,
                                               branch);
          const OdeSpec spec = build_spec(params.at(0), params.at(1), rm, branch, n);
          RootConfig config{roots};
          if (which == 2) return rc.c2 - coeff_c2(spec);
          if (which == 1) return rc.c1 - coeff_c1(spec, config);
          return rc.c0 - coeff_c0(spec, config);
        });
  }

  RNReport report;
  report.mu_branch = branch;

  std::vector<AugmentedSolution> raw = solve_augmented(sys, cfg);
  for (AugmentedSolution& s : raw) {
    bool all_real = true;
    for (const Cplx& v : s.params) all_real = all_real && is_effectively_real(v);
    if (!all_real) {
      ++report.discarded_nonreal_params;
      continue;
    }
    RNSolution sol;
    sol.a = s.params.at(0).real();
    sol.m_s = s.params.at(1).real();
    sol.g_m = g_m_of(s.params).real();
    sol.mu = mu_of(s.params.at(0), branch);
    sol.roots = s.solution.config.roots;
    // The residual depends on a only through mu ~ 2a^2 near zero, so a
    // itself is resolvable only to ~sqrt(tolerance); flag the constant
    // profile on the exponent mu and the linearly-resolved m_s instead.
    sol.trivial_profile =
        std::abs(sol.mu) <= 1e-8 && std::abs(sol.a) <= 1e-4 && std::abs(sol.m_s) <= 1e-6;

    const OdeSpec spec = s.realized_spec;
    const ComplexPoly x = spec.X();
    const ComplexPoly y = spec.Y();
    const ComplexPoly xd = x.derivative();
    const Cplx rm = r_minus_of(s.params);
    for (const Cplx& pole : {Cplx(0, 0), Cplx(1, 0), rm}) {
      sol.profile_exponents.emplace_back(pole, y.eval(pole) / xd.eval(pole));
    }
    sol.inner = std::move(s);
    report.solutions.push_back(std::move(sol));
  }

  if (report.solutions.empty()) {
    report.diagnostic =
        "no certified solution on this exponent branch: the least-squares floor "
        "of the identification relations stayed above tolerance";
  }
  return report;
}

}  // namespace qes
