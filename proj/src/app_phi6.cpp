#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qes/apps.hpp"

namespace qes {

double phi6_energy_formula(double mu, int n) {
  return mu * mu * (n - 1.0) * (5.0 - n) / 4.0;
}

Phi6Report phi6_solve(const Phi6Params& p, const SolverConfig& cfg) {
  if (p.mu <= 0.0) throw std::invalid_argument("phi6_solve: mass scale must be positive");
  if (p.n < 0) throw std::invalid_argument("phi6_solve: negative degree");
  const int n = p.n;
  const double nn = n;

  AugmentedSystem sys;
  sys.n = n;
  sys.param_names = {"inv_eps_sq"};
  sys.param_boxes = {ParamBox{-5.0, 10.0, 0.0, 0.0}};
  sys.param_real = {true};
  sys.spec_builder = [n](const std::vector<Cplx>& params) {
    const Cplx w = params.at(0);
    OdeSpec spec;
    spec.n = n;
    spec.a[4] = Cplx(1, 0);
    spec.a[2] = w - 1.0;
    spec.a[0] = -w;
    spec.b[3] = Cplx(-5, 0);
    spec.b[1] = w + 6.0;
    return spec;
  };
  // Root-sum symmetry and the parameter identification.
  sys.constraints.push_back([](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
    Cplx s(0, 0);
    for (const Cplx& z : roots) s += z;
    return s;
  });
  sys.constraints.push_back([nn](const std::vector<Cplx>& params, const std::vector<Cplx>& roots) {
    const Cplx w = params.at(0);
    Cplx s2(0, 0), pair(0, 0);
    for (const Cplx& z : roots) s2 += z * z;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      for (std::size_t j = i + 1; j < roots.size(); ++j) pair += roots[i] * roots[j];
    }
    return 6.0 * (nn - 1.0) * w - (nn - 1.0) * (nn - 6.0) - (5.0 - 2.0 * (nn - 1.0)) * s2 +
           2.0 * pair;
  });

  Phi6Report report;
  std::vector<AugmentedSolution> raw = solve_augmented(sys, cfg);

  // Drop solutions whose parameter left the real axis (physical w is real).
  std::vector<AugmentedSolution> kept;
  for (AugmentedSolution& s : raw) {
    if (is_effectively_real(s.params.at(0))) {
      kept.push_back(std::move(s));
    } else {
      ++report.discarded_nonreal_params;
    }
  }

  // A family whose parameter is unconstrained collapses to one entry per
  // distinct root set.
  std::vector<Phi6Solution> out;
  for (AugmentedSolution& s : kept) {
    const bool is_free = !free_parameter_detect(sys, s, cfg).empty();
    bool merged = false;
    if (is_free) {
      for (Phi6Solution& seen : out) {
        if (seen.inv_eps_free &&
            same_solution(seen.roots, s.solution.config.roots, cfg.sep_tol)) {
          merged = true;
          break;
        }
      }
    }
    if (merged) continue;
    Phi6Solution sol;
    sol.inv_eps_sq = s.params.at(0);
    sol.inv_eps_free = is_free;
    sol.roots = s.solution.config.roots;
    sol.E = phi6_energy_formula(p.mu, n);
    const Cplx w = s.params.at(0);
    const Cplx c0 = s.solution.c0;
    if (std::abs(w) > 1e-300) {
      sol.E_c0_check = (p.mu * p.mu * (c0 + w + 6.0) / (4.0 * w)).real();
    } else {
      sol.E_c0_check = std::numeric_limits<double>::quiet_NaN();
    }
    sol.unstable = sol.E < 0.0;
    sol.inner = std::move(s);
    out.push_back(std::move(sol));
  }
  report.solutions = std::move(out);
  return report;
}

}  // namespace qes
