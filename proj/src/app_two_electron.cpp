#include <cmath>
#include <limits>
#include <stdexcept>

#include "qes/apps.hpp"

namespace qes {

std::vector<Cplx> evaluate_on_grid(const WavefunctionDescriptor& wf,
                                   const std::vector<double>& points) {
  std::vector<Cplx> out;
  out.reserve(points.size());
  for (const double v : points) {
    const Cplx pref = std::pow(Cplx(v, 0), Cplx(wf.power_prefactor_exponent, 0));
    const Cplx expo = std::exp(wf.exp_argument.eval(Cplx(v, 0)));
    const double arg = wf.poly_in_squared_variable ? v * v : v;
    const Cplx poly = wf.poly_factor.is_zero() ? Cplx(1, 0) : wf.poly_factor.eval(Cplx(arg, 0));
    out.push_back(pref * expo * poly);
  }
  return out;
}

TwoElectronReport two_electron_solve(const TwoElectronParams& p, const SolverConfig& cfg) {
  if (p.gamma == 0.0) throw std::invalid_argument("two_electron_solve: gamma must be nonzero");
  if (p.n < 0) throw std::invalid_argument("two_electron_solve: negative degree");

  OdeSpec spec;
  spec.n = p.n;
  spec.a[3] = Cplx(1, 0);
  spec.a[1] = Cplx(-1, 0);
  spec.b[2] = Cplx(p.delta, 0);
  spec.b[0] = Cplx(-1.0 / p.gamma, 0);

  TwoElectronReport report;
  const double nn = p.n;
  for (BetheSolution& bs : solve_all(spec, cfg)) {
    TwoElectronSolution sol;
    sol.roots = bs.config.roots;
    Cplx sum(0, 0);
    double max_root = 0.0;
    for (const Cplx& z : sol.roots) {
      sum += z;
      max_root = std::max(max_root, std::abs(z));
    }
    const Cplx radius = -0.5 * (2.0 * (nn - 1.0) + p.delta) * sum;
    const bool real_radius = is_effectively_real(radius);
    sol.R = radius.real();
    // A radius at roundoff scale (the symmetric branch has sum z = 0 exactly)
    // cannot define a confinement length; treat it as nonpositive.
    const double r_floor = 1e-8 * (1.0 + 0.5 * (2.0 * (nn - 1.0) + p.delta) * max_root);
    sol.discarded = !real_radius || sol.R <= r_floor;
    if (real_radius && std::abs(sol.R) > r_floor) {
      sol.E = nn * (nn + p.delta - 1.0) / (4.0 * sol.R * sol.R);
    } else {
      sol.E = std::numeric_limits<double>::quiet_NaN();
    }

    // Polynomial factor in the radial variable u = 2 R z.
    std::vector<Cplx> u_roots;
    for (const Cplx& z : sol.roots) u_roots.push_back(2.0 * sol.R * z);
    sol.wavefunction.variable = "u";
    sol.wavefunction.poly_factor = ComplexPoly::from_roots(u_roots);
    sol.wavefunction.note =
        "monic polynomial factor in u = 2 R z; the bound-state exponential "
        "prefactor multiplies it";
    sol.certified = std::move(bs);
    report.solutions.push_back(std::move(sol));
  }

  bool any_selected = false;
  for (const TwoElectronSolution& s : report.solutions) {
    if (!s.discarded) any_selected = true;
  }
  if (!any_selected) {
    report.diagnostic = "no branch with positive real confinement radius R";
  }
  return report;
}

}  // namespace qes
