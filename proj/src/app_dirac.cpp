#include <cmath>
#include <stdexcept>

#include "qes/apps.hpp"

namespace qes {

namespace {

constexpr double kFineStructure = 1.0 / 137.0;

double xi_of(int l, double Z) {
  const double half = l + 0.5;
  const double za = Z * kFineStructure;
  const double rad = half * half - za * za;
  if (rad <= 0.0) {
    throw std::invalid_argument("dirac: (l + 1/2)^2 must exceed (Z alpha)^2");
  }
  return std::sqrt(rad);
}

OdeSpec build_spec(double m_e, double Z, double xi, const Cplx& E, const Cplx& eB, int n) {
  const double za = Z * kFineStructure;
  const Cplx r0 = za / (E + m_e);
  OdeSpec spec;
  spec.n = n;
  spec.a[2] = Cplx(1, 0);
  spec.a[1] = r0;
  spec.b[3] = -eB;
  spec.b[2] = -eB * r0;
  spec.b[1] = Cplx(2.0 * xi, 0);
  spec.b[0] = (2.0 * xi + 1.0) * r0;
  return spec;
}

}  // namespace

DiracClosedForm dirac_n0_closed_form(double m_e, int l, double Z) {
  DiracClosedForm cf;
  cf.xi = xi_of(l, Z);
  const double denom = (l + 1.0 + cf.xi) * (l + 1.0 + cf.xi);
  cf.eB = -m_e * m_e * (l + 0.5 + cf.xi) / denom;
  cf.E = -m_e / (2.0 * (l + 1.0 + cf.xi));
  return cf;
}

DiracReport dirac_solve(const DiracParams& p, const SolverConfig& cfg) {
  if (p.m_e <= 0.0) throw std::invalid_argument("dirac_solve: electron mass must be positive");
  if (p.n < 0) throw std::invalid_argument("dirac_solve: negative degree");
  const double xi = xi_of(p.l, p.Z);
  const double za = p.Z * kFineStructure;
  const int n = p.n;
  const double m_e = p.m_e;
  const double Z = p.Z;
  const int l = p.l;

  AugmentedSystem sys;
  sys.n = n;
  sys.param_names = {"E", "eB"};
  sys.param_boxes = {ParamBox{-1.0 * m_e, -0.01 * m_e, 0.0, 0.0},
                     ParamBox{-2.0 * m_e * m_e, -0.01 * m_e * m_e, 0.0, 0.0}};
  sys.param_real = {true, true};
  if (p.use_closed_form_start && n == 0) {
    const DiracClosedForm cf = dirac_n0_closed_form(m_e, l, Z);
    sys.param_seeds.push_back({Cplx(cf.E, 0), Cplx(cf.eB, 0)});
  }
  sys.spec_builder = [m_e, Z, xi, n](const std::vector<Cplx>& params) {
    if (std::abs(params.at(0) + m_e) < 1e-12) {
      throw std::invalid_argument("dirac: energy start too close to -m_e");
    }
    return build_spec(m_e, Z, xi, params.at(0), params.at(1), n);
  };

  // The three identification relations, in residual form.
  const double nn = n;
  sys.constraints.push_back(
      [m_e, xi, l, nn](const std::vector<Cplx>& params, const std::vector<Cplx>&) -> Cplx {
        const Cplx E = params.at(0), eB = params.at(1);
        return E * E - m_e * m_e - eB * (nn + l + xi + 1.5);
      });
  sys.constraints.push_back(
      [m_e, za](const std::vector<Cplx>& params, const std::vector<Cplx>& roots) -> Cplx {
        const Cplx E = params.at(0), eB = params.at(1);
        const Cplx r0 = za / (E + m_e);
        Cplx s1(0, 0);
        for (const Cplx& r : roots) s1 += r;
        return 2.0 * E * za - eB * (r0 + s1);
      });
  sys.constraints.push_back(
      [m_e, za, xi, l, nn](const std::vector<Cplx>& params, const std::vector<Cplx>& roots) -> Cplx {
        const Cplx E = params.at(0), eB = params.at(1);
        const Cplx r0 = za / (E + m_e);
        Cplx s1(0, 0), s2(0, 0);
        for (const Cplx& r : roots) {
          s1 += r;
          s2 += r * r;
        }
        return 2.0 * E * za * r0 + nn * (nn + 2.0 * xi - 1.0) - xi + (l + 0.5) -
               eB * (s2 + r0 * s1);
      });

  DiracReport report;
  for (AugmentedSolution& s : solve_augmented(sys, cfg)) {
    if (!is_effectively_real(s.params.at(0)) || !is_effectively_real(s.params.at(1))) {
      ++report.discarded_nonreal_params;
      continue;
    }
    DiracSolution sol;
    sol.E = s.params.at(0).real();
    sol.eB = s.params.at(1).real();
    sol.xi = xi;
    sol.r0 = za / (sol.E + m_e);
    sol.l = l;
    sol.roots = s.solution.config.roots;
    sol.inner = std::move(s);
    report.solutions.push_back(std::move(sol));
  }
  return report;
}

double dirac_G_component(const DiracSolution& sol, double m_e, double Z, double r) {
  if (r <= 0.0) throw std::invalid_argument("dirac_G_component: r must be positive");
  const double za = Z * kFineStructure;
  const double numer = sol.xi - sol.l - 0.5 + sol.eB * r * r;
  const double denom = (sol.E + m_e) * r + za;
  return numer / denom * std::pow(r, sol.xi) * std::exp(-sol.eB * r * r / 4.0);
}

}  // namespace qes
