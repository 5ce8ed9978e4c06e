#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qes/apps.hpp"

namespace qes {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Real root of t^3 + p t + q = 0: principal Cardano branch with real cube
// roots when the discriminant is nonnegative, trigonometric k=0 branch when
// all three roots are real.
double cardano_real(double p, double q) {
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return std::cbrt(-q / 2.0 + s) + std::cbrt(-q / 2.0 - s);
  }
  const double amp = 2.0 * std::sqrt(-p / 3.0);
  const double arg = 3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p);
  const double theta = std::acos(std::clamp(arg, -1.0, 1.0));
  return amp * std::cos(theta / 3.0);
}

// z1 for the one-root level: the unique (on the reference grids) real root of
//   z^3 + (lambda4/2) z^2 + (A/2) z - (N + 2l)/(2 sqrt2) = 0.
double z1_of(double lambda4, double A, int bigN, int l) {
  const double ac = lambda4 / 2.0;
  const double bc = A / 2.0;
  const double cc = -(bigN + 2.0 * l) / (2.0 * kSqrt2);
  const double u = bc - ac * ac / 3.0;
  const double v = 2.0 * ac * ac * ac / 27.0 - ac * bc / 3.0 + cc;
  return cardano_real(u, v) - lambda4 / 6.0;
}

}  // namespace

DecaticN0Reference decatic_n0_reference(double lambda1, double lambda2, int bigN, int l) {
  const double M = bigN + 2.0 * l + 2.0;
  const double K = bigN + 2.0 * l + 4.0 + kSqrt2 * lambda2;
  const double shift = 2.0 * kSqrt2 * lambda1 / (3.0 * M);
  const double p = -8.0 * lambda1 * lambda1 / (3.0 * M * M);
  const double q = 32.0 * kSqrt2 * lambda1 * lambda1 * lambda1 / (27.0 * M * M * M) -
                   kSqrt2 * K * K / M;
  DecaticN0Reference ref;
  ref.lambda4 = cardano_real(p, q) - shift;
  ref.lambda3 = ref.lambda4 * ref.lambda4 / 4.0 + kSqrt2 * K / ref.lambda4;
  const double A = ref.lambda3 - ref.lambda4 * ref.lambda4 / 4.0;
  ref.E = A * (bigN + 2.0 * l) / (2.0 * kSqrt2);
  return ref;
}

DecaticN1Reference decatic_n1_reference(double lambda1, double lambda2, int bigN, int l) {
  const double K1 = bigN + 2.0 * l + 8.0 + kSqrt2 * lambda2;
  auto g = [&](double lambda4) {
    const double A = kSqrt2 * K1 / lambda4;
    const double z1 = z1_of(lambda4, A, bigN, l);
    return 0.5 * A * A - lambda4 * (bigN + 2.0 * l + 6.0) / kSqrt2 - 2.0 * lambda1 -
           4.0 * kSqrt2 * z1;
  };

  // Geometric scan for sign changes, then bisection.
  const int grid = 160;
  const double lo = 0.05, hi = 30.0;
  std::vector<double> candidates;
  double prev_x = lo, prev_g = g(lo);
  for (int i = 1; i < grid; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (grid - 1));
    const double gx = g(x);
    if (std::isfinite(prev_g) && std::isfinite(gx) && prev_g * gx <= 0.0) {
      double a = prev_x, b = x, ga = prev_g;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (ga * gm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          ga = gm;
        }
      }
      candidates.push_back(0.5 * (a + b));
    }
    prev_x = x;
    prev_g = gx;
  }
  if (candidates.empty()) {
    throw std::runtime_error("decatic_n1_reference: no root bracketed on the scan range");
  }

  DecaticN1Reference ref;
  bool chosen = false;
  for (const double lambda4 : candidates) {
    const double A = kSqrt2 * K1 / lambda4;
    if (lambda4 <= 0.0 || A <= 0.0) continue;  // alpha, beta must be positive
    ref.lambda4 = lambda4;
    ref.lambda3 = A + lambda4 * lambda4 / 4.0;
    ref.z1 = z1_of(lambda4, A, bigN, l);
    ref.E = A * (bigN + 2.0 * l + 4.0) / (2.0 * kSqrt2) + kSqrt2 * lambda4 * ref.z1 +
            2.0 * kSqrt2 * ref.z1 * ref.z1;
    chosen = true;
    break;
  }
  if (!chosen) {
    throw std::runtime_error("decatic_n1_reference: no admissible root (alpha, beta > 0)");
  }
  return ref;
}

DecaticReport decatic_solve(const DecaticParams& p, const SolverConfig& cfg) {
  if (p.bigN < 1) throw std::invalid_argument("decatic_solve: N must be >= 1");
  if (p.l < 0) throw std::invalid_argument("decatic_solve: l must be >= 0");
  if (p.n < 0) throw std::invalid_argument("decatic_solve: negative degree");
  const int n = p.n;
  const double nn = n;
  const double bigN = p.bigN;
  const double l = p.l;
  const double lambda1 = p.lambda1;
  const double lambda2 = p.lambda2;

  AugmentedSystem sys;
  sys.n = n;
  sys.param_names = {"lambda3", "lambda4"};
  sys.param_boxes = {ParamBox{1.0, 12.0, 0.0, 0.0}, ParamBox{0.2, 6.0, 0.0, 0.0}};
  sys.param_real = {true, true};
  sys.spec_builder = [n, bigN, l](const std::vector<Cplx>& params) {
    const Cplx lambda3 = params.at(0), lambda4 = params.at(1);
    const Cplx alpha = (lambda3 - lambda4 * lambda4 / 4.0) / kSqrt2;
    const Cplx beta = lambda4 / kSqrt2;
    OdeSpec spec;
    spec.n = n;
    spec.a[1] = Cplx(1, 0);
    spec.b[3] = Cplx(-kSqrt2, 0);
    spec.b[2] = -beta;
    spec.b[1] = -alpha;
    spec.b[0] = Cplx(l + bigN / 2.0, 0);
    return spec;
  };
  sys.constraints.push_back(
      [nn, bigN, l, lambda2](const std::vector<Cplx>& params, const std::vector<Cplx>&) -> Cplx {
        const Cplx lambda3 = params.at(0), lambda4 = params.at(1);
        const Cplx alpha = (lambda3 - lambda4 * lambda4 / 4.0) / kSqrt2;
        const Cplx beta = lambda4 / kSqrt2;
        return 2.0 * alpha * beta - kSqrt2 * (bigN + 2.0 * l + 4.0) - 2.0 * lambda2 -
               4.0 * kSqrt2 * nn;
      });
  sys.constraints.push_back(
      [nn, bigN, l, lambda1](const std::vector<Cplx>& params,
                             const std::vector<Cplx>& roots) -> Cplx {
        const Cplx lambda3 = params.at(0), lambda4 = params.at(1);
        const Cplx alpha = (lambda3 - lambda4 * lambda4 / 4.0) / kSqrt2;
        const Cplx beta = lambda4 / kSqrt2;
        Cplx s1(0, 0);
        for (const Cplx& z : roots) s1 += z;
        return alpha * alpha - beta * (bigN + 2.0 * l + 2.0) - 2.0 * lambda1 -
               4.0 * kSqrt2 * s1 - 4.0 * beta * nn;
      });

  DecaticReport report;
  for (AugmentedSolution& s : solve_augmented(sys, cfg)) {
    const Cplx lambda3 = s.params.at(0), lambda4 = s.params.at(1);
    const Cplx alpha_c = (lambda3 - lambda4 * lambda4 / 4.0) / kSqrt2;
    const Cplx beta_c = lambda4 / kSqrt2;
    const bool real_ok = is_effectively_real(lambda3) && is_effectively_real(lambda4);
    if (!real_ok || alpha_c.real() <= 0.0 || beta_c.real() <= 0.0) {
      ++report.discarded_unphysical;
      continue;
    }
    DecaticSolution sol;
    sol.lambda3 = lambda3.real();
    sol.lambda4 = lambda4.real();
    sol.roots = s.solution.config.roots;
    Cplx s1(0, 0), s2(0, 0);
    for (const Cplx& z : sol.roots) {
      s1 += z;
      s2 += z * z;
    }
    const double alpha = alpha_c.real();
    const double beta = beta_c.real();
    sol.E = alpha / 2.0 * (4.0 * nn + bigN + 2.0 * l) + (2.0 * beta * s1).real() +
            (2.0 * kSqrt2 * s2).real();

    sol.wavefunction.variable = "r";
    sol.wavefunction.power_prefactor_exponent = l + 1.0;
    sol.wavefunction.exp_argument = ComplexPoly(
        {Cplx(0, 0), Cplx(0, 0), Cplx(-alpha / 2.0, 0), Cplx(0, 0), Cplx(-beta / 4.0, 0),
         Cplx(0, 0), Cplx(-kSqrt2 / 6.0, 0)});
    sol.wavefunction.poly_factor = ComplexPoly::from_roots(sol.roots);
    sol.wavefunction.poly_in_squared_variable = true;
    sol.wavefunction.note = "radial profile r^(l+1) exp(-sqrt2 r^6/6 - beta r^4/4 - alpha r^2/2) "
                            "times the polynomial factor in z = r^2";
    sol.inner = std::move(s);
    report.solutions.push_back(std::move(sol));
  }
  return report;
}

}  // namespace qes
