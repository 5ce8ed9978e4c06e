#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "qes/ode_spec.hpp"

namespace qes {

// A root configuration of S(z) = prod (z - z_i), kept in the canonical
// lexicographic order by (Re, Im).
struct RootConfig {
  std::vector<Cplx> roots;
};

struct BetheSolution {
  RootConfig config;
  Cplx c2{}, c1{}, c0{};
  double bae_residual = 0.0;  // max |cleared residual|, normalized
  double ode_residual = 0.0;  // max |coeff of X S'' + Y S' + Z S|, normalized
  bool certified = false;
};

// Metadata-carrying result of a full multistart run.
struct SolveReport {
  std::vector<BetheSolution> solutions;
  bool x_has_multiple_roots = false;  // X carries a (near-)multiple root
  int starts_attempted = 0;
  int starts_converged = 0;
};

// Coefficients of Z(z) = c2 z^2 + c1 z + c0 for a degree-n solution:
//   c2 = -n(n-1) a4 - n b3
//   c1 = -[2(n-1) a4 + b3] * sum z_i - n(n-1) a3 - n b2
//   c0 = -[2(n-1) a4 + b3] * sum z_i^2 - 2 a4 * sum_{i<j} z_i z_j
//        - [2(n-1) a3 + b2] * sum z_i - n(n-1) a2 - n b1
Cplx coeff_c2(const OdeSpec& spec);
Cplx coeff_c1(const OdeSpec& spec, const RootConfig& config);
Cplx coeff_c0(const OdeSpec& spec, const RootConfig& config);

// Pole-cleared residual of the Bethe ansatz equations:
//   F_i = 2 X(z_i) sum_{j != i} prod_{k != i,j} (z_i - z_k)
//         + Y(z_i) prod_{j != i} (z_i - z_j).
// This is the rational balance equation multiplied through by
// X(z_i) prod_{j != i}(z_i - z_j), so it is polynomial in the roots.  The
// rational form decays as |z| grows, which lets Newton iterates drift to
// fake zeros at infinity; the cleared form has no such basins, at the cost
// of spurious zeros at root collisions and zeros of X that the guards and
// certification reject afterwards.
std::vector<Cplx> bae_residual_cleared(const OdeSpec& spec, const std::vector<Cplx>& roots);

// Analytic Jacobian dF_i/dz_j of the cleared residual.
Eigen::MatrixXcd bae_jacobian(const OdeSpec& spec, const std::vector<Cplx>& roots);

// Normalization scale for the cleared residual: the coefficient magnitude
// times the root-magnitude growth of the degree-(n+2) products.
double bae_scale(const OdeSpec& spec, const std::vector<Cplx>& roots);

// Builds S from the solution's roots and Z from its (c2, c1, c0), forms
// T = X S'' + Y S' + Z S, and returns max |coeff(T)| / scale with
// scale = max(1, largest input-coefficient magnitude * n!).  A certified
// solution requires the return value <= cert_tol.
double certify_ode(const OdeSpec& spec, const BetheSolution& sol);

// Residuals |LHS - RHS| of the four pairwise-sum identities that any
// finite point set satisfies:
//   sum_i sum_{j!=i} 1/(z_i - z_j)       = 0
//   sum_i sum_{j!=i} z_i/(z_i - z_j)     = n(n-1)/2
//   sum_i sum_{j!=i} z_i^2/(z_i - z_j)   = (n-1) sum z_i
//   sum_i sum_{j!=i} z_i^3/(z_i - z_j)   = (n-1) sum z_i^2 + sum_{i<j} z_i z_j
std::array<double, 4> symmetric_identity_suite(const std::vector<Cplx>& points);

// Multistart damped Newton on the cleared residual.  Converged
// configurations are filtered by the separation and pole guards, certified
// by certify_ode, deduplicated up to root permutation, and returned sorted
// by (Re c0, Im c0, Re c1, Im c1, Re c2, Im c2).  Deterministic for a fixed
// seed; QES_THREADS only changes how starts are scheduled, not the result.
std::vector<BetheSolution> solve_all(const OdeSpec& spec, const SolverConfig& cfg);
SolveReport solve_all_report(const OdeSpec& spec, const SolverConfig& cfg);

// True when two solutions' root sets match greedily within 10 * sep_tol.
bool same_solution(const std::vector<Cplx>& u, const std::vector<Cplx>& v, double sep_tol);

}  // namespace qes
