#pragma once

#include <vector>

#include "qes/ode_spec.hpp"

namespace qes {

// Brute-force verification oracle for small n.  Works directly on
// coefficient vectors: write S(z) = z^n + s_{n-1} z^{n-1} + ... + s_0 and
// require every coefficient of T = X S'' + Y S' + Z S to vanish.  The
// z^{n+2} coefficient forces c2 = -n(n-1) a4 - n b3; the remaining n+2
// coefficient equations (z^0 ... z^{n+1}) are solved for the unknowns
// (s_0..s_{n-1}, c1, c0) by a multistart Newton iteration with a
// finite-difference Jacobian.  Residual assembly and the Newton loop are
// deliberately independent of the root-based solver so the two pipelines
// share no code paths that could hide a common bug.
struct CoeffOracleSolution {
  std::vector<Cplx> s;      // s_0 .. s_{n-1} of the monic S
  Cplx c2{}, c1{}, c0{};
  std::vector<Cplx> roots;  // roots of S, canonical order
};

// Requires n <= 4 (desk-scale oracle).  Returns the deduplicated solution
// set; empty when no start converges.
std::vector<CoeffOracleSolution> coeff_system_solve(const OdeSpec& spec,
                                                    const SolverConfig& cfg);

// The T-coefficient residual vector (z^0 ... z^{n+1}) at a given unknown
// vector u = (s_0..s_{n-1}, c1, c0); exposed for the forced-c2 and identity
// tests.
std::vector<Cplx> coeff_system_residual(const OdeSpec& spec, const std::vector<Cplx>& u);

}  // namespace qes
