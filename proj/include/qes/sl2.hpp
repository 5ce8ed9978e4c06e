#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qes/ode_spec.hpp"

namespace qes {

// The operator
//   H = a4 J+J+ + a3 J+J0 + a2 J0J0 + a1 J0J- + a0 J-J-
//       + [ (3n-2)/2 * a3 + b2 ] J+ + [ (n-1) a2 + b1 ] J0
//       + [ n/2 * a1 + b0 ] J- - n^2/4 * a2 + n/2 * [ (n-1) a2 + b1 ]
// in the monomial basis {1, z, ..., z^n}, using the degree-n realization
//   J+ = z^2 d/dz - n z,   J0 = z d/dz - n/2,   J- = d/dz.
// Exists exactly when b3 = -2(n-1) a4 (the algebraic-dependence condition);
// then H preserves polynomials of degree <= n and its n+1 eigenvalues are
// the values of -c0 over the degree-n polynomial solutions.
struct Sl2Matrix {
  Eigen::MatrixXcd entries;  // (n+1) x (n+1)
  int n = 0;
};

// True when b3 = -2(n-1) a4 within 1e-12 relative to the coefficient scale.
bool sl2_dependence_holds(const OdeSpec& spec, double rel_tol = 1e-12);

// Builds H column-by-column by symbolically applying the operator to each
// basis monomial with polynomial arithmetic (no hand-coded entry formulas).
// Throws std::invalid_argument when the dependence condition fails.
Sl2Matrix build_sl2_matrix(const OdeSpec& spec);

// All n+1 eigenvalues of H, sorted lexicographically by (Re, Im).
std::vector<Cplx> sl2_spectrum(const Sl2Matrix& m);

// Applies H to an arbitrary polynomial of degree <= n (used both by the
// matrix construction and by the degree-preservation property test).
ComplexPoly sl2_apply(const OdeSpec& spec, const ComplexPoly& p);

}  // namespace qes
