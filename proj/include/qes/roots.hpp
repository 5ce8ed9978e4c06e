#pragma once

#include <vector>

#include "qes/complex_poly.hpp"

namespace qes {

// All complex roots of p (with multiplicity), computed as eigenvalues of the
// companion matrix of the monic normalization.  Returns an empty vector for
// constant and zero polynomials.  Roots come back sorted lexicographically
// by (Re, Im) so downstream consumers see a deterministic order.
std::vector<Cplx> companion_roots(const ComplexPoly& p);

// Lexicographic (Re, Im) comparison used for all canonical orderings.
bool lex_less(Cplx u, Cplx v);

// Sorts a set of complex numbers into the canonical lexicographic order.
void sort_canonical(std::vector<Cplx>& v);

}  // namespace qes
