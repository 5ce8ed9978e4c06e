#include "qes/roots.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>

namespace qes {

bool lex_less(Cplx u, Cplx v) {
  if (u.real() != v.real()) return u.real() < v.real();
  return u.imag() < v.imag();
}

void sort_canonical(std::vector<Cplx>& v) {
  std::sort(v.begin(), v.end(), lex_less);
}

std::vector<Cplx> companion_roots(const ComplexPoly& p) {
  const int d = p.degree();
  if (d <= 0) return {};
  if (d == 1) {
    std::vector<Cplx> r{-p.coeff(0) / p.coeff(1)};
    return r;
  }
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
  const Cplx lead = p.coeff(d);
  for (int k = 0; k < d; ++k) {
    C(k, d - 1) = -p.coeff(k) / lead;
    if (k > 0) C(k, k - 1) = Cplx(1.0, 0.0);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, /*computeEigenvectors=*/false);
  std::vector<Cplx> roots(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) roots[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
  sort_canonical(roots);
  return roots;
}

}  // namespace qes
