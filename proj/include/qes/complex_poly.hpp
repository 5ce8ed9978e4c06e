#pragma once

#include <complex>
#include <vector>

namespace qes {

using Cplx = std::complex<double>;

// Post-hoc reality test for quantities computed in complex arithmetic:
// a value counts as real when |Im| <= 1e-9 * (1 + |Re|).
bool is_effectively_real(Cplx v);

// Dense univariate polynomial over complex doubles.  Index k of the
// coefficient sequence is the coefficient of z^k.  Instances are
// value-semantic and immutable after construction, so they can be shared
// freely across threads.  The zero polynomial is canonically represented
// by an empty coefficient sequence (degree() == -1).
class ComplexPoly {
public:
  ComplexPoly() = default;

  // Normalizes on construction: trailing coefficients with
  // |c| <= 1e-14 * max|coeff| are dropped so cancellation noise cannot
  // inflate the degree.  Throws std::invalid_argument on NaN/Inf input.
  explicit ComplexPoly(std::vector<Cplx> coeffs);

  static ComplexPoly constant(Cplx c);

  // Monic polynomial prod_i (z - r_i); the empty product is the constant 1.
  static ComplexPoly from_roots(const std::vector<Cplx>& roots);

  const std::vector<Cplx>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  // Coefficient of z^k; zero outside the stored range.
  Cplx coeff(int k) const;

  // Horner evaluation.
  Cplx eval(Cplx z) const;

  ComplexPoly derivative() const;

  double max_abs_coeff() const;

private:
  std::vector<Cplx> c_;
};

ComplexPoly add(const ComplexPoly& p, const ComplexPoly& q);
ComplexPoly mul(const ComplexPoly& p, const ComplexPoly& q);
ComplexPoly scale(const ComplexPoly& p, Cplx s);

inline ComplexPoly operator+(const ComplexPoly& p, const ComplexPoly& q) { return add(p, q); }
inline ComplexPoly operator*(const ComplexPoly& p, const ComplexPoly& q) { return mul(p, q); }
inline ComplexPoly operator*(Cplx s, const ComplexPoly& p) { return scale(p, s); }

}  // namespace qes
