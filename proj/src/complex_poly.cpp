#include "qes/complex_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qes {

bool is_effectively_real(Cplx v) {
  return std::abs(v.imag()) <= 1e-9 * (1.0 + std::abs(v.real()));
}

namespace {

void check_finite(const std::vector<Cplx>& c) {
  for (const Cplx& x : c) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
      throw std::invalid_argument("ComplexPoly: non-finite coefficient");
    }
  }
}

std::vector<Cplx> normalized(std::vector<Cplx> c) {
  double mx = 0.0;
  for (const Cplx& x : c) mx = std::max(mx, std::abs(x));
  if (mx == 0.0) return {};
  const double cut = 1e-14 * mx;
  std::size_t len = c.size();
  while (len > 0 && std::abs(c[len - 1]) <= cut) --len;
  c.resize(len);
  return c;
}

}  // namespace

ComplexPoly::ComplexPoly(std::vector<Cplx> coeffs) {
  check_finite(coeffs);
  c_ = normalized(std::move(coeffs));
}

ComplexPoly ComplexPoly::constant(Cplx c) { return ComplexPoly({c}); }

ComplexPoly ComplexPoly::from_roots(const std::vector<Cplx>& roots) {
  std::vector<Cplx> c{Cplx(1.0, 0.0)};
  for (const Cplx& r : roots) {
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) {
      throw std::invalid_argument("from_roots: non-finite root");
    }
    // Multiply by (z - r) in place.
    c.push_back(Cplx(0.0, 0.0));
    for (std::size_t k = c.size() - 1; k > 0; --k) {
      c[k] = c[k - 1] - r * c[k];
    }
    c[0] = -r * c[0];
  }
  // No normalization threshold is applied here: the product is monic by
  // construction and every coefficient is wanted, including exact zeros.
  ComplexPoly p;
  p.c_ = std::move(c);
  return p;
}

Cplx ComplexPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Cplx(0.0, 0.0);
  return c_[static_cast<std::size_t>(k)];
}

Cplx ComplexPoly::eval(Cplx z) const {
  Cplx acc(0.0, 0.0);
  for (std::size_t i = c_.size(); i > 0; --i) {
    acc = acc * z + c_[i - 1];
  }
  return acc;
}

ComplexPoly ComplexPoly::derivative() const {
  if (c_.size() <= 1) return ComplexPoly();
  std::vector<Cplx> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) {
    d[k - 1] = static_cast<double>(k) * c_[k];
  }
  ComplexPoly p;
  p.c_ = std::move(d);  // exact: differentiation cannot create trailing junk
  return p;
}

double ComplexPoly::max_abs_coeff() const {
  double mx = 0.0;
  for (const Cplx& x : c_) mx = std::max(mx, std::abs(x));
  return mx;
}

ComplexPoly add(const ComplexPoly& p, const ComplexPoly& q) {
  const auto& a = p.coeffs();
  const auto& b = q.coeffs();
  std::vector<Cplx> c(std::max(a.size(), b.size()), Cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
  return ComplexPoly(std::move(c));
}

ComplexPoly mul(const ComplexPoly& p, const ComplexPoly& q) {
  if (p.is_zero() || q.is_zero()) return ComplexPoly();
  const auto& a = p.coeffs();
  const auto& b = q.coeffs();
  std::vector<Cplx> c(a.size() + b.size() - 1, Cplx(0.0, 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      c[i + j] += a[i] * b[j];
    }
  }
  return ComplexPoly(std::move(c));
}

ComplexPoly scale(const ComplexPoly& p, Cplx s) {
  std::vector<Cplx> c = p.coeffs();
  for (Cplx& x : c) x *= s;
  return ComplexPoly(std::move(c));
}

}  // namespace qes
