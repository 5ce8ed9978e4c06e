#pragma once

#include <array>
#include <optional>
#include <variant>
#include <vector>

#include "qes/ode_spec.hpp"

namespace qes {

// The five canonical shapes of the operator, classified by the degree of X
// and the polynomial part of the drift Y/X.  In every shape X is the monic
// product of its pole factors.

// deg X = 3, drift is purely simple poles:
//   Y/X = sum_s alpha_s / (z - d_s)        (the Heun equation)
struct HeunForm {
  std::array<Cplx, 3> d{};      // pole locations
  std::array<Cplx, 3> alpha{};  // exponents
};

// deg X = 4, four simple poles:
//   Y/X = sum_s mu_s / (z - e_s)
struct GHeun1Form {
  std::array<Cplx, 4> e{};
  std::array<Cplx, 4> mu{};
};

// deg X = 3 with a constant drift term besides the poles:
//   Y/X = nu + sum_s nu_s / (z - f_s)
struct GHeun2Form {
  std::array<Cplx, 3> f{};
  std::array<Cplx, 3> nu_s{};
  Cplx nu{};
};

// deg X = 2 with a linear drift part:
//   Y/X = sigma z + kappa + sigma1/(z - g1) + sigma2/(z - g2)
struct GHeun3Form {
  Cplx g1{}, g2{};
  Cplx sigma1{}, sigma2{};
  Cplx sigma{}, kappa{};
};

// deg X = 1 with a quadratic drift part:
//   Y/X = lambda z^2 + gamma z + delta + eta/(z - h)
struct GHeun4Form {
  Cplx h{};
  Cplx eta{};
  Cplx lambda{}, gamma{}, delta{};
};

using AnyForm = std::variant<HeunForm, GHeun1Form, GHeun2Form, GHeun3Form, GHeun4Form>;

// Expands the form into raw polynomial coefficients with X monic.
// Throws std::invalid_argument when poles coincide.
OdeSpec to_spec(const HeunForm& form, int n);
OdeSpec to_spec(const GHeun1Form& form, int n);
OdeSpec to_spec(const GHeun2Form& form, int n);
OdeSpec to_spec(const GHeun3Form& form, int n);
OdeSpec to_spec(const GHeun4Form& form, int n);
OdeSpec to_spec(const AnyForm& form, int n);

// Classifies a raw spec into one of the five shapes.  Poles come from the
// roots of X (required simple within 1e-8 separation), exponents from the
// residues Y(d)/X'(d), and the polynomial drift part from the division
// quotient of Y by X.  A cubic X with negligible drift constant is the
// plain Heun shape; otherwise the constant-drift shape.  Poles are sorted
// canonically.  Throws std::invalid_argument for deg X outside 1..4 or
// near-coincident poles.
AnyForm from_spec(const OdeSpec& spec);

// Specialized closed-form Z coefficients for each shape, written in the
// shape's own parameters.  c2 is absent for the Heun shape (identically
// zero there, so the quadratic term never appears).
struct AppendixCoeffs {
  std::optional<Cplx> c2;
  Cplx c1{};
  Cplx c0{};
};

AppendixCoeffs appendix_coeffs(const HeunForm& form, int n, const std::vector<Cplx>& roots);
AppendixCoeffs appendix_coeffs(const GHeun1Form& form, int n, const std::vector<Cplx>& roots);
AppendixCoeffs appendix_coeffs(const GHeun2Form& form, int n, const std::vector<Cplx>& roots);
AppendixCoeffs appendix_coeffs(const GHeun3Form& form, int n, const std::vector<Cplx>& roots);
AppendixCoeffs appendix_coeffs(const GHeun4Form& form, int n, const std::vector<Cplx>& roots);
AppendixCoeffs appendix_coeffs(const AnyForm& form, int n, const std::vector<Cplx>& roots);

// Exponent bookkeeping at infinity for the Heun shape: a degree-n
// polynomial solution pins the exponent pair to alpha = -n and
// beta = sum alpha_s + n - 1, and the residual of
// alpha + beta + 1 - sum alpha_s is identically zero.
struct FuchsianResult {
  Cplx alpha_param{};
  Cplx beta_param{};
  double residual = 0.0;
};

FuchsianResult fuchsian_check(const HeunForm& form, int n);

// Max modulus over i of the pole-form balance equation
//   sum_{j != i} 2/(z_i - z_j) + Y(z_i)/X(z_i) = 0
// written in the shape's own partial-fraction terms.  Finite only when no
// root sits on a pole.
double pole_form_bae_residual(const AnyForm& form, const std::vector<Cplx>& roots);

}  // namespace qes
