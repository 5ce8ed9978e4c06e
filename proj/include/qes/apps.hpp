#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qes/augmented.hpp"
#include "qes/bethe.hpp"
#include "qes/complex_poly.hpp"
#include "qes/ode_spec.hpp"

namespace qes {

// Structured wavefunction description: prefactor variable^p, an exponential
// whose argument is a polynomial in the variable, and a polynomial factor.
// Exactness first; rendering on a grid is a separate helper.
struct WavefunctionDescriptor {
  std::string variable;
  double power_prefactor_exponent = 0.0;
  ComplexPoly exp_argument;   // argument of exp(), in the variable
  ComplexPoly poly_factor;    // the degree-n factor
  bool poly_in_squared_variable = false;  // poly argument is variable^2
  std::string note;
};

// variable^p * exp(arg(v)) * poly(v or v^2) at the given sample points.
std::vector<Cplx> evaluate_on_grid(const WavefunctionDescriptor& wf,
                                   const std::vector<double>& points);

// ---------------------------------------------------------------------------
// Two-electron atom in a harmonic confinement (atomic units).  The radial
// operator has X = z^3 - z and Y = delta z^2 - 1/gamma; the energy and the
// confinement radius come from the first-order coefficients:
//   R = -1/2 [2(n-1) + delta] sum z_i,   E = n(n + delta - 1) / (4 R^2).
struct TwoElectronParams {
  double delta = 2.0;
  double gamma = 1.0;
  int n = 1;
};

struct TwoElectronSolution {
  double E = 0.0;
  double R = 0.0;
  std::vector<Cplx> roots;
  bool discarded = false;  // R <= 0 (or non-real R): reported but tagged
  WavefunctionDescriptor wavefunction;  // polynomial factor in u = 2R z
  BetheSolution certified;
};

struct TwoElectronReport {
  std::vector<TwoElectronSolution> solutions;  // discarded branches included
  std::string diagnostic;                      // set when no R > 0 branch exists
  std::string units = "atomic units";
};

TwoElectronReport two_electron_solve(const TwoElectronParams& p, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Sextic self-interaction fluctuation modes (mass scale mu; internal
// variables mu-scaled).  X = z^4 + (w - 1) z^2 - w with w = 1/eps^2 an
// unknown determined jointly with the roots; Y = -5 z^3 + (w + 6) z.
// Constraints: sum z_i = 0 and the w identification; the eigenvalue obeys
// E = mu^2 (n-1)(5-n)/4.
struct Phi6Params {
  double mu = 1.0;
  int n = 1;
};

double phi6_energy_formula(double mu, int n);  // mu^2 (n-1)(5-n)/4

struct Phi6Solution {
  double E = 0.0;          // from the closed form
  double E_c0_check = 0.0; // independent route through the constant coefficient
  Cplx inv_eps_sq;         // w
  bool inv_eps_free = false;
  std::vector<Cplx> roots;
  bool unstable = false;   // E < 0
  AugmentedSolution inner;
};

struct Phi6Report {
  std::vector<Phi6Solution> solutions;
  int discarded_nonreal_params = 0;
  std::string units = "mu-scaled";
};

Phi6Report phi6_solve(const Phi6Params& p, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Charged scalar cloud around an extremal-charge black hole with horizons at
// r = 1 and r = r_minus (geometric units).  X = r (r - 1) (r - r_minus);
// the Y coefficients involve (a, m_s, g_m) and the exponent
// mu = (1 +/- sqrt(1 - 8 a^2)) / 2.  The identification constraints match
// the required quadratic coefficients to the computed ones.
struct RNParams {
  double r_minus = 0.25;
  // Unknown subset of {"a", "m_s", "g_m"}; when "g_m" is unknown the inner
  // horizon is slaved to it through r_minus = g_m^2 / 2.
  std::vector<std::string> unknowns{"a", "m_s"};
  int mu_branch = -1;  // sign in front of the square root
  int n = 0;
};

struct RNSolution {
  double a = 0.0, m_s = 0.0, g_m = 0.0;
  Cplx mu;
  std::vector<Cplx> roots;
  // Constant-scalar disclosure: mu ~ 0 and m_s ~ 0 at solver accuracy (a
  // enters the residual only quadratically, so it resolves to ~sqrt(tol)).
  bool trivial_profile = false;
  // Indicial exponents of the realized operator at its three poles,
  // labeled by pole location.
  std::vector<std::pair<Cplx, Cplx>> profile_exponents;
  AugmentedSolution inner;
};

struct RNReport {
  std::vector<RNSolution> solutions;
  int mu_branch = -1;
  int discarded_nonreal_params = 0;
  std::string diagnostic;
  std::string units = "geometric units, outer horizon at r = 1";
};

RNReport rn_solve(const RNParams& p, const SolverConfig& cfg);

// ---------------------------------------------------------------------------
// Relativistic electron bound in a Coulomb field with a magnetic-type
// coupling (hbar = c = 1).  X = r^2 + r0 r with r0 = Z alpha / (E + m_e),
// xi = sqrt((l + 1/2)^2 - (Z alpha)^2).  Unknowns (E, eB); three
// identification relations tie them to the roots.
struct DiracParams {
  double m_e = 1.0;
  int l = 0;
  double Z = 1.0;
  int n = 0;
  bool use_closed_form_start = true;  // include the n=0 prediction as a start
};

struct DiracClosedForm {
  double xi = 0.0;
  double eB = 0.0;
  double E = 0.0;
};

// n=0 prediction: eB = -m_e^2 (l + 1/2 + xi)/(l + 1 + xi)^2,
//                 E  = -m_e / (2 (l + 1 + xi)).
DiracClosedForm dirac_n0_closed_form(double m_e, int l, double Z);

struct DiracSolution {
  double E = 0.0;
  double eB = 0.0;
  double xi = 0.0;
  double r0 = 0.0;
  int l = 0;
  std::vector<Cplx> roots;
  AugmentedSolution inner;
};

struct DiracReport {
  std::vector<DiracSolution> solutions;
  int discarded_nonreal_params = 0;
  std::string units = "hbar = c = 1";
};

DiracReport dirac_solve(const DiracParams& p, const SolverConfig& cfg);

// Second spinor component reconstructed from a solution:
//   G(r) = (xi - l - 1/2 + eB r^2) / ((E + m_e) r + Z alpha)
//          * r^xi * exp(-eB r^2 / 4).
double dirac_G_component(const DiracSolution& sol, double m_e, double Z, double r);

// ---------------------------------------------------------------------------
// Decatic (degree-ten) radial oscillator: couplings lambda1, lambda2 given,
// lambda3, lambda4 determined.  Derived alpha = (lambda3 - lambda4^2/4)/sqrt2,
// beta = lambda4/sqrt2, gamma = sqrt2; operator X = z, Y with
// b3 = -gamma, b2 = -beta, b1 = -alpha, b0 = l + N/2 in z = r^2.
struct DecaticParams {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int bigN = 3;
  int l = 0;
  int n = 0;
};

struct DecaticSolution {
  double E = 0.0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  std::vector<Cplx> roots;  // in z = r^2
  WavefunctionDescriptor wavefunction;
  AugmentedSolution inner;
};

struct DecaticReport {
  std::vector<DecaticSolution> solutions;
  int discarded_unphysical = 0;  // alpha or beta not positive
  std::string units = "oscillator units";
};

DecaticReport decatic_solve(const DecaticParams& p, const SolverConfig& cfg);

// Independent closed-form evaluators (no Newton iteration involved).
struct DecaticN0Reference {
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double E = 0.0;
};
DecaticN0Reference decatic_n0_reference(double lambda1, double lambda2, int bigN, int l);

struct DecaticN1Reference {
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  double z1 = 0.0;
  double E = 0.0;
};
DecaticN1Reference decatic_n1_reference(double lambda1, double lambda2, int bigN, int l);

}  // namespace qes
