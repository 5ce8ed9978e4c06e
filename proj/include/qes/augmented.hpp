#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qes/bethe.hpp"
#include "qes/ode_spec.hpp"

namespace qes {

// Rectangular start region for one unknown parameter.  Real-constrained
// parameters collapse the imaginary range.
struct ParamBox {
  double re_lo = -1.0, re_hi = 1.0;
  double im_lo = 0.0, im_hi = 0.0;
};

// A Bethe system extended with unknown scalar parameters that enter the
// operator coefficients, plus identification constraints tying the computed
// Z coefficients (or other derived quantities) to required values.  The
// stacked system is
//   [ cleared balance equations (n)  ;  constraints (#constraints) ]
// over unknowns (parameters, roots).  When equations outnumber unknowns the
// system is solved in the least-squares sense and a solution is only
// exposed if the residual still certifies.
struct AugmentedSystem {
  std::vector<std::string> param_names;
  std::vector<ParamBox> param_boxes;
  std::vector<bool> param_real;  // start on the real axis when true
  // Optional full parameter vectors tried verbatim before random draws
  // (closed-form predictions, continuation points).
  std::vector<std::vector<Cplx>> param_seeds;
  std::function<OdeSpec(const std::vector<Cplx>&)> spec_builder;
  std::vector<std::function<Cplx(const std::vector<Cplx>&, const std::vector<Cplx>&)>> constraints;
  int n = 0;
};

struct AugmentedSolution {
  std::vector<std::string> param_names;
  std::vector<Cplx> params;
  BetheSolution solution;
  OdeSpec realized_spec;
  double constraint_residual = 0.0;  // max |constraint| / max(1, coeff scale)
  double stationarity = 0.0;         // |J^H r| at the accepted point
};

// Normalized worst-case residual of the stacked system at a given point:
// balance equations divided by their polynomial scale, constraints by the
// realized coefficient scale.
double augmented_residual_max(const AugmentedSystem& sys, const std::vector<Cplx>& params,
                              const std::vector<Cplx>& roots);

// Multistart Gauss-Newton on the stacked residual.  Parameter starts come
// from the seeds and boxes, root starts from a disk sized by the realized
// X roots.  Converged points pass the separation/pole guards, certify
// through certify_ode on the realized spec, are deduplicated, and are
// returned in a deterministic order for a fixed seed.  With zero
// parameters and zero constraints this reduces exactly to solve_all.
std::vector<AugmentedSolution> solve_augmented(const AugmentedSystem& sys, const SolverConfig& cfg);

// Names of parameters whose perturbation by +/-1e-6 leaves the stacked
// residual within cert_tol — the "no constraint on this parameter" report.
std::vector<std::string> free_parameter_detect(const AugmentedSystem& sys,
                                               const AugmentedSolution& sol,
                                               const SolverConfig& cfg);

}  // namespace qes
