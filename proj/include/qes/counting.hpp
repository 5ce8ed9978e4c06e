#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qes/bethe.hpp"
#include "qes/ode_spec.hpp"

namespace qes {

// binom(n, k) for small arguments.
long long binom(int n, int k);

// One empirical root-count experiment: random generic operators of the
// requested pole degree, exhaustive multistart enumeration with an
// escalating restart budget, and the predicted count binom(n+degX-2, n)
// (or n+1 in the algebraically dependent regime b3 = -2(n-1) a4).
struct CountReport {
  std::string family;  // "heun" (deg X = 3) or "gheun1" (deg X = 4)
  int n = 0;
  int deg_x = 0;
  bool dependent = false;
  int expected = 0;
  int found = 0;  // minimum across trials
  std::vector<int> per_trial_found;
  int restarts_used = 0;  // budget after escalation, last trial
  std::vector<double> residuals;  // certification residuals, all trials
  std::vector<OdeSpec> specs;     // the operators actually drawn
};

// Shortfalls are reported, never thrown; the caller decides what counts as
// failure.  Coefficients are redrawn until they are generic: leading
// coefficients bounded away from zero, X with well-separated roots, and
// |2(n-1) a4 + b3| > 1e-3 * scale unless the dependent regime is requested.
CountReport run_count(const std::string& family, int n, int trials, const SolverConfig& cfg,
                      bool dependent = false);

}  // namespace qes
