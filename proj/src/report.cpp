#include "qes/report.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "qes/apps.hpp"
#include "qes/augmented.hpp"
#include "qes/bethe.hpp"
#include "qes/coeff_oracle.hpp"
#include "qes/counting.hpp"
#include "qes/forms.hpp"
#include "qes/roots.hpp"
#include "qes/sl2.hpp"

namespace qes {
namespace {

std::string strf(const char* fmt, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

Cplx rand_box(std::mt19937_64& g, double lo, double hi) {
  const double re = lo + (hi - lo) * u01(g);
  const double im = lo + (hi - lo) * u01(g);
  return Cplx(re, im);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

double relerr(const Cplx& a, const Cplx& b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double relerr_d(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

SolverConfig make_cfg(std::uint64_t seed, int restarts) {
  SolverConfig cfg;
  cfg.seed = seed;
  cfg.restarts = restarts;
  return cfg;
}

// Random spec with the leading X coefficient bounded away from zero, simple
// X roots of moderate size, and (optionally) the algebraic-dependence
// relation imposed or excluded.
OdeSpec draw_spec(std::mt19937_64& rng, int deg_x, int n, bool dependent,
                  double b1_min = 0.0) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    OdeSpec spec;
    spec.n = n;
    for (int k = 0; k <= 4; ++k) spec.a[static_cast<std::size_t>(k)] = Cplx(0.0, 0.0);
    for (int k = 0; k < deg_x; ++k) spec.a[static_cast<std::size_t>(k)] = rand_box(rng, -1.0, 1.0);
    Cplx lead = rand_box(rng, -1.0, 1.0);
    while (std::abs(lead) < 0.3) lead = rand_box(rng, -1.0, 1.0);
    spec.a[static_cast<std::size_t>(deg_x)] = lead;

    for (int k = 0; k <= 3; ++k) spec.b[static_cast<std::size_t>(k)] = rand_box(rng, -1.0, 1.0);
    if (dependent) {
      spec.b[3] = -2.0 * static_cast<double>(n - 1) * spec.a[4];
    } else {
      const Cplx dep = 2.0 * static_cast<double>(n - 1) * spec.a[4] + spec.b[3];
      if (std::abs(dep) <= 1e-3 * spec.coeff_scale()) continue;
    }
    if (b1_min > 0.0) {
      while (std::abs(spec.b[1]) < b1_min) spec.b[1] = rand_box(rng, -1.0, 1.0);
    }

    const auto x_roots = companion_roots(spec.X());
    double max_root = 0.0;
    for (const Cplx& r : x_roots) max_root = std::max(max_root, std::abs(r));
    if (max_root > 2.0) continue;
    bool separated = true;
    for (std::size_t i = 0; i < x_roots.size() && separated; ++i) {
      for (std::size_t j = i + 1; j < x_roots.size(); ++j) {
        if (std::abs(x_roots[i] - x_roots[j]) < 1e-3 * (1.0 + max_root)) {
          separated = false;
          break;
        }
      }
    }
    if (!separated) continue;
    spec.validate();
    return spec;
  }
  throw std::runtime_error("draw_spec: no admissible random spec after 500 attempts");
}

std::vector<Cplx> draw_distinct_roots(std::mt19937_64& rng, int n, double box,
                                      double min_sep) {
  for (int attempt = 0; attempt < 500; ++attempt) {
    std::vector<Cplx> z(static_cast<std::size_t>(n));
    for (auto& zi : z) zi = rand_box(rng, -box, box);
    bool ok = true;
    for (std::size_t i = 0; i < z.size() && ok; ++i) {
      for (std::size_t j = i + 1; j < z.size(); ++j) {
        if (std::abs(z[i] - z[j]) < min_sep) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return z;
  }
  throw std::runtime_error("draw_distinct_roots: separation failed");
}

struct CheckState {
  bool ok = true;
  std::string why;
  void fail(std::string msg) {
    if (ok) why = std::move(msg);
    ok = false;
  }
};

// --------------------------------------------------------------------------
// 1. Coefficient formulas against a literal re-transcription, plus the four
//    symmetric-sum identities on random distinct root sets.
CheckState crit_identities(std::uint64_t seed) {
  CheckState st;
  std::mt19937_64 rng(mix_seed(seed, 101));
  double max_id = 0.0, max_coeff = 0.0;
  for (int iter = 0; iter < 100; ++iter) {
    const int n = (iter % 4) + 1;
    OdeSpec spec;
    spec.n = n;
    for (int k = 0; k <= 4; ++k) spec.a[static_cast<std::size_t>(k)] = rand_box(rng, -1.0, 1.0);
    for (int k = 0; k <= 3; ++k) spec.b[static_cast<std::size_t>(k)] = rand_box(rng, -1.0, 1.0);
    const auto roots = draw_distinct_roots(rng, n, 2.0, 5e-2);

    const auto ids = symmetric_identity_suite(roots);
    for (double r : ids) max_id = std::max(max_id, r);

    Cplx s1(0, 0), s2(0, 0), e2(0, 0);
    for (std::size_t i = 0; i < roots.size(); ++i) {
      s1 += roots[i];
      s2 += roots[i] * roots[i];
      for (std::size_t j = i + 1; j < roots.size(); ++j) e2 += roots[i] * roots[j];
    }
    const double nn = n;
    const Cplx a4 = spec.a[4], a3 = spec.a[3], a2 = spec.a[2];
    const Cplx b3 = spec.b[3], b2 = spec.b[2], b1 = spec.b[1];
    const Cplx c2_lit = -nn * (nn - 1.0) * a4 - nn * b3;
    const Cplx c1_lit =
        -(2.0 * (nn - 1.0) * a4 + b3) * s1 - nn * (nn - 1.0) * a3 - nn * b2;
    const Cplx c0_lit = -(2.0 * (nn - 1.0) * a4 + b3) * s2 - 2.0 * a4 * e2 -
                        (2.0 * (nn - 1.0) * a3 + b2) * s1 - nn * (nn - 1.0) * a2 -
                        nn * b1;
    RootConfig rc{roots};
    max_coeff = std::max({max_coeff, relerr(coeff_c2(spec), c2_lit),
                          relerr(coeff_c1(spec, rc), c1_lit),
                          relerr(coeff_c0(spec, rc), c0_lit)});
  }
  if (max_id > 1e-10) st.fail(strf("identity residual %.3e exceeds 1e-10", max_id));
  if (max_coeff > 1e-13) {
    st.fail(strf("coefficient transcription mismatch %.3e exceeds 1e-13", max_coeff));
  }
  if (st.ok) {
    st.why = strf("100 specs: max identity residual %.3e, max coefficient mismatch %.3e",
                  max_id, max_coeff);
  }
  return st;
}

// --------------------------------------------------------------------------
// 2. Root-space solver against the independent coefficient-space solver.
bool oracle_sets_match(const std::vector<BetheSolution>& bethe,
                       const std::vector<CoeffOracleSolution>& oracle,
                       double* worst_c) {
  if (bethe.size() != oracle.size()) return false;
  std::vector<bool> used(oracle.size(), false);
  for (const BetheSolution& bs : bethe) {
    bool matched = false;
    for (std::size_t j = 0; j < oracle.size(); ++j) {
      if (used[j]) continue;
      if (!same_solution(bs.config.roots, oracle[j].roots, 1e-9)) continue;
      const double ce = std::max({relerr(bs.c2, oracle[j].c2), relerr(bs.c1, oracle[j].c1),
                                  relerr(bs.c0, oracle[j].c0)});
      if (ce > 1e-8) continue;
      *worst_c = std::max(*worst_c, ce);
      used[j] = true;
      matched = true;
      break;
    }
    if (!matched) return false;
  }
  return true;
}

CheckState crit_oracle(std::uint64_t seed) {
  CheckState st;
  std::mt19937_64 rng(mix_seed(seed, 202));
  double worst_c = 0.0;
  int escalations = 0;
  for (int idx = 0; idx < 20; ++idx) {
    const int deg = (idx % 2 == 0) ? 4 : 3;
    const int n = (idx % 4 == 3) ? 0 : (idx % 4) + 1;
    const OdeSpec spec = draw_spec(rng, deg, n, false);

    auto bethe = solve_all(spec, make_cfg(mix_seed(seed, 2000 + idx), 800));
    auto oracle = coeff_system_solve(spec, make_cfg(mix_seed(seed, 3000 + idx), 800));
    if (!oracle_sets_match(bethe, oracle, &worst_c)) {
      ++escalations;
      bethe = solve_all(spec, make_cfg(mix_seed(seed, 4000 + idx), 2400));
      oracle = coeff_system_solve(spec, make_cfg(mix_seed(seed, 5000 + idx), 2400));
      if (!oracle_sets_match(bethe, oracle, &worst_c)) {
        st.fail(strf("spec %d (degX=%d, n=%d): solver found %zu certified, oracle %zu, sets differ",
                     idx, deg, n, bethe.size(), oracle.size()));
        return st;
      }
    }
  }
  st.why = strf("20 specs matched; worst coefficient deviation %.3e; %d escalations",
                worst_c, escalations);
  return st;
}

// --------------------------------------------------------------------------
// 3. Dependent case: n+1 certified solutions whose {-c0} multiset equals the
//    matrix spectrum of the algebraized operator.
CheckState crit_sl2(std::uint64_t seed) {
  CheckState st;
  std::mt19937_64 rng(mix_seed(seed, 303));
  double worst = 0.0;
  for (int idx = 0; idx < 20; ++idx) {
    const int n = (idx % 3) + 1;
    const OdeSpec spec = draw_spec(rng, 4, n, true);
    // Dependent specs sit exactly on the degenerate top balance
    // 2(n-1)a4 + b3 = 0; escalate the start pool deterministically on a
    // count miss (same stream, more starts) before declaring failure.
    std::vector<BetheSolution> sols;
    int restarts = 700;
    for (int attempt = 0; attempt < 3; ++attempt) {
      sols = solve_all(spec, make_cfg(mix_seed(seed, 6000 + idx), restarts));
      if (static_cast<int>(sols.size()) == n + 1) break;
      restarts *= 2;
    }
    if (static_cast<int>(sols.size()) != n + 1) {
      st.fail(strf("spec %d (n=%d): found %zu certified solutions, expected %d", idx, n,
                   sols.size(), n + 1));
      return st;
    }
    std::vector<Cplx> from_bae;
    from_bae.reserve(sols.size());
    for (const auto& s : sols) from_bae.push_back(-s.c0);
    sort_canonical(from_bae);
    auto evals = sl2_spectrum(build_sl2_matrix(spec));
    if (evals.size() != from_bae.size()) {
      st.fail(strf("spec %d: spectrum size %zu vs %zu", idx, evals.size(), from_bae.size()));
      return st;
    }
    for (std::size_t k = 0; k < evals.size(); ++k) {
      worst = std::max(worst, relerr(evals[k], from_bae[k]));
    }
  }
  if (worst > 1e-8) {
    st.fail(strf("eigenvalue deviation %.3e exceeds 1e-8", worst));
  } else {
    st.why = strf("20 dependent specs: counts n+1 exact, worst eigenvalue deviation %.3e", worst);
  }
  return st;
}

// --------------------------------------------------------------------------
// 4. Van Vleck counts under the escalating restart budget.
CheckState crit_counts(std::uint64_t seed) {
  CheckState st;
  struct Family {
    const char* family;
    int n;
    int expected;
  };
  const std::array<Family, 5> fams = {{{"heun", 1, 2},
                                       {"heun", 2, 3},
                                       {"heun", 3, 4},
                                       {"gheun1", 1, 3},
                                       {"gheun1", 2, 6}}};
  std::string summary;
  for (std::size_t f = 0; f < fams.size(); ++f) {
    const auto cfg = make_cfg(mix_seed(seed, 7000 + f), 500);
    const CountReport rep = run_count(fams[f].family, fams[f].n, 2, cfg);
    if (rep.expected != fams[f].expected) {
      st.fail(strf("%s n=%d: expected-count mismatch (%d vs %d)", fams[f].family, fams[f].n,
                   rep.expected, fams[f].expected));
      return st;
    }
    for (int found : rep.per_trial_found) {
      if (found != rep.expected) {
        st.fail(strf("%s n=%d: trial found %d of %d", fams[f].family, fams[f].n, found,
                     rep.expected));
        return st;
      }
    }
    summary += strf("%s n=%d: %d/%d; ", fams[f].family, fams[f].n, rep.found, rep.expected);
  }
  st.why = summary;
  return st;
}

// --------------------------------------------------------------------------
// 5. Two-electron closed forms on the (delta, gamma) grid.
CheckState crit_two_electron(std::uint64_t seed) {
  CheckState st;
  double worst = 0.0;
  for (int i = 0; i < 5 && st.ok; ++i) {
    for (int j = 0; j < 5 && st.ok; ++j) {
      const double delta = 1.0 + 0.5 * i;
      const double gamma = 0.5 + 0.375 * j;
      for (int n = 1; n <= 2 && st.ok; ++n) {
        TwoElectronParams p;
        p.delta = delta;
        p.gamma = gamma;
        p.n = n;
        const auto rep =
            two_electron_solve(p, make_cfg(mix_seed(seed, 8000 + 100 * i + 10 * j + n), 220));
        std::vector<const TwoElectronSolution*> kept;
        for (const auto& s : rep.solutions) {
          if (!s.discarded) kept.push_back(&s);
        }
        if (kept.size() != 1) {
          st.fail(strf("delta=%.3f gamma=%.3f n=%d: %zu physical branches, expected 1", delta,
                       gamma, n, kept.size()));
          break;
        }
        const TwoElectronSolution& s = *kept.front();
        if (n == 1) {
          const double z1 = -1.0 / std::sqrt(delta * gamma);
          worst = std::max({worst, relerr_d(s.E, gamma),
                            relerr_d(2.0 * s.R, std::sqrt(delta / gamma)),
                            relerr(s.roots.at(0), Cplx(z1, 0.0))});
        } else {
          const double A = std::sqrt(2.0 * (delta + 2.0) + (4.0 * delta + 6.0) / gamma);
          const double B = std::sqrt(2.0 * (delta + 2.0) - 2.0 / gamma);
          const double Eref =
              gamma * (delta + 1.0) / (gamma * (delta + 2.0) + 2.0 * delta + 3.0);
          const std::vector<Cplx> ref = {Cplx((-A + B) / (2.0 * (delta + 2.0)), 0.0),
                                         Cplx((-A - B) / (2.0 * (delta + 2.0)), 0.0)};
          if (!same_solution(s.roots, ref, 1e-11)) {
            st.fail(strf("delta=%.3f gamma=%.3f n=2: roots off the closed form", delta, gamma));
            break;
          }
          worst = std::max({worst, relerr_d(s.R, A / 2.0), relerr_d(s.E, Eref)});
        }
      }
    }
  }
  if (!st.ok) return st;
  if (worst > 1e-10) {
    st.fail(strf("closed-form deviation %.3e exceeds 1e-10", worst));
  } else {
    st.why = strf("25 grid points, n=1,2: worst closed-form deviation %.3e", worst);
  }
  return st;
}

// --------------------------------------------------------------------------
// 6. Sextic self-interaction mode structure.
CheckState crit_sextic(std::uint64_t seed) {
  CheckState st;
  const double kSqrt2 = 1.4142135623730951;
  std::array<Phi6Report, 5> reps;  // index by n = 1..4 (slot 0 unused)
  for (int n = 1; n <= 4; ++n) {
    Phi6Params p;
    p.mu = 1.0;
    p.n = n;
    reps[static_cast<std::size_t>(n)] = phi6_solve(p, make_cfg(mix_seed(seed, 9000 + n), 320));
  }

  const auto& r1 = reps[1];
  if (r1.solutions.size() != 1) {
    st.fail(strf("n=1: %zu solutions after free-parameter collapse, expected 1",
                 r1.solutions.size()));
    return st;
  }
  const auto& s1 = r1.solutions.front();
  if (!s1.inv_eps_free) {
    st.fail("n=1: coupling parameter not flagged free");
    return st;
  }
  if (std::abs(s1.roots.at(0)) > 1e-8 || std::abs(s1.E) > 1e-12) {
    st.fail(strf("n=1: |z1| = %.3e, |E| = %.3e, expected 0", std::abs(s1.roots.at(0)),
                 std::abs(s1.E)));
    return st;
  }

  const auto& r2 = reps[2];
  if (r2.solutions.empty()) {
    st.fail("n=2: no solutions found");
    return st;
  }
  // Two branches exist at n = 2 (the identification constraint reduces to
  // w^2 - w - 2 = 0, so w = 2 with real roots and w = -1 with an imaginary
  // pair); the closed-form regression targets the w = 2 branch.
  const Phi6Solution* s2 = &r2.solutions.front();
  for (const auto& s : r2.solutions) {
    if (std::abs(s.inv_eps_sq - Cplx(2.0, 0.0)) < std::abs(s2->inv_eps_sq - Cplx(2.0, 0.0))) {
      s2 = &s;
    }
  }
  const std::vector<Cplx> ref2 = {Cplx(-kSqrt2, 0.0), Cplx(kSqrt2, 0.0)};
  const double worst2 = std::abs(s2->inv_eps_sq - Cplx(2.0, 0.0));
  if (worst2 > 1e-10 || !same_solution(s2->roots, ref2, 1e-11) ||
      std::abs(s2->E - 0.75) > 1e-12) {
    st.fail(strf("n=2: w=2 branch off the closed form (w=%.12g%+.12gi, E=%.12g)",
                 s2->inv_eps_sq.real(), s2->inv_eps_sq.imag(), s2->E));
    return st;
  }

  double worst_formula = 0.0;
  for (int n = 2; n <= 4; ++n) {
    if (reps[static_cast<std::size_t>(n)].solutions.empty()) {
      st.fail(strf("n=%d: no solutions found", n));
      return st;
    }
  }
  for (int n = 1; n <= 4; ++n) {
    const double Eref = phi6_energy_formula(1.0, n);
    for (const auto& s : reps[static_cast<std::size_t>(n)].solutions) {
      worst_formula = std::max(worst_formula, relerr_d(s.E_c0_check, Eref));
      if (std::abs(s.E - Eref) > 1e-12) {
        st.fail(strf("n=%d: energy field disagrees with the closed form", n));
        return st;
      }
    }
  }
  if (worst_formula > 1e-8) {
    st.fail(strf("constant-coefficient energy check deviates %.3e (> 1e-8)", worst_formula));
    return st;
  }

  std::vector<int> nonneg;
  for (int n = 1; n <= 8; ++n) {
    if (phi6_energy_formula(1.0, n) >= 0.0) nonneg.push_back(n);
  }
  if (nonneg != std::vector<int>{1, 2, 3, 4, 5}) {
    st.fail("nonnegative-energy set is not {1,...,5}");
    return st;
  }
  st.why = strf(
      "n=1 free-parameter line, n=2 closed form (|w-2| max %.3e); energy cross-check max %.3e; "
      "E >= 0 exactly for n in {1..5}",
      worst2, worst_formula);
  return st;
}

// --------------------------------------------------------------------------
// 7. Dirac lowest-level closed forms and solver agreement from the start box.
CheckState crit_dirac(std::uint64_t seed) {
  CheckState st;
  const double alpha = 1.0 / 137.0;
  const double m_e = 1.0;
  double worst_rel = 0.0, worst_solver = 0.0;
  for (int l = 0; l <= 2; ++l) {
    const DiracClosedForm cf = dirac_n0_closed_form(m_e, l, 1.0);
    const double r0 = alpha / (cf.E + m_e);
    const double R1 = cf.E * cf.E - m_e * m_e - cf.eB * (l + cf.xi + 1.5);
    const double R2 = 2.0 * cf.E * alpha - cf.eB * r0;
    const double R3 = 2.0 * cf.E * alpha * r0 - cf.xi + (l + 0.5);
    worst_rel = std::max({worst_rel, std::abs(R1), std::abs(R2), std::abs(R3)});

    DiracParams p;
    p.m_e = m_e;
    p.l = l;
    p.Z = 1.0;
    p.n = 0;
    p.use_closed_form_start = false;
    const auto rep = dirac_solve(p, make_cfg(mix_seed(seed, 10000 + l), 220));
    if (rep.solutions.empty()) {
      st.fail(strf("l=%d: solver found nothing from the start box", l));
      return st;
    }
    for (const auto& s : rep.solutions) {
      worst_solver = std::max({worst_solver, relerr_d(s.E, cf.E), relerr_d(s.eB, cf.eB)});
    }
  }
  if (worst_rel > 1e-10) {
    st.fail(strf("closed-form relation residual %.3e exceeds 1e-10", worst_rel));
  } else if (worst_solver > 1e-8) {
    st.fail(strf("solver/closed-form deviation %.3e exceeds 1e-8", worst_solver));
  } else {
    st.why = strf("l=0,1,2: relation residuals <= %.3e; solver matches closed form to %.3e",
                  worst_rel, worst_solver);
  }
  return st;
}

// --------------------------------------------------------------------------
// 8. Decatic reference evaluators against the augmented solver.
CheckState crit_decatic(std::uint64_t seed) {
  CheckState st;
  const std::array<std::pair<double, double>, 3> grid = {
      {{0.0, 0.0}, {0.5, 0.3}, {1.0, -0.2}}};
  double worst = 0.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (int n = 0; n <= 1; ++n) {
      double ref_l3 = 0.0, ref_l4 = 0.0, ref_E = 0.0;
      if (n == 0) {
        const auto ref = decatic_n0_reference(grid[g].first, grid[g].second, 3, 0);
        ref_l3 = ref.lambda3;
        ref_l4 = ref.lambda4;
        ref_E = ref.E;
      } else {
        const auto ref = decatic_n1_reference(grid[g].first, grid[g].second, 3, 0);
        ref_l3 = ref.lambda3;
        ref_l4 = ref.lambda4;
        ref_E = ref.E;
      }
      DecaticParams p;
      p.lambda1 = grid[g].first;
      p.lambda2 = grid[g].second;
      p.bigN = 3;
      p.l = 0;
      p.n = n;
      const auto rep = decatic_solve(p, make_cfg(mix_seed(seed, 11000 + 10 * g + n), 260));
      if (rep.solutions.empty()) {
        st.fail(strf("grid %zu n=%d: solver found nothing", g, n));
        return st;
      }
      const DecaticSolution* best = &rep.solutions.front();
      for (const auto& s : rep.solutions) {
        if (std::abs(s.lambda4 - ref_l4) < std::abs(best->lambda4 - ref_l4)) best = &s;
      }
      const double dev = std::max({relerr_d(best->lambda3, ref_l3),
                                   relerr_d(best->lambda4, ref_l4), relerr_d(best->E, ref_E)});
      worst = std::max(worst, dev);
      if (dev > 1e-8) {
        st.fail(strf("grid %zu n=%d: solver/reference deviation %.3e", g, n, dev));
        return st;
      }
    }
  }
  st.why = strf("3 coupling points, n=0,1: worst solver/reference deviation %.3e", worst);
  return st;
}

// --------------------------------------------------------------------------
// 9. Horizon-cloud lowest level: residual and cross-seed reproducibility.
CheckState crit_horizon(std::uint64_t seed) {
  CheckState st;
  std::array<RNSolution, 3> picks;
  double worst_raw = 0.0;
  bool trivial = true;
  for (int k = 0; k < 3; ++k) {
    RNParams p;  // defaults: r_minus = 0.25, unknowns {a, m_s}, branch -1, n = 0
    const auto rep = rn_solve(p, make_cfg(mix_seed(seed, 12000 + k), 200));
    if (rep.solutions.empty()) {
      st.fail(strf("seed variant %d: no solution found", k));
      return st;
    }
    const RNSolution& s = rep.solutions.front();
    const double cscale = std::max(1.0, s.inner.realized_spec.coeff_scale());
    worst_raw = std::max(worst_raw, s.inner.constraint_residual * cscale);
    trivial = trivial && s.trivial_profile;
    picks[static_cast<std::size_t>(k)] = s;
  }
  if (worst_raw > 1e-9) {
    st.fail(strf("identification residual %.3e exceeds 1e-9", worst_raw));
    return st;
  }
  for (int k = 1; k < 3; ++k) {
    if (std::abs(picks[0].a - picks[static_cast<std::size_t>(k)].a) > 1e-6 ||
        std::abs(picks[0].m_s - picks[static_cast<std::size_t>(k)].m_s) > 1e-6 ||
        std::abs(picks[0].g_m - picks[static_cast<std::size_t>(k)].g_m) > 1e-6) {
      st.fail(strf("seed variant %d disagrees with variant 0", k));
      return st;
    }
  }
  st.why = strf(
      "3 seeds agree: a=%.6g, m_s=%.6g, g_m=%.6g, max raw residual %.3e%s", picks[0].a,
      picks[0].m_s, picks[0].g_m, worst_raw,
      trivial ? " (constant-profile solution; disclosed, not hidden)" : "");
  return st;
}

// --------------------------------------------------------------------------
// 10. Canonical-form coefficient formulas on certified roots + the exponent
//     relation at the regular singular points.
CheckState crit_forms(std::uint64_t seed) {
  CheckState st;
  std::mt19937_64 rng(mix_seed(seed, 1313));
  double worst = 0.0, worst_fuchs = 0.0;
  auto jit = [&rng]() { return rand_box(rng, -0.12, 0.12); };
  auto coef = [&rng]() { return rand_box(rng, -1.2, 1.2); };
  auto big = [&rng]() {
    Cplx c = rand_box(rng, -1.2, 1.2);
    while (std::abs(c) < 0.3) c = rand_box(rng, -1.2, 1.2);
    return c;
  };

  auto check_roots = [&](const AnyForm& form, const OdeSpec& spec, int n,
                         const char* label) -> bool {
    auto sols = solve_all(spec, make_cfg(rng(), 450));
    if (sols.empty()) sols = solve_all(spec, make_cfg(rng(), 1400));
    if (sols.empty()) {
      st.fail(strf("%s n=%d: no certified solutions to compare on", label, n));
      return false;
    }
    const std::size_t take = std::min<std::size_t>(sols.size(), 3);
    for (std::size_t k = 0; k < take; ++k) {
      const auto ap = appendix_coeffs(form, n, sols[k].config.roots);
      if (ap.c2.has_value()) {
        worst = std::max(worst, relerr(*ap.c2, sols[k].c2));
      } else if (std::abs(sols[k].c2) > 1e-12) {
        st.fail(strf("%s: quadratic coefficient should vanish", label));
        return false;
      }
      worst = std::max({worst, relerr(ap.c1, sols[k].c1), relerr(ap.c0, sols[k].c0)});
    }
    return true;
  };

  for (int rep = 0; rep < 2 && st.ok; ++rep) {
    const int n = 1 + rep;  // n = 1, 2

    HeunForm heun;
    heun.d = {Cplx(-1.1, 0.0) + jit(), Cplx(0.25, 0.0) + jit(), Cplx(1.2, 0.0) + jit()};
    heun.alpha = {coef(), coef(), coef()};
    if (!check_roots(AnyForm(heun), to_spec(heun, n), n, "three-pole")) break;
    worst_fuchs = std::max(worst_fuchs, fuchsian_check(heun, n).residual);

    GHeun1Form g1;
    g1.e = {Cplx(-1.3, 0.0) + jit(), Cplx(-0.2, 0.0) + jit(), Cplx(0.6, 0.0) + jit(),
            Cplx(1.4, 0.0) + jit()};
    g1.mu = {coef(), coef(), coef(), coef()};
    if (!check_roots(AnyForm(g1), to_spec(g1, n), n, "four-pole")) break;

    GHeun2Form g2;
    g2.f = {Cplx(-1.0, 0.0) + jit(), Cplx(0.15, 0.0) + jit(), Cplx(1.1, 0.0) + jit()};
    g2.nu_s = {coef(), coef(), coef()};
    g2.nu = big();
    if (!check_roots(AnyForm(g2), to_spec(g2, n), n, "three-pole-with-constant")) break;

    GHeun3Form g3;
    g3.g1 = Cplx(-0.7, 0.0) + jit();
    g3.g2 = Cplx(0.8, 0.0) + jit();
    g3.sigma1 = coef();
    g3.sigma2 = coef();
    g3.sigma = big();
    g3.kappa = coef();
    if (!check_roots(AnyForm(g3), to_spec(g3, n), n, "two-pole-linear-drift")) break;

    GHeun4Form g4;
    g4.h = Cplx(0.3, 0.0) + jit();
    g4.eta = coef();
    g4.lambda = big();
    g4.gamma = coef();
    g4.delta = coef();
    if (!check_roots(AnyForm(g4), to_spec(g4, n), n, "one-pole-quadratic-drift")) break;
  }
  if (!st.ok) return st;
  if (worst > 1e-10) {
    st.fail(strf("form/theorem coefficient deviation %.3e exceeds 1e-10", worst));
  } else if (worst_fuchs > 1e-15) {
    st.fail(strf("exponent relation residual %.3e exceeds 1e-15", worst_fuchs));
  } else {
    st.why = strf("five forms, n=1,2: worst coefficient deviation %.3e, exponent residual %.3e",
                  worst, worst_fuchs);
  }
  return st;
}

// --------------------------------------------------------------------------
// 11. Certification soundness under root perturbation.
CheckState crit_soundness(std::uint64_t seed) {
  CheckState st;
  std::mt19937_64 rng(mix_seed(seed, 1414));
  std::vector<std::pair<OdeSpec, BetheSolution>> pool;
  for (int idx = 0; idx < 4; ++idx) {
    const int deg = (idx % 2 == 0) ? 4 : 3;
    const int n = (idx % 3) + 1;
    const OdeSpec spec = draw_spec(rng, deg, n, false);
    for (const auto& s : solve_all(spec, make_cfg(mix_seed(seed, 13000 + idx), 350))) {
      pool.emplace_back(spec, s);
    }
  }
  if (pool.size() < 3) {
    st.fail(strf("only %zu certified solutions available for perturbation", pool.size()));
    return st;
  }
  const double cert_tol = SolverConfig{}.cert_tol;
  double min_ratio = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& [spec, sol] = pool[static_cast<std::size_t>(trial) % pool.size()];
    BetheSolution pert = sol;
    const std::size_t which = static_cast<std::size_t>(trial) % pert.config.roots.size();
    const double th = 2.0 * M_PI * u01(rng);
    pert.config.roots[which] += Cplx(1e-3 * std::cos(th), 1e-3 * std::sin(th));
    pert.c1 = coeff_c1(spec, pert.config);
    pert.c0 = coeff_c0(spec, pert.config);
    const double res = certify_ode(spec, pert);
    min_ratio = std::min(min_ratio, res / cert_tol);
    if (res <= cert_tol) {
      st.fail(strf("trial %d: perturbed residual %.3e did not exceed cert_tol", trial, res));
      return st;
    }
  }
  st.why = strf("100/100 perturbations rejected; closest margin %.3g x cert_tol", min_ratio);
  return st;
}

// --------------------------------------------------------------------------
// 12. Dependent-case constant-coefficient discrepancy: the theorem's b1 term
//     certifies, the doubled-b1 variant (as printed in the corollary) fails.
CheckState crit_discrepancy(std::uint64_t seed) {
  CheckState st;
  std::mt19937_64 rng(mix_seed(seed, 1515));
  const double cert_tol = SolverConfig{}.cert_tol;
  double mean_gap = 0.0, worst_form = 0.0;
  int checked = 0;
  for (int idx = 0; idx < 10; ++idx) {
    const int n = (idx % 3) + 1;
    const OdeSpec spec = draw_spec(rng, 4, n, true, 0.3);
    // Dependent specs sit exactly on the degenerate top balance
    // 2(n-1)a4 + b3 = 0, so single hard draws can need a deeper start pool;
    // escalate deterministically (same stream, more starts) like the
    // counting criterion does.
    std::vector<BetheSolution> sols;
    int restarts = 500;
    for (int attempt = 0; attempt < 3; ++attempt) {
      sols = solve_all(spec, make_cfg(mix_seed(seed, 14000 + idx), restarts));
      if (static_cast<int>(sols.size()) == n + 1) break;
      restarts *= 2;
    }
    if (static_cast<int>(sols.size()) != n + 1) {
      st.fail(strf("spec %d (n=%d): %zu certified solutions, expected %d", idx, n, sols.size(),
                   n + 1));
      return st;
    }
    const double nn = n;
    for (const auto& sol : sols) {
      Cplx e1(0, 0), e2(0, 0);
      const auto& z = sol.config.roots;
      for (std::size_t i = 0; i < z.size(); ++i) {
        e1 += z[i];
        for (std::size_t j = i + 1; j < z.size(); ++j) e2 += z[i] * z[j];
      }
      // Literal transcription of the doubled-b1 variant (the quadratic
      // symmetric-sum term drops because its bracket vanishes here).
      const Cplx c0_text = -2.0 * spec.a[4] * e2 -
                           (2.0 * (nn - 1.0) * spec.a[3] + spec.b[2]) * e1 -
                           nn * (nn - 1.0) * spec.a[2] - 2.0 * nn * spec.b[1];
      const double gap = std::abs(c0_text - sol.c0);
      worst_form = std::max(worst_form, std::abs(gap - nn * std::abs(spec.b[1])));
      mean_gap += gap;
      ++checked;

      if (!sol.certified) {
        st.fail(strf("spec %d: theorem-form solution unexpectedly uncertified", idx));
        return st;
      }
      BetheSolution variant = sol;
      variant.c0 = c0_text;
      if (certify_ode(spec, variant) <= cert_tol) {
        st.fail(strf("spec %d: doubled-b1 variant certified despite |b1| >= 0.3", idx));
        return st;
      }
    }
  }
  mean_gap /= std::max(checked, 1);
  if (worst_form > 1e-12) {
    st.fail(strf("discrepancy does not equal n*|b1| (off by %.3e)", worst_form));
    return st;
  }
  st.why = strf(
      "10 dependent specs (%d solutions): mean |c0_text - c0_theorem| = %.6g, equals n*|b1| to "
      "%.1e; theorem form certifies, doubled-b1 form never does",
      checked, mean_gap, worst_form);
  return st;
}

struct Meta {
  const char* name;
  double budget;
  CheckState (*fn)(std::uint64_t);
};

constexpr std::array<Meta, kCriterionCount> kMeta = {{
    {"theorem-coefficients-and-identities", 5.0, crit_identities},
    {"independent-oracle-equivalence", 60.0, crit_oracle},
    {"algebraized-spectrum-match", 30.0, crit_sl2},
    {"van-vleck-counts", 120.0, crit_counts},
    {"two-electron-closed-forms", 10.0, crit_two_electron},
    {"sextic-mode-structure", 30.0, crit_sextic},
    {"dirac-level-closed-forms", 10.0, crit_dirac},
    {"decatic-reference-agreement", 20.0, crit_decatic},
    {"horizon-cloud-reproducibility", 30.0, crit_horizon},
    {"canonical-form-consistency", 10.0, crit_forms},
    {"certification-soundness", 5.0, crit_soundness},
    {"dependent-constant-discrepancy", 5.0, crit_discrepancy},
}};

}  // namespace

CriterionResult run_criterion(int id, std::uint64_t seed) {
  if (id < 1 || id > kCriterionCount) {
    throw std::invalid_argument("run_criterion: id out of range");
  }
  const Meta& meta = kMeta[static_cast<std::size_t>(id - 1)];
  CriterionResult result;
  result.id = id;
  result.name = meta.name;
  result.budget_seconds = meta.budget;

  const auto t0 = std::chrono::steady_clock::now();
  CheckState st;
  try {
    st = meta.fn(seed);
  } catch (const std::exception& e) {
    st.ok = false;
    st.why = strf("exception: %s", e.what());
  }
  const auto t1 = std::chrono::steady_clock::now();
  result.seconds = std::chrono::duration<double>(t1 - t0).count();
  result.substance_passed = st.ok;
  result.passed = st.ok && result.seconds < meta.budget;
  result.detail = st.why;
  if (st.ok && result.seconds >= meta.budget) {
    result.detail += strf(" [over budget: %.2fs >= %.0fs]", result.seconds, meta.budget);
  }
  return result;
}

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  out.reserve(kCriterionCount);
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

SeedVariationResult seed_variation_check(std::uint64_t seed) {
  SeedVariationResult out;
  OdeSpec spec;
  spec.a = {Cplx(-0.9, 0.0), Cplx(0.2, 0.0), Cplx(-0.6, 0.0), Cplx(0.3, 0.0), Cplx(1.0, 0.0)};
  spec.b = {Cplx(0.4, 0.0), Cplx(-0.7, 0.0), Cplx(0.5, 0.0), Cplx(0.25, 0.0)};
  spec.n = 2;

  std::array<std::vector<BetheSolution>, 3> sets;
  for (int k = 0; k < 3; ++k) {
    sets[static_cast<std::size_t>(k)] =
        solve_all(spec, make_cfg(mix_seed(seed, 15000 + k), 600));
  }
  for (int k = 1; k < 3; ++k) {
    const auto& a = sets[0];
    const auto& b = sets[static_cast<std::size_t>(k)];
    if (a.size() != b.size()) {
      out.detail = strf("seed variant %d: %zu vs %zu certified solutions", k, b.size(), a.size());
      return out;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!same_solution(a[i].config.roots, b[i].config.roots, 1e-9) ||
          relerr(a[i].c0, b[i].c0) > 1e-8 || relerr(a[i].c1, b[i].c1) > 1e-8) {
        out.detail = strf("seed variant %d: solution %zu differs", k, i);
        return out;
      }
    }
  }
  out.identical = true;
  out.detail = strf("3 seeds produced identical certified sets (%zu solutions)", sets[0].size());
  return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results) {
    if (!r.passed) return false;
  }
  return true;
}

Json validation_document(std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = run_acceptance_suite(seed);
  const auto seed_var = seed_variation_check(seed);
  const auto t1 = std::chrono::steady_clock::now();
  const double total = std::chrono::duration<double>(t1 - t0).count();

  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "validation_report";
  j["seed"] = seed;
  Json arr = Json::array();
  for (const auto& r : results) {
    Json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["substance_passed"] = r.substance_passed;
    c["seconds"] = r.seconds;
    c["budget_seconds"] = r.budget_seconds;
    c["detail"] = r.detail;
    arr.push_back(std::move(c));
  }
  j["criteria"] = std::move(arr);
  j["seed_variation"] = Json{{"identical", seed_var.identical}, {"detail", seed_var.detail}};
  j["total_seconds"] = total;
  j["total_budget_seconds"] = 300.0;
  j["all_passed"] = all_passed(results) && seed_var.identical && total < 300.0;
  return j;
}

}  // namespace qes
