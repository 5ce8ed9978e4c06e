#include "qes/augmented.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "qes/roots.hpp"

namespace qes {

namespace {

double u01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

struct Stacked {
  Eigen::VectorXcd r;   // weighted residual
  bool valid = false;
};

// Fixed per-trial weights keep the objective smooth; acceptance re-normalizes
// with the converged point's own scales.
struct Weights {
  double bae = 1.0;
  double con = 1.0;
};

Stacked eval_stacked(const AugmentedSystem& sys, const Eigen::VectorXcd& u, const Weights& w) {
  const int np = static_cast<int>(sys.param_names.size());
  const int n = sys.n;
  const int nc = static_cast<int>(sys.constraints.size());
  Stacked out;
  out.r.resize(n + nc);
  std::vector<Cplx> params(u.data(), u.data() + np);
  std::vector<Cplx> roots(u.data() + np, u.data() + np + n);
  try {
    const OdeSpec spec = sys.spec_builder(params);
    if (n > 0) {
      const std::vector<Cplx> f = bae_residual_cleared(spec, roots);
      for (int i = 0; i < n; ++i) out.r(i) = f[static_cast<std::size_t>(i)] / w.bae;
    }
    for (int k = 0; k < nc; ++k) {
      out.r(n + k) = sys.constraints[static_cast<std::size_t>(k)](params, roots) / w.con;
    }
  } catch (const std::exception&) {
    return out;  // invalid — caller treats as an infinite objective
  }
  if (!out.r.allFinite()) return out;
  out.valid = true;
  return out;
}

bool guards_ok(const OdeSpec& spec, const std::vector<Cplx>& roots, const SolverConfig& cfg) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) < cfg.sep_tol) return false;
    }
  }
  const ComplexPoly x = spec.X();
  const double floor = cfg.pole_tol * std::max(1.0, x.max_abs_coeff());
  for (const Cplx& z : roots) {
    if (std::abs(x.eval(z)) < floor) return false;
  }
  return true;
}

struct TrialResult {
  bool accepted = false;
  AugmentedSolution sol;
};

// Parameters declared real stay on the real axis through the whole
// iteration.  Without this, the complex Gauss-Newton step lets a real
// physical parameter pick up a stray imaginary component (most visibly along
// free-parameter directions, where nothing pulls it back), and the
// real-parameter filter downstream would then discard genuine solutions.
void project_real_params(const AugmentedSystem& sys, Eigen::VectorXcd& u) {
  for (std::size_t j = 0; j < sys.param_real.size(); ++j) {
    if (sys.param_real[j]) {
      u(static_cast<Eigen::Index>(j)) = Cplx(u(static_cast<Eigen::Index>(j)).real(), 0.0);
    }
  }
}

TrialResult run_trial(const AugmentedSystem& sys, const SolverConfig& cfg,
                      const std::vector<Cplx>& param_start, const std::vector<Cplx>& root_start) {
  TrialResult out;
  const int np = static_cast<int>(sys.param_names.size());
  const int n = sys.n;
  const int nc = static_cast<int>(sys.constraints.size());
  const int dim = np + n;
  const int m = n + nc;
  if (m < dim) return out;  // under-determined systems are outside the contract

  Eigen::VectorXcd u(dim);
  for (int j = 0; j < np; ++j) u(j) = param_start[static_cast<std::size_t>(j)];
  for (int i = 0; i < n; ++i) u(np + i) = root_start[static_cast<std::size_t>(i)];
  project_real_params(sys, u);

  Weights w;
  try {
    const OdeSpec spec0 = sys.spec_builder(param_start);
    w.bae = std::max(1.0, bae_scale(spec0, root_start));
    w.con = std::max(1.0, spec0.coeff_scale());
  } catch (const std::exception&) {
    return out;
  }

  Stacked cur = eval_stacked(sys, u, w);
  if (!cur.valid) return out;
  double f = 0.5 * cur.r.squaredNorm();

  bool converged = false;
  Eigen::MatrixXcd J(m, dim);
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double rmax = cur.r.cwiseAbs().maxCoeff();
    if (rmax <= 1e-13) {
      converged = true;
      break;
    }
    // Central finite differences along the real axis; the residual entries
    // are holomorphic in the unknowns, so this approximates the complex
    // derivative directly.
    bool fd_ok = true;
    for (int c = 0; c < dim; ++c) {
      const double h = 1e-7 * (1.0 + std::abs(u(c)));
      Eigen::VectorXcd up = u, um = u;
      up(c) += h;
      um(c) -= h;
      const Stacked rp = eval_stacked(sys, up, w);
      const Stacked rm = eval_stacked(sys, um, w);
      if (!rp.valid || !rm.valid) {
        fd_ok = false;
        break;
      }
      J.col(c) = (rp.r - rm.r) / (2.0 * h);
    }
    if (!fd_ok) return out;

    const Eigen::VectorXcd du = J.colPivHouseholderQr().solve(-cur.r);
    if (!du.allFinite()) return out;
    if (du.norm() <= 1e-13 * (1.0 + u.norm())) {
      converged = true;  // stationary; acceptance decides feasibility
      break;
    }

    double t = 1.0;
    bool stepped = false;
    for (int cut = 0; cut < 40; ++cut) {
      Eigen::VectorXcd trial = u + t * du;
      project_real_params(sys, trial);
      const Stacked cand = eval_stacked(sys, trial, w);
      if (cand.valid) {
        const double fc = 0.5 * cand.r.squaredNorm();
        if (fc <= f * (1.0 - 1e-4 * t) || fc < 1e-30) {
          u = trial;
          cur = cand;
          f = fc;
          stepped = true;
          break;
        }
      }
      t *= cfg.damping;
    }
    if (!stepped) {
      converged = cur.r.cwiseAbs().maxCoeff() <= 1e-9;  // stalled at the floor
      break;
    }
  }
  if (!converged) return out;

  std::vector<Cplx> params(u.data(), u.data() + np);
  std::vector<Cplx> roots(u.data() + np, u.data() + np + n);
  sort_canonical(roots);

  OdeSpec spec;
  try {
    spec = sys.spec_builder(params);
    spec.validate();
  } catch (const std::exception&) {
    return out;
  }
  if (!guards_ok(spec, roots, cfg)) return out;

  BetheSolution bs;
  bs.config.roots = roots;
  bs.c2 = coeff_c2(spec);
  bs.c1 = coeff_c1(spec, bs.config);
  bs.c0 = coeff_c0(spec, bs.config);
  if (n > 0) {
    const std::vector<Cplx> fres = bae_residual_cleared(spec, roots);
    double fmax = 0.0;
    for (const Cplx& v : fres) fmax = std::max(fmax, std::abs(v));
    bs.bae_residual = fmax / std::max(1.0, bae_scale(spec, roots));
  } else {
    bs.bae_residual = 0.0;
  }
  bs.ode_residual = certify_ode(spec, bs);
  bs.certified = bs.ode_residual <= cfg.cert_tol && bs.bae_residual <= cfg.cert_tol;
  if (!bs.certified) return out;

  double cres = 0.0;
  const double cscale = std::max(1.0, spec.coeff_scale());
  for (const auto& g : sys.constraints) {
    cres = std::max(cres, std::abs(g(params, roots)) / cscale);
  }
  if (cres > cfg.cert_tol) return out;

  // Gradient of the weighted half-squared objective at the accepted point,
  // recomputed so the stationarity property is checkable downstream.
  const Weights wf{std::max(1.0, bae_scale(spec, roots)), cscale};
  Eigen::VectorXcd uf(dim);
  for (int j = 0; j < np; ++j) uf(j) = params[static_cast<std::size_t>(j)];
  for (int i = 0; i < n; ++i) uf(np + i) = roots[static_cast<std::size_t>(i)];
  const Stacked fin = eval_stacked(sys, uf, wf);
  double stat = 0.0;
  if (fin.valid) {
    Eigen::MatrixXcd Jf(m, dim);
    bool ok = true;
    for (int c = 0; c < dim; ++c) {
      const double h = 1e-7 * (1.0 + std::abs(uf(c)));
      Eigen::VectorXcd up = uf, um = uf;
      up(c) += h;
      um(c) -= h;
      const Stacked rp = eval_stacked(sys, up, wf);
      const Stacked rm = eval_stacked(sys, um, wf);
      if (!rp.valid || !rm.valid) {
        ok = false;
        break;
      }
      Jf.col(c) = (rp.r - rm.r) / (2.0 * h);
    }
    if (ok) stat = (Jf.adjoint() * fin.r).norm();
  }

  out.accepted = true;
  out.sol.param_names = sys.param_names;
  out.sol.params = std::move(params);
  out.sol.solution = std::move(bs);
  out.sol.realized_spec = spec;
  out.sol.constraint_residual = cres;
  out.sol.stationarity = stat;
  return out;
}

bool same_params(const std::vector<Cplx>& a, const std::vector<Cplx>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (std::abs(a[j] - b[j]) > 1e-6 * (1.0 + std::abs(a[j]))) return false;
  }
  return true;
}

}  // namespace

double augmented_residual_max(const AugmentedSystem& sys, const std::vector<Cplx>& params,
                              const std::vector<Cplx>& roots) {
  const OdeSpec spec = sys.spec_builder(params);
  double worst = 0.0;
  if (sys.n > 0) {
    const std::vector<Cplx> f = bae_residual_cleared(spec, roots);
    const double scale = std::max(1.0, bae_scale(spec, roots));
    for (const Cplx& v : f) worst = std::max(worst, std::abs(v) / scale);
  }
  const double cscale = std::max(1.0, spec.coeff_scale());
  for (const auto& g : sys.constraints) {
    worst = std::max(worst, std::abs(g(params, roots)) / cscale);
  }
  return worst;
}

std::vector<AugmentedSolution> solve_augmented(const AugmentedSystem& sys, const SolverConfig& cfg) {
  cfg.validate();
  if (sys.param_names.size() != sys.param_boxes.size() ||
      sys.param_names.size() != sys.param_real.size()) {
    throw std::invalid_argument("solve_augmented: parameter metadata lengths disagree");
  }
  if (!sys.spec_builder) {
    throw std::invalid_argument("solve_augmented: missing spec builder");
  }
  if (sys.n < 0) throw std::invalid_argument("solve_augmented: negative degree");

  const int np = static_cast<int>(sys.param_names.size());
  const int n = sys.n;

  // Pure Bethe systems reduce exactly to the root solver.
  if (np == 0 && sys.constraints.empty()) {
    const OdeSpec spec = sys.spec_builder({});
    std::vector<AugmentedSolution> out;
    for (BetheSolution& bs : solve_all(spec, cfg)) {
      AugmentedSolution s;
      s.solution = std::move(bs);
      s.realized_spec = spec;
      out.push_back(std::move(s));
    }
    return out;
  }

  // Pre-generate every start so the result is independent of scheduling.
  std::mt19937_64 rng(cfg.seed ^ 0xa5c1ed0ddf00d5ull);
  struct Start {
    std::vector<Cplx> params;
    std::vector<Cplx> roots;
  };
  const int total = std::max(cfg.restarts, static_cast<int>(sys.param_seeds.size()));
  std::vector<Start> starts;
  starts.reserve(static_cast<std::size_t>(total));
  for (int trial = 0; trial < total; ++trial) {
    Start st;
    st.params.resize(static_cast<std::size_t>(np));
    if (trial < static_cast<int>(sys.param_seeds.size())) {
      const auto& seed_vec = sys.param_seeds[static_cast<std::size_t>(trial)];
      if (static_cast<int>(seed_vec.size()) != np) {
        throw std::invalid_argument("solve_augmented: seed vector length mismatch");
      }
      st.params = seed_vec;
    } else {
      for (int j = 0; j < np; ++j) {
        const ParamBox& box = sys.param_boxes[static_cast<std::size_t>(j)];
        const double re = box.re_lo + (box.re_hi - box.re_lo) * u01(rng);
        double im = 0.0;
        if (!sys.param_real[static_cast<std::size_t>(j)]) {
          im = box.im_lo + (box.im_hi - box.im_lo) * u01(rng);
        }
        st.params[static_cast<std::size_t>(j)] = Cplx(re, im);
      }
    }
    st.roots.resize(static_cast<std::size_t>(n));
    if (n > 0) {
      Cplx centroid(0, 0);
      double radius = 2.0;
      try {
        const OdeSpec spec0 = sys.spec_builder(st.params);
        const std::vector<Cplx> xr = companion_roots(spec0.X());
        double mx = 0.0;
        for (const Cplx& r : xr) {
          centroid += r;
          mx = std::max(mx, std::abs(r));
        }
        if (!xr.empty()) centroid /= static_cast<double>(xr.size());
        radius = 2.0 * (1.0 + mx);
      } catch (const std::exception&) {
        // fall back to the unit-ish disk; the trial may still be useless,
        // but start generation must consume the same RNG stream regardless.
      }
      for (int i = 0; i < n; ++i) {
        const double rr = radius * std::sqrt(u01(rng));
        const double th = 2.0 * 3.14159265358979323846 * u01(rng);
        st.roots[static_cast<std::size_t>(i)] = centroid + Cplx(rr * std::cos(th), rr * std::sin(th));
      }
    }
    starts.push_back(std::move(st));
  }

  std::vector<TrialResult> outcomes(starts.size());
  const int threads = std::min(thread_cap(), static_cast<int>(starts.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) {
      outcomes[i] = run_trial(sys, cfg, starts[i].params, starts[i].roots);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t i = static_cast<std::size_t>(t); i < starts.size();
             i += static_cast<std::size_t>(threads)) {
          outcomes[i] = run_trial(sys, cfg, starts[i].params, starts[i].roots);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  std::vector<AugmentedSolution> found;
  for (TrialResult& tr : outcomes) {
    if (!tr.accepted) continue;
    bool dup = false;
    for (const AugmentedSolution& seen : found) {
      if (same_params(seen.params, tr.sol.params) &&
          same_solution(seen.solution.config.roots, tr.sol.solution.config.roots, cfg.sep_tol)) {
        dup = true;
        break;
      }
    }
    if (!dup) found.push_back(std::move(tr.sol));
  }

  std::sort(found.begin(), found.end(), [](const AugmentedSolution& x, const AugmentedSolution& y) {
    for (std::size_t j = 0; j < x.params.size() && j < y.params.size(); ++j) {
      if (x.params[j].real() != y.params[j].real()) return x.params[j].real() < y.params[j].real();
      if (x.params[j].imag() != y.params[j].imag()) return x.params[j].imag() < y.params[j].imag();
    }
    const Cplx cx = x.solution.c0, cy = y.solution.c0;
    if (cx.real() != cy.real()) return cx.real() < cy.real();
    if (cx.imag() != cy.imag()) return cx.imag() < cy.imag();
    return false;
  });
  return found;
}

std::vector<std::string> free_parameter_detect(const AugmentedSystem& sys,
                                               const AugmentedSolution& sol,
                                               const SolverConfig& cfg) {
  std::vector<std::string> free_names;
  for (std::size_t j = 0; j < sol.params.size(); ++j) {
    bool free_param = true;
    for (const double sign : {+1.0, -1.0}) {
      std::vector<Cplx> p = sol.params;
      p[j] += sign * 1e-6;
      double res = 0.0;
      try {
        res = augmented_residual_max(sys, p, sol.solution.config.roots);
      } catch (const std::exception&) {
        res = 1.0;
      }
      if (res > cfg.cert_tol) {
        free_param = false;
        break;
      }
    }
    if (free_param) free_names.push_back(sol.param_names[j]);
  }
  return free_names;
}

}  // namespace qes
