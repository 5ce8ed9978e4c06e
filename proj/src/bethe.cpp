#include "qes/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "qes/roots.hpp"

namespace qes {

Cplx coeff_c2(const OdeSpec& spec) {
  const double n = spec.n;
  return -n * (n - 1.0) * spec.a[4] - n * spec.b[3];
}

Cplx coeff_c1(const OdeSpec& spec, const RootConfig& config) {
  const double n = spec.n;
  Cplx e1(0.0, 0.0);
  for (const Cplx& z : config.roots) e1 += z;
  return -(2.0 * (n - 1.0) * spec.a[4] + spec.b[3]) * e1
         - n * (n - 1.0) * spec.a[3] - n * spec.b[2];
}

Cplx coeff_c0(const OdeSpec& spec, const RootConfig& config) {
  const double n = spec.n;
  Cplx e1(0.0, 0.0), p2(0.0, 0.0), e2(0.0, 0.0);
  const auto& z = config.roots;
  for (std::size_t i = 0; i < z.size(); ++i) {
    e1 += z[i];
    p2 += z[i] * z[i];
    for (std::size_t j = i + 1; j < z.size(); ++j) e2 += z[i] * z[j];
  }
  return -(2.0 * (n - 1.0) * spec.a[4] + spec.b[3]) * p2
         - 2.0 * spec.a[4] * e2
         - (2.0 * (n - 1.0) * spec.a[3] + spec.b[2]) * e1
         - n * (n - 1.0) * spec.a[2] - n * spec.b[1];
}

std::vector<Cplx> bae_residual_cleared(const OdeSpec& spec, const std::vector<Cplx>& roots) {
  const std::size_t n = roots.size();
  const ComplexPoly X = spec.X();
  const ComplexPoly Y = spec.Y();
  std::vector<Cplx> F(n);
  for (std::size_t i = 0; i < n; ++i) {
    // B = prod_{j != i} (z_i - z_j);  A = sum_{j != i} prod_{k != i,j} (z_i - z_k)
    Cplx B(1.0, 0.0);
    Cplx A(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      Cplx prod(1.0, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        prod *= roots[i] - roots[k];
      }
      A += prod;
      B *= roots[i] - roots[j];
    }
    F[i] = 2.0 * X.eval(roots[i]) * A + Y.eval(roots[i]) * B;
  }
  return F;
}

Eigen::MatrixXcd bae_jacobian(const OdeSpec& spec, const std::vector<Cplx>& roots) {
  const std::size_t n = roots.size();
  const ComplexPoly X = spec.X();
  const ComplexPoly Y = spec.Y();
  const ComplexPoly Xp = X.derivative();
  const ComplexPoly Yp = Y.derivative();
  Eigen::MatrixXcd J(n, n);

  // prod_excl(i, skip1, skip2): prod over k != i, k != skip1, k != skip2 of (z_i - z_k).
  auto prod_excl = [&](std::size_t i, std::size_t s1, std::size_t s2) {
    Cplx p(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == s1 || k == s2) continue;
      p *= roots[i] - roots[k];
    }
    return p;
  };

  for (std::size_t i = 0; i < n; ++i) {
    Cplx B(1.0, 0.0), A(0.0, 0.0), D(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      B *= roots[i] - roots[j];
      A += prod_excl(i, j, j);
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == j) continue;
        D += prod_excl(i, j, l);
      }
    }
    const Cplx Xi = X.eval(roots[i]);
    const Cplx Yi = Y.eval(roots[i]);
    J(i, i) = 2.0 * Xp.eval(roots[i]) * A + 2.0 * Xi * D
              + Yp.eval(roots[i]) * B + Yi * A;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == i) continue;
      Cplx S(0.0, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == m) continue;
        S += prod_excl(i, j, m);
      }
      J(i, m) = -2.0 * Xi * S - Yi * prod_excl(i, m, m);
    }
  }
  return J;
}

double bae_scale(const OdeSpec& spec, const std::vector<Cplx>& roots) {
  double mz = 1.0;
  for (const Cplx& z : roots) mz = std::max(mz, std::abs(z));
  const double n = std::max<std::size_t>(roots.size(), 1);
  // F_i stacks ~n products of degree n+2 in the roots against the ODE
  // coefficients, so normalize by coeff_scale * n * mz^(n+2).
  return spec.coeff_scale() * n * std::pow(mz, static_cast<double>(roots.size()) + 2.0);
}

double certify_ode(const OdeSpec& spec, const BetheSolution& sol) {
  const ComplexPoly S = ComplexPoly::from_roots(sol.config.roots);
  const ComplexPoly Sp = S.derivative();
  const ComplexPoly Spp = Sp.derivative();
  const ComplexPoly Z({sol.c0, sol.c1, sol.c2});
  const ComplexPoly T = spec.X() * Spp + spec.Y() * Sp + Z * S;
  const double scale = std::max(1.0, spec.coeff_scale() * factorial(spec.n));
  return T.max_abs_coeff() / scale;
}

std::array<double, 4> symmetric_identity_suite(const std::vector<Cplx>& points) {
  const std::size_t n = points.size();
  Cplx s0(0, 0), s1(0, 0), s2(0, 0), s3(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const Cplx inv = 1.0 / (points[i] - points[j]);
      const Cplx zi = points[i];
      s0 += inv;
      s1 += zi * inv;
      s2 += zi * zi * inv;
      s3 += zi * zi * zi * inv;
    }
  }
  Cplx e1(0, 0), p2(0, 0), e2(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    e1 += points[i];
    p2 += points[i] * points[i];
    for (std::size_t j = i + 1; j < n; ++j) e2 += points[i] * points[j];
  }
  const double nn = static_cast<double>(n);
  return {std::abs(s0),
          std::abs(s1 - 0.5 * nn * (nn - 1.0)),
          std::abs(s2 - (nn - 1.0) * e1),
          std::abs(s3 - ((nn - 1.0) * p2 + e2))};
}

bool same_solution(const std::vector<Cplx>& u, const std::vector<Cplx>& v, double sep_tol) {
  if (u.size() != v.size()) return false;
  // Greedy nearest-neighbour matching; adequate for the n <= 6 desk scale.
  std::vector<bool> used(v.size(), false);
  double worst = 0.0;
  for (const Cplx& x : u) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = v.size();
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - v[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    if (best_j == v.size()) return false;
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst < 10.0 * sep_tol;
}

namespace {

double u01(std::mt19937_64& g) {
  // 53-bit uniform in [0, 1); bit-stable across platforms, unlike
  // std::uniform_real_distribution.
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

struct StartGeometry {
  std::vector<Cplx> x_roots;
  std::vector<Cplx> perturb_pool;  // X roots plus their pairwise midpoints
  Cplx centroid{0.0, 0.0};
  double radius = 2.0;
  double x_root_scale = 1.0;
};

StartGeometry start_geometry(const OdeSpec& spec) {
  StartGeometry g;
  g.x_roots = companion_roots(spec.X());
  double max_abs = 0.0;
  if (!g.x_roots.empty()) {
    Cplx c(0.0, 0.0);
    for (const Cplx& r : g.x_roots) {
      c += r;
      max_abs = std::max(max_abs, std::abs(r));
    }
    g.centroid = c / static_cast<double>(g.x_roots.size());
  }
  // Stieltjes electrostatics places Bethe roots among the poles, so starts
  // concentrate on a disk that covers them comfortably.
  g.radius = 2.0 * (1.0 + max_abs);
  g.x_root_scale = 1.0 + max_abs;
  // The candidate pool holds the zeros of X and Y plus all pairwise
  // midpoints.  Zeros of Y matter because solutions can sit far outside the
  // pole disk when the drift is nearly degenerate (for n = 1 they are
  // exactly the zeros of Y), and the uniform disk would never reach them.
  std::vector<Cplx> anchors = g.x_roots;
  for (const Cplx& r : companion_roots(spec.Y())) anchors.push_back(r);
  // Far-field anchors: when the top-degree balance 2(n-1) a_{degX} + b_{degX-1}
  // is small, one root escapes toward infinity while the other m = n-1 stay
  // bounded; to leading order the escaped root solves 2m X(z) + z Y(z) = 0.
  // Adding those roots (for every m) keeps such configurations reachable.
  for (int m = 1; m < spec.n; ++m) {
    std::vector<Cplx> esc(5, Cplx(0.0, 0.0));
    for (std::size_t k = 0; k < 5; ++k) esc[k] = 2.0 * static_cast<double>(m) * spec.a[k];
    for (std::size_t k = 0; k < 4; ++k) esc[k + 1] += spec.b[k];
    for (const Cplx& r : companion_roots(ComplexPoly(std::move(esc)))) anchors.push_back(r);
  }
  g.perturb_pool = anchors;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      g.perturb_pool.push_back(0.5 * (anchors[i] + anchors[j]));
    }
  }
  return g;
}

std::vector<std::vector<Cplx>> generate_starts(const StartGeometry& g, int n, int restarts,
                                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Cplx>> starts;
  starts.reserve(static_cast<std::size_t>(restarts));
  for (int s = 0; s < restarts; ++s) {
    std::vector<Cplx> z(static_cast<std::size_t>(n));
    // Three flavors: a uniform disk over the pole region, perturbed anchors,
    // and (for n >= 2) heavy-tailed outliers where one or more roots take a
    // log-uniform radius far outside the disk.  The outlier flavor covers
    // near-degenerate drifts whose almost-escaped root sits at a scale the
    // disk never reaches and for which no finite anchor exists: when the
    // top balance 2(n-1) a_degX + b_{degX-1} vanishes, the m = n-1 escape
    // polynomial loses its leading coefficient and its "root at infinity"
    // becomes a large finite root fixed only at higher order.
    const bool outlier = (n >= 2) && (s % 4 == 3);
    const bool disk = !outlier && ((s % 2 == 0) || g.perturb_pool.empty());
    int far_count = 0;
    if (outlier) {
      far_count = 1;
      if (n > 2 && u01(rng) < 0.25) {
        far_count = 2 + static_cast<int>(u01(rng) * static_cast<double>(n - 2));
        far_count = std::min(far_count, n - 1);
      }
    }
    for (int i = 0; i < n; ++i) {
      if (outlier && i < far_count) {
        // Log-uniform radius over [2, 200] x disk radius: scale-free
        // coverage of the unknown escape scale, uniform per octave.
        const double r = 2.0 * g.radius * std::pow(100.0, u01(rng));
        const double th = 2.0 * M_PI * u01(rng);
        z[static_cast<std::size_t>(i)] = Cplx(r * std::cos(th), r * std::sin(th));
      } else if (disk || (outlier && g.perturb_pool.empty())) {
        const double r = g.radius * std::sqrt(u01(rng));
        const double th = 2.0 * M_PI * u01(rng);
        z[static_cast<std::size_t>(i)] =
            g.centroid + Cplx(r * std::cos(th), r * std::sin(th));
      } else {
        const std::size_t pick =
            static_cast<std::size_t>(u01(rng) * static_cast<double>(g.perturb_pool.size()));
        const Cplx base = g.perturb_pool[std::min(pick, g.perturb_pool.size() - 1)];
        const double eps = 0.1 * g.x_root_scale;
        z[static_cast<std::size_t>(i)] =
            base + Cplx(eps * (u01(rng) - 0.5), eps * (u01(rng) - 0.5));
      }
    }
    starts.push_back(std::move(z));
  }
  return starts;
}

double max_abs(const std::vector<Cplx>& v) {
  double m = 0.0;
  for (const Cplx& x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm2(const std::vector<Cplx>& v) {
  double s = 0.0;
  for (const Cplx& x : v) s += std::norm(x);
  return std::sqrt(s);
}

// Guard check at a trial point: pairwise separation only.  Coincident roots
// sit on the spurious zero set of the cleared residual (the B factor) and
// can never certify.  Roots are deliberately allowed to approach zeros of X:
// for the cleared form those are not automatically spurious, and degenerate
// but genuine solutions (a solution root coinciding with a shared zero of X
// and Y) do occur; certification is the final arbiter either way.
bool guards_ok(const std::vector<Cplx>& z, const SolverConfig& cfg) {
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (std::abs(z[i] - z[j]) < cfg.sep_tol) return false;
    }
  }
  return true;
}

struct NewtonOutcome {
  bool converged = false;
  std::vector<Cplx> roots;
};

NewtonOutcome newton_from(const OdeSpec& spec, const SolverConfig& cfg,
                          std::vector<Cplx> z) {
  NewtonOutcome out;
  if (!guards_ok(z, cfg)) return out;

  std::vector<Cplx> F = bae_residual_cleared(spec, z);
  double fnorm = norm2(F);
  const std::size_t n = z.size();

  for (int it = 0; it < cfg.max_iters; ++it) {
    const double scale = bae_scale(spec, z);
    if (max_abs(F) <= cfg.newton_tol * scale) {
      out.converged = true;
      out.roots = std::move(z);
      return out;
    }
    Eigen::MatrixXcd J = bae_jacobian(spec, z);
    Eigen::VectorXcd rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = -F[i];
    Eigen::VectorXcd dz = J.fullPivLu().solve(rhs);
    if (!dz.allFinite()) return out;

    // Backtracking line search on ||F||_2; trial points that violate the
    // separation/pole guards count as rejected and shrink the step.
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 40; ++bt) {
      std::vector<Cplx> trial(n);
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = z[i] + t * dz(static_cast<Eigen::Index>(i));
      }
      if (guards_ok(trial, cfg)) {
        std::vector<Cplx> Ft = bae_residual_cleared(spec, trial);
        const double fn = norm2(Ft);
        if (fn < fnorm * (1.0 - 1e-4 * t) || fn < 1e-300) {
          z = std::move(trial);
          F = std::move(Ft);
          fnorm = fn;
          accepted = true;
          break;
        }
      }
      t *= cfg.damping;
    }
    if (!accepted) return out;  // stalled: no productive step survives the guards
  }
  // Iteration budget exhausted; accept only if the residual already meets
  // the convergence gate.
  if (max_abs(F) <= cfg.newton_tol * bae_scale(spec, z)) {
    out.converged = true;
    out.roots = std::move(z);
  }
  return out;
}

bool x_multiple_roots(const std::vector<Cplx>& x_roots) {
  double scale = 1.0;
  for (const Cplx& r : x_roots) scale = std::max(scale, std::abs(r));
  for (std::size_t i = 0; i < x_roots.size(); ++i) {
    for (std::size_t j = i + 1; j < x_roots.size(); ++j) {
      if (std::abs(x_roots[i] - x_roots[j]) < 1e-8 * scale) return true;
    }
  }
  return false;
}

}  // namespace

SolveReport solve_all_report(const OdeSpec& spec, const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  SolveReport report;

  const StartGeometry geom = start_geometry(spec);
  report.x_has_multiple_roots = x_multiple_roots(geom.x_roots);

  if (spec.n == 0) {
    // S = 1 is always a valid degree-0 solution: all symmetric sums are
    // empty and Z collapses to the zero polynomial, so T = X*0 + Y*0 + Z*1
    // certifies identically.
    BetheSolution sol;
    sol.c2 = coeff_c2(spec);
    sol.c1 = coeff_c1(spec, sol.config);
    sol.c0 = coeff_c0(spec, sol.config);
    sol.bae_residual = 0.0;
    sol.ode_residual = certify_ode(spec, sol);
    sol.certified = sol.ode_residual <= cfg.cert_tol;
    if (sol.certified) report.solutions.push_back(std::move(sol));
    report.starts_attempted = 1;
    report.starts_converged = 1;
    return report;
  }

  const auto starts = generate_starts(geom, spec.n, cfg.restarts, cfg.seed);
  report.starts_attempted = static_cast<int>(starts.size());

  std::vector<NewtonOutcome> outcomes(starts.size());
  const int threads = std::min<int>(thread_cap(), static_cast<int>(starts.size()));
  if (threads <= 1) {
    for (std::size_t s = 0; s < starts.size(); ++s) {
      outcomes[s] = newton_from(spec, cfg, starts[s]);
    }
  } else {
    // Each worker owns a strided slice of the pre-generated start list and
    // writes only its own outcome slots; the merge below runs in start
    // order, so the result set does not depend on the thread count.
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t s = static_cast<std::size_t>(t); s < starts.size();
             s += static_cast<std::size_t>(threads)) {
          outcomes[s] = newton_from(spec, cfg, starts[s]);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const NewtonOutcome& oc : outcomes) {
    if (!oc.converged) continue;
    ++report.starts_converged;
    BetheSolution sol;
    sol.config.roots = oc.roots;
    sort_canonical(sol.config.roots);

    bool duplicate = false;
    for (const BetheSolution& seen : report.solutions) {
      if (same_solution(sol.config.roots, seen.config.roots, cfg.sep_tol)) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    sol.c2 = coeff_c2(spec);
    sol.c1 = coeff_c1(spec, sol.config);
    sol.c0 = coeff_c0(spec, sol.config);
    const auto F = bae_residual_cleared(spec, sol.config.roots);
    sol.bae_residual = max_abs(F) / bae_scale(spec, sol.config.roots);
    sol.ode_residual = certify_ode(spec, sol);
    sol.certified = sol.ode_residual <= cfg.cert_tol && sol.bae_residual <= cfg.cert_tol;
    if (sol.certified) report.solutions.push_back(std::move(sol));
  }

  // Canonical ordering with a noise floor.  Conjugate-pair solutions of a
  // real-coefficient operator share the real parts of their accessory
  // constants exactly, so comparing raw doubles would let ~1e-14 polish
  // noise pick their order (and flip it between otherwise identical runs).
  // A component only decides the order when it differs beyond the floor;
  // distinct certified solutions separate by many orders of magnitude more
  // than the floor in some component, so the relation totally orders every
  // deduplicated set.  Insertion sort is used deliberately: a tolerance
  // comparator is not a strict weak ordering in general and must not be
  // handed to std::sort.
  auto fuzzy_less = [](const BetheSolution& u, const BetheSolution& v) {
    auto decide = [](double x, double y, bool& out) {
      const double tol = 1e-7 * std::max({1.0, std::abs(x), std::abs(y)});
      if (std::abs(x - y) > tol) {
        out = x < y;
        return true;
      }
      return false;
    };
    bool out = false;
    if (decide(u.c0.real(), v.c0.real(), out)) return out;
    if (decide(u.c0.imag(), v.c0.imag(), out)) return out;
    if (decide(u.c1.real(), v.c1.real(), out)) return out;
    if (decide(u.c1.imag(), v.c1.imag(), out)) return out;
    if (decide(u.c2.real(), v.c2.real(), out)) return out;
    if (decide(u.c2.imag(), v.c2.imag(), out)) return out;
    for (std::size_t i = 0; i < u.config.roots.size(); ++i) {
      if (decide(u.config.roots[i].real(), v.config.roots[i].real(), out)) return out;
      if (decide(u.config.roots[i].imag(), v.config.roots[i].imag(), out)) return out;
    }
    return false;
  };
  for (std::size_t i = 1; i < report.solutions.size(); ++i) {
    BetheSolution cur = std::move(report.solutions[i]);
    std::size_t j = i;
    while (j > 0 && fuzzy_less(cur, report.solutions[j - 1])) {
      report.solutions[j] = std::move(report.solutions[j - 1]);
      --j;
    }
    report.solutions[j] = std::move(cur);
  }
  return report;
}

std::vector<BetheSolution> solve_all(const OdeSpec& spec, const SolverConfig& cfg) {
  return solve_all_report(spec, cfg).solutions;
}

}  // namespace qes
