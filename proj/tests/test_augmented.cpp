#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "qes/augmented.hpp"
#include "qes/bethe.hpp"
#include "qes/ode_spec.hpp"

using qes::AugmentedSolution;
using qes::AugmentedSystem;
using qes::Cplx;
using qes::OdeSpec;
using qes::ParamBox;
using qes::SolverConfig;

namespace {

// X = 1, Y = -2z + p: the one-root balance forces z1 = p/2.
AugmentedSystem linear_drift_system(int n) {
  AugmentedSystem sys;
  sys.n = n;
  sys.spec_builder = [](const std::vector<Cplx>& p) {
    OdeSpec spec;
    spec.a[0] = Cplx(1.0, 0.0);
    spec.b[1] = Cplx(-2.0, 0.0);
    spec.b[0] = p.empty() ? Cplx(0.0, 0.0) : p[0];
    spec.n = 1;
    return spec;
  };
  return sys;
}

}  // namespace

TEST_CASE("no parameters and no constraints reduces exactly to the root solver") {
  OdeSpec spec;
  spec.a = {Cplx(-0.5, 0.0), Cplx(0.3, 0.0), Cplx(1.0, 0.0), Cplx(0.0, 0.0), Cplx(0.0, 0.0)};
  spec.b = {Cplx(-0.2, 0.0), Cplx(0.7, 0.0), Cplx(0.0, 0.0), Cplx(0.0, 0.0)};
  spec.n = 2;

  SolverConfig cfg;
  cfg.restarts = 300;
  cfg.seed = 4;

  AugmentedSystem sys;
  sys.n = spec.n;
  sys.spec_builder = [spec](const std::vector<Cplx>&) { return spec; };

  const auto direct = qes::solve_all(spec, cfg);
  const auto wrapped = qes::solve_augmented(sys, cfg);
  REQUIRE(!direct.empty());
  REQUIRE(wrapped.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(wrapped[i].params.empty());
    CHECK(wrapped[i].solution.c2 == direct[i].c2);
    CHECK(wrapped[i].solution.c1 == direct[i].c1);
    CHECK(wrapped[i].solution.c0 == direct[i].c0);
    CHECK(wrapped[i].solution.bae_residual == direct[i].bae_residual);
    CHECK(wrapped[i].solution.ode_residual == direct[i].ode_residual);
    REQUIRE(wrapped[i].solution.config.roots.size() == direct[i].config.roots.size());
    for (std::size_t k = 0; k < direct[i].config.roots.size(); ++k) {
      CHECK(wrapped[i].solution.config.roots[k] == direct[i].config.roots[k]);
    }
  }
}

TEST_CASE("square parameterized system recovers the pinned parameter") {
  AugmentedSystem sys = linear_drift_system(1);
  sys.param_names = {"p"};
  sys.param_boxes = {ParamBox{0.5, 4.0, -0.5, 0.5}};
  sys.param_real = {false};
  // Pin the root at 1.5, which forces p = 3.
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 200;
  const auto sols = qes::solve_augmented(sys, cfg);
  REQUIRE(sols.size() == 1);
  const auto& s = sols[0];
  REQUIRE(s.params.size() == 1);
  CHECK(std::abs(s.params[0] - Cplx(3.0, 0.0)) < 1e-9);
  CHECK(std::abs(s.solution.config.roots[0] - Cplx(1.5, 0.0)) < 1e-9);
  CHECK(s.param_names.size() == 1);
  CHECK(s.param_names[0] == "p");
  CHECK(s.constraint_residual <= cfg.cert_tol);
  CHECK(s.solution.ode_residual <= cfg.cert_tol);

  // The stacked residual vanishes at the accepted point and reacts to a
  // parameter shift.
  const double at = qes::augmented_residual_max(sys, s.params, s.solution.config.roots);
  CHECK(at <= 1e-11);
  const double off =
      qes::augmented_residual_max(sys, {s.params[0] + Cplx(0.05, 0.0)}, s.solution.config.roots);
  CHECK(off > 1e-3);
}

TEST_CASE("accepted least-squares points are stationary") {
  AugmentedSystem sys = linear_drift_system(1);
  sys.param_names = {"p"};
  sys.param_boxes = {ParamBox{0.5, 4.0, -0.5, 0.5}};
  sys.param_real = {false};
  // Two consistent constraints: over-determined but solvable.
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });
  sys.constraints.push_back(
      [](const std::vector<Cplx>& params, const std::vector<Cplx>&) {
        return params[0] - Cplx(3.0, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 200;
  const auto sols = qes::solve_augmented(sys, cfg);
  REQUIRE(sols.size() == 1);
  for (const auto& s : sols) {
    const double rnorm = qes::augmented_residual_max(sys, s.params, s.solution.config.roots);
    CHECK(s.stationarity <= 1e-8 * (1.0 + rnorm));
    CHECK(s.constraint_residual <= cfg.cert_tol);
  }
}

TEST_CASE("inconsistent over-determined systems expose nothing") {
  AugmentedSystem sys = linear_drift_system(1);
  sys.param_names = {"p"};
  sys.param_boxes = {ParamBox{0.5, 4.0, -0.5, 0.5}};
  sys.param_real = {false};
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(2.0, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 150;
  const auto sols = qes::solve_augmented(sys, cfg);
  CHECK(sols.empty());
}

TEST_CASE("real-declared parameters stay exactly real") {
  AugmentedSystem sys = linear_drift_system(1);
  sys.param_names = {"p"};
  sys.param_boxes = {ParamBox{0.5, 4.0, 0.0, 0.0}};
  sys.param_real = {true};
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 200;
  const auto sols = qes::solve_augmented(sys, cfg);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0].params[0].imag() == 0.0);
  CHECK(std::abs(sols[0].params[0].real() - 3.0) < 1e-9);
}

TEST_CASE("verbatim parameter seeds are honored") {
  AugmentedSystem sys = linear_drift_system(1);
  sys.param_names = {"p"};
  sys.param_boxes = {ParamBox{0.5, 4.0, 0.0, 0.0}};
  sys.param_real = {true};
  sys.param_seeds = {{Cplx(3.0, 0.0)}};
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 25;  // tiny budget: the exact seed must carry it
  const auto sols = qes::solve_augmented(sys, cfg);
  REQUIRE(sols.size() == 1);
  CHECK(std::abs(sols[0].params[0] - Cplx(3.0, 0.0)) < 1e-9);
}

TEST_CASE("under-determined systems are outside the contract") {
  // One balance equation, one constraint, three unknowns: rejected outright
  // rather than silently picking a point on the solution curve.
  AugmentedSystem sys = linear_drift_system(1);
  sys.param_names = {"p", "q"};
  sys.param_boxes = {ParamBox{0.5, 4.0, 0.0, 0.0}, ParamBox{-1.0, 1.0, 0.0, 0.0}};
  sys.param_real = {true, true};
  sys.spec_builder = [](const std::vector<Cplx>& p) {
    OdeSpec spec;
    spec.a[0] = Cplx(1.0, 0.0);
    spec.b[1] = Cplx(-2.0, 0.0);
    spec.b[0] = p[0];
    spec.n = 1;
    return spec;
  };
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 50;
  CHECK(qes::solve_augmented(sys, cfg).empty());
}

TEST_CASE("unconstrained parameters are reported free") {
  // A square system whose residual is independent of q: the Jacobian is
  // singular along that direction, q parks wherever it started, and the
  // free-parameter probe must name it.
  AugmentedSystem sys;
  sys.n = 1;
  sys.param_names = {"p", "q"};
  sys.param_boxes = {ParamBox{0.5, 4.0, 0.0, 0.0}, ParamBox{-1.0, 1.0, 0.0, 0.0}};
  sys.param_real = {true, true};
  sys.param_seeds = {{Cplx(3.0, 0.0), Cplx(0.7, 0.0)}};
  sys.spec_builder = [](const std::vector<Cplx>& p) {
    OdeSpec spec;
    spec.a[0] = Cplx(1.0, 0.0);
    spec.b[1] = Cplx(-2.0, 0.0);
    spec.b[0] = p[0];
    spec.n = 1;
    return spec;
  };
  sys.constraints.push_back(
      [](const std::vector<Cplx>&, const std::vector<Cplx>& roots) {
        return roots[0] - Cplx(1.5, 0.0);
      });
  sys.constraints.push_back(
      [](const std::vector<Cplx>& params, const std::vector<Cplx>&) {
        return params[0] - Cplx(3.0, 0.0);
      });

  SolverConfig cfg;
  cfg.restarts = 60;
  const auto sols = qes::solve_augmented(sys, cfg);
  REQUIRE(!sols.empty());
  const auto free_names = qes::free_parameter_detect(sys, sols[0], cfg);
  CHECK(std::find(free_names.begin(), free_names.end(), "q") != free_names.end());
  CHECK(std::find(free_names.begin(), free_names.end(), "p") == free_names.end());
}
