#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <variant>
#include <vector>

#include "qes/bethe.hpp"
#include "qes/forms.hpp"
#include "qes/ode_spec.hpp"

using qes::AnyForm;
using qes::Cplx;
using qes::GHeun1Form;
using qes::GHeun2Form;
using qes::GHeun3Form;
using qes::GHeun4Form;
using qes::HeunForm;
using qes::OdeSpec;
using qes::SolverConfig;

namespace {

double cdist(Cplx u, Cplx v) { return std::abs(u - v); }

double relgap(Cplx u, Cplx v) { return std::abs(u - v) / std::max({1.0, std::abs(u), std::abs(v)}); }

Cplx rand_cplx(std::mt19937_64& rng, double box) {
  std::uniform_real_distribution<double> d(-box, box);
  const double re = d(rng);
  const double im = d(rng);
  return Cplx(re, im);
}

std::vector<Cplx> rand_roots(std::mt19937_64& rng, int n) {
  std::vector<Cplx> r(static_cast<std::size_t>(n));
  for (auto& z : r) z = rand_cplx(rng, 1.5);
  return r;
}

Cplx sum(const std::vector<Cplx>& v) {
  Cplx s(0.0, 0.0);
  for (const Cplx& x : v) s += x;
  return s;
}

Cplx sum_sq(const std::vector<Cplx>& v) {
  Cplx s(0.0, 0.0);
  for (const Cplx& x : v) s += x * x;
  return s;
}

Cplx pair_sum(const std::vector<Cplx>& v) {
  Cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) s += v[i] * v[j];
  return s;
}

}  // namespace

TEST_CASE("pole-form expansion reproduces the confined-atom operator") {
  const double delta = 2.0, gamma = 1.0;
  HeunForm form;
  form.d = {Cplx(0.0, 0.0), Cplx(-1.0, 0.0), Cplx(1.0, 0.0)};
  const Cplx shared((delta - 1.0 / gamma) / 2.0, 0.0);
  form.alpha = {Cplx(1.0 / gamma, 0.0), shared, shared};
  const OdeSpec spec = qes::to_spec(form, 1);
  // X = z (z+1)(z-1) = z^3 - z.
  CHECK(cdist(spec.a[3], Cplx(1.0, 0.0)) < 1e-14);
  CHECK(cdist(spec.a[2], Cplx(0.0, 0.0)) < 1e-14);
  CHECK(cdist(spec.a[1], Cplx(-1.0, 0.0)) < 1e-14);
  CHECK(cdist(spec.a[0], Cplx(0.0, 0.0)) < 1e-14);
  // Y = delta z^2 - 1/gamma.
  CHECK(cdist(spec.b[2], Cplx(delta, 0.0)) < 1e-13);
  CHECK(cdist(spec.b[1], Cplx(0.0, 0.0)) < 1e-13);
  CHECK(cdist(spec.b[0], Cplx(-1.0 / gamma, 0.0)) < 1e-13);
}

TEST_CASE("quartic pole set reproduces the sextic-mode potential polynomial") {
  const double w = 2.0;  // 1/eps^2
  const double s = std::sqrt(w);
  GHeun1Form form;
  form.e = {Cplx(1.0, 0.0), Cplx(-1.0, 0.0), Cplx(0.0, s), Cplx(0.0, -s)};
  form.mu = {Cplx(0.5, 0.0), Cplx(0.5, 0.0), Cplx(0.5, 0.0), Cplx(0.5, 0.0)};
  const OdeSpec spec = qes::to_spec(form, 2);
  // X = (z^2 - 1)(z^2 + w) = z^4 + (w-1) z^2 - w.
  CHECK(cdist(spec.a[4], Cplx(1.0, 0.0)) < 1e-14);
  CHECK(cdist(spec.a[3], Cplx(0.0, 0.0)) < 1e-13);
  CHECK(cdist(spec.a[2], Cplx(w - 1.0, 0.0)) < 1e-13);
  CHECK(cdist(spec.a[1], Cplx(0.0, 0.0)) < 1e-13);
  CHECK(cdist(spec.a[0], Cplx(-w, 0.0)) < 1e-13);
}

TEST_CASE("zero exponents produce a zero drift polynomial") {
  HeunForm form;
  form.d = {Cplx(0.0, 0.0), Cplx(2.0, 0.0), Cplx(-1.0, 1.0)};
  form.alpha = {Cplx(0.0, 0.0), Cplx(0.0, 0.0), Cplx(0.0, 0.0)};
  const OdeSpec spec = qes::to_spec(form, 2);
  for (const Cplx& b : spec.b) CHECK(std::abs(b) == 0.0);
}

TEST_CASE("coincident poles are rejected") {
  HeunForm form;
  form.d = {Cplx(1.0, 0.0), Cplx(1.0, 0.0), Cplx(2.0, 0.0)};
  form.alpha = {Cplx(1.0, 0.0), Cplx(1.0, 0.0), Cplx(1.0, 0.0)};
  CHECK_THROWS_AS(qes::to_spec(form, 1), std::invalid_argument);
}

TEST_CASE("shape-specialized constants: stated examples") {
  std::mt19937_64 rng(3);

  // Cubic-pole shape: c2 absent, c1 = -n [n-1 + sum alpha_s].
  HeunForm heun;
  heun.d = {Cplx(0.0, 0.0), Cplx(1.0, 0.0), Cplx(-1.0, 0.0)};
  heun.alpha = {rand_cplx(rng, 1.0), rand_cplx(rng, 1.0), rand_cplx(rng, 1.0)};
  const int n = 2;
  const auto ac = qes::appendix_coeffs(heun, n, rand_roots(rng, n));
  CHECK(!ac.c2.has_value());
  const Cplx alpha_sum = heun.alpha[0] + heun.alpha[1] + heun.alpha[2];
  CHECK(cdist(ac.c1, -static_cast<double>(n) * (n - 1.0 + alpha_sum)) < 1e-13);

  // Quadratic-pole shape: c2 = -n sigma; sigma = 0 kills it.
  GHeun3Form g3;
  g3.g1 = Cplx(0.3, 0.0);
  g3.g2 = Cplx(-0.9, 0.2);
  g3.sigma1 = rand_cplx(rng, 1.0);
  g3.sigma2 = rand_cplx(rng, 1.0);
  g3.sigma = Cplx(0.7, -0.1);
  g3.kappa = rand_cplx(rng, 1.0);
  const auto ac3 = qes::appendix_coeffs(g3, 3, rand_roots(rng, 3));
  REQUIRE(ac3.c2.has_value());
  CHECK(cdist(*ac3.c2, -3.0 * g3.sigma) < 1e-13);
  g3.sigma = Cplx(0.0, 0.0);
  const auto ac3z = qes::appendix_coeffs(g3, 3, rand_roots(rng, 3));
  CHECK(std::abs(*ac3z.c2) == 0.0);

  // Linear-pole shape with a vanishing polynomial drift part: all three
  // constants vanish regardless of the roots.
  GHeun4Form g4;
  g4.h = Cplx(0.4, 0.0);
  g4.eta = rand_cplx(rng, 1.0);
  g4.lambda = g4.gamma = g4.delta = Cplx(0.0, 0.0);
  const auto ac4 = qes::appendix_coeffs(g4, 2, rand_roots(rng, 2));
  REQUIRE(ac4.c2.has_value());
  CHECK(std::abs(*ac4.c2) == 0.0);
  CHECK(std::abs(ac4.c1) == 0.0);
  CHECK(std::abs(ac4.c0) == 0.0);
}

TEST_CASE("exponents at infinity satisfy the residual identity") {
  std::mt19937_64 rng(5);
  HeunForm form;
  form.d = {Cplx(0.0, 0.0), Cplx(1.0, 0.0), Cplx(-1.0, 0.0)};
  form.alpha = {rand_cplx(rng, 2.0), rand_cplx(rng, 2.0), rand_cplx(rng, 2.0)};
  const auto f3 = qes::fuchsian_check(form, 3);
  CHECK(f3.residual <= 1e-15);
  CHECK(cdist(f3.alpha_param, Cplx(-3.0, 0.0)) == 0.0);

  form.alpha = {Cplx(1.0, 0.0), Cplx(0.5, 0.0), Cplx(0.5, 0.0)};  // sum = 2
  const auto f1 = qes::fuchsian_check(form, 1);
  CHECK(cdist(f1.alpha_param, Cplx(-1.0, 0.0)) == 0.0);
  CHECK(cdist(f1.beta_param, Cplx(2.0, 0.0)) < 1e-15);
  CHECK(f1.residual <= 1e-15);
}

TEST_CASE("specialized constants agree with the general formulas on certified data") {
  std::mt19937_64 rng(7);
  const int n = 2;
  std::vector<AnyForm> forms;
  {
    HeunForm f;
    f.d = {Cplx(0.1, -0.2), Cplx(1.2, 0.3), Cplx(-1.0, 0.1)};
    for (auto& a : f.alpha) a = rand_cplx(rng, 1.0);
    forms.push_back(f);
  }
  {
    GHeun1Form f;
    f.e = {Cplx(1.1, 0.0), Cplx(-0.9, 0.2), Cplx(0.2, 1.0), Cplx(0.1, -1.2)};
    for (auto& m : f.mu) m = rand_cplx(rng, 1.0);
    forms.push_back(f);
  }
  {
    GHeun2Form f;
    f.f = {Cplx(0.0, 0.3), Cplx(1.0, -0.4), Cplx(-1.1, 0.0)};
    for (auto& v : f.nu_s) v = rand_cplx(rng, 1.0);
    f.nu = Cplx(0.8, 0.1);
    forms.push_back(f);
  }
  {
    GHeun3Form f;
    f.g1 = Cplx(0.6, 0.1);
    f.g2 = Cplx(-0.7, -0.2);
    f.sigma1 = rand_cplx(rng, 1.0);
    f.sigma2 = rand_cplx(rng, 1.0);
    f.sigma = Cplx(0.9, 0.0);
    f.kappa = rand_cplx(rng, 1.0);
    forms.push_back(f);
  }
  {
    GHeun4Form f;
    f.h = Cplx(0.2, -0.1);
    f.eta = rand_cplx(rng, 1.0);
    f.lambda = Cplx(0.7, 0.2);
    f.gamma = rand_cplx(rng, 1.0);
    f.delta = rand_cplx(rng, 1.0);
    forms.push_back(f);
  }

  for (const AnyForm& form : forms) {
    const OdeSpec spec = qes::to_spec(form, n);
    SolverConfig cfg;
    cfg.restarts = 500;
    const auto sols = qes::solve_all(spec, cfg);
    REQUIRE(!sols.empty());
    for (std::size_t k = 0; k < std::min<std::size_t>(sols.size(), 2); ++k) {
      const auto& sol = sols[k];
      const auto ac = qes::appendix_coeffs(form, n, sol.config.roots);
      if (ac.c2.has_value()) {
        CHECK(relgap(*ac.c2, sol.c2) <= 1e-10);
      } else {
        CHECK(std::abs(sol.c2) <= 1e-12);
      }
      CHECK(relgap(ac.c1, sol.c1) <= 1e-10);
      CHECK(relgap(ac.c0, sol.c0) <= 1e-10);

      // The partial-fraction balance equations hold at the same roots.
      CHECK(qes::pole_form_bae_residual(form, sol.config.roots) <= cfg.cert_tol);
    }
  }
}

TEST_CASE("round trip through raw coefficients recovers each shape") {
  std::mt19937_64 rng(11);

  HeunForm heun;
  heun.d = {Cplx(-1.2, 0.0), Cplx(0.3, 0.4), Cplx(1.1, -0.3)};
  for (auto& a : heun.alpha) a = rand_cplx(rng, 1.0);
  const AnyForm back_h = qes::from_spec(qes::to_spec(heun, 2));
  REQUIRE(std::holds_alternative<HeunForm>(back_h));
  const auto& rh = std::get<HeunForm>(back_h);
  for (int s = 0; s < 3; ++s) {
    CHECK(cdist(rh.d[static_cast<std::size_t>(s)], heun.d[static_cast<std::size_t>(s)]) <= 1e-10);
    CHECK(cdist(rh.alpha[static_cast<std::size_t>(s)], heun.alpha[static_cast<std::size_t>(s)]) <=
          1e-10);
  }

  GHeun1Form g1;
  g1.e = {Cplx(-1.4, 0.1), Cplx(-0.2, -0.5), Cplx(0.5, 0.6), Cplx(1.3, 0.0)};
  for (auto& m : g1.mu) m = rand_cplx(rng, 1.0);
  const AnyForm back_1 = qes::from_spec(qes::to_spec(g1, 2));
  REQUIRE(std::holds_alternative<GHeun1Form>(back_1));
  const auto& r1 = std::get<GHeun1Form>(back_1);
  for (int s = 0; s < 4; ++s) {
    CHECK(cdist(r1.e[static_cast<std::size_t>(s)], g1.e[static_cast<std::size_t>(s)]) <= 1e-10);
    CHECK(cdist(r1.mu[static_cast<std::size_t>(s)], g1.mu[static_cast<std::size_t>(s)]) <= 1e-10);
  }

  GHeun2Form g2;
  g2.f = {Cplx(-1.0, 0.2), Cplx(0.2, -0.3), Cplx(1.2, 0.1)};
  for (auto& v : g2.nu_s) v = rand_cplx(rng, 1.0);
  g2.nu = Cplx(0.9, -0.4);
  const AnyForm back_2 = qes::from_spec(qes::to_spec(g2, 2));
  REQUIRE(std::holds_alternative<GHeun2Form>(back_2));
  const auto& r2 = std::get<GHeun2Form>(back_2);
  CHECK(cdist(r2.nu, g2.nu) <= 1e-10);
  for (int s = 0; s < 3; ++s) {
    CHECK(cdist(r2.f[static_cast<std::size_t>(s)], g2.f[static_cast<std::size_t>(s)]) <= 1e-10);
    CHECK(cdist(r2.nu_s[static_cast<std::size_t>(s)], g2.nu_s[static_cast<std::size_t>(s)]) <=
          1e-10);
  }

  GHeun3Form g3;
  g3.g1 = Cplx(-0.8, 0.0);
  g3.g2 = Cplx(0.9, 0.3);
  g3.sigma1 = rand_cplx(rng, 1.0);
  g3.sigma2 = rand_cplx(rng, 1.0);
  g3.sigma = Cplx(0.6, 0.2);
  g3.kappa = rand_cplx(rng, 1.0);
  const AnyForm back_3 = qes::from_spec(qes::to_spec(g3, 2));
  REQUIRE(std::holds_alternative<GHeun3Form>(back_3));
  const auto& r3 = std::get<GHeun3Form>(back_3);
  CHECK(cdist(r3.g1, g3.g1) <= 1e-10);
  CHECK(cdist(r3.g2, g3.g2) <= 1e-10);
  CHECK(cdist(r3.sigma1, g3.sigma1) <= 1e-10);
  CHECK(cdist(r3.sigma2, g3.sigma2) <= 1e-10);
  CHECK(cdist(r3.sigma, g3.sigma) <= 1e-10);
  CHECK(cdist(r3.kappa, g3.kappa) <= 1e-10);

  GHeun4Form g4;
  g4.h = Cplx(0.35, -0.2);
  g4.eta = rand_cplx(rng, 1.0);
  g4.lambda = Cplx(0.5, 0.1);
  g4.gamma = rand_cplx(rng, 1.0);
  g4.delta = rand_cplx(rng, 1.0);
  const AnyForm back_4 = qes::from_spec(qes::to_spec(g4, 2));
  REQUIRE(std::holds_alternative<GHeun4Form>(back_4));
  const auto& r4 = std::get<GHeun4Form>(back_4);
  CHECK(cdist(r4.h, g4.h) <= 1e-10);
  CHECK(cdist(r4.eta, g4.eta) <= 1e-10);
  CHECK(cdist(r4.lambda, g4.lambda) <= 1e-10);
  CHECK(cdist(r4.gamma, g4.gamma) <= 1e-10);
  CHECK(cdist(r4.delta, g4.delta) <= 1e-10);
}

TEST_CASE("quartic-pole symmetric combinations match their per-term sums") {
  // The implementation expands the two exponent/pole combinations through
  // elementary symmetric polynomials; this pins them to the plain per-term
  // sums  P = sum_s mu_s * (sum of the other poles)  and
  // Q = sum_s mu_s * (pair sum of the other poles).
  std::mt19937_64 rng(13);
  for (int iter = 0; iter < 10; ++iter) {
    GHeun1Form f;
    f.e = {rand_cplx(rng, 1.5), rand_cplx(rng, 1.5) + Cplx(3, 0), rand_cplx(rng, 1.5) + Cplx(0, 3),
           rand_cplx(rng, 1.5) - Cplx(3, 0)};
    for (auto& m : f.mu) m = rand_cplx(rng, 1.5);
    const int n = 2;
    const auto roots = rand_roots(rng, n);

    const Cplx M1 = f.mu[0] + f.mu[1] + f.mu[2] + f.mu[3];
    const Cplx E1 = f.e[0] + f.e[1] + f.e[2] + f.e[3];
    Cplx E2(0.0, 0.0);
    for (int s = 0; s < 4; ++s)
      for (int t = s + 1; t < 4; ++t)
        E2 += f.e[static_cast<std::size_t>(s)] * f.e[static_cast<std::size_t>(t)];
    Cplx P(0.0, 0.0), Q(0.0, 0.0);
    for (int s = 0; s < 4; ++s) {
      Cplx others(0.0, 0.0), pair(0.0, 0.0);
      for (int t = 0; t < 4; ++t) {
        if (t == s) continue;
        others += f.e[static_cast<std::size_t>(t)];
        for (int u = t + 1; u < 4; ++u) {
          if (u == s) continue;
          pair += f.e[static_cast<std::size_t>(t)] * f.e[static_cast<std::size_t>(u)];
        }
      }
      P += f.mu[static_cast<std::size_t>(s)] * others;
      Q += f.mu[static_cast<std::size_t>(s)] * pair;
    }

    const double nn = n;
    const Cplx Sz = sum(roots), Sz2 = sum_sq(roots), Szz = pair_sum(roots);
    const Cplx c1_lit = -(M1 + 2.0 * (nn - 1.0)) * Sz + nn * ((nn - 1.0) * E1 + P);
    const Cplx c0_lit = -(M1 + 2.0 * (nn - 1.0)) * Sz2 - 2.0 * Szz +
                        (2.0 * (nn - 1.0) * E1 + P) * Sz - nn * (nn - 1.0) * E2 - nn * Q;

    const auto ac = qes::appendix_coeffs(f, n, roots);
    CHECK(cdist(ac.c1, c1_lit) <= 1e-11 * std::max(1.0, std::abs(c1_lit)));
    CHECK(cdist(ac.c0, c0_lit) <= 1e-11 * std::max(1.0, std::abs(c0_lit)));
  }
}

TEST_CASE("transcription guards: sign-flipped constant-term variants disagree") {
  // Two historically plausible misprints of the quartic-pole and
  // constant-drift constant terms: flipping the trailing block of signs.
  // The implemented formulas must match the general theorem expressions;
  // the flipped variants must visibly disagree on generic data.
  std::mt19937_64 rng(17);

  GHeun1Form f;
  f.e = {Cplx(1.1, 0.0), Cplx(-0.9, 0.2), Cplx(0.2, 1.0), Cplx(0.1, -1.2)};
  for (auto& m : f.mu) m = rand_cplx(rng, 1.0);
  const int n = 2;
  const auto roots = rand_roots(rng, n);
  const OdeSpec spec = qes::to_spec(f, n);
  qes::RootConfig rc;
  rc.roots = roots;
  const Cplx c0_theorem = qes::coeff_c0(spec, rc);
  const auto ac = qes::appendix_coeffs(f, n, roots);
  CHECK(relgap(ac.c0, c0_theorem) <= 1e-11);

  const Cplx M1 = f.mu[0] + f.mu[1] + f.mu[2] + f.mu[3];
  const Cplx E1 = f.e[0] + f.e[1] + f.e[2] + f.e[3];
  Cplx E2(0.0, 0.0);
  for (int s = 0; s < 4; ++s)
    for (int t = s + 1; t < 4; ++t)
      E2 += f.e[static_cast<std::size_t>(s)] * f.e[static_cast<std::size_t>(t)];
  Cplx P(0.0, 0.0), Q(0.0, 0.0);
  for (int s = 0; s < 4; ++s) {
    Cplx others(0.0, 0.0), pair(0.0, 0.0);
    for (int t = 0; t < 4; ++t) {
      if (t == s) continue;
      others += f.e[static_cast<std::size_t>(t)];
      for (int u = t + 1; u < 4; ++u) {
        if (u == s) continue;
        pair += f.e[static_cast<std::size_t>(t)] * f.e[static_cast<std::size_t>(u)];
      }
    }
    P += f.mu[static_cast<std::size_t>(s)] * others;
    Q += f.mu[static_cast<std::size_t>(s)] * pair;
  }
  const double nn = n;
  const Cplx Sz = sum(roots), Sz2 = sum_sq(roots), Szz = pair_sum(roots);
  const Cplx c0_flipped = -(M1 + 2.0 * (nn - 1.0)) * Sz2 + 2.0 * Szz -
                          (2.0 * (nn - 1.0) * E1 + P) * Sz + nn * (nn - 1.0) * E2 + nn * Q;
  CHECK(relgap(c0_flipped, c0_theorem) > 1e-3);

  // Constant-drift shape: flipping the final bracket of its constant term.
  GHeun2Form g;
  g.f = {Cplx(0.0, 0.3), Cplx(1.0, -0.4), Cplx(-1.1, 0.0)};
  for (auto& v : g.nu_s) v = rand_cplx(rng, 1.0);
  g.nu = Cplx(0.8, 0.1);
  const auto roots2 = rand_roots(rng, n);
  const OdeSpec spec2 = qes::to_spec(g, n);
  qes::RootConfig rc2;
  rc2.roots = roots2;
  const Cplx c0_theorem2 = qes::coeff_c0(spec2, rc2);
  const auto ac2 = qes::appendix_coeffs(g, n, roots2);
  CHECK(relgap(ac2.c0, c0_theorem2) <= 1e-11);

  // The correct constant term carries  -n [nu F2 - sum_s nu_s (F1 - f_s)];
  // the misprint carries the same bracket with a plus sign, so the two
  // differ by exactly twice that block.
  const Cplx F2 = g.f[0] * g.f[1] + g.f[0] * g.f[2] + g.f[1] * g.f[2];
  const Cplx mixed = g.nu_s[0] * (g.f[1] + g.f[2]) + g.nu_s[1] * (g.f[0] + g.f[2]) +
                     g.nu_s[2] * (g.f[0] + g.f[1]);
  const Cplx c0_flipped2 = ac2.c0 + 2.0 * nn * (g.nu * F2 - mixed);
  CHECK(relgap(c0_flipped2, c0_theorem2) > 1e-3);
}
