#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "qes/complex_poly.hpp"
#include "qes/roots.hpp"

using qes::Cplx;
using qes::ComplexPoly;

namespace {

double cdist(Cplx u, Cplx v) { return std::abs(u - v); }

Cplx rand_cplx(std::mt19937_64& rng, double box) {
  std::uniform_real_distribution<double> d(-box, box);
  const double re = d(rng);
  const double im = d(rng);
  return Cplx(re, im);
}

}  // namespace

TEST_CASE("evaluation: roots, constants, direct summation") {
  const ComplexPoly p({Cplx(-2.0, 0.0), Cplx(0.0, 0.0), Cplx(1.0, 0.0)});  // z^2 - 2
  CHECK(std::abs(p.eval(Cplx(std::sqrt(2.0), 0.0))) < 1e-14);

  const ComplexPoly one = ComplexPoly::constant(Cplx(1.0, 0.0));
  CHECK(cdist(one.eval(Cplx(5.0, 3.0)), Cplx(1.0, 0.0)) == 0.0);

  // z^4 + z^3 + z^2 + z + 1 at z = 1 equals the direct sum of coefficients.
  const ComplexPoly q({Cplx(1, 0), Cplx(1, 0), Cplx(1, 0), Cplx(1, 0), Cplx(1, 0)});
  Cplx direct(0.0, 0.0);
  for (const Cplx& c : q.coeffs()) direct += c;
  CHECK(cdist(q.eval(Cplx(1.0, 0.0)), direct) == 0.0);
  CHECK(cdist(direct, Cplx(5.0, 0.0)) == 0.0);
}

TEST_CASE("derivative: power rule, constants, degree drop") {
  const ComplexPoly cube({Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)});  // z^3
  const ComplexPoly d = cube.derivative();
  REQUIRE(d.degree() == 2);
  CHECK(cdist(d.coeff(2), Cplx(3.0, 0.0)) == 0.0);
  CHECK(cdist(d.coeff(1), Cplx(0.0, 0.0)) == 0.0);

  CHECK(ComplexPoly::constant(Cplx(7.0, 0.0)).derivative().is_zero());

  const ComplexPoly quad({Cplx(-1, 0), Cplx(0, 0), Cplx(1, 0)});  // z^2 - 1
  const ComplexPoly dq = quad.derivative();
  REQUIRE(dq.degree() == 1);
  CHECK(cdist(dq.coeff(1), Cplx(2.0, 0.0)) == 0.0);
  CHECK(cdist(dq.coeff(0), Cplx(0.0, 0.0)) == 0.0);
}

TEST_CASE("derivative is linear at the coefficient level") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<Cplx> pc(5), qc(4);
    for (auto& c : pc) c = rand_cplx(rng, 2.0);
    for (auto& c : qc) c = rand_cplx(rng, 2.0);
    const ComplexPoly p(pc), q(qc);
    const Cplx a = rand_cplx(rng, 2.0), b = rand_cplx(rng, 2.0);
    const ComplexPoly lhs = (a * p + b * q).derivative();
    const ComplexPoly rhs = a * p.derivative() + b * q.derivative();
    REQUIRE(lhs.degree() == rhs.degree());
    for (int k = 0; k <= lhs.degree(); ++k) {
      CHECK(cdist(lhs.coeff(k), rhs.coeff(k)) < 1e-13);
    }
  }
}

TEST_CASE("ring operations: products, cancellation, monomials") {
  const ComplexPoly zm1({Cplx(-1, 0), Cplx(1, 0)});
  const ComplexPoly zp1({Cplx(1, 0), Cplx(1, 0)});
  const ComplexPoly prod = zm1 * zp1;
  REQUIRE(prod.degree() == 2);
  CHECK(cdist(prod.coeff(0), Cplx(-1.0, 0.0)) == 0.0);
  CHECK(cdist(prod.coeff(1), Cplx(0.0, 0.0)) == 0.0);
  CHECK(cdist(prod.coeff(2), Cplx(1.0, 0.0)) == 0.0);

  // p + (-1) p collapses to the canonical zero polynomial.
  CHECK((prod + Cplx(-1.0, 0.0) * prod).is_zero());

  const ComplexPoly z2({Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)});
  const ComplexPoly z3({Cplx(0, 0), Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)});
  const ComplexPoly z5 = z2 * z3;
  REQUIRE(z5.degree() == 5);
  CHECK(cdist(z5.coeff(5), Cplx(1.0, 0.0)) == 0.0);
  for (int k = 0; k < 5; ++k) CHECK(cdist(z5.coeff(k), Cplx(0.0, 0.0)) == 0.0);
}

TEST_CASE("ring laws: commutativity and distributivity within rounding") {
  std::mt19937_64 rng(23);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<Cplx> pc(4), qc(3), rc(5);
    for (auto& c : pc) c = rand_cplx(rng, 1.5);
    for (auto& c : qc) c = rand_cplx(rng, 1.5);
    for (auto& c : rc) c = rand_cplx(rng, 1.5);
    const ComplexPoly p(pc), q(qc), r(rc);

    const ComplexPoly pq = p * q, qp = q * p;
    REQUIRE(pq.degree() == qp.degree());
    for (int k = 0; k <= pq.degree(); ++k) CHECK(cdist(pq.coeff(k), qp.coeff(k)) < 1e-13);

    const ComplexPoly lhs = p * (q + r);
    const ComplexPoly rhs = p * q + p * r;
    const int deg = std::max(lhs.degree(), rhs.degree());
    for (int k = 0; k <= deg; ++k) CHECK(cdist(lhs.coeff(k), rhs.coeff(k)) < 1e-12);

    CHECK(pq.degree() == p.degree() + q.degree());
  }
}

TEST_CASE("from_roots: stated examples") {
  const double s2 = std::sqrt(2.0);
  const ComplexPoly y = ComplexPoly::from_roots({Cplx(s2, 0.0), Cplx(-s2, 0.0)});
  REQUIRE(y.degree() == 2);
  CHECK(cdist(y.coeff(2), Cplx(1.0, 0.0)) == 0.0);
  CHECK(std::abs(y.coeff(1)) < 1e-15);
  CHECK(cdist(y.coeff(0), Cplx(-2.0, 0.0)) < 1e-15);

  const ComplexPoly empty = ComplexPoly::from_roots({});
  REQUIRE(empty.degree() == 0);
  CHECK(cdist(empty.coeff(0), Cplx(1.0, 0.0)) == 0.0);

  const ComplexPoly z = ComplexPoly::from_roots({Cplx(0.0, 0.0)});
  REQUIRE(z.degree() == 1);
  CHECK(cdist(z.coeff(1), Cplx(1.0, 0.0)) == 0.0);
  CHECK(cdist(z.coeff(0), Cplx(0.0, 0.0)) == 0.0);
}

TEST_CASE("from_roots then eval vanishes at every root") {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 25; ++iter) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<Cplx> roots(static_cast<std::size_t>(n));
    for (auto& r : roots) r = rand_cplx(rng, 3.0);
    const ComplexPoly p = ComplexPoly::from_roots(roots);
    const double scale = std::max(1.0, p.max_abs_coeff());
    for (const Cplx& r : roots) {
      CHECK(std::abs(p.eval(r)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("construction normalizes trailing cancellation noise") {
  // A leading coefficient at the 1e-14-relative noise floor must not
  // inflate the degree.
  const ComplexPoly p({Cplx(1.0, 0.0), Cplx(2.0, 0.0), Cplx(1e-16, 0.0)});
  CHECK(p.degree() == 1);
  // A genuinely small but significant leading coefficient survives.
  const ComplexPoly q({Cplx(1.0, 0.0), Cplx(2.0, 0.0), Cplx(1e-10, 0.0)});
  CHECK(q.degree() == 2);
}

TEST_CASE("non-finite coefficients are rejected") {
  CHECK_THROWS_AS(ComplexPoly({Cplx(std::nan(""), 0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(ComplexPoly({Cplx(0.0, std::numeric_limits<double>::infinity())}),
                  std::invalid_argument);
}

TEST_CASE("post-hoc reality recognition") {
  CHECK(qes::is_effectively_real(Cplx(3.0, 0.0)));
  CHECK(qes::is_effectively_real(Cplx(3.0, 1e-10)));
  CHECK(!qes::is_effectively_real(Cplx(3.0, 1e-6)));
  CHECK(qes::is_effectively_real(Cplx(1e9, 0.5)));  // |Im| <= 1e-9 (1 + |Re|)
}

TEST_CASE("companion roots: quadratic, ordering, degenerate inputs") {
  const ComplexPoly p({Cplx(-2.0, 0.0), Cplx(0.0, 0.0), Cplx(1.0, 0.0)});  // z^2 - 2
  const auto roots = qes::companion_roots(p);
  REQUIRE(roots.size() == 2);
  const double s2 = std::sqrt(2.0);
  CHECK(cdist(roots[0], Cplx(-s2, 0.0)) < 1e-12);
  CHECK(cdist(roots[1], Cplx(s2, 0.0)) < 1e-12);

  CHECK(qes::companion_roots(ComplexPoly::constant(Cplx(4.0, 0.0))).empty());
  CHECK(qes::companion_roots(ComplexPoly()).empty());

  // Double root returned with multiplicity.
  const ComplexPoly sq = ComplexPoly::from_roots({Cplx(1.0, 0.0), Cplx(1.0, 0.0)});
  const auto rr = qes::companion_roots(sq);
  REQUIRE(rr.size() == 2);
  CHECK(cdist(rr[0], Cplx(1.0, 0.0)) < 1e-6);
  CHECK(cdist(rr[1], Cplx(1.0, 0.0)) < 1e-6);
}

TEST_CASE("companion roots recover random configurations") {
  std::mt19937_64 rng(51);
  for (int iter = 0; iter < 15; ++iter) {
    const int n = 2 + static_cast<int>(rng() % 4);
    std::vector<Cplx> roots(static_cast<std::size_t>(n));
    bool ok = true;
    do {
      ok = true;
      for (auto& r : roots) r = rand_cplx(rng, 2.0);
      for (int i = 0; i < n && ok; ++i)
        for (int j = i + 1; j < n; ++j)
          if (cdist(roots[static_cast<std::size_t>(i)], roots[static_cast<std::size_t>(j)]) <
              1e-2) {
            ok = false;
            break;
          }
    } while (!ok);
    qes::sort_canonical(roots);
    auto found = qes::companion_roots(ComplexPoly::from_roots(roots));
    REQUIRE(found.size() == roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      CHECK(cdist(found[i], roots[i]) < 1e-8);
    }
  }
}

TEST_CASE("lexicographic ordering primitives") {
  CHECK(qes::lex_less(Cplx(0.0, 1.0), Cplx(1.0, -5.0)));
  CHECK(qes::lex_less(Cplx(1.0, -5.0), Cplx(1.0, 2.0)));
  CHECK(!qes::lex_less(Cplx(1.0, 2.0), Cplx(1.0, 2.0)));

  std::vector<Cplx> v = {Cplx(2, 0), Cplx(-1, 3), Cplx(-1, -3), Cplx(0, 0)};
  qes::sort_canonical(v);
  CHECK(cdist(v[0], Cplx(-1, -3)) == 0.0);
  CHECK(cdist(v[1], Cplx(-1, 3)) == 0.0);
  CHECK(cdist(v[2], Cplx(0, 0)) == 0.0);
  CHECK(cdist(v[3], Cplx(2, 0)) == 0.0);
}
