#include "qes/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "qes/complex_poly.hpp"
#include "qes/roots.hpp"

namespace qes {

namespace {

void require_distinct(const std::vector<Cplx>& poles) {
  double scale = 1.0;
  for (const Cplx& p : poles) scale = std::max(scale, std::abs(p));
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (std::abs(poles[i] - poles[j]) <= 1e-12 * scale) {
        throw std::invalid_argument("canonical form: coincident pole locations");
      }
    }
  }
}

OdeSpec pack_spec(const ComplexPoly& x, const ComplexPoly& y, int n) {
  if (x.degree() > 4 || y.degree() > 3) {
    throw std::invalid_argument("canonical form: expanded polynomials exceed (4, 3) degrees");
  }
  OdeSpec spec;
  spec.n = n;
  for (int k = 0; k <= x.degree(); ++k) spec.a[static_cast<std::size_t>(k)] = x.coeff(k);
  for (int k = 0; k <= y.degree(); ++k) spec.b[static_cast<std::size_t>(k)] = y.coeff(k);
  return spec;
}

// Quotient and remainder of num / den by synthetic long division.
std::pair<ComplexPoly, ComplexPoly> poly_divmod(const ComplexPoly& num, const ComplexPoly& den) {
  const int dn = num.degree();
  const int dd = den.degree();
  if (dd < 0) throw std::invalid_argument("poly_divmod: zero divisor");
  if (dn < dd) return {ComplexPoly::constant(Cplx(0, 0)), num};
  std::vector<Cplx> rem = num.coeffs();
  std::vector<Cplx> quot(static_cast<std::size_t>(dn - dd) + 1, Cplx(0, 0));
  const Cplx lead = den.coeff(dd);
  for (int k = dn - dd; k >= 0; --k) {
    const Cplx q = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j) {
      rem[static_cast<std::size_t>(k + j)] -= q * den.coeff(j);
    }
  }
  rem.resize(static_cast<std::size_t>(std::max(dd, 1)));
  return {ComplexPoly(std::move(quot)), ComplexPoly(std::move(rem))};
}

// Power sums used by the closed-form coefficient expressions.
struct RootSums {
  Cplx s1{};  // sum z_i
  Cplx s2{};  // sum z_i^2
};

RootSums root_sums(const std::vector<Cplx>& roots) {
  RootSums rs;
  for (const Cplx& z : roots) {
    rs.s1 += z;
    rs.s2 += z * z;
  }
  return rs;
}

Cplx pair_sum(const std::vector<Cplx>& roots) {
  Cplx acc(0, 0);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) acc += roots[i] * roots[j];
  }
  return acc;
}

}  // namespace

OdeSpec to_spec(const HeunForm& form, int n) {
  require_distinct({form.d[0], form.d[1], form.d[2]});
  const ComplexPoly x = ComplexPoly::from_roots({form.d[0], form.d[1], form.d[2]});
  ComplexPoly y = ComplexPoly::constant(Cplx(0, 0));
  for (int s = 0; s < 3; ++s) {
    std::vector<Cplx> others;
    for (int t = 0; t < 3; ++t) {
      if (t != s) others.push_back(form.d[static_cast<std::size_t>(t)]);
    }
    y = y + scale(ComplexPoly::from_roots(others), form.alpha[static_cast<std::size_t>(s)]);
  }
  return pack_spec(x, y, n);
}

OdeSpec to_spec(const GHeun1Form& form, int n) {
  require_distinct({form.e[0], form.e[1], form.e[2], form.e[3]});
  const ComplexPoly x = ComplexPoly::from_roots({form.e[0], form.e[1], form.e[2], form.e[3]});
  ComplexPoly y = ComplexPoly::constant(Cplx(0, 0));
  for (int s = 0; s < 4; ++s) {
    std::vector<Cplx> others;
    for (int t = 0; t < 4; ++t) {
      if (t != s) others.push_back(form.e[static_cast<std::size_t>(t)]);
    }
    y = y + scale(ComplexPoly::from_roots(others), form.mu[static_cast<std::size_t>(s)]);
  }
  return pack_spec(x, y, n);
}

OdeSpec to_spec(const GHeun2Form& form, int n) {
  require_distinct({form.f[0], form.f[1], form.f[2]});
  const ComplexPoly x = ComplexPoly::from_roots({form.f[0], form.f[1], form.f[2]});
  ComplexPoly y = scale(x, form.nu);
  for (int s = 0; s < 3; ++s) {
    std::vector<Cplx> others;
    for (int t = 0; t < 3; ++t) {
      if (t != s) others.push_back(form.f[static_cast<std::size_t>(t)]);
    }
    y = y + scale(ComplexPoly::from_roots(others), form.nu_s[static_cast<std::size_t>(s)]);
  }
  return pack_spec(x, y, n);
}

OdeSpec to_spec(const GHeun3Form& form, int n) {
  require_distinct({form.g1, form.g2});
  const ComplexPoly x = ComplexPoly::from_roots({form.g1, form.g2});
  const ComplexPoly drift({form.kappa, form.sigma});
  ComplexPoly y = drift * x;
  y = y + scale(ComplexPoly::from_roots({form.g2}), form.sigma1);
  y = y + scale(ComplexPoly::from_roots({form.g1}), form.sigma2);
  return pack_spec(x, y, n);
}

OdeSpec to_spec(const GHeun4Form& form, int n) {
  const ComplexPoly x = ComplexPoly::from_roots({form.h});
  const ComplexPoly drift({form.delta, form.gamma, form.lambda});
  ComplexPoly y = drift * x;
  y = y + ComplexPoly::constant(form.eta);
  return pack_spec(x, y, n);
}

OdeSpec to_spec(const AnyForm& form, int n) {
  return std::visit([n](const auto& f) { return to_spec(f, n); }, form);
}

AnyForm from_spec(const OdeSpec& spec) {
  spec.validate();
  const ComplexPoly x = spec.X();
  const ComplexPoly y = spec.Y();
  const int dx = x.degree();
  if (dx < 1 || dx > 4) {
    throw std::invalid_argument("from_spec: deg X must be 1..4 for a canonical shape");
  }

  std::vector<Cplx> poles = companion_roots(x);
  double pole_scale = 1.0;
  for (const Cplx& p : poles) pole_scale = std::max(pole_scale, std::abs(p));
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) {
      if (std::abs(poles[i] - poles[j]) <= 1e-8 * pole_scale) {
        throw std::invalid_argument("from_spec: X has a (near-)multiple root");
      }
    }
  }
  sort_canonical(poles);

  const ComplexPoly xd = x.derivative();
  auto residue = [&](const Cplx& p) { return y.eval(p) / xd.eval(p); };

  // Polynomial part of Y/X; independent of the overall scale of X.
  const auto [quot, rem] = poly_divmod(y, x);
  (void)rem;

  if (dx == 4) {
    GHeun1Form f;
    for (int s = 0; s < 4; ++s) {
      f.e[static_cast<std::size_t>(s)] = poles[static_cast<std::size_t>(s)];
      f.mu[static_cast<std::size_t>(s)] = residue(poles[static_cast<std::size_t>(s)]);
    }
    return f;
  }
  if (dx == 3) {
    const Cplx nu = quot.coeff(0);
    const double drift_scale = std::max(1.0, y.max_abs_coeff() / std::max(1.0, x.max_abs_coeff()));
    if (std::abs(nu) <= 1e-12 * drift_scale) {
      HeunForm f;
      for (int s = 0; s < 3; ++s) {
        f.d[static_cast<std::size_t>(s)] = poles[static_cast<std::size_t>(s)];
        f.alpha[static_cast<std::size_t>(s)] = residue(poles[static_cast<std::size_t>(s)]);
      }
      return f;
    }
    GHeun2Form f;
    f.nu = nu;
    for (int s = 0; s < 3; ++s) {
      f.f[static_cast<std::size_t>(s)] = poles[static_cast<std::size_t>(s)];
      f.nu_s[static_cast<std::size_t>(s)] = residue(poles[static_cast<std::size_t>(s)]);
    }
    return f;
  }
  if (dx == 2) {
    GHeun3Form f;
    f.g1 = poles[0];
    f.g2 = poles[1];
    f.sigma = quot.coeff(1);
    f.kappa = quot.coeff(0);
    f.sigma1 = residue(poles[0]);
    f.sigma2 = residue(poles[1]);
    return f;
  }
  GHeun4Form f;
  f.h = poles[0];
  f.lambda = quot.coeff(2);
  f.gamma = quot.coeff(1);
  f.delta = quot.coeff(0);
  f.eta = residue(poles[0]);
  return f;
}

AppendixCoeffs appendix_coeffs(const HeunForm& form, int n, const std::vector<Cplx>& roots) {
  const RootSums rs = root_sums(roots);
  const Cplx sum_alpha = form.alpha[0] + form.alpha[1] + form.alpha[2];
  const Cplx sum_d = form.d[0] + form.d[1] + form.d[2];
  const Cplx cross = form.alpha[0] * (form.d[1] + form.d[2]) +
                     form.alpha[1] * (form.d[0] + form.d[2]) +
                     form.alpha[2] * (form.d[0] + form.d[1]);
  const double nn = n;
  AppendixCoeffs out;
  out.c2 = std::nullopt;
  out.c1 = -nn * (nn - 1.0 + sum_alpha);
  out.c0 = -(2.0 * (nn - 1.0) + sum_alpha) * rs.s1 + nn * (nn - 1.0) * sum_d + nn * cross;
  return out;
}

AppendixCoeffs appendix_coeffs(const GHeun1Form& form, int n, const std::vector<Cplx>& roots) {
  const RootSums rs = root_sums(roots);
  const Cplx p2 = pair_sum(roots);
  const double nn = n;
  Cplx sum_mu(0, 0), sum_e(0, 0), e2(0, 0), p_comb(0, 0), q_comb(0, 0);
  for (int s = 0; s < 4; ++s) {
    sum_mu += form.mu[static_cast<std::size_t>(s)];
    sum_e += form.e[static_cast<std::size_t>(s)];
  }
  for (int s = 0; s < 4; ++s) {
    for (int t = s + 1; t < 4; ++t) {
      e2 += form.e[static_cast<std::size_t>(s)] * form.e[static_cast<std::size_t>(t)];
    }
  }
  for (int s = 0; s < 4; ++s) {
    // P pairs each exponent with the sum of the other poles; Q with the
    // second elementary symmetric function of the other poles.
    Cplx others_sum(0, 0), others_e2(0, 0);
    std::vector<Cplx> others;
    for (int t = 0; t < 4; ++t) {
      if (t != s) others.push_back(form.e[static_cast<std::size_t>(t)]);
    }
    others_sum = others[0] + others[1] + others[2];
    others_e2 = others[0] * others[1] + others[0] * others[2] + others[1] * others[2];
    p_comb += form.mu[static_cast<std::size_t>(s)] * others_sum;
    q_comb += form.mu[static_cast<std::size_t>(s)] * others_e2;
  }
  AppendixCoeffs out;
  out.c2 = -nn * (nn - 1.0 + sum_mu);
  out.c1 = -(2.0 * (nn - 1.0) + sum_mu) * rs.s1 + nn * (nn - 1.0) * sum_e + nn * p_comb;
  out.c0 = -(2.0 * (nn - 1.0) + sum_mu) * rs.s2 - 2.0 * p2 +
           (2.0 * (nn - 1.0) * sum_e + p_comb) * rs.s1 - nn * (nn - 1.0) * e2 - nn * q_comb;
  return out;
}

AppendixCoeffs appendix_coeffs(const GHeun2Form& form, int n, const std::vector<Cplx>& roots) {
  const RootSums rs = root_sums(roots);
  const double nn = n;
  const Cplx sum_nu = form.nu_s[0] + form.nu_s[1] + form.nu_s[2];
  const Cplx f1 = form.f[0], f2 = form.f[1], f3 = form.f[2];
  const Cplx sum_f = f1 + f2 + f3;
  const Cplx f_pairs = f1 * f2 + f1 * f3 + f2 * f3;
  const Cplx cross = form.nu_s[0] * (f2 + f3) + form.nu_s[1] * (f1 + f3) + form.nu_s[2] * (f1 + f2);
  AppendixCoeffs out;
  out.c2 = -nn * form.nu;
  out.c1 = -form.nu * rs.s1 - nn * (nn - 1.0 + sum_nu - form.nu * sum_f);
  out.c0 = -form.nu * rs.s2 - (2.0 * (nn - 1.0) + sum_nu - form.nu * sum_f) * rs.s1 +
           nn * (nn - 1.0) * sum_f + nn * (cross - form.nu * f_pairs);
  return out;
}

AppendixCoeffs appendix_coeffs(const GHeun3Form& form, int n, const std::vector<Cplx>& roots) {
  const RootSums rs = root_sums(roots);
  const double nn = n;
  const Cplx b2 = form.kappa - form.sigma * (form.g1 + form.g2);
  const Cplx b1 = form.sigma * form.g1 * form.g2 - form.kappa * (form.g1 + form.g2) +
                  form.sigma1 + form.sigma2;
  AppendixCoeffs out;
  out.c2 = -nn * form.sigma;
  out.c1 = -form.sigma * rs.s1 - nn * b2;
  out.c0 = -form.sigma * rs.s2 - b2 * rs.s1 - nn * (nn - 1.0) - nn * b1;
  return out;
}

AppendixCoeffs appendix_coeffs(const GHeun4Form& form, int n, const std::vector<Cplx>& roots) {
  const RootSums rs = root_sums(roots);
  const double nn = n;
  const Cplx b2 = form.gamma - form.lambda * form.h;
  const Cplx b1 = form.delta - form.gamma * form.h;
  AppendixCoeffs out;
  out.c2 = -nn * form.lambda;
  out.c1 = -form.lambda * rs.s1 - nn * b2;
  out.c0 = -form.lambda * rs.s2 - b2 * rs.s1 - nn * b1;
  return out;
}

AppendixCoeffs appendix_coeffs(const AnyForm& form, int n, const std::vector<Cplx>& roots) {
  return std::visit([&](const auto& f) { return appendix_coeffs(f, n, roots); }, form);
}

FuchsianResult fuchsian_check(const HeunForm& form, int n) {
  const Cplx sum_alpha = form.alpha[0] + form.alpha[1] + form.alpha[2];
  FuchsianResult out;
  out.alpha_param = Cplx(-static_cast<double>(n), 0);
  out.beta_param = sum_alpha + static_cast<double>(n) - 1.0;
  out.residual = std::abs(out.alpha_param + out.beta_param + 1.0 - sum_alpha);
  return out;
}

double pole_form_bae_residual(const AnyForm& form, const std::vector<Cplx>& roots) {
  // Y(z)/X(z) written in the shape's own partial-fraction terms.
  auto drift = [&](const Cplx& z) -> Cplx {
    return std::visit(
        [&](const auto& f) -> Cplx {
          using F = std::decay_t<decltype(f)>;
          Cplx acc(0, 0);
          if constexpr (std::is_same_v<F, HeunForm>) {
            for (int s = 0; s < 3; ++s) {
              acc += f.alpha[static_cast<std::size_t>(s)] / (z - f.d[static_cast<std::size_t>(s)]);
            }
          } else if constexpr (std::is_same_v<F, GHeun1Form>) {
            for (int s = 0; s < 4; ++s) {
              acc += f.mu[static_cast<std::size_t>(s)] / (z - f.e[static_cast<std::size_t>(s)]);
            }
          } else if constexpr (std::is_same_v<F, GHeun2Form>) {
            acc = f.nu;
            for (int s = 0; s < 3; ++s) {
              acc += f.nu_s[static_cast<std::size_t>(s)] / (z - f.f[static_cast<std::size_t>(s)]);
            }
          } else if constexpr (std::is_same_v<F, GHeun3Form>) {
            acc = f.sigma * z + f.kappa + f.sigma1 / (z - f.g1) + f.sigma2 / (z - f.g2);
          } else {
            acc = f.lambda * z * z + f.gamma * z + f.delta + f.eta / (z - f.h);
          }
          return acc;
        },
        form);
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Cplx acc(0, 0);
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j != i) acc += 2.0 / (roots[i] - roots[j]);
    }
    acc += drift(roots[i]);
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace qes
