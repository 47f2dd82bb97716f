#pragma once
// Shared test helpers: multivariate polynomial fields with exact derivatives
// (the oracles most property tests compare against) and small utilities.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "xcal/exterior.hpp"
#include "xcal/geometry.hpp"

namespace testsupport {

using xcal::Grad;
using xcal::Hess;
using xcal::kMaxDim;
using xcal::Pt;
using xcal::Vec;

// A dense multivariate polynomial: sum of c * prod_i x_i^e_i.
struct Poly {
  struct Term {
    double c;
    std::array<int, kMaxDim> e;
  };
  int dim = 0;
  std::vector<Term> terms;

  double eval(Pt x) const {
    double s = 0.0;
    for (const Term& t : terms) {
      double v = t.c;
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < t.e[static_cast<size_t>(i)]; ++k) v *= x[static_cast<size_t>(i)];
      s += v;
    }
    return s;
  }

  Poly derivative(int axis) const {
    Poly d;
    d.dim = dim;
    for (const Term& t : terms) {
      const int e = t.e[static_cast<size_t>(axis)];
      if (e == 0) continue;
      Term dt = t;
      dt.c *= e;
      dt.e[static_cast<size_t>(axis)] -= 1;
      d.terms.push_back(dt);
    }
    return d;
  }
};

// Wrap a polynomial as a ScalarField.  `analytic` attaches the exact gradient
// (first-derivative closures); without it the field differentiates by finite
// differences only.
inline xcal::ScalarField poly_field(const Poly& p, bool analytic = true) {
  if (!analytic) return xcal::ScalarField([p](Pt x) { return p.eval(x); });
  std::array<Poly, kMaxDim> dp;
  for (int i = 0; i < p.dim; ++i) dp[static_cast<size_t>(i)] = p.derivative(i);
  return xcal::ScalarField([p](Pt x) { return p.eval(x); },
                           [dp, d = p.dim](Pt x) {
                             Grad g{};
                             for (int i = 0; i < d; ++i)
                               g[static_cast<size_t>(i)] = dp[static_cast<size_t>(i)].eval(x);
                             return g;
                           });
}

// Random polynomial of total degree <= 3 with coefficients in [-1, 1].
inline Poly random_poly(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  Poly p;
  p.dim = dim;
  // enumerate exponent tuples of total degree <= 3
  std::array<int, kMaxDim> e{};
  const int maxdeg = 3;
  while (true) {
    int total = 0;
    for (int i = 0; i < dim; ++i) total += e[static_cast<size_t>(i)];
    if (total <= maxdeg) p.terms.push_back({coeff(rng), e});
    int i = 0;
    for (; i < dim; ++i) {
      if (++e[static_cast<size_t>(i)] <= maxdeg) break;
      e[static_cast<size_t>(i)] = 0;
    }
    if (i == dim) break;
  }
  return p;
}

// Random form of the given degree with polynomial coefficients.
inline xcal::DifferentialForm random_poly_form(int dim, int degree,
                                               std::mt19937_64& rng,
                                               bool analytic = true) {
  xcal::DifferentialForm a(dim, degree);
  for (const xcal::MultiIndex& idx : xcal::MultiIndex::enumerate(dim, degree))
    a.set(idx, poly_field(random_poly(dim, rng), analytic));
  return a;
}

inline std::vector<Vec> random_points(const xcal::Box& box, int count,
                                      std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec p{};
    for (int i = 0; i < box.dim; ++i) {
      const xcal::AxisInterval& ax = box.axis[static_cast<size_t>(i)];
      p[static_cast<size_t>(i)] = ax.lo + unit(rng) * ax.length();
    }
    out.push_back(p);
  }
  return out;
}

// Pointwise sup over sample points of the largest coefficient magnitude.
inline double max_coeff_over(const xcal::DifferentialForm& a,
                             const std::vector<Vec>& pts) {
  double m = 0.0;
  for (const Vec& p : pts)
    m = std::max(m, a.max_abs_coeff(Pt(p.data(), static_cast<size_t>(a.dim()))));
  return m;
}

inline xcal::Box unit_box(int dim) {
  xcal::Box b;
  b.dim = dim;
  for (int i = 0; i < dim; ++i) b.axis[static_cast<size_t>(i)] = {0.0, 1.0};
  return b;
}

}  // namespace testsupport
