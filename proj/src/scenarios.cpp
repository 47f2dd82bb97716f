#include "xcal/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace xcal {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Build a coefficient with or without its closed-form gradient, so a single
// switch exercises the finite-difference fallback end to end.
ScalarField make_field(ScalarField::EvalFn f, ScalarField::GradFn g,
                       bool analytic) {
  if (analytic) return ScalarField(std::move(f), std::move(g));
  return ScalarField(std::move(f));
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0))
    throw std::invalid_argument(std::string("scenario parameter ") + what +
                                " must be positive");
}

SpacetimeChart polar_chart(const ScenarioParams& p) {
  if (!(p.r_min > 0.0))
    throw std::invalid_argument(
        "polar scenarios need r_min > 0: the volume element r dt^dr^dalpha "
        "degenerates at the origin");
  if (!(p.r_max > p.r_min) || !(p.t_end > 0.0))
    throw std::invalid_argument("polar scenarios need r_max > r_min and t_end > 0");
  return SpacetimeChart(AxisSpec{0.0, p.t_end, false, false},
                        {AxisSpec{p.r_min, p.r_max, false, false},
                         AxisSpec{0.0, kTwoPi, true, false}});
}

// Radial band [1, 2] x full circle on the space chart (or the middle half of
// the radial range when the chart does not cover [1, 2]).
Chain annulus_region(const ScenarioParams& p) {
  double lo = std::max(1.0, p.r_min);
  double hi = std::min(2.0, p.r_max);
  if (!(hi > lo)) {
    lo = p.r_min + 0.25 * (p.r_max - p.r_min);
    hi = p.r_min + 0.75 * (p.r_max - p.r_min);
  }
  Box b;
  b.dim = 2;
  b.axis[0] = {lo, hi};
  b.axis[1] = {0.0, kTwoPi};
  return Chain::single(ParamCell(b, SmoothMap::identity(2), 0b10u));
}

// Assemble the full bundle from the space-picture fields, so the two
// pictures agree by construction.
SmoothFields bundle(const DifferentialForm& rho, const DifferentialForm& flux,
                    const DifferentialForm& supply, DifferentialForm theta,
                    VectorField velocity) {
  return SmoothFields{rho,
                      time_partial(rho),
                      flux,
                      supply,
                      assemble_spacetime_flux(rho, flux),
                      assemble_spacetime_source(supply),
                      VolumeElement(std::move(theta)),
                      std::move(velocity)};
}

// Current built from the assembled flux over the whole chart, signed so that
// its boundary pairs a compactly supported potential directly with the
// spacetime source: boundary(T)(phi) = integral of st_source ^ phi.
CurrentSetup smooth_flux_setup(const SpacetimeChart& chart,
                               const SmoothFields& f, int subcells) {
  CurrentSetup cur;
  const int n = chart.space_dim();
  cur.sign_convention = (n % 2 == 1) ? 1.0 : -1.0;
  cur.T = smooth_flux_current(f.st_flux, chart.chart(), cur.sign_convention);
  cur.quad.order = 8;
  cur.quad.subcells = subcells;

  Chain full = chart_chain(chart.chart());
  DifferentialForm src = f.st_source;
  const QuadratureOptions base = cur.quad;
  cur.S_expected = [src, full, base](const TestForm& phi) {
    QuadratureOptions q = base;
    q.support = phi.support();
    return integrate(wedge(src, phi.form), full, q);
  };

  ChartDomain dom = chart.chart();
  cur.make_probe = [dom](std::mt19937_64& rng) {
    double min_len = std::numeric_limits<double>::infinity();
    for (int a = 0; a < dom.dim(); ++a)
      min_len = std::min(min_len, dom.axis(a).hi - dom.axis(a).lo);
    std::uniform_real_distribution<double> frac(0.3, 0.7);
    std::uniform_real_distribution<double> rad(0.08, 0.14);
    Vec c{};
    for (int a = 0; a < dom.dim(); ++a) {
      const AxisSpec& ax = dom.axis(a);
      c[static_cast<size_t>(a)] = ax.lo + frac(rng) * (ax.hi - ax.lo);
    }
    return make_bump(dom, c, rad(rng) * min_len, 0);
  };
  return cur;
}

Scenario blank_scenario(std::string name, SpacetimeChart chart,
                        ScenarioParams p) {
  return Scenario{std::move(name), std::move(chart), std::move(p),
                  {},              {},               {},
                  {},              {},               {}};
}

ParamCell segment_cell(const Vec& from, const Vec& to) {
  const double dt = to[0] - from[0];
  const double dx = to[1] - from[1];
  SmoothMap m(
      1, 2,
      [from, dt, dx](Pt s, std::span<double> out) {
        out[0] = from[0] + dt * s[0];
        out[1] = from[1] + dx * s[0];
      },
      [dt, dx](Pt, Hess& jac) {
        jac[0][0] = dt;
        jac[1][0] = dx;
      });
  Box b;
  b.dim = 1;
  b.axis[0] = {0.0, 1.0};
  return ParamCell(b, std::move(m), 0);
}

}  // namespace

// ===========================================================================
// drift1d: uniform transport on a line.
// ===========================================================================

Scenario make_drift1d(const ScenarioParams& p) {
  if (p.a_x == 0.0)
    throw std::invalid_argument(
        "drift1d: a_x = 0 leaves the flux with no time component, so "
        "worldlines cannot be parameterized by t");
  SpacetimeChart chart(AxisSpec{0.0, p.t_end, false, false},
                       {AxisSpec{p.x_min, p.x_max, false, false}});
  const bool an = p.analytic_fields;
  const double at = p.a_t;
  const double ax = p.a_x;

  // density a_x t dx, flux -a_t t (a 0-form), supply a_x dx
  DifferentialForm rho(2, 1);
  rho.set(MultiIndex{1},
          make_field([ax](Pt q) { return ax * q[0]; },
                     [ax](Pt) { return Grad{ax, 0.0}; }, an));
  DifferentialForm flux = DifferentialForm::function(
      2, make_field([at](Pt q) { return -at * q[0]; },
                    [at](Pt) { return Grad{-at, 0.0}; }, an));
  DifferentialForm supply(2, 1);
  supply.set(MultiIndex{1}, make_field([ax](Pt) { return ax; },
                                       [](Pt) { return Grad{}; }, an));

  DifferentialForm theta(2, 2);
  theta.set(MultiIndex{0, 1}, ScalarField::constant(1.0));

  std::array<ScalarField, kMaxDim> vcomp;
  vcomp[0] = make_field([ax](Pt q) { return ax * q[0]; },
                        [ax](Pt) { return Grad{ax, 0.0}; }, an);
  vcomp[1] = make_field([at](Pt q) { return -at * q[0]; },
                        [at](Pt) { return Grad{-at, 0.0}; }, an);

  Scenario sc = blank_scenario("drift1d", chart, p);
  sc.fields = bundle(rho, flux, supply, std::move(theta),
                     VectorField(2, std::move(vcomp)));
  sc.current = smooth_flux_setup(chart, *sc.fields, 48);

  Box ib;
  ib.dim = 1;
  ib.axis[0] = {std::max(-1.0, p.x_min), std::min(1.0, p.x_max)};
  sc.region = box_chain(ib);

  const double slope = -at / ax;
  sc.expected_track = [slope](Vec seed) {
    return [slope, seed](double t) {
      Vec x{};
      x[0] = seed[1] + slope * (t - seed[0]);
      return x;
    };
  };
  // Seeds start after t = 0: the velocity scales with t, so a worldline
  // seeded exactly at t = 0 sits at a fixed point of the flow.
  sc.default_seeds = {Vec{0.1, -1.0}, Vec{0.1, 0.0}, Vec{0.1, 1.0},
                      Vec{0.5, 1.2}};
  sc.facts = {{"worldline_slope", slope, 1e-6},
              {"supply_coefficient", ax, 1e-12}};
  return sc;
}

// ===========================================================================
// radial_cavity: polar transport fed by an angular profile.
// ===========================================================================

Scenario make_radial_cavity(GrowthProfile profile, const ScenarioParams& p) {
  require_positive(p.rho0, "rho0");
  require_positive(p.r0, "r0");
  require_positive(p.t0, "t0");
  SpacetimeChart chart = polar_chart(p);
  const bool an = p.analytic_fields;
  const double rho0 = p.rho0;
  const double v0 = p.v0;

  ScalarField a_prof;     // angular transport strength a(t, r, alpha)
  ScalarField a_prof_dr;  // its radial derivative: the supply density
  ScalarField v_r;        // radial velocity a / r
  const char* variant = "";
  switch (profile) {
    case GrowthProfile::linear:
      a_prof = make_field([v0](Pt q) { return v0 * q[1]; },
                          [v0](Pt) { return Grad{0.0, v0, 0.0}; }, an);
      a_prof_dr = make_field([v0](Pt) { return v0; },
                             [](Pt) { return Grad{}; }, an);
      v_r = make_field([v0](Pt) { return v0; }, [](Pt) { return Grad{}; }, an);
      variant = "linear";
      break;
    case GrowthProfile::exponential:
      a_prof = make_field(
          [v0](Pt q) { return v0 * std::exp(q[1]); },
          [v0](Pt q) { return Grad{0.0, v0 * std::exp(q[1]), 0.0}; }, an);
      a_prof_dr = make_field(
          [v0](Pt q) { return v0 * std::exp(q[1]); },
          [v0](Pt q) { return Grad{0.0, v0 * std::exp(q[1]), 0.0}; }, an);
      v_r = make_field(
          [v0](Pt q) { return v0 * std::exp(q[1]) / q[1]; },
          [v0](Pt q) {
            const double r = q[1];
            return Grad{0.0, v0 * std::exp(r) * (r - 1.0) / (r * r), 0.0};
          },
          an);
      variant = "exponential";
      break;
    case GrowthProfile::custom:
      if (!p.angular_profile)
        throw std::invalid_argument(
            "radial_cavity: the custom profile needs params.angular_profile");
      a_prof = *p.angular_profile;
      a_prof_dr = a_prof.derivative(1);
      v_r = ScalarField([a = a_prof](Pt q) { return a(q) / q[1]; });
      variant = "custom";
      break;
  }

  DifferentialForm rho(3, 2);
  rho.set(MultiIndex{1, 2},
          make_field([rho0](Pt q) { return rho0 * q[1]; },
                     [rho0](Pt) { return Grad{0.0, rho0, 0.0}; }, an));
  DifferentialForm flux(3, 1);
  flux.set(MultiIndex{2}, a_prof);
  DifferentialForm supply(3, 2);
  supply.set(MultiIndex{1, 2}, a_prof_dr);
  DifferentialForm theta(3, 3);
  theta.set(MultiIndex{0, 1, 2},
            make_field([](Pt q) { return q[1]; },
                       [](Pt) { return Grad{0.0, 1.0, 0.0}; }, an));

  std::array<ScalarField, kMaxDim> vcomp;
  vcomp[0] = ScalarField::constant(rho0);
  vcomp[1] = v_r;

  Scenario sc =
      blank_scenario(std::string("radial-cavity-") + variant, chart, p);
  sc.fields = bundle(rho, flux, supply, std::move(theta),
                     VectorField(3, std::move(vcomp)));
  sc.current = smooth_flux_setup(chart, *sc.fields, 48);
  sc.region = annulus_region(p);

  if (profile == GrowthProfile::linear) {
    const double front_slope = v0 / rho0;
    sc.expected_track = [front_slope](Vec seed) {
      return [front_slope, seed](double t) {
        Vec x{};
        x[0] = seed[1] + front_slope * (t - seed[0]);
        x[1] = seed[2];
        return x;
      };
    };
    sc.facts = {{"front_slope", front_slope, 1e-6}};
  } else if (profile == GrowthProfile::exponential) {
    sc.facts = {{"supply_coefficient_at_unit_radius", v0 * std::exp(1.0), 1e-12}};
  }
  sc.default_seeds = {Vec{0.0, p.r0, std::numbers::pi}, Vec{0.0, 1.5, 2.0}};
  return sc;
}

// ===========================================================================
// radial_fan: worldlines fan out along straight rays.
// ===========================================================================

Scenario make_radial_fan(const ScenarioParams& p) {
  require_positive(p.rho0, "rho0");
  require_positive(p.r0, "r0");
  require_positive(p.t0, "t0");
  SpacetimeChart chart = polar_chart(p);
  const bool an = p.analytic_fields;
  const double rho0 = p.rho0;
  const double t0 = p.t0;

  DifferentialForm rho(3, 2);
  rho.set(MultiIndex{1, 2},
          make_field([rho0](Pt q) { return rho0 * q[1]; },
                     [rho0](Pt) { return Grad{0.0, rho0, 0.0}; }, an));
  // flux rho0 r^2 / (t + t0) dalpha
  DifferentialForm flux(3, 1);
  flux.set(MultiIndex{2},
           make_field(
               [rho0, t0](Pt q) { return rho0 * q[1] * q[1] / (q[0] + t0); },
               [rho0, t0](Pt q) {
                 const double w = q[0] + t0;
                 return Grad{-rho0 * q[1] * q[1] / (w * w),
                             2.0 * rho0 * q[1] / w, 0.0};
               },
               an));
  // supply 2 rho0 r / (t + t0) dr^dalpha
  DifferentialForm supply(3, 2);
  supply.set(MultiIndex{1, 2},
             make_field(
                 [rho0, t0](Pt q) { return 2.0 * rho0 * q[1] / (q[0] + t0); },
                 [rho0, t0](Pt q) {
                   const double w = q[0] + t0;
                   return Grad{-2.0 * rho0 * q[1] / (w * w), 2.0 * rho0 / w,
                               0.0};
                 },
                 an));
  DifferentialForm theta(3, 3);
  theta.set(MultiIndex{0, 1, 2},
            make_field([](Pt q) { return q[1]; },
                       [](Pt) { return Grad{0.0, 1.0, 0.0}; }, an));

  std::array<ScalarField, kMaxDim> vcomp;
  vcomp[0] = ScalarField::constant(rho0);
  vcomp[1] = make_field(
      [rho0, t0](Pt q) { return rho0 * q[1] / (q[0] + t0); },
      [rho0, t0](Pt q) {
        const double w = q[0] + t0;
        return Grad{-rho0 * q[1] / (w * w), rho0 / w, 0.0};
      },
      an);

  Scenario sc = blank_scenario("radial-fan", chart, p);
  sc.fields = bundle(rho, flux, supply, std::move(theta),
                     VectorField(3, std::move(vcomp)));
  sc.current = smooth_flux_setup(chart, *sc.fields, 48);
  sc.region = annulus_region(p);

  sc.expected_track = [t0](Vec seed) {
    return [t0, seed](double t) {
      Vec x{};
      x[0] = seed[1] * (t + t0) / (seed[0] + t0);
      x[1] = seed[2];
      return x;
    };
  };
  sc.default_seeds = {Vec{0.0, 0.5, 1.0}, Vec{0.0, 0.8, 2.5},
                      Vec{0.0, 1.2, 4.0}};
  sc.facts = {{"supply_coefficient_probe", 2.0 * rho0 / t0, 1e-12}};
  return sc;
}

// ===========================================================================
// branching: a trunk worldline splitting into two branches.
// ===========================================================================

Scenario make_branching(const ScenarioParams& p) {
  SpacetimeChart chart(AxisSpec{0.0, p.t_end, false, false},
                       {AxisSpec{p.x_min, p.x_max, false, false}});
  const Vec A = p.branch_start.value_or(Vec{0.0, 0.0});
  const Vec B = p.branch_point.value_or(Vec{1.0, 0.0});
  const Vec E2 = p.branch_upper_end.value_or(Vec{2.0, 1.0});
  const Vec E3 = p.branch_lower_end.value_or(Vec{2.0, -1.0});

  for (const Vec& q : {A, B, E2, E3})
    if (!chart.chart().contains(Pt(q.data(), 2)))
      throw std::invalid_argument("branching: curve endpoint outside the chart");
  const auto dist = [](const Vec& a, const Vec& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
  };
  if (dist(A, B) < 1e-12 || dist(B, E2) < 1e-12 || dist(B, E3) < 1e-12)
    throw std::invalid_argument(
        "branching: the three curves must meet the junction with nonzero "
        "extent");

  ScalarField u1 =
      p.trunk_weight ? *p.trunk_weight
                     : ScalarField([](Pt q) { return 1.0 + q[0]; },
                                   [](Pt) { return Grad{1.0, 0.0}; });
  ScalarField u2 = p.upper_weight ? *p.upper_weight : ScalarField::constant(0.5);
  ScalarField u3 = p.lower_weight ? *p.lower_weight : ScalarField::constant(0.5);

  std::vector<std::pair<ParamCell, ScalarField>> pieces;
  pieces.emplace_back(segment_cell(A, B), u1);
  pieces.emplace_back(segment_cell(B, E2), u2);
  pieces.emplace_back(segment_cell(B, E3), u3);

  // The three curve maps must agree at the junction.
  {
    Vec end1 = pieces[0].first.map()(std::array<double, 1>{1.0});
    Vec start2 = pieces[1].first.map()(std::array<double, 1>{0.0});
    Vec start3 = pieces[2].first.map()(std::array<double, 1>{0.0});
    if (dist(end1, start2) > 1e-12 || dist(end1, start3) > 1e-12)
      throw std::invalid_argument("branching: curves do not meet at the junction");
  }

  CurrentSetup cur;
  cur.T = Current::weighted_curves(
      2, {{pieces[0].first, u1}, {pieces[1].first, u2}, {pieces[2].first, u3}});
  cur.quad.order = 8;
  cur.quad.subcells = 96;

  const Pt ptB(B.data(), 2);
  const double atom_weight = u1(ptB) - u2(ptB) - u3(ptB);
  std::array<Chain, 3> curve_chains = {Chain::single(pieces[0].first),
                                       Chain::single(pieces[1].first),
                                       Chain::single(pieces[2].first)};
  std::array<DifferentialForm, 3> du = {
      exterior_derivative(DifferentialForm::function(2, u1)),
      exterior_derivative(DifferentialForm::function(2, u2)),
      exterior_derivative(DifferentialForm::function(2, u3))};
  const QuadratureOptions base = cur.quad;
  cur.S_expected = [atom_weight, B, curve_chains, du,
                    base](const TestForm& phi) {
    // atom at the junction plus the distributed gain/loss along each curve
    double total = atom_weight * phi.form.coeff(MultiIndex{}, Pt(B.data(), 2));
    QuadratureOptions q = base;
    q.support = phi.support();
    for (int i = 0; i < 3; ++i)
      total -= integrate(wedge(du[static_cast<size_t>(i)], phi.form),
                         curve_chains[static_cast<size_t>(i)], q);
    return total;
  };

  // Every fourth probe sits exactly on the junction; the rest ride one of
  // the curves, clear of the trunk start and the branch ends.
  auto counter = std::make_shared<int>(0);
  ChartDomain dom = chart.chart();
  cur.make_probe = [counter, dom, A, B, E2, E3](std::mt19937_64& rng) {
    const int k = (*counter)++;
    if (k % 4 == 0) {
      std::uniform_real_distribution<double> rad(0.12, 0.22);
      return make_bump(dom, B, rad(rng), 0);
    }
    std::uniform_real_distribution<double> along(0.25, 0.75);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    std::uniform_real_distribution<double> rad(0.10, 0.18);
    const int which = k % 3;
    const Vec& from = which == 0 ? A : B;
    const Vec& to = which == 0 ? B : (which == 1 ? E2 : E3);
    const double s = along(rng);
    Vec c{};
    c[0] = from[0] + s * (to[0] - from[0]);
    c[1] = from[1] + s * (to[1] - from[1]) + jitter(rng);
    return make_bump(dom, c, rad(rng), 0);
  };
  cur.sign_convention = 1.0;

  Scenario sc = blank_scenario("branching", chart, p);
  sc.current = std::move(cur);
  sc.facts = {{"junction_atom_weight", atom_weight, 1e-12}};
  return sc;
}

// ===========================================================================
// surface_growth: an expanding disk gaining body points on its rim.
// ===========================================================================

Scenario make_surface_growth(const ScenarioParams& p) {
  require_positive(p.rho0, "rho0");
  require_positive(p.r0, "r0");
  require_positive(p.t0, "t0");
  if (p.v0 < 0.0)
    throw std::invalid_argument("surface_growth: v0 must be nonnegative");
  SpacetimeChart chart = polar_chart(p);
  if (!(p.r0 > p.r_min) || !(p.r0 + p.v0 * p.t_end < p.r_max))
    throw std::invalid_argument(
        "surface_growth: the moving rim r0 + v0 t must stay strictly inside "
        "the radial range for all t");
  const bool an = p.analytic_fields;
  const double rho0 = p.rho0;
  const double v0 = p.v0;
  const double r0 = p.r0;
  const double r_lo = p.r_min;
  const double t_end = p.t_end;

  DifferentialForm rho(3, 2);
  rho.set(MultiIndex{1, 2},
          make_field([rho0](Pt q) { return rho0 * q[1]; },
                     [rho0](Pt) { return Grad{0.0, rho0, 0.0}; }, an));
  DifferentialForm flux(3, 1);    // identically zero: purely vertical flow
  DifferentialForm supply(3, 2);  // no interior sources
  DifferentialForm theta(3, 3);
  theta.set(MultiIndex{0, 1, 2},
            make_field([](Pt q) { return q[1]; },
                       [](Pt) { return Grad{0.0, 1.0, 0.0}; }, an));
  VectorField velocity = VectorField::constant(3, Vec{rho0, 0.0, 0.0});

  // The growing region as one parameterized cell: q in [0, 1] spans the
  // radial band from the chart floor to the moving rim r0 + v0 t.
  SmoothMap dmap(
      3, 3,
      [r_lo, r0, v0](Pt q, std::span<double> out) {
        const double front = r0 + v0 * q[0];
        out[0] = q[0];
        out[1] = r_lo + q[1] * (front - r_lo);
        out[2] = q[2];
      },
      [r_lo, r0, v0](Pt q, Hess& jac) {
        jac[0][0] = 1.0;
        jac[1][0] = q[1] * v0;
        jac[1][1] = (r0 + v0 * q[0]) - r_lo;
        jac[2][2] = 1.0;
      });
  Box db;
  db.dim = 3;
  db.axis[0] = {0.0, t_end};
  db.axis[1] = {0.0, 1.0};
  db.axis[2] = {0.0, kTwoPi};
  Chain domain_chain = Chain::single(ParamCell(db, std::move(dmap), 0b100u));

  Scenario sc = blank_scenario("surface-growth", chart, p);
  sc.fields = bundle(rho, flux, supply, std::move(theta), velocity);
  sc.region = annulus_region(p);

  CurrentSetup cur;
  cur.T = Current::domain_restricted(sc.fields->st_flux, domain_chain);
  cur.quad.order = 8;
  cur.quad.subcells = 64;
  cur.sign_convention = 1.0;

  Chain rim = chain_boundary(domain_chain);
  DifferentialForm F = sc.fields->st_flux;
  const QuadratureOptions base = cur.quad;
  cur.S_expected = [F, rim, base](const TestForm& phi) {
    QuadratureOptions q = base;
    q.support = phi.support();
    return integrate(wedge(F, phi.form), rim, q);
  };

  ChartDomain dom = chart.chart();
  // Probes straddling the rim: centered on r = r0 + v0 t.
  cur.make_probe = [dom, r0, v0, t_end](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ut(0.175 * t_end, 0.825 * t_end);
    std::uniform_real_distribution<double> ua(0.45, kTwoPi - 0.45);
    std::uniform_real_distribution<double> rad(0.12, 0.2);
    const double t_c = ut(rng);
    Vec c{t_c, r0 + v0 * t_c, ua(rng)};
    return make_bump(dom, c, rad(rng), 0);
  };
  // Probes strictly inside the growing region at every time they see.
  cur.make_interior_probe = [dom, r0, v0, r_lo, t_end](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> rad(0.10, 0.16);
    const double radius = rad(rng);
    std::uniform_real_distribution<double> ut(0.25 * t_end, 0.85 * t_end);
    const double t_c = ut(rng);
    const double hi = (r0 + v0 * (t_c - radius)) - radius - 0.05;
    const double lo = r_lo + radius + 0.05;
    if (!(hi > lo))
      throw std::invalid_argument(
          "surface_growth: no room for a probe inside the region");
    std::uniform_real_distribution<double> ur(lo, hi);
    std::uniform_real_distribution<double> ua(0.45, kTwoPi - 0.45);
    Vec c{t_c, ur(rng), ua(rng)};
    return make_bump(dom, c, radius, 0);
  };
  sc.current = std::move(cur);

  sc.expected_track = [](Vec seed) {
    return [seed](double) {
      Vec x{};
      x[0] = seed[1];
      x[1] = seed[2];
      return x;
    };
  };
  sc.default_seeds = {Vec{0.0, 0.5, 1.0}, Vec{0.0, 1.5, 3.0}};
  sc.facts = {{"rim_speed", v0, 1e-9}};
  return sc;
}

// ===========================================================================
// Dispatch by name.
// ===========================================================================

Scenario make_scenario(const std::string& name, const ScenarioParams& p) {
  if (name == "drift1d") return make_drift1d(p);
  if (name == "radial-cavity-linear")
    return make_radial_cavity(GrowthProfile::linear, p);
  if (name == "radial-cavity-exponential")
    return make_radial_cavity(GrowthProfile::exponential, p);
  if (name == "radial-fan") return make_radial_fan(p);
  if (name == "branching") return make_branching(p);
  if (name == "surface-growth") return make_surface_growth(p);
  std::string msg = "unknown scenario '" + name + "'; known:";
  for (const std::string& s : scenario_names()) msg += " " + s;
  throw std::invalid_argument(msg);
}

std::vector<std::string> scenario_names() {
  return {"drift1d",    "radial-cavity-linear", "radial-cavity-exponential",
          "radial-fan", "branching",            "surface-growth"};
}

}  // namespace xcal
