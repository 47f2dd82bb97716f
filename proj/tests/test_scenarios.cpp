#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "xcal/balance.hpp"
#include "xcal/kinematics.hpp"
#include "xcal/scenarios.hpp"
#include "support.hpp"

using namespace xcal;

namespace {

std::vector<Vec> chart_samples(const Scenario& sc, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  return sample_points(sc.chart.chart(), count, rng);
}

// Space-picture law rate + d_space(flux) = source (the time axis rides along
// in the coefficients) and spacetime law d(st_flux) = st_source.
double field_balance_max(const Scenario& sc, int count, unsigned seed) {
  const auto pts = chart_samples(sc, count, seed);
  const SmoothFields& f = *sc.fields;
  const double spatial =
      residual_report(f.rate + spatial_derivative(f.flux) - f.source, pts)
          .max_residual;
  const double spacetime =
      spacetime_balance_residual(f.st_flux, f.st_source, pts).max_residual;
  return std::max(spatial, spacetime);
}

}  // namespace

TEST_SUITE("scenarios") {

TEST_CASE("drift1d packages the uniform transport fields") {
  Scenario sc = make_drift1d();
  REQUIRE(sc.fields.has_value());
  const SmoothFields& f = *sc.fields;

  const Vec ev{1.5, 0.3};
  const Pt q(ev.data(), 2);
  // velocity (a_x t, -a_t t) with defaults a_t = 1, a_x = 2
  const Vec v = f.velocity(q);
  CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(-1.5).epsilon(1e-14));
  // density a_x t dx, flux -a_t t, supply a_x dx
  CHECK(f.density.coeff(MultiIndex{1}, q) == doctest::Approx(3.0));
  CHECK(f.flux.coeff(MultiIndex{}, q) == doctest::Approx(-1.5));
  CHECK(f.source.coeff(MultiIndex{1}, q) == doctest::Approx(2.0));
  // assembled flux a_x t dx + a_t t dt
  CHECK(f.st_flux.coeff(MultiIndex{0}, q) == doctest::Approx(1.5));
  CHECK(f.st_flux.coeff(MultiIndex{1}, q) == doctest::Approx(3.0));

  CHECK(field_balance_max(sc, 60, 11u) < 1e-13);

  // the closed-form velocity is the kinematic flux of the assembled form
  VectorField vk = kinematic_flux(f.st_flux, f.volume);
  double dev = 0.0;
  for (const Vec& p : chart_samples(sc, 40, 12u)) {
    const Pt pp(p.data(), 2);
    const Vec a = f.velocity(pp);
    const Vec b = vk(pp);
    dev = std::max(dev, std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1])));
  }
  CHECK(dev < 1e-12);
}

TEST_CASE("drift1d worldlines run straight with slope -a_t/a_x") {
  Scenario sc = make_drift1d();
  REQUIRE(sc.facts.size() >= 1);
  CHECK(sc.facts[0].name == "worldline_slope");
  CHECK(sc.facts[0].value == doctest::Approx(-0.5));

  const Vec seed{0.1, 1.0};
  Worldline w =
      integrate_worldline(sc.fields->velocity, sc.chart.chart(), Pt(seed.data(), 2));
  CHECK(w.status == WorldlineStatus::left_domain);
  CHECK(w.points.back()[0] > 1.99);  // runs out through t = t_end
  CHECK(max_track_deviation(w, sc.expected_track(seed)) < 1e-6);
}

TEST_CASE("drift1d rejects a flux with no time component") {
  ScenarioParams p;
  p.a_x = 0.0;
  CHECK_THROWS_AS(make_drift1d(p), std::invalid_argument);
}

TEST_CASE("drift1d finite-difference variant stays within the coarse budget") {
  ScenarioParams p;
  p.analytic_fields = false;
  Scenario sc = make_drift1d(p);
  CHECK(field_balance_max(sc, 30, 21u) < 1e-5);
}

TEST_CASE("radial cavity linear profile carries a constant-speed front") {
  Scenario sc = make_radial_cavity(GrowthProfile::linear);
  REQUIRE(sc.fields.has_value());
  const SmoothFields& f = *sc.fields;

  // velocity (rho0, v0, 0) everywhere, checked at r = 2
  const Vec ev{0.4, 2.0, 1.1};
  const Pt q(ev.data(), 3);
  const Vec v = f.velocity(q);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(v[2]) < 1e-15);
  // supply v0 dr^dalpha, rate identically zero
  CHECK(f.source.coeff(MultiIndex{1, 2}, q) == doctest::Approx(1.0));
  CHECK(f.rate.max_abs_coeff(q) < 1e-15);

  CHECK(field_balance_max(sc, 60, 31u) < 1e-13);

  // front r(t) = r0 + (v0/rho0) t, followed by the first default seed
  const Vec seed = sc.default_seeds[0];
  Worldline w =
      integrate_worldline(f.velocity, sc.chart.chart(), Pt(seed.data(), 3));
  CHECK(max_track_deviation(w, sc.expected_track(seed)) < 1e-6);
  CHECK(sc.facts[0].name == "front_slope");
  CHECK(sc.facts[0].value == doctest::Approx(1.0));
}

TEST_CASE("radial cavity exponential profile multiplies with radius") {
  Scenario sc = make_radial_cavity(GrowthProfile::exponential);
  const SmoothFields& f = *sc.fields;

  const Vec ev{0.0, 1.0, 2.0};
  const Pt q(ev.data(), 3);
  // supply v0 e^r dr^dalpha -> e at unit radius
  CHECK(f.source.coeff(MultiIndex{1, 2}, q) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  // radial velocity v0 e^r / r at r = 2
  const Vec ev2{0.0, 2.0, 2.0};
  const Vec v = f.velocity(Pt(ev2.data(), 3));
  CHECK(v[1] == doctest::Approx(std::exp(2.0) / 2.0).epsilon(1e-14));

  CHECK(field_balance_max(sc, 60, 41u) < 1e-13);
  CHECK(!sc.expected_track);  // no closed-form track for this profile
}

TEST_CASE("radial cavity custom profile differentiates what it is given") {
  ScenarioParams p;
  p.angular_profile =
      ScalarField([](Pt q) { return q[1] * q[1]; },
                  [](Pt q) { return Grad{0.0, 2.0 * q[1], 0.0}; });
  Scenario sc = make_radial_cavity(GrowthProfile::custom, p);
  const Vec ev{0.3, 1.7, 0.5};
  const Pt q(ev.data(), 3);
  CHECK(sc.fields->source.coeff(MultiIndex{1, 2}, q) ==
        doctest::Approx(3.4).epsilon(1e-12));
  CHECK(field_balance_max(sc, 40, 51u) < 1e-12);

  ScenarioParams missing;
  CHECK_THROWS_AS(make_radial_cavity(GrowthProfile::custom, missing),
                  std::invalid_argument);
}

TEST_CASE("polar charts refuse a radial range touching the origin") {
  ScenarioParams p;
  p.r_min = 0.0;
  CHECK_THROWS_AS(make_radial_cavity(GrowthProfile::linear, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_radial_fan(p), std::invalid_argument);
  p.r_min = 0.2;
  p.rho0 = 0.0;
  CHECK_THROWS_AS(make_radial_fan(p), std::invalid_argument);
}

TEST_CASE("radial fan worldlines stretch linearly in t + t0") {
  Scenario sc = make_radial_fan();
  const SmoothFields& f = *sc.fields;

  // supply coefficient 2 rho0 r / (t + t0): 2 at (t=0, r=1) with defaults
  const Vec ev{0.0, 1.0, 0.7};
  CHECK(f.source.coeff(MultiIndex{1, 2}, Pt(ev.data(), 3)) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sc.facts[0].value == doctest::Approx(2.0));
  // rate vanishes: the density does not depend on t
  CHECK(f.rate.max_abs_coeff(Pt(ev.data(), 3)) < 1e-15);

  CHECK(field_balance_max(sc, 60, 61u) < 1e-13);

  const Vec seed{0.0, 0.8, 2.5};
  Worldline w =
      integrate_worldline(f.velocity, sc.chart.chart(), Pt(seed.data(), 3));
  CHECK(w.points.size() > 100);
  CHECK(max_track_deviation(w, sc.expected_track(seed)) < 1e-6);
}

TEST_CASE("branching current balances atom plus line terms") {
  Scenario sc = make_branching();
  REQUIRE(sc.current.has_value());
  CHECK(!sc.fields.has_value());
  CHECK(sc.facts[0].name == "junction_atom_weight");
  CHECK(sc.facts[0].value == doctest::Approx(1.0));

  std::mt19937_64 rng(42);
  std::vector<TestForm> probes;
  for (int i = 0; i < 8; ++i) probes.push_back(sc.current->make_probe(rng));
  CurrentBalanceReport rep = verify_current_balance(
      sc.current->T, sc.current->S_expected, probes, sc.current->quad);
  CHECK(rep.max_defect < 1e-4);
  // the junction probes pair the boundary with a genuine atom
  CHECK(std::abs(rep.rows[0].lhs) > 0.5);
}

TEST_CASE("branching conserving weights remove the junction atom") {
  ScenarioParams p;
  p.trunk_weight = ScalarField([](Pt q) { return 1.0 + q[0]; },
                               [](Pt) { return Grad{1.0, 0.0}; });
  p.upper_weight = ScalarField([](Pt q) { return 0.5 * (1.0 + q[0]); },
                               [](Pt) { return Grad{0.5, 0.0}; });
  p.lower_weight = ScalarField([](Pt q) { return 0.5 * (1.0 + q[0]); },
                               [](Pt) { return Grad{0.5, 0.0}; });
  Scenario sc = make_branching(p);
  CHECK(std::abs(sc.facts[0].value) < 1e-14);

  // boundary(T) on a junction bump must now match the line terms alone
  std::mt19937_64 rng(7);
  std::vector<TestForm> probes;
  for (int i = 0; i < 4; ++i) probes.push_back(sc.current->make_probe(rng));
  CurrentBalanceReport rep = verify_current_balance(
      sc.current->T, sc.current->S_expected, probes, sc.current->quad);
  CHECK(rep.max_defect < 1e-4);
}

TEST_CASE("branching constant weights leave only the atom") {
  ScenarioParams p;
  p.trunk_weight = ScalarField::constant(2.0);
  p.upper_weight = ScalarField::constant(0.5);
  p.lower_weight = ScalarField::constant(0.5);
  Scenario sc = make_branching(p);
  CHECK(sc.facts[0].value == doctest::Approx(1.0));

  // a probe centered on the junction sees exactly the atom
  std::mt19937_64 rng(3);
  TestForm at_junction = sc.current->make_probe(rng);  // first draw sits on B
  Current bd = boundary_current(sc.current->T);
  const double lhs = eval_current(bd, at_junction.form, sc.current->quad);
  CHECK(lhs == doctest::Approx(at_junction.amplitude).epsilon(1e-6));
  // a probe riding one curve away from the junction sees nothing
  TestForm on_curve = sc.current->make_probe(rng);
  QuadratureOptions q = sc.current->quad;
  q.support = on_curve.support();
  CHECK(std::abs(eval_current(bd, on_curve.form, q)) < 1e-6);
}

TEST_CASE("branching validates its geometry") {
  ScenarioParams p;
  p.branch_point = Vec{3.0, 0.0};  // outside t in [0, 2]
  CHECK_THROWS_AS(make_branching(p), std::invalid_argument);
  ScenarioParams p2;
  p2.branch_start = Vec{1.0, 0.0};  // collapses the trunk onto the junction
  CHECK_THROWS_AS(make_branching(p2), std::invalid_argument);
}

TEST_CASE("surface growth concentrates creation on the moving rim") {
  Scenario sc = make_surface_growth();
  REQUIRE(sc.current.has_value());
  CHECK(sc.current->T.degree() == 1);
  // the restricted flux is closed, so nothing is created inside
  const auto pts = chart_samples(sc, 40, 71u);
  DifferentialForm dF = exterior_derivative(sc.fields->st_flux);
  double m = 0.0;
  for (const Vec& p : pts) m = std::max(m, dF.max_abs_coeff(Pt(p.data(), 3)));
  CHECK(m < 1e-15);
  CHECK(field_balance_max(sc, 40, 72u) < 1e-13);

  std::mt19937_64 rng(19);
  std::vector<TestForm> straddling;
  for (int i = 0; i < 4; ++i) straddling.push_back(sc.current->make_probe(rng));
  CurrentBalanceReport rep = verify_current_balance(
      sc.current->T, sc.current->S_expected, straddling, sc.current->quad);
  CHECK(rep.max_defect < 1e-4);
  // non-vacuous: the rim integral is a real number of order one
  double seen = 0.0;
  for (const auto& row : rep.rows) seen = std::max(seen, std::abs(row.rhs));
  CHECK(seen > 1e-3);
}

TEST_CASE("surface growth interior probes see no sources") {
  Scenario sc = make_surface_growth();
  Current bd = boundary_current(sc.current->T);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 3; ++i) {
    TestForm phi = sc.current->make_interior_probe(rng);
    QuadratureOptions q = sc.current->quad;
    q.support = phi.support();
    CHECK(std::abs(eval_current(bd, phi.form, q)) < 1e-6);
    CHECK(std::abs(sc.current->S_expected(phi)) < 1e-6);
  }
}

TEST_CASE("surface growth worldlines are horizontal") {
  Scenario sc = make_surface_growth();
  const Vec seed{0.0, 1.5, 3.0};
  Worldline w = integrate_worldline(sc.fields->velocity, sc.chart.chart(),
                                    Pt(seed.data(), 3));
  CHECK(max_track_deviation(w, sc.expected_track(seed)) < 1e-12);
}

TEST_CASE("surface growth keeps the rim inside the chart") {
  ScenarioParams p;
  p.r0 = 3.5;
  CHECK_THROWS_AS(make_surface_growth(p), std::invalid_argument);
}

TEST_CASE("every field scenario balances its region budget") {
  std::vector<Scenario> scenarios;
  scenarios.push_back(make_drift1d());
  scenarios.push_back(make_radial_cavity(GrowthProfile::linear));
  scenarios.push_back(make_radial_cavity(GrowthProfile::exponential));
  scenarios.push_back(make_radial_fan());
  scenarios.push_back(make_surface_growth());
  for (const Scenario& sc : scenarios) {
    CAPTURE(sc.name);
    REQUIRE(sc.region.has_value());
    const SmoothFields& f = *sc.fields;
    RegionBalanceReport rep =
        region_balance(f.density, f.flux, f.source, 0.7, *sc.region);
    CHECK(rep.relative() < 1e-10);
  }
}

TEST_CASE("cavity region budget matches the hand value") {
  Scenario sc = make_radial_cavity(GrowthProfile::linear);
  const SmoothFields& f = *sc.fields;
  RegionBalanceReport rep =
      region_balance(f.density, f.flux, f.source, 0.5, *sc.region);
  // flux r v0 dalpha through r = 2 minus r = 1 walls: (2 - 1) v0 2 pi
  const double expect = 2.0 * std::numbers::pi;
  CHECK(rep.boundary_term == doctest::Approx(expect).epsilon(1e-12));
  CHECK(rep.source_term == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(rep.rate_term) < 1e-12);
}

TEST_CASE("scenario lookup is stable and total") {
  const auto names = scenario_names();
  CHECK(names.size() == 6);
  for (const std::string& n : names) {
    Scenario sc = make_scenario(n);
    CHECK(sc.name == n);
  }
  CHECK_THROWS_AS(make_scenario("no-such-thing"), std::invalid_argument);
}

TEST_CASE("construction is deterministic") {
  Scenario a = make_radial_fan();
  Scenario b = make_radial_fan();
  std::mt19937_64 rng(5);
  const auto pts = sample_points(a.chart.chart(), 20, rng);
  for (const Vec& p : pts) {
    const Pt q(p.data(), 3);
    CHECK(a.fields->st_flux.coeff(MultiIndex{0, 2}, q) ==
          b.fields->st_flux.coeff(MultiIndex{0, 2}, q));
    CHECK(a.fields->velocity(q)[1] == b.fields->velocity(q)[1]);
    CHECK(a.fields->source.coeff(MultiIndex{1, 2}, q) ==
          b.fields->source.coeff(MultiIndex{1, 2}, q));
  }
}

TEST_CASE("default seeds sit inside their charts") {
  for (const std::string& n : scenario_names()) {
    Scenario sc = make_scenario(n);
    for (const Vec& s : sc.default_seeds) {
      CAPTURE(n);
      CHECK(sc.chart.chart().contains(Pt(s.data(), sc.chart.dim())));
    }
  }
}

}  // TEST_SUITE
