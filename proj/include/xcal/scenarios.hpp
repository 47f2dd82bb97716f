// Ready-made model problems.  Each scenario bundles a spacetime chart with
// closed-form fields (density / flux / source / volume / velocity), an
// optional current with its expected boundary functional, a region for
// integral budgets, and analytic expectations (worldline tracks, named
// facts) that the test suite checks the numerics against.
//
// Catalog:
//   drift1d                   uniform 1-d transport; straight worldlines of
//                             slope -a_t/a_x
//   radial_cavity             polar transport fed by an angular profile;
//                             the linear profile opens a cavity whose front
//                             moves at v0/rho0, the exponential profile
//                             models unbounded multiplication
//   radial_fan                polar transport whose worldlines fan out as
//                             straight rays r proportional to (t + t0)
//   branching                 mass carried along a trunk that splits into
//                             two branches; a weighted-curve current whose
//                             boundary concentrates an atom at the junction
//   surface_growth            an expanding disk gaining body points only on
//                             its moving rim; a domain-restricted current
#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "xcal/currents.hpp"
#include "xcal/kinematics.hpp"
#include "xcal/spacetime.hpp"

namespace xcal {

struct ScenarioParams {
  // drift rates (time and space components of the 1-d drift flux)
  double a_t = 1.0;
  double a_x = 2.0;
  // polar-family constants
  double rho0 = 1.0;
  double v0 = 1.0;
  double r0 = 1.0;
  double t0 = 1.0;
  // chart bounds
  double t_end = 2.0;
  double x_min = -2.0;
  double x_max = 2.0;
  double r_min = 0.2;
  double r_max = 4.0;
  // attach closed-form gradients to field coefficients (switch off to
  // exercise the finite-difference fallback end to end)
  bool analytic_fields = true;
  // branching weights; defaults are trunk 1 + t and half/half branches
  std::optional<ScalarField> trunk_weight;
  std::optional<ScalarField> upper_weight;
  std::optional<ScalarField> lower_weight;
  // branching geometry: trunk start, junction, and the two branch ends,
  // as (t, x) events; defaults (0,0) -> (1,0) -> (2, +-1)
  std::optional<Vec> branch_start;
  std::optional<Vec> branch_point;
  std::optional<Vec> branch_upper_end;
  std::optional<Vec> branch_lower_end;
  // custom angular transport profile a(t, r, alpha) for radial_cavity
  std::optional<ScalarField> angular_profile;
};

enum class GrowthProfile { linear, exponential, custom };

// The smooth-field bundle on the scenario's spacetime chart.  density,
// flux, and source are dt-free; the spacetime pair is assembled from them,
// so the two pictures agree by construction and the tests can focus on the
// balance laws themselves.
struct SmoothFields {
  DifferentialForm density;
  DifferentialForm rate;       // d/dt of density
  DifferentialForm flux;
  DifferentialForm source;
  DifferentialForm st_flux;    // density - dt ^ flux
  DifferentialForm st_source;  // dt ^ source
  VolumeElement volume;
  VectorField velocity;
};

// A current together with the functional its boundary should equal, a
// seeded generator of admissible probe bumps, and quadrature tuned for the
// bump integrals.
struct CurrentSetup {
  Current T;
  std::function<double(const TestForm&)> S_expected;
  std::function<TestForm(std::mt19937_64&)> make_probe;
  // second probe family for scenarios that distinguish placements (e.g.
  // bumps strictly inside the growing domain); may be empty
  std::function<TestForm(std::mt19937_64&)> make_interior_probe;
  QuadratureOptions quad;
  double sign_convention = 1.0;
};

struct ExpectedFact {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
};

struct Scenario {
  std::string name;
  SpacetimeChart chart;
  ScenarioParams params;
  std::optional<SmoothFields> fields;
  std::optional<CurrentSetup> current;
  std::optional<Chain> region;  // on the space chart, for integral budgets
  // Closed-form worldline track through a chart seed, returned as space
  // coordinates as a function of t; empty when no closed form exists.
  std::function<std::function<Vec(double)>(Vec)> expected_track;
  std::vector<Vec> default_seeds;
  std::vector<ExpectedFact> facts;
};

Scenario make_drift1d(const ScenarioParams& p = {});
Scenario make_radial_cavity(GrowthProfile profile,
                            const ScenarioParams& p = {});
Scenario make_radial_fan(const ScenarioParams& p = {});
Scenario make_branching(const ScenarioParams& p = {});
Scenario make_surface_growth(const ScenarioParams& p = {});

// Name-based dispatch (the CLI's entry point).  Known names:
//   drift1d, radial-cavity-linear, radial-cavity-exponential, radial-fan,
//   branching, surface-growth
// Throws std::invalid_argument for anything else.
Scenario make_scenario(const std::string& name, const ScenarioParams& p = {});
std::vector<std::string> scenario_names();

}  // namespace xcal
