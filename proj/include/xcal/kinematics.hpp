// Kinematic description of a flux: the velocity field carried by a
// codimension-one form relative to a volume element, and worldline
// integration of that velocity through a chart.
//
// Given a nowhere-vanishing top form theta and a form J of one degree less,
// there is a unique vector field v with  v .| theta = J  (".|" = interior
// product).  Componentwise, with theta = f dx^0 ^ ... ^ dx^{d-1}:
//
//     v^a = (-1)^a J_{(0 ... d-1 minus a)} / f .
//
// Worldlines are integral curves of v, advanced with a fixed-step classic
// Runge-Kutta scheme and clipped to a chart domain.
#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "xcal/exterior.hpp"
#include "xcal/geometry.hpp"

namespace xcal {

// The unique v with contract(v, vol.form()) == flux.  Requires
// flux.degree() == dim - 1.  Component evaluations divide by the volume
// density and therefore throw std::domain_error where the volume element
// degenerates.
VectorField kinematic_flux(const DifferentialForm& flux,
                           const VolumeElement& vol);

// Largest |coefficient| of v .| flux over the sample points: zero (to
// roundoff) exactly when v is a velocity consistent with the flux.
// Requires flux.degree() >= 1.
double flux_space_membership(const VectorField& v,
                             const DifferentialForm& flux,
                             std::span<const Vec> pts);

// Pointwise parallelism defect between two vector fields: the sine of the
// angle between a(x) and b(x), maximized over the samples.  Velocities
// derived from the same flux via different volume elements are parallel, so
// this defect vanishes for them.
double volume_element_invariance(const VectorField& a, const VectorField& b,
                                 std::span<const Vec> pts);

enum class WorldlineStatus {
  completed,    // reached the requested parameter length
  left_domain,  // next step would exit the chart; stopped at the last inside point
  max_steps,    // step budget exhausted first
};

struct Worldline {
  int dim = 0;
  Vec seed{};
  double step = 0.0;
  WorldlineStatus status = WorldlineStatus::max_steps;
  std::vector<double> params;  // integration parameter, one entry per point
  std::vector<Vec> points;     // chart positions (unused slots zero)
};

struct WorldlineOptions {
  double step = 1e-3;
  long max_steps = 400000;
  // Stop with status `completed` once this much parameter has elapsed; the
  // final step is shortened to land on it exactly.  Without it the curve
  // runs until it leaves the domain or exhausts the step budget.
  std::optional<double> param_end;
};

// Fixed-step RK4 integral curve of v from `seed` (which must lie in
// `domain`).  Points outside the domain are never recorded; periodic axes
// accumulate without wrapping so winding curves stay continuous.
Worldline integrate_worldline(const VectorField& v, const ChartDomain& domain,
                              Pt seed, const WorldlineOptions& opts = {});

// Resamples both polylines at `samples` equal fractions of their chord
// length and returns the largest pointwise distance.  Two traversals of the
// same geometric segment at different speeds give a small value regardless
// of their parameterizations.  The measure is endpoint-sensitive: compare
// curves with matching endpoints (same seed, parameter lengths scaled so
// both stop at the same place), not curves clipped independently at a
// domain wall, since clipping lands on each traversal's own step grid.
double worldline_separation(const Worldline& a, const Worldline& b,
                            int samples = 100);

// Treats axis 0 of the worldline's chart as time and compares the remaining
// components against `space_of_t` (slots 0..dim-2 of its result); returns
// the largest componentwise deviation.
double max_track_deviation(const Worldline& w,
                           const std::function<Vec(double)>& space_of_t);

}  // namespace xcal
