#pragma once
// Product spacetime charts (axis 0 = time) and the moves between the two
// pictures of a growing body:
//
//   space picture      density rho, flux J, supply sigma, rate beta — forms
//                      on the space chart whose coefficients also depend on t;
//   spacetime picture  one flux form  F = rho - dt^J  and one source form
//                      S = dt^sigma on the (t, x) chart.
//
// Time-dependent space fields are stored as spacetime forms whose
// multi-indices avoid the time axis ("spatial forms"); their coefficients read
// the full event (t, x).  The space-only exterior derivative differentiates
// along axes >= 1, the rate form differentiates coefficients along axis 0,
// and at_time() freezes t to recover an honest form on the space chart.

#include "xcal/exterior.hpp"
#include "xcal/geometry.hpp"

namespace xcal {

class SpacetimeChart {
public:
  SpacetimeChart(AxisSpec time, std::vector<AxisSpec> space);

  const ChartDomain& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  int space_dim() const { return chart_.dim() - 1; }
  // The space chart with axes renumbered 0..n-1.
  ChartDomain space() const;

  // The constant covector dt and the coordinate direction along time.
  DifferentialForm dt() const;
  VectorField time_direction() const;

private:
  ChartDomain chart_;
};

// True when no multi-index of `a` touches axis 0.
bool is_spatial(const DifferentialForm& a);

// Embed a time-independent form from the n-dim space chart into an
// (n+1)-dim spacetime chart: indices shift up by one, coefficients ignore
// the new time slot.
DifferentialForm lift(const DifferentialForm& space_form);

// Space-only exterior derivative of a spatial form (axes >= 1).
DifferentialForm spatial_derivative(const DifferentialForm& a);

// Coefficient-wise d/dt: the rate form beta of a density family.
DifferentialForm time_partial(const DifferentialForm& a);

// Freeze the time coordinate: a spatial form on the spacetime chart becomes a
// form on the space chart (indices shift down).  Throws when `a` has time
// components.
DifferentialForm at_time(const DifferentialForm& a, double t);

// F = rho - dt^J from the space-picture density (degree n) and flux
// (degree n-1); both spatial.
DifferentialForm assemble_spacetime_flux(const DifferentialForm& rho,
                                         const DifferentialForm& J);

// S = dt^sigma from the space-picture supply (degree n, spatial).
DifferentialForm assemble_spacetime_source(const DifferentialForm& sigma);

// Recover the space-picture flux:  J = -(time_direction -| F).
DifferentialForm project_flux(const DifferentialForm& F);

// Recover the space-picture density: the part of F clear of dt.
DifferentialForm extract_density(const DifferentialForm& F);

}  // namespace xcal
