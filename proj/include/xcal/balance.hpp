// Conservation checks for a density/flux/source triple, in three strengths:
//
//  * pointwise residuals of the differential statements
//        rate + d(flux) = source            (space picture)
//        d(spacetime flux) = spacetime source
//    sampled over a point cloud;
//  * the integral budget of a fixed spatial region at one instant:
//        d/dt (content) + net outflow = production;
//  * integration-by-parts ("power") identities against a smooth test form,
//    the weak counterpart used by the current-based checks.
#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "xcal/geometry.hpp"
#include "xcal/spacetime.hpp"

namespace xcal {

// Pointwise residual statistics of a form sampled at `pts`: the residual at
// a point is the largest |coefficient| there.
struct BalanceReport {
  int dim = 0;
  int samples = 0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
  Vec worst_point{};

  nlohmann::json to_json() const;
};

BalanceReport residual_report(const DifferentialForm& residual,
                              std::span<const Vec> pts);

// rate + d(flux) - source, all forms on one chart (typically a space chart
// or a spacetime chart with frozen time; the derivative runs over every
// chart axis).
BalanceReport spatial_balance_residual(const DifferentialForm& rate,
                                       const DifferentialForm& flux,
                                       const DifferentialForm& source,
                                       std::span<const Vec> pts);

// d(flux) - source on a spacetime chart.
BalanceReport spacetime_balance_residual(const DifferentialForm& flux,
                                         const DifferentialForm& source,
                                         std::span<const Vec> pts);

// Integral budget of a spatial region at time t.  `density`, `flux`, and
// `source` are dt-free forms on the spacetime chart (degrees k, k-1, k);
// `region` is a k-chain on the space chart.  The three terms are
//
//   rate_term     = integral over region of d/dt density (at t)
//   boundary_term = integral over the region's boundary of flux (at t)
//   source_term   = integral over region of source (at t)
//
// and the books close when rate_term + boundary_term == source_term.
struct RegionBalanceReport {
  double rate_term = 0.0;
  double boundary_term = 0.0;
  double source_term = 0.0;
  double time = 0.0;

  double residual() const;  // |rate + boundary - source|
  double scale() const;     // largest |term|, floored away from zero
  double relative() const { return residual() / scale(); }
  nlohmann::json to_json() const;
};

RegionBalanceReport region_balance(const DifferentialForm& density,
                                   const DifferentialForm& flux,
                                   const DifferentialForm& source,
                                   double t, const Chain& region,
                                   const QuadratureOptions& quad = {});

// One integration-by-parts identity, both sides evaluated independently.
struct PowerPair {
  double lhs = 0.0;
  double rhs = 0.0;

  double defect() const;
  double relative() const;  // defect over max(|lhs|, |rhs|), floored
};

// Space picture, region a k-chain on the space chart, phi a test form of
// complementary degree:
//
//   lhs = int_R rate ^ phi  +  int_{boundary R} flux ^ phi
//   rhs = s * int_R flux ^ d phi  +  int_R source ^ phi,
//
// with s = +1 for even-degree flux and -1 for odd (the sign the graded
// Leibniz rule produces when the derivative hops over the flux).
PowerPair spatial_power_identity(const DifferentialForm& rate,
                                 const DifferentialForm& flux,
                                 const DifferentialForm& source,
                                 const DifferentialForm& phi,
                                 const Chain& region,
                                 const QuadratureOptions& quad = {});

// Spacetime picture over a spacetime region:
//
//   lhs = int_{boundary R} flux ^ phi
//   rhs = s * int_R flux ^ d phi  +  int_R source ^ phi,   s as above.
PowerPair spacetime_power_identity(const DifferentialForm& flux,
                                   const DifferentialForm& source,
                                   const DifferentialForm& phi,
                                   const Chain& region,
                                   const QuadratureOptions& quad = {});

// The flux as seen by one boundary face: its pullback along the face's
// embedding, i.e. the integrand density a wall detector would record.
DifferentialForm boundary_flux_density(const DifferentialForm& flux,
                                       const ParamCell& face);

}  // namespace xcal
