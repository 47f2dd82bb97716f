#include "xcal/balance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xcal {

namespace {

Pt view(const Vec& v, int dim) { return Pt(v.data(), static_cast<size_t>(dim)); }

constexpr double kScaleFloor = 1e-300;

double leibniz_sign(const DifferentialForm& flux) {
  return flux.degree() % 2 == 0 ? 1.0 : -1.0;
}

}  // namespace

nlohmann::json BalanceReport::to_json() const {
  nlohmann::json worst = nlohmann::json::array();
  for (int i = 0; i < dim; ++i) worst.push_back(worst_point[static_cast<size_t>(i)]);
  return {{"samples", samples},
          {"max_residual", max_residual},
          {"mean_residual", mean_residual},
          {"worst_point", worst}};
}

BalanceReport residual_report(const DifferentialForm& residual,
                              std::span<const Vec> pts) {
  BalanceReport rep;
  rep.dim = residual.dim();
  rep.samples = static_cast<int>(pts.size());
  double sum = 0.0;
  for (const Vec& p : pts) {
    Pt x = view(p, rep.dim);
    double here = 0.0;
    for (const auto& [idx, coeff] : residual.terms())
      here = std::max(here, std::fabs(coeff(x)));
    sum += here;
    if (here >= rep.max_residual) {
      rep.max_residual = here;
      rep.worst_point = p;
    }
  }
  if (rep.samples > 0) rep.mean_residual = sum / rep.samples;
  return rep;
}

BalanceReport spatial_balance_residual(const DifferentialForm& rate,
                                       const DifferentialForm& flux,
                                       const DifferentialForm& source,
                                       std::span<const Vec> pts) {
  return residual_report(rate + exterior_derivative(flux) - source, pts);
}

BalanceReport spacetime_balance_residual(const DifferentialForm& flux,
                                         const DifferentialForm& source,
                                         std::span<const Vec> pts) {
  return residual_report(exterior_derivative(flux) - source, pts);
}

double RegionBalanceReport::residual() const {
  return std::fabs(rate_term + boundary_term - source_term);
}

double RegionBalanceReport::scale() const {
  return std::max({std::fabs(rate_term), std::fabs(boundary_term),
                   std::fabs(source_term), kScaleFloor});
}

nlohmann::json RegionBalanceReport::to_json() const {
  return {{"time", time},
          {"rate_term", rate_term},
          {"boundary_term", boundary_term},
          {"source_term", source_term},
          {"residual", residual()},
          {"relative_residual", relative()}};
}

RegionBalanceReport region_balance(const DifferentialForm& density,
                                   const DifferentialForm& flux,
                                   const DifferentialForm& source,
                                   double t, const Chain& region,
                                   const QuadratureOptions& quad) {
  if (!is_spatial(density) || !is_spatial(flux) || !is_spatial(source))
    throw std::invalid_argument("region_balance: forms must be dt-free");
  if (flux.degree() + 1 != density.degree() ||
      source.degree() != density.degree())
    throw std::invalid_argument("region_balance: degree mismatch");

  RegionBalanceReport rep;
  rep.time = t;
  rep.rate_term = integrate(at_time(time_partial(density), t), region, quad);
  rep.boundary_term =
      integrate(at_time(flux, t), chain_boundary(region), quad);
  rep.source_term = integrate(at_time(source, t), region, quad);
  return rep;
}

double PowerPair::defect() const { return std::fabs(lhs - rhs); }

double PowerPair::relative() const {
  return defect() / std::max({std::fabs(lhs), std::fabs(rhs), kScaleFloor});
}

PowerPair spatial_power_identity(const DifferentialForm& rate,
                                 const DifferentialForm& flux,
                                 const DifferentialForm& source,
                                 const DifferentialForm& phi,
                                 const Chain& region,
                                 const QuadratureOptions& quad) {
  PowerPair p;
  p.lhs = integrate(wedge(rate, phi), region, quad) +
          integrate(wedge(flux, phi), chain_boundary(region), quad);
  p.rhs = leibniz_sign(flux) *
              integrate(wedge(flux, exterior_derivative(phi)), region, quad) +
          integrate(wedge(source, phi), region, quad);
  return p;
}

PowerPair spacetime_power_identity(const DifferentialForm& flux,
                                   const DifferentialForm& source,
                                   const DifferentialForm& phi,
                                   const Chain& region,
                                   const QuadratureOptions& quad) {
  PowerPair p;
  p.lhs = integrate(wedge(flux, phi), chain_boundary(region), quad);
  p.rhs = leibniz_sign(flux) *
              integrate(wedge(flux, exterior_derivative(phi)), region, quad) +
          integrate(wedge(source, phi), region, quad);
  return p;
}

DifferentialForm boundary_flux_density(const DifferentialForm& flux,
                                       const ParamCell& face) {
  return pullback(face.map(), flux);
}

}  // namespace xcal
