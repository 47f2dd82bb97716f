#include "xcal/spacetime.hpp"

#include <stdexcept>

namespace xcal {

SpacetimeChart::SpacetimeChart(AxisSpec time, std::vector<AxisSpec> space) {
  if (time.periodic)
    throw std::invalid_argument("SpacetimeChart: the time axis cannot be periodic");
  std::vector<AxisSpec> axes;
  axes.reserve(space.size() + 1);
  axes.push_back(time);
  for (const AxisSpec& a : space) axes.push_back(a);
  chart_ = ChartDomain(std::move(axes));
  if (space_dim() < 1)
    throw std::invalid_argument("SpacetimeChart: need at least one space axis");
}

ChartDomain SpacetimeChart::space() const {
  std::vector<AxisSpec> axes;
  for (int i = 1; i < dim(); ++i) axes.push_back(chart_.axis(i));
  return ChartDomain(std::move(axes));
}

DifferentialForm SpacetimeChart::dt() const {
  DifferentialForm d(dim(), 1);
  d.set(MultiIndex{0}, ScalarField::constant(1.0));
  return d;
}

VectorField SpacetimeChart::time_direction() const {
  return VectorField::basis(dim(), 0);
}

bool is_spatial(const DifferentialForm& a) {
  for (const auto& [idx, f] : a.terms())
    if (idx.contains(0)) return false;
  return true;
}

namespace {

MultiIndex shift_up(const MultiIndex& idx) {
  std::array<int, kMaxDim> axes{};
  for (int i = 0; i < idx.degree(); ++i) axes[static_cast<size_t>(i)] = idx.axis(i) + 1;
  return MultiIndex(std::span<const int>(axes.data(), static_cast<size_t>(idx.degree())));
}

MultiIndex shift_down(const MultiIndex& idx) {
  std::array<int, kMaxDim> axes{};
  for (int i = 0; i < idx.degree(); ++i) {
    if (idx.axis(i) == 0)
      throw std::invalid_argument("at_time: form has time components");
    axes[static_cast<size_t>(i)] = idx.axis(i) - 1;
  }
  return MultiIndex(std::span<const int>(axes.data(), static_cast<size_t>(idx.degree())));
}

}  // namespace

DifferentialForm lift(const DifferentialForm& space_form) {
  const int n = space_form.dim();
  if (n + 1 > kMaxDim)
    throw std::invalid_argument("lift: spacetime dimension exceeds the chart limit");
  DifferentialForm out(n + 1, space_form.degree());
  for (const auto& [idx, f] : space_form.terms()) {
    const ScalarField inner = f;
    ScalarField wrapped([inner, n](Pt x) {
      // drop the leading time slot
      return inner(Pt(x.data() + 1, static_cast<size_t>(n)));
    });
    if (inner.has_gradient()) {
      wrapped = ScalarField(
          [inner, n](Pt x) { return inner(Pt(x.data() + 1, static_cast<size_t>(n))); },
          [inner, n](Pt x) {
            Grad g{};
            for (int i = 0; i < n; ++i)
              g[static_cast<size_t>(i + 1)] =
                  inner.partial(i, Pt(x.data() + 1, static_cast<size_t>(n)));
            return g;
          });
    }
    out.set(shift_up(idx), wrapped);
  }
  return out;
}

DifferentialForm spatial_derivative(const DifferentialForm& a) {
  if (!is_spatial(a))
    throw std::invalid_argument("spatial_derivative: form has time components");
  DifferentialForm d = exterior_derivative(a, /*from_axis=*/1);
  return d;
}

DifferentialForm time_partial(const DifferentialForm& a) {
  return coefficient_partial(a, 0);
}

DifferentialForm at_time(const DifferentialForm& a, double t) {
  const int n = a.dim() - 1;
  if (n < 1) throw std::invalid_argument("at_time: chart has no space axes");
  DifferentialForm out(n, a.degree());
  for (const auto& [idx, f] : a.terms()) {
    const ScalarField inner = f;
    auto freeze = [t, n](Pt x) {
      Vec full{};
      full[0] = t;
      for (int i = 0; i < n; ++i) full[static_cast<size_t>(i + 1)] = x[static_cast<size_t>(i)];
      return full;
    };
    ScalarField frozen([inner, freeze, n](Pt x) {
      const Vec full = freeze(x);
      return inner(Pt(full.data(), static_cast<size_t>(n + 1)));
    });
    if (inner.has_gradient()) {
      frozen = ScalarField(
          [inner, freeze, n](Pt x) {
            const Vec full = freeze(x);
            return inner(Pt(full.data(), static_cast<size_t>(n + 1)));
          },
          [inner, freeze, n](Pt x) {
            const Vec full = freeze(x);
            Grad g{};
            for (int i = 0; i < n; ++i)
              g[static_cast<size_t>(i)] =
                  inner.partial(i + 1, Pt(full.data(), static_cast<size_t>(n + 1)));
            return g;
          });
    }
    out.set(shift_down(idx), frozen);
  }
  return out;
}

DifferentialForm assemble_spacetime_flux(const DifferentialForm& rho,
                                         const DifferentialForm& J) {
  if (rho.dim() != J.dim())
    throw std::invalid_argument("assemble_spacetime_flux: chart mismatch");
  if (rho.degree() != J.degree() + 1)
    throw std::invalid_argument(
        "assemble_spacetime_flux: density degree must exceed flux degree by one");
  if (!is_spatial(rho) || !is_spatial(J))
    throw std::invalid_argument("assemble_spacetime_flux: inputs must be spatial");
  DifferentialForm dt(rho.dim(), 1);
  dt.set(MultiIndex{0}, ScalarField::constant(1.0));
  return rho - wedge(dt, J);
}

DifferentialForm assemble_spacetime_source(const DifferentialForm& sigma) {
  if (!is_spatial(sigma))
    throw std::invalid_argument("assemble_spacetime_source: input must be spatial");
  DifferentialForm dt(sigma.dim(), 1);
  dt.set(MultiIndex{0}, ScalarField::constant(1.0));
  return wedge(dt, sigma);
}

DifferentialForm project_flux(const DifferentialForm& F) {
  return -1.0 * contract(VectorField::basis(F.dim(), 0), F);
}

DifferentialForm extract_density(const DifferentialForm& F) {
  DifferentialForm out(F.dim(), F.degree());
  for (const auto& [idx, f] : F.terms())
    if (!idx.contains(0)) out.set(idx, f);
  return out;
}

}  // namespace xcal
