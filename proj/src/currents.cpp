#include "xcal/currents.hpp"

#include <cmath>
#include <stdexcept>

namespace xcal {

namespace {

void require_unit_sign(double sign, const char* who) {
  if (sign != 1.0 && sign != -1.0)
    throw std::invalid_argument(std::string(who) + ": sign must be +1 or -1");
}

void require_full_dim(const Chain& region, const char* who) {
  if (region.cells.empty())
    throw std::invalid_argument(std::string(who) + ": empty region");
  if (region.dim != region.chart_dim)
    throw std::invalid_argument(std::string(who) +
                                ": region cells must have full chart dimension");
}

std::shared_ptr<const CurrentData> make(int chart_dim, int degree,
                                        decltype(CurrentData::body) body) {
  auto d = std::make_shared<CurrentData>();
  d->chart_dim = chart_dim;
  d->degree = degree;
  d->body = std::move(body);
  return d;
}

}  // namespace

int Current::chart_dim() const { return data().chart_dim; }
int Current::degree() const { return data().degree; }

const CurrentData& Current::data() const {
  if (!data_) throw std::logic_error("Current: empty handle");
  return *data_;
}

Current Current::form_induced(Chain region, DifferentialForm form,
                              double sign) {
  require_unit_sign(sign, "form_induced");
  require_full_dim(region, "form_induced");
  if (form.dim() != region.chart_dim)
    throw std::invalid_argument("form_induced: form/region chart mismatch");
  const int degree = region.dim - form.degree();
  if (degree < 0)
    throw std::invalid_argument("form_induced: inducing form exceeds region dimension");
  const int chart_dim = region.chart_dim;
  return Current(make(chart_dim, degree,
                      FormInduced{std::move(region), std::move(form), sign}));
}

Current Current::chain_induced(Chain chain) {
  if (chain.cells.empty())
    throw std::invalid_argument("chain_induced: empty chain");
  const int chart_dim = chain.chart_dim;
  const int degree = chain.dim;
  return Current(make(chart_dim, degree, ChainInduced{std::move(chain)}));
}

Current Current::domain_restricted(DifferentialForm form, Chain domain) {
  require_full_dim(domain, "domain_restricted");
  if (form.dim() != domain.chart_dim)
    throw std::invalid_argument("domain_restricted: form/domain chart mismatch");
  const int degree = domain.dim - form.degree();
  if (degree < 0)
    throw std::invalid_argument("domain_restricted: form exceeds domain dimension");
  const int chart_dim = domain.chart_dim;
  return Current(make(chart_dim, degree,
                      DomainRestricted{std::move(form), std::move(domain)}));
}

Current Current::weighted_curves(
    int chart_dim, std::vector<std::pair<ParamCell, ScalarField>> pieces) {
  if (pieces.empty())
    throw std::invalid_argument("weighted_curves: no pieces");
  for (const auto& [cell, weight] : pieces) {
    if (cell.dim() != 1)
      throw std::invalid_argument("weighted_curves: cells must be curves");
    if (cell.map().target_dim() != chart_dim)
      throw std::invalid_argument("weighted_curves: cell chart mismatch");
  }
  return Current(make(chart_dim, 1, WeightedCurves{std::move(pieces)}));
}

Current Current::combination(std::vector<std::pair<Current, double>> members) {
  if (members.empty())
    throw std::invalid_argument("combination: no members");
  const int chart_dim = members.front().first.chart_dim();
  const int degree = members.front().first.degree();
  for (const auto& [m, c] : members) {
    if (m.chart_dim() != chart_dim || m.degree() != degree)
      throw std::invalid_argument("combination: mixed member shapes");
  }
  return Current(make(chart_dim, degree, Combination{std::move(members)}));
}

double eval_current(const Current& T, const DifferentialForm& a,
                    const QuadratureOptions& quad) {
  const CurrentData& d = T.data();
  if (a.dim() != d.chart_dim)
    throw std::invalid_argument("eval_current: chart dimension mismatch");
  if (a.degree() != d.degree)
    throw std::invalid_argument("eval_current: test form degree mismatch");

  return std::visit(
      [&](const auto& body) -> double {
        using B = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<B, FormInduced>) {
          return body.sign * integrate(wedge(body.form, a), body.region, quad);
        } else if constexpr (std::is_same_v<B, ChainInduced>) {
          return integrate(a, body.chain, quad);
        } else if constexpr (std::is_same_v<B, DomainRestricted>) {
          return integrate(wedge(body.form, a), body.domain, quad);
        } else if constexpr (std::is_same_v<B, WeightedCurves>) {
          CompensatedSum sum;
          for (const auto& [cell, weight] : body.pieces) {
            DifferentialForm w = DifferentialForm::function(d.chart_dim, weight);
            sum.add(integrate(wedge(w, a), Chain::single(cell), quad));
          }
          return sum.value();
        } else if constexpr (std::is_same_v<B, Combination>) {
          CompensatedSum sum;
          for (const auto& [m, c] : body.members)
            sum.add(c * eval_current(m, a, quad));
          return sum.value();
        } else {
          static_assert(std::is_same_v<B, BoundaryOf>);
          return eval_current(body.inner, exterior_derivative(a), quad);
        }
      },
      d.body);
}

Current boundary_current(const Current& T) {
  const CurrentData& d = T.data();
  if (d.degree < 1)
    throw std::invalid_argument(
        "boundary_current: a degree-0 current has no boundary");
  return Current(make(d.chart_dim, d.degree - 1, BoundaryOf{T}));
}

Current boundary_shortcut(const Current& T) {
  const CurrentData& d = T.data();
  if (d.degree < 1)
    throw std::invalid_argument(
        "boundary_shortcut: a degree-0 current has no boundary");
  if (const auto* fi = std::get_if<FormInduced>(&d.body)) {
    const double flip = (fi->form.degree() + 1) % 2 == 0 ? 1.0 : -1.0;
    return Current::form_induced(fi->region,
                                 exterior_derivative(fi->form),
                                 fi->sign * flip);
  }
  if (const auto* ci = std::get_if<ChainInduced>(&d.body)) {
    return Current::chain_induced(chain_boundary(ci->chain));
  }
  throw std::invalid_argument(
      "boundary_shortcut: only form- and chain-induced currents have one");
}

Current smooth_flux_current(const DifferentialForm& flux,
                            const ChartDomain& chart, double sign_convention) {
  require_unit_sign(sign_convention, "smooth_flux_current");
  if (flux.dim() != chart.dim())
    throw std::invalid_argument("smooth_flux_current: flux/chart mismatch");
  return Current::form_induced(chart_chain(chart), flux, sign_convention);
}

// ---------------------------------------------------------------------------
// Bumps.
// ---------------------------------------------------------------------------

namespace {

// Shared smooth profile: A * exp(1 - 1/(1 - u)), u = |x-c|^2 / rho^2, with
// closed-form first and second derivatives.  Values within a whisker of the
// ball edge collapse to exact zero; the function tends to zero faster than
// every polynomial there, so the clamp is below evaluation noise.
struct BumpProfile {
  Vec center;
  double radius;
  double amplitude;
  int dim;

  static constexpr double kEdge = 1.0 - 1e-9;

  double u(Pt x) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double d = x[static_cast<size_t>(i)] - center[static_cast<size_t>(i)];
      s += d * d;
    }
    return s / (radius * radius);
  }

  double value(Pt x) const {
    const double uu = u(x);
    if (uu >= kEdge) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - uu));
  }

  Grad gradient(Pt x) const {
    Grad g{};
    const double uu = u(x);
    if (uu >= kEdge) return g;
    const double f = amplitude * std::exp(1.0 - 1.0 / (1.0 - uu));
    const double gp = -1.0 / ((1.0 - uu) * (1.0 - uu));
    for (int i = 0; i < dim; ++i) {
      const double du = 2.0 * (x[static_cast<size_t>(i)] - center[static_cast<size_t>(i)]) /
                        (radius * radius);
      g[static_cast<size_t>(i)] = f * gp * du;
    }
    return g;
  }

  Hess hessian(Pt x) const {
    Hess h{};
    const double uu = u(x);
    if (uu >= kEdge) return h;
    const double f = amplitude * std::exp(1.0 - 1.0 / (1.0 - uu));
    const double om = 1.0 - uu;
    const double gp = -1.0 / (om * om);
    const double gpp = -2.0 / (om * om * om);
    Grad du{};
    for (int i = 0; i < dim; ++i)
      du[static_cast<size_t>(i)] = 2.0 * (x[static_cast<size_t>(i)] - center[static_cast<size_t>(i)]) /
                                   (radius * radius);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        double v = f * (gp * gp + gpp) * du[static_cast<size_t>(i)] * du[static_cast<size_t>(j)];
        if (i == j) v += f * gp * 2.0 / (radius * radius);
        h[static_cast<size_t>(i)][static_cast<size_t>(j)] = v;
      }
    }
    return h;
  }
};

}  // namespace

TestForm make_bump(const ChartDomain& domain, Vec center, double radius,
                   int degree, int covector_axis, double amplitude) {
  const int dim = domain.dim();
  if (degree != 0 && degree != 1)
    throw std::invalid_argument("make_bump: degree must be 0 or 1");
  if (!(radius > 0.0)) throw std::invalid_argument("make_bump: radius must be positive");
  if (degree == 1 && (covector_axis < 0 || covector_axis >= dim))
    throw std::invalid_argument("make_bump: covector axis out of range");
  for (int i = 0; i < dim; ++i) {
    const AxisSpec& ax = domain.axis(i);
    const double c = center[static_cast<size_t>(i)];
    if (!(c - radius > ax.lo && c + radius < ax.hi))
      throw std::invalid_argument("make_bump: support ball escapes the domain");
  }

  BumpProfile prof{center, radius, amplitude, dim};
  ScalarField field([prof](Pt x) { return prof.value(x); },
                    [prof](Pt x) { return prof.gradient(x); },
                    [prof](Pt x) { return prof.hessian(x); });

  TestForm t;
  t.center = center;
  t.radius = radius;
  t.degree = degree;
  t.covector_axis = covector_axis;
  t.amplitude = amplitude;
  t.dim = dim;
  if (degree == 0) {
    t.form = DifferentialForm::function(dim, std::move(field));
  } else {
    t.form = DifferentialForm(dim, 1);
    t.form.set(MultiIndex{covector_axis}, std::move(field));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Balance verification.
// ---------------------------------------------------------------------------

nlohmann::json CurrentBalanceReport::to_json() const {
  nlohmann::json tests = nlohmann::json::array();
  for (const CurrentTestRow& r : rows) {
    nlohmann::json center = nlohmann::json::array();
    for (double c : r.center) center.push_back(c);
    tests.push_back({{"center", center},
                     {"radius", r.radius},
                     {"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"defect", r.defect}});
  }
  return {{"max_defect", max_defect}, {"tests", tests}};
}

CurrentBalanceReport verify_current_balance(
    const Current& T, const std::function<double(const TestForm&)>& S_expected,
    std::span<const TestForm> tests, const QuadratureOptions& quad) {
  const Current B = boundary_current(T);
  CurrentBalanceReport rep;
  rep.rows.reserve(tests.size());
  for (const TestForm& t : tests) {
    if (t.dim != T.chart_dim())
      throw std::invalid_argument("verify_current_balance: test chart mismatch");
    if (t.degree != T.degree() - 1)
      throw std::invalid_argument("verify_current_balance: test degree mismatch");
    QuadratureOptions opts = quad;
    opts.support = t.support();
    CurrentTestRow row;
    row.center = t.center;
    row.radius = t.radius;
    row.lhs = eval_current(B, t.form, opts);
    row.rhs = S_expected(t);
    row.defect = std::fabs(row.lhs - row.rhs) /
                 std::max(1.0, std::fabs(row.rhs));
    rep.max_defect = std::max(rep.max_defect, row.defect);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace xcal
