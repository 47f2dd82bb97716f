#include "xcal/geometry.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace xcal {

double Box::measure() const {
  double m = 1.0;
  for (int i = 0; i < dim; ++i) m *= axis[static_cast<size_t>(i)].length();
  return m;
}

// ---------------------------------------------------------------------------
// ChartDomain
// ---------------------------------------------------------------------------

ChartDomain::ChartDomain(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > static_cast<size_t>(kMaxDim))
    throw std::invalid_argument("ChartDomain: dimension out of range");
  for (const AxisSpec& a : axes_)
    if (!(a.lo < a.hi))
      throw std::invalid_argument("ChartDomain: axis bounds must satisfy lo < hi");
}

Box ChartDomain::bounds() const {
  Box b;
  b.dim = dim();
  for (int i = 0; i < b.dim; ++i)
    b.axis[static_cast<size_t>(i)] = {axes_[static_cast<size_t>(i)].lo,
                                      axes_[static_cast<size_t>(i)].hi};
  return b;
}

bool ChartDomain::contains(Pt x) const {
  if (x.size() != axes_.size()) return false;
  for (size_t i = 0; i < axes_.size(); ++i) {
    const AxisSpec& a = axes_[i];
    if (a.periodic) continue;
    if (x[i] > a.hi) return false;
    if (a.open_lower ? (x[i] <= a.lo) : (x[i] < a.lo)) return false;
  }
  return true;
}

std::vector<Vec> sample_points(const ChartDomain& domain, int count,
                               std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vec p{};
    for (int i = 0; i < domain.dim(); ++i) {
      const AxisSpec& a = domain.axis(i);
      double v = a.lo + unit(rng) * (a.hi - a.lo);
      while (a.open_lower && v <= a.lo) v = a.lo + unit(rng) * (a.hi - a.lo);
      p[static_cast<size_t>(i)] = v;
    }
    out.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ParamCell / Chain
// ---------------------------------------------------------------------------

ParamCell::ParamCell(Box box, SmoothMap map, unsigned periodic_mask)
    : box_(box), map_(std::move(map)), periodic_mask_(periodic_mask) {
  if (box_.dim != map_.domain_dim())
    throw std::invalid_argument("ParamCell: box dim does not match map domain dim");
  for (int i = 0; i < box_.dim; ++i)
    if (!(box_.axis[static_cast<size_t>(i)].lo <= box_.axis[static_cast<size_t>(i)].hi))
      throw std::invalid_argument("ParamCell: malformed box");
}

Chain Chain::single(ParamCell cell, double weight) {
  Chain c;
  c.chart_dim = cell.map().target_dim();
  c.dim = cell.dim();
  c.cells.emplace_back(std::move(cell), weight);
  return c;
}

Chain& Chain::append(ParamCell cell, double weight) {
  if (cells.empty()) {
    chart_dim = cell.map().target_dim();
    dim = cell.dim();
  } else if (cell.map().target_dim() != chart_dim || cell.dim() != dim) {
    throw std::invalid_argument("Chain::append: mixed cell shapes");
  }
  cells.emplace_back(std::move(cell), weight);
  return *this;
}

Chain box_chain(const Box& box) {
  return Chain::single(ParamCell(box, SmoothMap::identity(box.dim)));
}

Chain chart_chain(const ChartDomain& domain) {
  unsigned mask = 0;
  for (int i = 0; i < domain.dim(); ++i)
    if (domain.axis(i).periodic) mask |= (1u << i);
  return Chain::single(
      ParamCell(domain.bounds(), SmoothMap::identity(domain.dim()), mask));
}

Chain point_chain(int chart_dim, Vec point, double weight) {
  Box b;
  b.dim = 0;
  SmoothMap m(0, chart_dim, [point, chart_dim](Pt, std::span<double> out) {
    for (int i = 0; i < chart_dim; ++i) out[static_cast<size_t>(i)] = point[static_cast<size_t>(i)];
  });
  Chain c;
  c.chart_dim = chart_dim;
  c.dim = 0;
  c.cells.emplace_back(ParamCell(b, std::move(m)), weight);
  return c;
}

// ---------------------------------------------------------------------------
// Gauss–Legendre rules (cached per order, nodes on [0,1])
// ---------------------------------------------------------------------------

namespace {

struct GLRule {
  std::vector<double> node;
  std::vector<double> weight;
};

const GLRule& gl_rule(int order) {
  static std::map<int, GLRule> cache;
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1 || order > 64)
    throw std::invalid_argument("quadrature order out of range");
  gsl_integration_glfixed_table* t =
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(order));
  GLRule r;
  r.node.resize(static_cast<size_t>(order));
  r.weight.resize(static_cast<size_t>(order));
  for (int i = 0; i < order; ++i) {
    double xi = 0.0, wi = 0.0;
    gsl_integration_glfixed_point(0.0, 1.0, static_cast<size_t>(i), &xi, &wi, t);
    r.node[static_cast<size_t>(i)] = xi;
    r.weight[static_cast<size_t>(i)] = wi;
  }
  gsl_integration_glfixed_table_free(t);
  return cache.emplace(order, std::move(r)).first->second;
}

// Tensor Gauss–Legendre over one box applied to the (top-degree) pulled-back
// coefficient g; adds into `acc`.
void gl_tensor(const ScalarField& g, const Box& box, int order,
               CompensatedSum& acc) {
  const GLRule& rule = gl_rule(order);
  const int k = box.dim;
  double scale = 1.0;
  for (int i = 0; i < k; ++i) scale *= box.axis[static_cast<size_t>(i)].length();
  if (scale == 0.0) return;
  std::array<int, kMaxDim> ix{};
  Vec u{};
  while (true) {
    double w = scale;
    for (int i = 0; i < k; ++i) {
      const size_t q = static_cast<size_t>(ix[static_cast<size_t>(i)]);
      const AxisInterval& ax = box.axis[static_cast<size_t>(i)];
      u[static_cast<size_t>(i)] = ax.lo + rule.node[q] * ax.length();
      w *= rule.weight[q];
    }
    acc.add(w * g(Pt(u.data(), static_cast<size_t>(k))));
    int i = 0;
    for (; i < k; ++i) {
      if (++ix[static_cast<size_t>(i)] < order) break;
      ix[static_cast<size_t>(i)] = 0;
    }
    if (i == k) break;
  }
}

// Conservative chart-space bounding box of map(box) from the images of the
// box corners, inflated a little.  Valid for maps monotone per parameter axis
// over the box — the contract stated in the header.
Box image_bbox(const SmoothMap& map, const Box& box) {
  const int k = box.dim;
  const int d = map.target_dim();
  Box out;
  out.dim = d;
  for (int i = 0; i < d; ++i)
    out.axis[static_cast<size_t>(i)] = {std::numeric_limits<double>::infinity(),
                                        -std::numeric_limits<double>::infinity()};
  Vec u{};
  const int corners = 1 << k;
  for (int c = 0; c < corners; ++c) {
    for (int i = 0; i < k; ++i)
      u[static_cast<size_t>(i)] = (c >> i & 1) ? box.axis[static_cast<size_t>(i)].hi
                                               : box.axis[static_cast<size_t>(i)].lo;
    const Vec x = map(Pt(u.data(), static_cast<size_t>(k)));
    for (int i = 0; i < d; ++i) {
      out.axis[static_cast<size_t>(i)].lo = std::min(out.axis[static_cast<size_t>(i)].lo, x[static_cast<size_t>(i)]);
      out.axis[static_cast<size_t>(i)].hi = std::max(out.axis[static_cast<size_t>(i)].hi, x[static_cast<size_t>(i)]);
    }
  }
  for (int i = 0; i < d; ++i) {
    AxisInterval& ax = out.axis[static_cast<size_t>(i)];
    const double pad = 0.05 * (ax.hi - ax.lo) + 1e-12;
    ax.lo -= pad;
    ax.hi += pad;
  }
  return out;
}

// Squared distance from a box to a point (0 inside).
double box_point_dist2(const Box& b, const Vec& p) {
  double d2 = 0.0;
  for (int i = 0; i < b.dim; ++i) {
    const AxisInterval& ax = b.axis[static_cast<size_t>(i)];
    const double v = p[static_cast<size_t>(i)];
    const double d = v < ax.lo ? ax.lo - v : (v > ax.hi ? v - ax.hi : 0.0);
    d2 += d * d;
  }
  return d2;
}

// Farthest corner distance^2 from the window center (to detect boxes fully
// inside the ball, which need no edge refinement).
double box_point_maxdist2(const Box& b, const Vec& p) {
  double d2 = 0.0;
  for (int i = 0; i < b.dim; ++i) {
    const AxisInterval& ax = b.axis[static_cast<size_t>(i)];
    const double v = p[static_cast<size_t>(i)];
    const double d = std::max(std::abs(v - ax.lo), std::abs(v - ax.hi));
    d2 += d * d;
  }
  return d2;
}

// Dyadic descent used when a support window is present: split until the
// per-axis depth budget is exhausted, pruning sub-boxes whose chart image
// misses the ball and deepening once at the ball edge.
void integrate_pruned(const ScalarField& g, const SmoothMap& map, const Box& box,
                      std::array<int, kMaxDim> depth, const SupportWindow& win,
                      bool refine_edge, bool edge_budget_used, int order,
                      CompensatedSum& acc) {
  const Box bb = image_bbox(map, box);
  const double r2 = win.radius * win.radius;
  if (box_point_dist2(bb, win.center) > r2) return;  // image misses the ball
  bool straddles = box_point_maxdist2(bb, win.center) > r2;
  int split_axis = -1, best = 0;
  for (int i = 0; i < box.dim; ++i)
    if (depth[static_cast<size_t>(i)] > best) {
      best = depth[static_cast<size_t>(i)];
      split_axis = i;
    }
  if (split_axis < 0 && straddles && refine_edge && !edge_budget_used) {
    // one extra halving of every axis along the support edge
    for (int i = 0; i < box.dim; ++i) depth[static_cast<size_t>(i)] = 1;
    edge_budget_used = true;
    best = 1;
    split_axis = box.dim > 0 ? 0 : -1;
  }
  if (split_axis < 0) {
    gl_tensor(g, box, order, acc);
    return;
  }
  std::array<int, kMaxDim> d2 = depth;
  --d2[static_cast<size_t>(split_axis)];
  const AxisInterval& ax = box.axis[static_cast<size_t>(split_axis)];
  const double mid = 0.5 * (ax.lo + ax.hi);
  Box lo = box, hi = box;
  lo.axis[static_cast<size_t>(split_axis)].hi = mid;
  hi.axis[static_cast<size_t>(split_axis)].lo = mid;
  integrate_pruned(g, map, lo, d2, win, refine_edge, edge_budget_used, order, acc);
  integrate_pruned(g, map, hi, d2, win, refine_edge, edge_budget_used, order, acc);
}

}  // namespace

double integrate(const DifferentialForm& a, const Chain& chain,
                 const QuadratureOptions& opts) {
  if (chain.cells.empty()) return 0.0;
  if (a.dim() != chain.chart_dim)
    throw std::invalid_argument("integrate: form dim does not match chain chart dim");
  if (a.degree() != chain.dim)
    throw std::invalid_argument("integrate: form degree must equal chain dimension");
  CompensatedSum total;
  for (const auto& [cell, weight] : chain.cells) {
    if (weight == 0.0) continue;
    if (chain.dim == 0) {
      const Vec x = cell.map()(Pt{});
      const ScalarField* f = a.term(MultiIndex{});
      if (f) total.add(weight * (*f)(Pt(x.data(), static_cast<size_t>(chain.chart_dim))));
      continue;
    }
    const DifferentialForm pulled = pullback(cell.map(), a);
    // top degree on the parameter box: a single coefficient
    MultiIndex top;
    {
      std::array<int, kMaxDim> axes{};
      for (int i = 0; i < chain.dim; ++i) axes[static_cast<size_t>(i)] = i;
      top = MultiIndex(std::span<const int>(axes.data(), static_cast<size_t>(chain.dim)));
    }
    const ScalarField* g = pulled.term(top);
    if (!g) continue;
    CompensatedSum cell_acc;
    if (opts.support) {
      std::array<int, kMaxDim> depth{};
      for (int i = 0; i < chain.dim; ++i) {
        int want = opts.subcells_for(i);
        int d = 0;
        while ((1 << d) < want) ++d;
        depth[static_cast<size_t>(i)] = d;
      }
      integrate_pruned(*g, cell.map(), cell.box(), depth, *opts.support,
                       opts.refine_at_support_edge, false, opts.order, cell_acc);
    } else {
      // plain uniform composite rule
      std::array<int, kMaxDim> n{};
      std::array<int, kMaxDim> ix{};
      for (int i = 0; i < chain.dim; ++i) n[static_cast<size_t>(i)] = opts.subcells_for(i);
      while (true) {
        Box sub = cell.box();
        for (int i = 0; i < chain.dim; ++i) {
          const AxisInterval& ax = cell.box().axis[static_cast<size_t>(i)];
          const double h = ax.length() / n[static_cast<size_t>(i)];
          sub.axis[static_cast<size_t>(i)] = {ax.lo + ix[static_cast<size_t>(i)] * h,
                                              ax.lo + (ix[static_cast<size_t>(i)] + 1) * h};
        }
        gl_tensor(*g, sub, opts.order, cell_acc);
        int i = 0;
        for (; i < chain.dim; ++i) {
          if (++ix[static_cast<size_t>(i)] < n[static_cast<size_t>(i)]) break;
          ix[static_cast<size_t>(i)] = 0;
        }
        if (i == chain.dim) break;
      }
    }
    total.add(weight * cell_acc.value());
  }
  return total.value();
}

Chain chain_boundary(const Chain& chain) {
  if (chain.dim < 1)
    throw std::invalid_argument("chain_boundary: chain must have dimension >= 1");
  Chain out;
  out.chart_dim = chain.chart_dim;
  out.dim = chain.dim - 1;
  for (const auto& [cell, weight] : chain.cells) {
    for (int ax = 0; ax < cell.dim(); ++ax) {
      if (cell.periodic_mask() >> ax & 1) continue;  // closed loop: no faces
      for (int side = 0; side <= 1; ++side) {
        const AxisInterval& iv = cell.box().axis[static_cast<size_t>(ax)];
        const double value = side ? iv.hi : iv.lo;
        // (-1)^axis, upper face +, lower face -
        const double sign = ((ax % 2 == 0) ? 1.0 : -1.0) * (side ? 1.0 : -1.0);
        Box fb;
        fb.dim = cell.dim() - 1;
        unsigned pmask = 0;
        for (int i = 0, j = 0; i < cell.dim(); ++i) {
          if (i == ax) continue;
          fb.axis[static_cast<size_t>(j)] = cell.box().axis[static_cast<size_t>(i)];
          if (cell.periodic_mask() >> i & 1) pmask |= 1u << j;
          ++j;
        }
        ParamCell face(fb, cell.map().restricted(ax, value), pmask);
        out.cells.emplace_back(std::move(face), weight * sign);
      }
    }
  }
  return out;
}

double stokes_residual(const DifferentialForm& a, const Chain& chain,
                       const QuadratureOptions& opts) {
  const double lhs = integrate(exterior_derivative(a), chain, opts);
  const double rhs = integrate(a, chain_boundary(chain), opts);
  return std::abs(lhs - rhs);
}

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v))
    comp_ += (sum_ - t) + v;
  else
    comp_ += (v - t) + sum_;
  sum_ = t;
}

}  // namespace xcal
