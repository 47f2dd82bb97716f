#pragma once
// Regions, chains and quadrature.
//
// Integration domains are finite formal sums of oriented cells.  A cell is a
// smooth map from an axis-aligned parameter box into a chart; orientation and
// multiplicity live in the chain weights.  Integration pulls the form back to
// each parameter box and applies a composite tensor-product Gauss–Legendre
// rule (nodes/weights from GSL).
//
// A subtlety worth spelling out: test forms used by the current machinery are
// supported in small balls, while the charts are comparatively huge.  An
// optional SupportWindow tells integrate() that the integrand vanishes
// *exactly* outside a ball; subcells whose (conservatively estimated) chart
// image misses the ball are skipped, and subcells that straddle the ball edge
// are refined one extra dyadic level.  Pruning requires cell maps whose image
// over a sub-box is bounded by the images of its corners (true for the affine
// and per-axis-monotone maps used here).

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "xcal/exterior.hpp"

namespace xcal {

struct AxisInterval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;    // identified endpoints; no boundary faces
  bool open_lower = false;  // domain excludes the lower bound (e.g. r > 0)
};

// An axis-aligned box, used both for parameter domains and chart bounds.
struct Box {
  int dim = 0;
  std::array<AxisInterval, kMaxDim> axis{};
  double measure() const;
};

// ---------------------------------------------------------------------------
// ChartDomain: a box-shaped chart with optional periodic / open axes.
// ---------------------------------------------------------------------------
class ChartDomain {
public:
  ChartDomain() = default;
  explicit ChartDomain(std::vector<AxisSpec> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const AxisSpec& axis(int i) const { return axes_[static_cast<size_t>(i)]; }
  Box bounds() const;

  // Membership.  Periodic axes never exclude a point (values wrap); open
  // lower bounds are strict.
  bool contains(Pt x) const;

private:
  std::vector<AxisSpec> axes_;
};

// Uniform in-domain sample points (componentwise uniform over the bounds,
// re-drawn while a strict lower bound is violated).  Deterministic for a
// given generator state.
std::vector<Vec> sample_points(const ChartDomain& domain, int count,
                               std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// ParamCell / Chain.
// ---------------------------------------------------------------------------
class ParamCell {
public:
  // `periodic_mask` bit i marks parameter axis i as a closed loop (the map
  // agrees on the two faces), which therefore contributes no boundary faces.
  ParamCell(Box box, SmoothMap map, unsigned periodic_mask = 0);

  int dim() const { return box_.dim; }
  const Box& box() const { return box_; }
  const SmoothMap& map() const { return map_; }
  unsigned periodic_mask() const { return periodic_mask_; }

private:
  Box box_;
  SmoothMap map_;
  unsigned periodic_mask_;
};

struct Chain {
  int chart_dim = 0;
  int dim = 0;  // parameter dimension of every cell
  std::vector<std::pair<ParamCell, double>> cells;

  static Chain single(ParamCell cell, double weight = 1.0);
  Chain& append(ParamCell cell, double weight = 1.0);
};

// The chart box itself as a one-cell chain (identity map).
Chain box_chain(const Box& box);
// Same, but built from a chart domain so periodic axes carry over into the
// cell's periodic mask (and thus drop out of the boundary).
Chain chart_chain(const ChartDomain& domain);
// A single point as a 0-cell chain.
Chain point_chain(int chart_dim, Vec point, double weight = 1.0);

// ---------------------------------------------------------------------------
// Quadrature.
// ---------------------------------------------------------------------------
struct SupportWindow {
  Vec center{};
  double radius = 0.0;
};

struct QuadratureOptions {
  int order = 8;      // Gauss–Legendre points per axis per subcell
  int subcells = 32;  // uniform subdivision per axis
  // Optional per-parameter-axis override of `subcells` (0 = use `subcells`).
  std::array<int, kMaxDim> axis_subcells{};
  // Exact-support hint; see the header comment.
  std::optional<SupportWindow> support;
  bool refine_at_support_edge = true;

  int subcells_for(int axis) const {
    const int s = axis_subcells[static_cast<size_t>(axis)];
    return s > 0 ? s : subcells;
  }
};

// Integral of a degree-k form over a k-chain.  Results are accumulated with
// compensated summation, so the value does not depend on cell order.
double integrate(const DifferentialForm& a, const Chain& chain,
                 const QuadratureOptions& opts = {});

// Oriented boundary of a chain of box cells: for each cell, the 2k faces with
// signs (+ for the upper face, - for the lower, alternating with the axis),
// skipping axes flagged periodic.  Throws for 0-dimensional chains.
Chain chain_boundary(const Chain& chain);

// | integral_c da - integral_{boundary c} a |
double stokes_residual(const DifferentialForm& a, const Chain& chain,
                       const QuadratureOptions& opts = {});

// Kahan–Babuška–Neumaier accumulator (shared by quadrature and reports).
class CompensatedSum {
public:
  void add(double v);
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace xcal
