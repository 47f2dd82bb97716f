#pragma once
// Exterior calculus on coordinate charts: scalar fields with optional analytic
// derivatives, sparse differential forms, vector fields, and the standard
// operations (wedge, exterior derivative, interior product, pullback).
//
// Conventions used throughout:
//   * a chart is an axis-aligned box in R^d with axes numbered 0..d-1;
//   * forms are stored sparsely as {strictly increasing multi-index -> field},
//     any sign from reordering input axes is folded into the coefficient;
//   * an absent key means a zero coefficient; known-zero fields are pruned.

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace xcal {

// Charts of dimension up to 4 (a 3-d space plus time is the largest we use).
inline constexpr int kMaxDim = 4;

// A chart point viewed through a span; storage belongs to the caller.
using Pt = std::span<const double>;

// Fixed-capacity point/vector value. Entries beyond the active dimension are
// kept at zero; the active dimension is implied by context.
using Vec = std::array<double, kMaxDim>;

// Dense derivative values of a scalar field: Grad[i] = d_i f,
// Hess[i][j] = d_i d_j f (symmetric).
using Grad = std::array<double, kMaxDim>;
using Hess = std::array<Grad, kMaxDim>;

Vec to_vec(Pt x);

// ---------------------------------------------------------------------------
// MultiIndex: a strictly increasing list of axis numbers (possibly empty).
// ---------------------------------------------------------------------------
class MultiIndex {
public:
  MultiIndex() = default;
  // Axes must be strictly increasing; throws std::invalid_argument otherwise.
  MultiIndex(std::initializer_list<int> axes);
  explicit MultiIndex(std::span<const int> axes);

  int degree() const { return size_; }
  int axis(int i) const { return axes_[static_cast<size_t>(i)]; }
  bool contains(int a) const;

  // Multi-index with the entry at position `pos` removed.
  MultiIndex erased(int pos) const;
  // Axes of {0..dim-1} not present in this index, in increasing order.
  MultiIndex complement(int dim) const;

  // All multi-indices of the given degree over axes {0..dim-1}.
  static std::vector<MultiIndex> enumerate(int dim, int degree);

  // Merge two disjoint increasing index lists; returns the permutation sign
  // (+1/-1) of sorting the concatenation a|b, or 0 when an axis repeats.
  static int merge(const MultiIndex& a, const MultiIndex& b, MultiIndex* out);

  // Insert one axis, returning (-1)^(number of entries before it) or 0 when
  // the axis is already present.
  int inserted(int a, MultiIndex* out) const;

  bool operator==(const MultiIndex& o) const = default;
  auto operator<=>(const MultiIndex& o) const = default;

  std::string str() const;  // e.g. "{0,2}" — for diagnostics

private:
  std::array<int8_t, kMaxDim> axes_{};
  int8_t size_ = 0;
};

// ---------------------------------------------------------------------------
// ScalarField: a real-valued field on a chart.  Evaluation is mandatory;
// analytic gradient and Hessian closures are optional.  Partial derivatives
// fall back to central finite differences with a relative step.
// ---------------------------------------------------------------------------
class ScalarField {
public:
  using EvalFn = std::function<double(Pt)>;
  using GradFn = std::function<Grad(Pt)>;
  using HessFn = std::function<Hess(Pt)>;

  ScalarField();  // the zero field
  explicit ScalarField(EvalFn f);
  ScalarField(EvalFn f, GradFn g);
  ScalarField(EvalFn f, GradFn g, HessFn h);

  static ScalarField zero() { return ScalarField(); }
  static ScalarField constant(double c);

  double operator()(Pt x) const { return eval_(x); }

  // d_axis f at x: analytic when a gradient closure is present, otherwise
  // (f(x+h e) - f(x-h e)) / 2h with h = fd_step * max(1, |x[axis]|).
  double partial(int axis, Pt x) const;

  // The field x -> d_axis f(x).  Carries an analytic gradient exactly when
  // this field has a Hessian closure.
  ScalarField derivative(int axis) const;

  bool is_zero() const { return zero_; }
  bool has_gradient() const { return static_cast<bool>(grad_); }
  bool has_hessian() const { return static_cast<bool>(hess_); }

  double fd_step() const { return fd_step_; }
  ScalarField& set_fd_step(double h);

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& a);
  friend ScalarField operator-(const ScalarField& a);

private:
  EvalFn eval_;
  GradFn grad_;
  HessFn hess_;
  double fd_step_ = 1e-5;
  bool zero_ = false;
};

// ---------------------------------------------------------------------------
// SmoothMap: a map from a k-dim parameter box into a d-dim chart, with an
// optional analytic Jacobian.  Jacobian layout: jac[target][param].
// ---------------------------------------------------------------------------
class SmoothMap {
public:
  using EvalFn = std::function<void(Pt, std::span<double>)>;
  using JacFn = std::function<void(Pt, Hess&)>;  // row = target axis

  SmoothMap(int domain_dim, int target_dim, EvalFn f, JacFn jac = nullptr);
  static SmoothMap identity(int dim);

  int domain_dim() const { return domain_dim_; }
  int target_dim() const { return target_dim_; }
  bool has_jacobian() const { return static_cast<bool>(jac_); }

  void eval(Pt u, std::span<double> out) const { eval_(u, out); }
  Vec operator()(Pt u) const;
  // Analytic when available, else column-wise central differences.
  void jacobian(Pt u, Hess& out) const;

  // The map with domain axis `axis` frozen at `value` (one dimension lower).
  // Used to embed boundary faces; keeps the analytic Jacobian if present.
  SmoothMap restricted(int axis, double value) const;

  double fd_step() const { return fd_step_; }
  SmoothMap& set_fd_step(double h);

private:
  int domain_dim_;
  int target_dim_;
  EvalFn eval_;
  JacFn jac_;
  double fd_step_ = 1e-6;
};

// ---------------------------------------------------------------------------
// DifferentialForm: degree-r form stored as {multi-index -> coefficient}.
// A degree-0 form is a single term keyed by the empty multi-index.
// ---------------------------------------------------------------------------
class DifferentialForm {
public:
  DifferentialForm() = default;
  // Degree must satisfy 0 <= degree <= dim; throws otherwise.
  DifferentialForm(int dim, int degree);

  // Convenience: the degree-0 form wrapping one field.
  static DifferentialForm function(int dim, ScalarField f);

  int dim() const { return dim_; }
  int degree() const { return degree_; }

  // Replace the coefficient at a canonical (strictly increasing) index.
  // Known-zero fields erase the slot instead of storing it.
  DifferentialForm& set(const MultiIndex& idx, ScalarField f);
  // Add into the slot (creating it when absent).
  DifferentialForm& add(const MultiIndex& idx, const ScalarField& f);

  const std::map<MultiIndex, ScalarField>& terms() const { return terms_; }
  const ScalarField* term(const MultiIndex& idx) const;
  double coeff(const MultiIndex& idx, Pt x) const;  // 0 for an absent key

  bool empty() const { return terms_.empty(); }
  // max_I |coeff_I(x)| — the pointwise magnitude used by residual checks.
  double max_abs_coeff(Pt x) const;

  friend DifferentialForm operator+(const DifferentialForm& a,
                                    const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a,
                                    const DifferentialForm& b);
  friend DifferentialForm operator*(double c, const DifferentialForm& a);

private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<MultiIndex, ScalarField> terms_;
};

// ---------------------------------------------------------------------------
// VectorField and VolumeElement.
// ---------------------------------------------------------------------------
class VectorField {
public:
  VectorField() = default;
  VectorField(int dim, std::array<ScalarField, kMaxDim> components);
  // Constant vector field (e.g. a coordinate direction).
  static VectorField constant(int dim, Vec v);
  static VectorField basis(int dim, int axis);

  int dim() const { return dim_; }
  const ScalarField& component(int axis) const;
  Vec operator()(Pt x) const;

private:
  int dim_ = 0;
  std::array<ScalarField, kMaxDim> comps_{};
};

// A top-degree form declared nowhere-vanishing.  kinematic-flux style
// divisions check the declaration at every evaluation point and throw
// std::domain_error when the coefficient is (near) zero.
class VolumeElement {
public:
  explicit VolumeElement(DifferentialForm top);
  const DifferentialForm& form() const { return form_; }
  int dim() const { return form_.dim(); }
  // The single coefficient theta_{0...d-1}(x); throws when |value| < floor.
  double density(Pt x) const;
  const ScalarField& density_field() const;

private:
  DifferentialForm form_;
};

// ---------------------------------------------------------------------------
// Operations.
// ---------------------------------------------------------------------------

// a ^ b.  Requires equal chart dims and degree(a)+degree(b) <= dim.
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

// Exterior derivative, differentiating along axes >= from_axis.  The default
// covers the whole chart; from_axis = 1 is the space-only derivative on a
// chart whose axis 0 is time.  d of a top-degree form is the zero form of the
// same chart (there is no higher slot to occupy).
DifferentialForm exterior_derivative(const DifferentialForm& a,
                                     int from_axis = 0);

// Interior product v -| a (contraction in the first slot).  Degree-0 input is
// an error.
DifferentialForm contract(const VectorField& v, const DifferentialForm& a);

// Pullback of `a` along `map` onto the parameter box.  When degree(a) exceeds
// the parameter dimension the pullback vanishes identically and the top-degree
// zero form on the box stands in for it (no higher degree is representable).
DifferentialForm pullback(const SmoothMap& map, const DifferentialForm& a);

// Coefficient-wise partial along one axis (same degree).  With axis = 0 on a
// time-extended chart this is the rate form beta = d/dt of a density family.
DifferentialForm coefficient_partial(const DifferentialForm& a, int axis);

}  // namespace xcal
