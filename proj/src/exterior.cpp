#include "xcal/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace xcal {

Vec to_vec(Pt x) {
  Vec v{};
  for (size_t i = 0; i < x.size() && i < static_cast<size_t>(kMaxDim); ++i)
    v[i] = x[i];
  return v;
}

// ---------------------------------------------------------------------------
// MultiIndex
// ---------------------------------------------------------------------------

MultiIndex::MultiIndex(std::initializer_list<int> axes)
    : MultiIndex(std::span<const int>(axes.begin(), axes.size())) {}

MultiIndex::MultiIndex(std::span<const int> axes) {
  if (axes.size() > static_cast<size_t>(kMaxDim))
    throw std::invalid_argument("MultiIndex: too many axes");
  int prev = -1;
  for (int a : axes) {
    if (a < 0 || a >= kMaxDim)
      throw std::invalid_argument("MultiIndex: axis out of range");
    if (a <= prev)
      throw std::invalid_argument("MultiIndex: axes must be strictly increasing");
    axes_[static_cast<size_t>(size_++)] = static_cast<int8_t>(a);
    prev = a;
  }
}

bool MultiIndex::contains(int a) const {
  for (int i = 0; i < size_; ++i)
    if (axes_[static_cast<size_t>(i)] == a) return true;
  return false;
}

MultiIndex MultiIndex::erased(int pos) const {
  if (pos < 0 || pos >= size_)
    throw std::out_of_range("MultiIndex::erased: bad position");
  MultiIndex out;
  for (int i = 0; i < size_; ++i)
    if (i != pos) out.axes_[static_cast<size_t>(out.size_++)] = axes_[static_cast<size_t>(i)];
  return out;
}

MultiIndex MultiIndex::complement(int dim) const {
  MultiIndex out;
  for (int a = 0; a < dim; ++a)
    if (!contains(a)) out.axes_[static_cast<size_t>(out.size_++)] = static_cast<int8_t>(a);
  return out;
}

std::vector<MultiIndex> MultiIndex::enumerate(int dim, int degree) {
  std::vector<MultiIndex> out;
  if (degree < 0 || degree > dim) return out;
  std::array<int, kMaxDim> pick{};
  // iterative combination enumeration in lexicographic order
  for (int i = 0; i < degree; ++i) pick[static_cast<size_t>(i)] = i;
  while (true) {
    MultiIndex m;
    for (int i = 0; i < degree; ++i)
      m.axes_[static_cast<size_t>(m.size_++)] = static_cast<int8_t>(pick[static_cast<size_t>(i)]);
    out.push_back(m);
    int i = degree - 1;
    while (i >= 0 && pick[static_cast<size_t>(i)] == dim - degree + i) --i;
    if (i < 0) break;
    ++pick[static_cast<size_t>(i)];
    for (int j = i + 1; j < degree; ++j)
      pick[static_cast<size_t>(j)] = pick[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

int MultiIndex::merge(const MultiIndex& a, const MultiIndex& b, MultiIndex* out) {
  MultiIndex m;
  int i = 0, j = 0, swaps = 0;
  while (i < a.size_ || j < b.size_) {
    if (m.size_ >= kMaxDim) throw std::invalid_argument("MultiIndex::merge: overflow");
    if (j >= b.size_ || (i < a.size_ && a.axes_[static_cast<size_t>(i)] < b.axes_[static_cast<size_t>(j)])) {
      m.axes_[static_cast<size_t>(m.size_++)] = a.axes_[static_cast<size_t>(i++)];
    } else if (i >= a.size_ || b.axes_[static_cast<size_t>(j)] < a.axes_[static_cast<size_t>(i)]) {
      // every remaining entry of a must jump over this entry of b
      swaps += a.size_ - i;
      m.axes_[static_cast<size_t>(m.size_++)] = b.axes_[static_cast<size_t>(j++)];
    } else {
      return 0;  // shared axis
    }
  }
  if (out) *out = m;
  return (swaps % 2 == 0) ? 1 : -1;
}

int MultiIndex::inserted(int a, MultiIndex* out) const {
  if (contains(a)) return 0;
  MultiIndex single;
  single.axes_[0] = static_cast<int8_t>(a);
  single.size_ = 1;
  return merge(single, *this, out);
}

std::string MultiIndex::str() const {
  std::string s = "{";
  for (int i = 0; i < size_; ++i) {
    if (i) s += ",";
    s += std::to_string(static_cast<int>(axes_[static_cast<size_t>(i)]));
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

ScalarField::ScalarField()
    : eval_([](Pt) { return 0.0; }),
      grad_([](Pt) { return Grad{}; }),
      hess_([](Pt) { return Hess{}; }),
      zero_(true) {}

ScalarField::ScalarField(EvalFn f) : eval_(std::move(f)) {
  if (!eval_) throw std::invalid_argument("ScalarField: null eval");
}

ScalarField::ScalarField(EvalFn f, GradFn g)
    : eval_(std::move(f)), grad_(std::move(g)) {
  if (!eval_) throw std::invalid_argument("ScalarField: null eval");
}

ScalarField::ScalarField(EvalFn f, GradFn g, HessFn h)
    : eval_(std::move(f)), grad_(std::move(g)), hess_(std::move(h)) {
  if (!eval_) throw std::invalid_argument("ScalarField: null eval");
}

ScalarField ScalarField::constant(double c) {
  if (c == 0.0) return ScalarField();
  ScalarField f([c](Pt) { return c; }, [](Pt) { return Grad{}; },
                [](Pt) { return Hess{}; });
  return f;
}

double ScalarField::partial(int axis, Pt x) const {
  if (zero_) return 0.0;
  if (grad_) return grad_(x)[static_cast<size_t>(axis)];
  const double h = fd_step_ * std::max(1.0, std::abs(x[static_cast<size_t>(axis)]));
  Vec p = to_vec(x);
  const size_t n = x.size();
  p[static_cast<size_t>(axis)] += h;
  const double fp = eval_(Pt(p.data(), n));
  p[static_cast<size_t>(axis)] -= 2 * h;
  const double fm = eval_(Pt(p.data(), n));
  return (fp - fm) / (2 * h);
}

ScalarField ScalarField::derivative(int axis) const {
  if (zero_) return ScalarField();
  ScalarField self = *this;
  ScalarField out([self, axis](Pt x) { return self.partial(axis, x); });
  if (hess_) {
    HessFn h = hess_;
    out.grad_ = [h, axis](Pt x) { return h(x)[static_cast<size_t>(axis)]; };
  }
  out.fd_step_ = fd_step_;
  return out;
}

ScalarField& ScalarField::set_fd_step(double h) {
  if (!(h > 0)) throw std::invalid_argument("ScalarField: fd_step must be > 0");
  fd_step_ = h;
  return *this;
}

namespace {

// Gradient closure that differentiates through captured operand fields,
// staying analytic where they are and finite-difference elsewhere.
ScalarField::GradFn sum_grad(ScalarField a, ScalarField b, double sb) {
  return [a, b, sb](Pt x) {
    Grad g{};
    for (size_t i = 0; i < x.size(); ++i)
      g[i] = a.partial(static_cast<int>(i), x) + sb * b.partial(static_cast<int>(i), x);
    return g;
  };
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  ScalarField av = a, bv = b;
  ScalarField out([av, bv](Pt x) { return av(x) + bv(x); }, sum_grad(a, b, +1.0));
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  ScalarField av = a, bv = b;
  ScalarField out([av, bv](Pt x) { return av(x) - bv(x); }, sum_grad(a, b, -1.0));
  return out;
}

ScalarField operator-(const ScalarField& a) { return -1.0 * a; }

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  if (a.is_zero() || b.is_zero()) return ScalarField();
  ScalarField av = a, bv = b;
  ScalarField out([av, bv](Pt x) { return av(x) * bv(x); },
                  [av, bv](Pt x) {
                    Grad g{};
                    const double fa = av(x), fb = bv(x);
                    for (size_t i = 0; i < x.size(); ++i)
                      g[i] = av.partial(static_cast<int>(i), x) * fb +
                             fa * bv.partial(static_cast<int>(i), x);
                    return g;
                  });
  return out;
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  if (b.is_zero()) throw std::invalid_argument("ScalarField: division by zero field");
  if (a.is_zero()) return ScalarField();
  ScalarField av = a, bv = b;
  ScalarField out([av, bv](Pt x) { return av(x) / bv(x); },
                  [av, bv](Pt x) {
                    Grad g{};
                    const double fa = av(x), fb = bv(x);
                    for (size_t i = 0; i < x.size(); ++i)
                      g[i] = (av.partial(static_cast<int>(i), x) * fb -
                              fa * bv.partial(static_cast<int>(i), x)) /
                             (fb * fb);
                    return g;
                  });
  return out;
}

ScalarField operator*(double c, const ScalarField& a) {
  if (c == 0.0 || a.is_zero()) return ScalarField();
  if (c == 1.0) return a;
  ScalarField out;
  out.zero_ = false;
  const ScalarField::EvalFn ae = a.eval_;
  out.eval_ = [c, ae](Pt x) { return c * ae(x); };
  if (a.grad_) {
    const ScalarField::GradFn ag = a.grad_;
    out.grad_ = [c, ag](Pt x) {
      Grad g = ag(x);
      for (double& v : g) v *= c;
      return g;
    };
  } else {
    out.grad_ = nullptr;
  }
  if (a.hess_) {
    const ScalarField::HessFn ah = a.hess_;
    out.hess_ = [c, ah](Pt x) {
      Hess h = ah(x);
      for (Grad& row : h)
        for (double& v : row) v *= c;
      return h;
    };
  } else {
    out.hess_ = nullptr;
  }
  out.fd_step_ = a.fd_step_;
  return out;
}

// ---------------------------------------------------------------------------
// SmoothMap
// ---------------------------------------------------------------------------

SmoothMap::SmoothMap(int domain_dim, int target_dim, EvalFn f, JacFn jac)
    : domain_dim_(domain_dim), target_dim_(target_dim),
      eval_(std::move(f)), jac_(std::move(jac)) {
  if (domain_dim < 0 || domain_dim > kMaxDim || target_dim < 1 || target_dim > kMaxDim)
    throw std::invalid_argument("SmoothMap: dimension out of range");
  if (!eval_) throw std::invalid_argument("SmoothMap: null eval");
}

SmoothMap SmoothMap::identity(int dim) {
  return SmoothMap(
      dim, dim,
      [](Pt u, std::span<double> out) {
        for (size_t i = 0; i < u.size(); ++i) out[i] = u[i];
      },
      [](Pt u, Hess& j) {
        j = Hess{};
        for (size_t i = 0; i < u.size(); ++i) j[i][i] = 1.0;
      });
}

Vec SmoothMap::operator()(Pt u) const {
  Vec out{};
  eval_(u, std::span<double>(out.data(), static_cast<size_t>(target_dim_)));
  return out;
}

void SmoothMap::jacobian(Pt u, Hess& out) const {
  if (jac_) {
    jac_(u, out);
    return;
  }
  out = Hess{};
  Vec p = to_vec(u);
  Vec xp{}, xm{};
  for (int c = 0; c < domain_dim_; ++c) {
    const double h = fd_step_ * std::max(1.0, std::abs(u[static_cast<size_t>(c)]));
    const double saved = p[static_cast<size_t>(c)];
    p[static_cast<size_t>(c)] = saved + h;
    eval_(Pt(p.data(), u.size()), std::span<double>(xp.data(), static_cast<size_t>(target_dim_)));
    p[static_cast<size_t>(c)] = saved - h;
    eval_(Pt(p.data(), u.size()), std::span<double>(xm.data(), static_cast<size_t>(target_dim_)));
    p[static_cast<size_t>(c)] = saved;
    for (int r = 0; r < target_dim_; ++r)
      out[static_cast<size_t>(r)][static_cast<size_t>(c)] =
          (xp[static_cast<size_t>(r)] - xm[static_cast<size_t>(r)]) / (2 * h);
  }
}

SmoothMap SmoothMap::restricted(int axis, double value) const {
  if (axis < 0 || axis >= domain_dim_)
    throw std::invalid_argument("SmoothMap::restricted: bad axis");
  const SmoothMap parent = *this;
  const int k = domain_dim_ - 1;
  auto embed = [axis, value, k](Pt u, Vec& full) {
    for (int i = 0, j = 0; i < k + 1; ++i)
      full[static_cast<size_t>(i)] = (i == axis) ? value : u[static_cast<size_t>(j++)];
  };
  EvalFn ev = [parent, embed, k](Pt u, std::span<double> out) {
    Vec full{};
    embed(u, full);
    parent.eval(Pt(full.data(), static_cast<size_t>(k + 1)), out);
  };
  JacFn jc = nullptr;
  if (jac_) {
    jc = [parent, embed, axis, k](Pt u, Hess& out) {
      Vec full{};
      embed(u, full);
      Hess pj{};
      parent.jacobian(Pt(full.data(), static_cast<size_t>(k + 1)), pj);
      out = Hess{};
      for (int r = 0; r < parent.target_dim(); ++r)
        for (int c = 0, cc = 0; c < k + 1; ++c)
          if (c != axis)
            out[static_cast<size_t>(r)][static_cast<size_t>(cc++)] =
                pj[static_cast<size_t>(r)][static_cast<size_t>(c)];
    };
  }
  SmoothMap m(k, target_dim_, std::move(ev), std::move(jc));
  m.fd_step_ = fd_step_;
  return m;
}

SmoothMap& SmoothMap::set_fd_step(double h) {
  if (!(h > 0)) throw std::invalid_argument("SmoothMap: fd_step must be > 0");
  fd_step_ = h;
  return *this;
}

// ---------------------------------------------------------------------------
// DifferentialForm
// ---------------------------------------------------------------------------

DifferentialForm::DifferentialForm(int dim, int degree)
    : dim_(dim), degree_(degree) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("DifferentialForm: dim out of range");
  if (degree < 0 || degree > dim)
    throw std::invalid_argument("DifferentialForm: degree out of range");
}

DifferentialForm DifferentialForm::function(int dim, ScalarField f) {
  DifferentialForm a(dim, 0);
  a.set(MultiIndex{}, std::move(f));
  return a;
}

DifferentialForm& DifferentialForm::set(const MultiIndex& idx, ScalarField f) {
  if (idx.degree() != degree_)
    throw std::invalid_argument("DifferentialForm::set: index degree mismatch");
  for (int i = 0; i < idx.degree(); ++i)
    if (idx.axis(i) >= dim_)
      throw std::invalid_argument("DifferentialForm::set: axis beyond chart dim");
  if (f.is_zero())
    terms_.erase(idx);
  else
    terms_[idx] = std::move(f);
  return *this;
}

DifferentialForm& DifferentialForm::add(const MultiIndex& idx, const ScalarField& f) {
  if (f.is_zero()) return *this;
  auto it = terms_.find(idx);
  if (it == terms_.end()) return set(idx, f);
  it->second = it->second + f;
  return *this;
}

const ScalarField* DifferentialForm::term(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? nullptr : &it->second;
}

double DifferentialForm::coeff(const MultiIndex& idx, Pt x) const {
  auto it = terms_.find(idx);
  return it == terms_.end() ? 0.0 : it->second(x);
}

double DifferentialForm::max_abs_coeff(Pt x) const {
  double m = 0.0;
  for (const auto& [idx, f] : terms_) m = std::max(m, std::abs(f(x)));
  return m;
}

DifferentialForm operator+(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dim() != b.dim() || a.degree() != b.degree())
    throw std::invalid_argument("DifferentialForm: +/- shape mismatch");
  DifferentialForm out = a;
  for (const auto& [idx, f] : b.terms_) out.add(idx, f);
  return out;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) {
  return a + (-1.0 * b);
}

DifferentialForm operator*(double c, const DifferentialForm& a) {
  DifferentialForm out(a.dim(), a.degree());
  if (c == 0.0) return out;
  for (const auto& [idx, f] : a.terms_) out.set(idx, c * f);
  return out;
}

// ---------------------------------------------------------------------------
// VectorField / VolumeElement
// ---------------------------------------------------------------------------

VectorField::VectorField(int dim, std::array<ScalarField, kMaxDim> components)
    : dim_(dim), comps_(std::move(components)) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("VectorField: dim out of range");
}

VectorField VectorField::constant(int dim, Vec v) {
  std::array<ScalarField, kMaxDim> c{};
  for (int i = 0; i < dim; ++i) c[static_cast<size_t>(i)] = ScalarField::constant(v[static_cast<size_t>(i)]);
  return VectorField(dim, std::move(c));
}

VectorField VectorField::basis(int dim, int axis) {
  Vec v{};
  v[static_cast<size_t>(axis)] = 1.0;
  return constant(dim, v);
}

const ScalarField& VectorField::component(int axis) const {
  if (axis < 0 || axis >= dim_)
    throw std::out_of_range("VectorField::component: bad axis");
  return comps_[static_cast<size_t>(axis)];
}

Vec VectorField::operator()(Pt x) const {
  Vec out{};
  for (int i = 0; i < dim_; ++i) out[static_cast<size_t>(i)] = comps_[static_cast<size_t>(i)](x);
  return out;
}

namespace {
constexpr double kVolumeFloor = 1e-14;
}

VolumeElement::VolumeElement(DifferentialForm top) : form_(std::move(top)) {
  if (form_.degree() != form_.dim())
    throw std::invalid_argument("VolumeElement: form must be top-degree");
  if (form_.terms().size() != 1)
    throw std::invalid_argument("VolumeElement: top form must have its single coefficient set");
}

double VolumeElement::density(Pt x) const {
  const double v = form_.terms().begin()->second(x);
  if (std::abs(v) < kVolumeFloor)
    throw std::domain_error("VolumeElement: density vanishes at an evaluation point");
  return v;
}

const ScalarField& VolumeElement::density_field() const {
  return form_.terms().begin()->second;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("wedge: chart dimension mismatch");
  const int deg = a.degree() + b.degree();
  if (deg > a.dim())
    throw std::invalid_argument("wedge: combined degree exceeds chart dimension");
  DifferentialForm out(a.dim(), deg);
  for (const auto& [ia, fa] : a.terms()) {
    for (const auto& [ib, fb] : b.terms()) {
      MultiIndex merged;
      const int sign = MultiIndex::merge(ia, ib, &merged);
      if (sign == 0) continue;
      out.add(merged, static_cast<double>(sign) * (fa * fb));
    }
  }
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& a, int from_axis) {
  if (a.degree() == a.dim()) {
    // nothing above top degree: d of a top form is the zero form at top degree
    return DifferentialForm(a.dim(), a.dim());
  }
  DifferentialForm out(a.dim(), a.degree() + 1);
  for (const auto& [idx, f] : a.terms()) {
    for (int ax = from_axis; ax < a.dim(); ++ax) {
      MultiIndex target;
      const int sign = idx.inserted(ax, &target);
      if (sign == 0) continue;
      out.add(target, static_cast<double>(sign) * f.derivative(ax));
    }
  }
  return out;
}

DifferentialForm contract(const VectorField& v, const DifferentialForm& a) {
  if (v.dim() != a.dim())
    throw std::invalid_argument("contract: chart dimension mismatch");
  if (a.degree() == 0)
    throw std::invalid_argument("contract: cannot contract a degree-0 form");
  DifferentialForm out(a.dim(), a.degree() - 1);
  for (const auto& [idx, f] : a.terms()) {
    for (int pos = 0; pos < idx.degree(); ++pos) {
      const double sign = (pos % 2 == 0) ? 1.0 : -1.0;
      out.add(idx.erased(pos), sign * (v.component(idx.axis(pos)) * f));
    }
  }
  return out;
}

namespace {

// Determinant of the minor of jac with the given target-axis rows and
// parameter-axis columns (r x r, r <= kMaxDim).
double minor_det(const Hess& jac, const MultiIndex& rows, const MultiIndex& cols) {
  const int r = rows.degree();
  double m[kMaxDim][kMaxDim];
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      m[i][j] = jac[static_cast<size_t>(rows.axis(i))][static_cast<size_t>(cols.axis(j))];
  switch (r) {
    case 0: return 1.0;
    case 1: return m[0][0];
    case 2: return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    case 3:
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    default: {
      // Laplace expansion along the first row (r == 4)
      double det = 0.0, sgn = 1.0;
      for (int c = 0; c < r; ++c, sgn = -sgn) {
        double sub[3][3];
        for (int i = 1; i < r; ++i)
          for (int j = 0, jj = 0; j < r; ++j)
            if (j != c) sub[i - 1][jj++] = m[i][j];
        det += sgn * m[0][c] *
               (sub[0][0] * (sub[1][1] * sub[2][2] - sub[1][2] * sub[2][1]) -
                sub[0][1] * (sub[1][0] * sub[2][2] - sub[1][2] * sub[2][0]) +
                sub[0][2] * (sub[1][0] * sub[2][1] - sub[1][1] * sub[2][0]));
      }
      return det;
    }
  }
}

}  // namespace

DifferentialForm pullback(const SmoothMap& map, const DifferentialForm& a) {
  if (map.target_dim() != a.dim())
    throw std::invalid_argument("pullback: map target dim does not match form dim");
  const int k = map.domain_dim();
  const int r = a.degree();
  if (k < 1)
    throw std::invalid_argument("pullback: zero-dimensional parameter domain");
  if (r > k) return DifferentialForm(k, k);  // vanishes identically
  DifferentialForm out(k, r);
  if (r == 0) {
    const SmoothMap m = map;
    const ScalarField* f = a.term(MultiIndex{});
    if (!f) return out;
    const ScalarField field = *f;
    out.set(MultiIndex{}, ScalarField([m, field](Pt u) {
              Vec x = m(u);
              return field(Pt(x.data(), static_cast<size_t>(m.target_dim())));
            }));
    return out;
  }
  const SmoothMap m = map;
  const DifferentialForm form = a;
  for (const MultiIndex& K : MultiIndex::enumerate(k, r)) {
    out.set(K, ScalarField([m, form, K](Pt u) {
              Vec x = m(u);
              const Pt xp(x.data(), static_cast<size_t>(m.target_dim()));
              Hess jac{};
              m.jacobian(u, jac);
              double acc = 0.0;
              for (const auto& [I, f] : form.terms())
                acc += f(xp) * minor_det(jac, I, K);
              return acc;
            }));
  }
  return out;
}

DifferentialForm coefficient_partial(const DifferentialForm& a, int axis) {
  if (axis < 0 || axis >= a.dim())
    throw std::invalid_argument("coefficient_partial: bad axis");
  DifferentialForm out(a.dim(), a.degree());
  for (const auto& [idx, f] : a.terms()) out.add(idx, f.derivative(axis));
  return out;
}

}  // namespace xcal
