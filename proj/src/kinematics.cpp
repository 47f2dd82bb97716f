#include "xcal/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace xcal {

namespace {

Pt view(const Vec& v, int dim) { return Pt(v.data(), static_cast<size_t>(dim)); }

}  // namespace

VectorField kinematic_flux(const DifferentialForm& flux,
                           const VolumeElement& vol) {
  const int dim = vol.dim();
  if (flux.dim() != dim) throw std::invalid_argument("kinematic_flux: chart dim mismatch");
  if (flux.degree() != dim - 1)
    throw std::invalid_argument("kinematic_flux: flux must have codimension one");

  // Guarded density with a gradient borrowed from the raw coefficient, so
  // quotient-rule derivatives stay analytic when the coefficient's are.
  const ScalarField den = vol.density_field();
  ScalarField guarded(
      [vol](Pt x) { return vol.density(x); },
      [den, dim](Pt x) {
        Grad g{};
        for (int a = 0; a < dim; ++a) g[static_cast<size_t>(a)] = den.partial(a, x);
        return g;
      });

  std::array<ScalarField, kMaxDim> comps{};
  for (int a = 0; a < dim; ++a) {
    const MultiIndex omit = MultiIndex{a}.complement(dim);
    const ScalarField* coeff = flux.term(omit);
    if (coeff == nullptr) continue;  // component identically zero
    const double sign = (a % 2 == 0) ? 1.0 : -1.0;
    comps[static_cast<size_t>(a)] = (sign * *coeff) / guarded;
  }
  return VectorField(dim, std::move(comps));
}

double flux_space_membership(const VectorField& v,
                             const DifferentialForm& flux,
                             std::span<const Vec> pts) {
  const DifferentialForm hooked = contract(v, flux);
  double worst = 0.0;
  for (const Vec& p : pts) {
    Pt x = view(p, flux.dim());
    for (const auto& [idx, coeff] : hooked.terms())
      worst = std::max(worst, std::fabs(coeff(x)));
  }
  return worst;
}

double volume_element_invariance(const VectorField& a, const VectorField& b,
                                 std::span<const Vec> pts) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("volume_element_invariance: dim mismatch");
  const int dim = a.dim();
  double worst = 0.0;
  for (const Vec& p : pts) {
    Pt x = view(p, dim);
    const Vec va = a(x);
    const Vec vb = b(x);
    double na2 = 0.0, nb2 = 0.0, dot = 0.0;
    for (int i = 0; i < dim; ++i) {
      na2 += va[static_cast<size_t>(i)] * va[static_cast<size_t>(i)];
      nb2 += vb[static_cast<size_t>(i)] * vb[static_cast<size_t>(i)];
      dot += va[static_cast<size_t>(i)] * vb[static_cast<size_t>(i)];
    }
    if (na2 <= 0.0) continue;  // zero vector is parallel to anything
    if (nb2 <= 0.0) {
      worst = std::max(worst, 1.0);
      continue;
    }
    double rej2 = 0.0;
    const double scale = dot / nb2;
    for (int i = 0; i < dim; ++i) {
      const double r = va[static_cast<size_t>(i)] - scale * vb[static_cast<size_t>(i)];
      rej2 += r * r;
    }
    worst = std::max(worst, std::sqrt(std::max(rej2, 0.0) / na2));
  }
  return worst;
}

namespace {

Vec rk4_step(const VectorField& v, const Vec& x, int dim, double h) {
  auto eval = [&](const Vec& p) { return v(Pt(p.data(), static_cast<size_t>(dim))); };
  const Vec k1 = eval(x);
  Vec mid = x;
  for (int i = 0; i < dim; ++i)
    mid[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + 0.5 * h * k1[static_cast<size_t>(i)];
  const Vec k2 = eval(mid);
  for (int i = 0; i < dim; ++i)
    mid[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + 0.5 * h * k2[static_cast<size_t>(i)];
  const Vec k3 = eval(mid);
  for (int i = 0; i < dim; ++i)
    mid[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + h * k3[static_cast<size_t>(i)];
  const Vec k4 = eval(mid);
  Vec out = x;
  for (int i = 0; i < dim; ++i) {
    const size_t j = static_cast<size_t>(i);
    out[j] = x[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }
  return out;
}

}  // namespace

Worldline integrate_worldline(const VectorField& v, const ChartDomain& domain,
                              Pt seed, const WorldlineOptions& opts) {
  const int dim = domain.dim();
  if (v.dim() != dim)
    throw std::invalid_argument("integrate_worldline: field/domain dim mismatch");
  if (static_cast<int>(seed.size()) != dim)
    throw std::invalid_argument("integrate_worldline: seed dim mismatch");
  if (!(opts.step > 0.0))
    throw std::invalid_argument("integrate_worldline: step must be positive");
  if (!domain.contains(seed))
    throw std::invalid_argument("integrate_worldline: seed outside the domain");

  Worldline w;
  w.dim = dim;
  w.step = opts.step;
  w.seed = to_vec(seed);
  w.status = WorldlineStatus::max_steps;
  w.params.reserve(256);
  w.points.reserve(256);

  Vec x = w.seed;
  double s = 0.0;
  w.params.push_back(s);
  w.points.push_back(x);

  for (long i = 0; i < opts.max_steps; ++i) {
    double h = opts.step;
    if (opts.param_end) {
      const double remaining = *opts.param_end - s;
      if (remaining <= 1e-15) {
        w.status = WorldlineStatus::completed;
        break;
      }
      h = std::min(h, remaining);
    }
    const Vec next = rk4_step(v, x, dim, h);
    if (!domain.contains(view(next, dim))) {
      w.status = WorldlineStatus::left_domain;
      break;
    }
    x = next;
    s += h;
    w.params.push_back(s);
    w.points.push_back(x);
  }
  if (opts.param_end && w.status == WorldlineStatus::max_steps &&
      *opts.param_end - s <= 1e-15) {
    w.status = WorldlineStatus::completed;
  }
  return w;
}

namespace {

// Piecewise-linear resampling at equal fractions of total chord length.
std::vector<Vec> resample_by_arclength(const Worldline& w, int samples) {
  const int dim = w.dim;
  const size_t n = w.points.size();
  std::vector<double> cum(n, 0.0);
  for (size_t i = 1; i < n; ++i) {
    double d2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      const double d = w.points[i][static_cast<size_t>(k)] -
                       w.points[i - 1][static_cast<size_t>(k)];
      d2 += d * d;
    }
    cum[i] = cum[i - 1] + std::sqrt(d2);
  }
  const double total = cum.empty() ? 0.0 : cum.back();

  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    if (n == 0) break;
    if (total <= 0.0 || n == 1) {
      out.push_back(w.points.front());
      continue;
    }
    const double target = total * static_cast<double>(j) /
                          static_cast<double>(samples - 1);
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    size_t hi = static_cast<size_t>(std::distance(cum.begin(), it));
    if (hi == 0) hi = 1;
    if (hi >= n) hi = n - 1;
    const size_t lo = hi - 1;
    const double seg = cum[hi] - cum[lo];
    const double f = seg > 0.0 ? (target - cum[lo]) / seg : 0.0;
    Vec p{};
    for (int k = 0; k < dim; ++k) {
      const size_t kk = static_cast<size_t>(k);
      p[kk] = w.points[lo][kk] + f * (w.points[hi][kk] - w.points[lo][kk]);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

double worldline_separation(const Worldline& a, const Worldline& b,
                            int samples) {
  if (a.dim != b.dim)
    throw std::invalid_argument("worldline_separation: dim mismatch");
  if (samples < 2) throw std::invalid_argument("worldline_separation: need >= 2 samples");
  const auto ra = resample_by_arclength(a, samples);
  const auto rb = resample_by_arclength(b, samples);
  if (ra.empty() || rb.empty())
    throw std::invalid_argument("worldline_separation: empty worldline");
  double worst = 0.0;
  for (size_t i = 0; i < ra.size() && i < rb.size(); ++i) {
    double d2 = 0.0;
    for (int k = 0; k < a.dim; ++k) {
      const double d = ra[i][static_cast<size_t>(k)] - rb[i][static_cast<size_t>(k)];
      d2 += d * d;
    }
    worst = std::max(worst, std::sqrt(d2));
  }
  return worst;
}

double max_track_deviation(const Worldline& w,
                           const std::function<Vec(double)>& space_of_t) {
  double worst = 0.0;
  for (const Vec& p : w.points) {
    const Vec e = space_of_t(p[0]);
    for (int k = 1; k < w.dim; ++k) {
      worst = std::max(worst, std::fabs(p[static_cast<size_t>(k)] -
                                        e[static_cast<size_t>(k - 1)]));
    }
  }
  return worst;
}

}  // namespace xcal
