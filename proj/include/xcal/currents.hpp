// Currents: linear functionals on smooth compactly supported forms, with a
// boundary operator defined by transposing the exterior derivative,
//
//     (boundary T)(psi) = T(d psi),
//
// plus the compactly supported bump forms used to probe them and a driver
// that checks a current balance  boundary T == S  over a family of bumps.
//
// A current of degree r eats r-forms.  Representations:
//   * FormInduced      sign * integral over a region of (inducing form ^ test)
//   * ChainInduced     integral of the test form over an r-chain
//   * DomainRestricted like FormInduced with sign +1, but understood to live
//                      on a proper subdomain, so no boundary shortcut applies
//   * WeightedCurves   sum of weighted line integrals along 1-cells
//   * Combination      linear combination of currents of equal degree
//   * (internal) the definitional boundary of another current
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "xcal/exterior.hpp"
#include "xcal/geometry.hpp"

namespace xcal {

struct CurrentData;

class Current {
public:
  Current() = default;

  // sign * integral over `region` of form ^ test; `region` cells must have
  // full chart dimension and the test support must stay in its interior for
  // the boundary shortcut to be meaningful.
  static Current form_induced(Chain region, DifferentialForm form,
                              double sign = 1.0);
  // Integral of the test form over the chain itself.
  static Current chain_induced(Chain chain);
  // Integral over a proper subdomain of form ^ test (sign +1).  Test forms
  // may straddle the subdomain's boundary; only the definitional boundary
  // operator applies.
  static Current domain_restricted(DifferentialForm form, Chain domain);
  // Sum over pieces of the line integral of (weight * test) along the cell.
  static Current weighted_curves(
      int chart_dim, std::vector<std::pair<ParamCell, ScalarField>> pieces);
  static Current combination(std::vector<std::pair<Current, double>> members);

  bool valid() const { return static_cast<bool>(data_); }
  int chart_dim() const;
  int degree() const;  // degree of the forms this current accepts
  const CurrentData& data() const;

private:
  explicit Current(std::shared_ptr<const CurrentData> data)
      : data_(std::move(data)) {}
  std::shared_ptr<const CurrentData> data_;

  friend Current boundary_current(const Current&);
};

struct FormInduced {
  Chain region;
  DifferentialForm form;
  double sign = 1.0;
};
struct ChainInduced {
  Chain chain;
};
struct DomainRestricted {
  DifferentialForm form;
  Chain domain;
};
struct WeightedCurves {
  std::vector<std::pair<ParamCell, ScalarField>> pieces;
};
struct Combination {
  std::vector<std::pair<Current, double>> members;
};
struct BoundaryOf {
  Current inner;
};

struct CurrentData {
  int chart_dim = 0;
  int degree = 0;
  std::variant<FormInduced, ChainInduced, DomainRestricted, WeightedCurves,
               Combination, BoundaryOf>
      body;
};

// Applies the current to a form of matching chart and degree.  The
// quadrature options' support window, when set, prunes every cell integral;
// callers probing with bumps should pass the bump's window.
double eval_current(const Current& T, const DifferentialForm& a,
                    const QuadratureOptions& quad = {});

// The definitional boundary: a current of one lower degree evaluating as
// T(d -).  Degree-0 currents have no boundary (throws std::invalid_argument).
Current boundary_current(const Current& T);

// Analytic boundary, available for exactly two representations:
//   FormInduced:  region kept, inducing form differentiated, sign flipped
//                 by (-1)^(inducing degree + 1) -- valid for test forms
//                 supported in the region's interior;
//   ChainInduced: the chain's boundary.
// Throws std::invalid_argument for every other representation.
Current boundary_shortcut(const Current& T);

// The current of a smooth codimension-one flux over the whole chart:
// form_induced with the given sign convention (+1 or -1).  Periodic chart
// axes carry into the region, so seams contribute no boundary.
Current smooth_flux_current(const DifferentialForm& flux,
                            const ChartDomain& chart, double sign_convention);

// ---------------------------------------------------------------------------
// Bump test forms.
// ---------------------------------------------------------------------------

// A compactly supported smooth form: amplitude * exp(1 - 1/(1 - u)) with
// u = |x - center|^2 / radius^2 inside the open ball, exactly zero outside,
// peaking at `amplitude` in the center.  Degree 0, or degree 1 as
// (profile) d x_axis.  First and second derivatives are closed-form, so
// repeated differentiation stays noise-free.
struct TestForm {
  Vec center{};
  double radius = 0.0;
  int degree = 0;
  int covector_axis = 0;  // meaningful for degree 1 only
  double amplitude = 1.0;
  int dim = 0;
  DifferentialForm form;

  SupportWindow support() const { return {center, radius}; }
};

// Builds the bump and checks its closed ball sits strictly inside the
// domain's bounds on every axis (throws std::invalid_argument otherwise).
TestForm make_bump(const ChartDomain& domain, Vec center, double radius,
                   int degree, int covector_axis = 0, double amplitude = 1.0);

// ---------------------------------------------------------------------------
// Balance verification.
// ---------------------------------------------------------------------------

struct CurrentTestRow {
  Vec center{};
  double radius = 0.0;
  double lhs = 0.0;     // (boundary T)(test)
  double rhs = 0.0;     // S_expected(test)
  double defect = 0.0;  // |lhs - rhs| / max(1, |rhs|)
};

struct CurrentBalanceReport {
  std::vector<CurrentTestRow> rows;
  double max_defect = 0.0;

  nlohmann::json to_json() const;
};

// Evaluates (boundary T) and S_expected on each test bump (degree one less
// than T's) and reports the normalized defects.  Each evaluation uses the
// bump's own support window on top of `quad`.
CurrentBalanceReport verify_current_balance(
    const Current& T, const std::function<double(const TestForm&)>& S_expected,
    std::span<const TestForm> tests, const QuadratureOptions& quad = {});

}  // namespace xcal
