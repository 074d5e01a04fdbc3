#pragma once

/// \file
/// Fiberwise homotopy operator on forms of the vertical algebroid, written in
/// the pullback frame {Upsilon_j} where the canonical representation is
/// trivial, so every transport map acts as the identity on coefficients.

#include "hamspray/skew_form.hpp"
#include "hamspray/zero_test.hpp"

namespace hamspray {

/// k-form on the vertical algebroid: rank r, coefficients in (x, y).
using VerticalForm = SkewForm;

/// Anchor Upsilon_j -> d/dy^j, vanishing brackets.
Frame vertical_frame(const std::vector<Symbol>& y);

/// Vertical differential.
VerticalForm d_vert(const std::vector<Symbol>& y, const VerticalForm& w);

/// t^k w(x, t y).
VerticalForm psi_star(const VerticalForm& w, const std::vector<Symbol>& y, double t);

/// Psi_0^* w: w(x, 0) in degree 0, zero otherwise.
VerticalForm psi_zero(const VerticalForm& w, const std::vector<Symbol>& y);

/// L_e w = y . d_y w + k w.
VerticalForm lie_euler(const VerticalForm& w, const std::vector<Symbol>& y);

/// Reserved integration variable of deferred integrals.
Symbol homotopy_parameter();

/// exact + integral_0^1 deferred dt, componentwise; `deferred` is a form in
/// (x, y, t) with t = homotopy_parameter().
struct SplitForm {
  VerticalForm exact;
  VerticalForm deferred;

  bool is_exact() const { return deferred.is_literal_zero(); }
  /// Component at `slot`, integrating the deferred part by adaptive Simpson.
  double eval(std::size_t slot, const Bindings& b, double tol = 1e-10) const;
};

/// (h_k w)_J = integral_0^1 t^(k-1) y^j w_jJ(x, t y) dt. Terms polynomial in t
/// are integrated exactly; the rest stay deferred. Requires k >= 1.
SplitForm h_k(const VerticalForm& w, const std::vector<Symbol>& y);

/// Applies d_vert to both parts (the anchor does not act on t).
SplitForm d_vert(const std::vector<Symbol>& y, const SplitForm& w);

/// Residuals of h(dw) + d(hw) - w + Psi_0^* w, one per component.
ValidationReport homotopy_identity_check(const VerticalForm& w, const std::vector<Symbol>& y, const Box& box,
                                         const SampleOptions& opt);

/// Adaptive Simpson on [a, b]; QuadratureFailure when the depth cap is hit.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

/// Primitive for the fiber differential: given a form on the rank-2r frame
/// {hor_1..hor_r, Upsilon_1..Upsilon_r} that is homogeneous of bidegree
/// (p, q), q >= 1, and closed under d'' = (-1)^p d_y on each horizontal
/// slice, returns zeta of bidegree (p, q-1) with d'' zeta = theta.
/// Throws NotClosed when the input is not d''-closed, and QuadratureFailure
/// when the fiber dependence cannot be integrated exactly.
SkewForm dprime_primitive(const SkewForm& theta, const std::vector<Symbol>& y, const Box& box,
                          const SampleOptions& opt);

/// d'' on a form in the adapted frame, by the slice formula.
SkewForm dprime_slices(const SkewForm& w, const std::vector<Symbol>& y);

/// Bidegree (p, q) of the component at `slot` (p = horizontal slots).
std::pair<int, int> bidegree(const SkewForm& w, std::size_t slot);

}  // namespace hamspray
