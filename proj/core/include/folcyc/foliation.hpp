#pragma once

#include "folcyc/types.hpp"

namespace folcyc {

/// Tangency threshold for the denominator 1 + eps*a*xi*sin(zeta) of the
/// leaf ODE. Far below any value arising for |eps*a| <= 0.2, |xi| <= 10 on
/// real base segments, so it only trips on genuine near-tangencies.
inline constexpr double kSingTol = 1e-8;

/// Base point q0 = (1, 0) on the invariant leaf h = 1.
inline AmbientPoint base_point() { return {Complex{1.0, 0.0}, Complex{0.0, 0.0}}; }

/// (zeta, xi) -> (xi cos zeta, xi sin zeta). H of the image is xi^2 exactly.
AmbientPoint chart_to_ambient(const ChartPoint& p);

/// H = x^2 + y^2 of an ambient point.
Complex ambient_h(const AmbientPoint& q);

/// Local disc coordinate w = 1 - 1/xi^2 around the reference leaf (w = 0).
Complex w_from_xi(Complex xi);

/// Inverse of w_from_xi on the principal branch; fixed so that xi(0) = 1.
Complex xi_from_w(Complex w);

/// H-value of the leaf through the section point with coordinate w (or u).
inline Complex h_from_w(Complex w) { return 1.0 / (1.0 - w); }

/// Right-hand side of the leaf ODE in the angular chart,
///
///   dxi/dzeta = eps (xi^2 - 1) xi / (2 (1 + eps a xi sin zeta)),
///
/// obtained by pulling the one-form dH + eps(w1 + a w2) back through
/// (x, y) = (xi cos zeta, xi sin zeta). Throws SingularDenominator when the
/// denominator falls below kSingTol (the leaf is near-tangent to the fibres).
Complex leaf_rhs(Complex zeta, Complex xi, const FoliationParams& params);

/// d/dxi of leaf_rhs, needed by the variational equation.
Complex leaf_rhs_dxi(Complex zeta, Complex xi, const FoliationParams& params);

/// Value and xi-derivative of the leaf ODE in one evaluation.
struct RhsJet {
    Complex f;
    Complex df_dxi;
};

RhsJet leaf_rhs_jet(Complex zeta, Complex xi, const FoliationParams& params);

/// |2 eps (h - 1) h|: residual of the wedge of the defining one-form with dH
/// at level h. Vanishes at h = 0 and h = 1, certifying that both level sets
/// are leaves for every (a, eps). Test-suite diagnostic.
double wedge_invariance_check(Complex h, const FoliationParams& params);

}  // namespace folcyc
