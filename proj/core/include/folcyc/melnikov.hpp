#pragma once

#include "folcyc/lift.hpp"
#include "folcyc/types.hpp"

namespace folcyc {

/// k-th Taylor coefficient of (1 - w)^{-1/2}: b_0 = 1, b_k = b_{k-1}(2k-1)/(2k).
/// Positive and strictly decreasing in k.
double series_coeff_b(int k);

/// First resonant coefficient c_m = pi * b_m of the m-th iterate at eps = i/m.
double resonant_coeff_c(int m);

/// Resonant displacement integral
///   I_m(u, i/m) = -(i/m) * Int_0^{2 pi m} sin t * (1 - u e^{i t / m})^{-1/2} dt
/// by the trapezoid rule on a uniform grid (spectrally accurate for the
/// periodic analytic integrand). Requires |u| < 1 and n_points >= 64.
Complex melnikov_quadrature(int m, Complex u, int n_points = 512);

/// Closed form of the same integral: pi * b_m * u^m.
Complex melnikov_closed(int m, Complex u);

struct MelnikovEval {
    int m = 1;
    Complex u{0.0, 0.0};
    Complex quadrature_value{0.0, 0.0};
    Complex closed_form_value{0.0, 0.0};
    double abs_error = 0.0;
};

MelnikovEval melnikov_eval(int m, Complex u, int n_points = 512);

/// Second-order remainder of the m-th iterate at the resonance eps = i/m:
///   G = (P^m(u) - u - a c_m u^{m+1}) / (a^2 u).
/// Diagnostic only; stays bounded as a -> 0 at fixed u. Requires a != 0,
/// u != 0 and params.eps equal to i/m as written (re = 0, im = 1/m).
Complex remainder_G(Complex u, int m, const FoliationParams& params,
                    const LiftOptions& opts);

/// Loop integral of w1 + a*w2 over the real oval of H at level h > 0,
/// evaluated by the trapezoid rule from the ambient one-forms. The closed
/// form for this family is -2 pi h (h - 1), independent of a.
Complex pontryagin_integral(double h, const FoliationParams& params,
                            int n_points = 512);

}  // namespace folcyc
