#include "folcyc/foliation.hpp"

#include <cmath>

namespace folcyc {

AmbientPoint chart_to_ambient(const ChartPoint& p) {
    require_finite(p.zeta, "chart.zeta");
    require_finite(p.xi, "chart.xi");
    if (p.xi == Complex{0.0, 0.0})
        throw std::domain_error("chart_to_ambient: xi = 0 is the critical leaf");
    return {p.xi * std::cos(p.zeta), p.xi * std::sin(p.zeta)};
}

Complex ambient_h(const AmbientPoint& q) {
    require_finite(q.x, "point.x");
    require_finite(q.y, "point.y");
    return q.x * q.x + q.y * q.y;
}

Complex w_from_xi(Complex xi) {
    require_finite(xi, "xi");
    if (xi == Complex{0.0, 0.0})
        throw std::domain_error("w_from_xi: xi = 0");
    return 1.0 - 1.0 / (xi * xi);
}

Complex xi_from_w(Complex w) {
    require_finite(w, "w");
    if (w == Complex{1.0, 0.0})
        throw std::domain_error("xi_from_w: w = 1 (leaf at infinity)");
    return 1.0 / std::sqrt(1.0 - w);
}

RhsJet leaf_rhs_jet(Complex zeta, Complex xi, const FoliationParams& params) {
    require_finite(zeta, "zeta");
    require_finite(xi, "xi");
    validate(params);

    const Complex ea = params.eps * params.a;
    // Skip the sine entirely in the integrable-in-zeta case so that a = 0
    // evaluations are bit-for-bit independent of zeta.
    Complex denom{1.0, 0.0};
    Complex dd_dxi{0.0, 0.0};
    if (ea != Complex{0.0, 0.0}) {
        const Complex s = std::sin(zeta);
        dd_dxi = ea * s;
        denom = 1.0 + dd_dxi * xi;
        if (std::abs(denom) < kSingTol)
            throw SingularDenominator("leaf_rhs: lift passes near a tangency with the fibration");
    }

    const Complex num = params.eps * (xi * xi - 1.0) * xi;
    const Complex dnum = params.eps * (3.0 * xi * xi - 1.0);
    const Complex inv2d = 0.5 / denom;
    return {num * inv2d, (dnum - num * dd_dxi / denom) * inv2d};
}

Complex leaf_rhs(Complex zeta, Complex xi, const FoliationParams& params) {
    return leaf_rhs_jet(zeta, xi, params).f;
}

Complex leaf_rhs_dxi(Complex zeta, Complex xi, const FoliationParams& params) {
    return leaf_rhs_jet(zeta, xi, params).df_dxi;
}

double wedge_invariance_check(Complex h, const FoliationParams& params) {
    require_finite(h, "h");
    validate(params);
    return std::abs(2.0 * params.eps * (h - 1.0) * h);
}

}  // namespace folcyc
