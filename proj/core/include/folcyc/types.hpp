#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace folcyc {

using Complex = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// NaN/Inf in an input is a programming error, not a recoverable condition.
inline void require_finite(const Complex& z, const char* name) {
    if (!is_finite(z))
        throw std::invalid_argument(std::string(name) + ": non-finite value");
}

inline void require_finite(double x, const char* name) {
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(name) + ": non-finite value");
}

/// Parameters (a, eps) of the perturbed pencil ker(dH + eps*(w1 + a*w2)),
/// H = x^2 + y^2, w1 = (H-1)(y dx - x dy), w2 = y dH.
struct FoliationParams {
    Complex a{0.0, 0.0};
    Complex eps{0.0, 0.0};
    double guard_radius = 1.0;  // admissible |eps|; the family is a perturbation
};

inline void validate(const FoliationParams& p) {
    require_finite(p.a, "params.a");
    require_finite(p.eps, "params.eps");
    require_finite(p.guard_radius, "params.guard_radius");
    if (std::abs(p.eps) > p.guard_radius)
        throw std::invalid_argument("params.eps: |eps| exceeds guard_radius");
}

struct AmbientPoint {
    Complex x{0.0, 0.0};
    Complex y{0.0, 0.0};
};

/// Point of the angular chart (zeta, xi) -> (xi cos zeta, xi sin zeta).
/// xi = 0 is the critical leaf and is excluded.
struct ChartPoint {
    Complex zeta{0.0, 0.0};
    Complex xi{1.0, 0.0};
};

/// Annulus rho < |h| < R in the plane of H-values. The reference leaf at
/// h = 1 must lie inside.
struct Annulus {
    double rho = 0.2;
    double R = 5.0;

    Annulus(double rho_, double R_) : rho(rho_), R(R_) {
        require_finite(rho, "annulus.rho");
        require_finite(R, "annulus.R");
        if (!(0.0 < rho && rho < 1.0 && 1.0 < R))
            throw std::invalid_argument("annulus: need 0 < rho < 1 < R");
    }

    bool contains(double h_abs) const { return rho < h_abs && h_abs < R; }
};

class SingularDenominator : public std::runtime_error {
public:
    explicit SingularDenominator(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace folcyc
