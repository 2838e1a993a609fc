#include "folcyc/melnikov.hpp"

#include <cmath>
#include <numbers>

namespace folcyc {

namespace {
constexpr double kPi = std::numbers::pi;

Complex pow_int(Complex z, int n) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}
}  // namespace

double series_coeff_b(int k) {
    if (k < 0) throw std::invalid_argument("series_coeff_b: k must be >= 0");
    double b = 1.0;
    for (int j = 1; j <= k; ++j) b *= (2.0 * j - 1.0) / (2.0 * j);
    return b;
}

double resonant_coeff_c(int m) {
    if (m < 1) throw std::invalid_argument("resonant_coeff_c: m must be >= 1");
    return kPi * series_coeff_b(m);
}

Complex melnikov_quadrature(int m, Complex u, int n_points) {
    if (m < 1) throw std::invalid_argument("melnikov_quadrature: m must be >= 1");
    require_finite(u, "u");
    if (std::abs(u) >= 1.0)
        throw std::domain_error("melnikov_quadrature: |u| must be < 1");
    if (n_points < 64)
        throw std::invalid_argument("melnikov_quadrature: n_points must be >= 64");

    const double period = 2.0 * kPi * m;
    const double dt = period / n_points;
    Complex sum{0.0, 0.0};
    for (int j = 0; j < n_points; ++j) {
        const double t = j * dt;
        const Complex phase = std::exp(Complex{0.0, t / m});
        sum += std::sin(t) / std::sqrt(1.0 - u * phase);
    }
    return Complex{0.0, -1.0 / m} * sum * dt;
}

Complex melnikov_closed(int m, Complex u) {
    if (m < 1) throw std::invalid_argument("melnikov_closed: m must be >= 1");
    require_finite(u, "u");
    return kPi * series_coeff_b(m) * pow_int(u, m);
}

MelnikovEval melnikov_eval(int m, Complex u, int n_points) {
    MelnikovEval ev;
    ev.m = m;
    ev.u = u;
    ev.quadrature_value = melnikov_quadrature(m, u, n_points);
    ev.closed_form_value = melnikov_closed(m, u);
    ev.abs_error = std::abs(ev.quadrature_value - ev.closed_form_value);
    return ev;
}

Complex remainder_G(Complex u, int m, const FoliationParams& params,
                    const LiftOptions& opts) {
    if (m < 1) throw std::invalid_argument("remainder_G: m must be >= 1");
    require_finite(u, "u");
    validate(params);
    if (u == Complex{0.0, 0.0})
        throw std::domain_error("remainder_G: u = 0 (the displacement is divisible by u)");
    if (params.a == Complex{0.0, 0.0})
        throw std::domain_error("remainder_G: a = 0");
    if (params.eps != Complex{0.0, 1.0 / m})
        throw std::domain_error("remainder_G: eps must be exactly i/m");

    const Complex pm = poincare_iter(u, m, params, opts).value;
    const Complex leading = params.a * resonant_coeff_c(m) * pow_int(u, m + 1);
    return (pm - u - leading) / (params.a * params.a * u);
}

Complex pontryagin_integral(double h, const FoliationParams& params,
                            int n_points) {
    require_finite(h, "h");
    validate(params);
    if (!(h > 0.0))
        throw std::domain_error("pontryagin_integral: h must be > 0");
    if (n_points < 2)
        throw std::invalid_argument("pontryagin_integral: n_points must be >= 2");

    // Parametrize the oval as (x, y) = (sqrt(h) cos z, sqrt(h) sin z) and
    // integrate the pulled-back one-form numerically.
    const double r = std::sqrt(h);
    const double dz = 2.0 * kPi / n_points;
    Complex sum{0.0, 0.0};
    for (int j = 0; j < n_points; ++j) {
        const double z = j * dz;
        const double x = r * std::cos(z), y = r * std::sin(z);
        const double xp = -r * std::sin(z), yp = r * std::cos(z);
        const double H = x * x + y * y;
        const double w1 = (H - 1.0) * (y * xp - x * yp);
        const double dH = 2.0 * (x * xp + y * yp);
        sum += w1 + params.a * (y * dH);
    }
    return sum * dz;
}

}  // namespace folcyc
