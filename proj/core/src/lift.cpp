#include "folcyc/lift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace folcyc {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b(5th) - b(4th): weights of the embedded error estimate.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct State {
    Complex xi;
    Complex var;  // d xi / d xi0
};

struct Deriv {
    Complex f;
    Complex v;
};

class StageFailure {};  // non-finite intermediate value; retry with a smaller step

}  // namespace

const char* to_string(LiftStatus s) {
    switch (s) {
        case LiftStatus::Completed: return "Completed";
        case LiftStatus::SingularDenominator: return "SingularDenominator";
        case LiftStatus::GuardExited: return "GuardExited";
        case LiftStatus::StepLimit: return "StepLimit";
    }
    return "?";
}

LiftResult lift_segment(Complex xi0, Complex zeta0, Complex zeta1,
                        const FoliationParams& params, const LiftOptions& opts) {
    require_finite(xi0, "xi0");
    require_finite(zeta0, "zeta0");
    require_finite(zeta1, "zeta1");
    validate(params);
    validate(opts);
    if (xi0 == Complex{0.0, 0.0})
        throw std::domain_error("lift_segment: xi0 = 0 is the critical leaf");

    const Complex span = zeta1 - zeta0;

    LiftResult res;
    res.xi_end = xi0;
    res.dxi_end_dxi0 = Complex{1.0, 0.0};
    res.h_min = res.h_max = std::norm(xi0);

    auto record = [&](double s, const Complex& xi) {
        if (opts.record_trace) res.trace.emplace_back(zeta0 + s * span, xi);
    };
    record(0.0, xi0);

    if (!opts.guard.contains(std::norm(xi0))) {
        res.status = LiftStatus::GuardExited;
        return res;
    }
    if (span == Complex{0.0, 0.0}) return res;

    // Derivative with respect to the normalized segment parameter s in [0, 1].
    auto deriv = [&](double s, const State& y) -> Deriv {
        if (!is_finite(y.xi) || !is_finite(y.var)) throw StageFailure{};
        const RhsJet jet = leaf_rhs_jet(zeta0 + s * span, y.xi, params);
        return {span * jet.f, span * jet.df_dxi * y.var};
    };

    State y{xi0, Complex{1.0, 0.0}};
    double s = 0.0;

    Deriv k1 = deriv(0.0, y);  // singular start propagates as an exception

    // Initial step: standard two-probe heuristic.
    double h;
    {
        const double sc_xi = opts.abs_tol + opts.rel_tol * std::abs(y.xi);
        const double d0 = std::abs(y.xi) / sc_xi;
        const double d1 = std::abs(k1.f) / sc_xi;
        double h0 = (d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6;
        h0 = std::min(h0, 1.0);
        double d2 = 0.0;
        try {
            State probe{y.xi + h0 * k1.f, y.var + h0 * k1.v};
            const Deriv k_probe = deriv(std::min(h0, 1.0), probe);
            d2 = std::abs(k_probe.f - k1.f) / sc_xi / h0;
        } catch (...) {
            d2 = 1.0 / h0;
        }
        const double dm = std::max(d1, d2);
        const double h1 = (dm > 1e-15) ? std::pow(0.01 / dm, 0.2) : 1e-2;
        h = std::min({100.0 * h0, h1, 1.0});
        h = std::max(h, 1e-12);
    }

    constexpr double kSafe = 0.9, kBeta = 0.04, kExpo = 0.2 - kBeta * 0.75;
    constexpr double kMinScale = 0.2, kMaxScale = 10.0;
    double fac_old = 1e-4;
    bool rejected_last = false;

    for (int step = 0; step < opts.max_steps; ++step) {
        if (s >= 1.0) break;
        h = std::min(h, 1.0 - s);
        if (h < 1e-15) {
            res.status = LiftStatus::StepLimit;  // step size underflow
            return res;
        }

        bool stage_ok = true;
        bool singular = false;
        State y_new{};
        Deriv k7{};
        double err = 2.0;
        try {
            const Deriv k2 = deriv(s + c2 * h, {y.xi + h * (a21 * k1.f),
                                                y.var + h * (a21 * k1.v)});
            const Deriv k3 = deriv(s + c3 * h,
                                   {y.xi + h * (a31 * k1.f + a32 * k2.f),
                                    y.var + h * (a31 * k1.v + a32 * k2.v)});
            const Deriv k4 = deriv(s + c4 * h,
                                   {y.xi + h * (a41 * k1.f + a42 * k2.f + a43 * k3.f),
                                    y.var + h * (a41 * k1.v + a42 * k2.v + a43 * k3.v)});
            const Deriv k5 = deriv(
                s + c5 * h,
                {y.xi + h * (a51 * k1.f + a52 * k2.f + a53 * k3.f + a54 * k4.f),
                 y.var + h * (a51 * k1.v + a52 * k2.v + a53 * k3.v + a54 * k4.v)});
            const Deriv k6 = deriv(
                s + h,
                {y.xi + h * (a61 * k1.f + a62 * k2.f + a63 * k3.f + a64 * k4.f +
                             a65 * k5.f),
                 y.var + h * (a61 * k1.v + a62 * k2.v + a63 * k3.v + a64 * k4.v +
                              a65 * k5.v)});

            y_new.xi = y.xi + h * (b1 * k1.f + b3 * k3.f + b4 * k4.f + b5 * k5.f +
                                   b6 * k6.f);
            y_new.var = y.var + h * (b1 * k1.v + b3 * k3.v + b4 * k4.v + b5 * k5.v +
                                     b6 * k6.v);
            k7 = deriv(s + h, y_new);  // FSAL stage

            const Complex err_xi = h * (e1 * k1.f + e3 * k3.f + e4 * k4.f +
                                        e5 * k5.f + e6 * k6.f + e7 * k7.f);
            const Complex err_var = h * (e1 * k1.v + e3 * k3.v + e4 * k4.v +
                                         e5 * k5.v + e6 * k6.v + e7 * k7.v);
            const double sc_xi =
                opts.abs_tol +
                opts.rel_tol * std::max(std::abs(y.xi), std::abs(y_new.xi));
            const double sc_var =
                opts.abs_tol +
                opts.rel_tol * std::max(std::abs(y.var), std::abs(y_new.var));
            const double q_xi = std::abs(err_xi) / sc_xi;
            const double q_var = std::abs(err_var) / sc_var;
            err = std::sqrt(0.5 * (q_xi * q_xi + q_var * q_var));
            if (!std::isfinite(err)) stage_ok = false;
            if (stage_ok && err <= 1.0) res.error_estimate += std::abs(err_xi);
        } catch (const StageFailure&) {
            stage_ok = false;
        } catch (const SingularDenominator&) {
            // Could be an oversized step grazing a tangency; only give up
            // once shrinking the step no longer changes the verdict.
            if (h <= 1e-10) {
                singular = true;
            } else {
                stage_ok = false;
            }
        }

        if (singular) {
            res.status = LiftStatus::SingularDenominator;
            return res;
        }

        if (!stage_ok) {
            h *= 0.5;
            rejected_last = true;
            continue;
        }

        if (err <= 1.0) {
            s += h;
            y = y_new;
            k1 = k7;
            ++res.n_steps;
            record(s, y.xi);

            const double h_abs = std::norm(y.xi);
            res.h_min = std::min(res.h_min, h_abs);
            res.h_max = std::max(res.h_max, h_abs);
            res.xi_end = y.xi;
            res.dxi_end_dxi0 = y.var;
            if (!opts.guard.contains(h_abs)) {
                res.status = LiftStatus::GuardExited;
                return res;
            }

            const double fac11 = std::pow(std::max(err, 1e-16), kExpo);
            double fac = fac11 / std::pow(fac_old, kBeta);
            fac = std::clamp(fac / kSafe, 1.0 / kMaxScale, 1.0 / kMinScale);
            double h_new = h / fac;
            if (rejected_last) h_new = std::min(h_new, h);
            h = h_new;
            fac_old = std::max(err, 1e-4);
            rejected_last = false;

            if (s >= 1.0) {
                res.status = LiftStatus::Completed;
                return res;
            }
        } else {
            const double fac11 = std::pow(err, kExpo);
            h /= std::min(1.0 / kMinScale, fac11 / kSafe);
            rejected_last = true;
        }
    }

    res.status = LiftStatus::StepLimit;
    return res;
}

namespace {

MapJet map_from_lift(Complex u, int k, const FoliationParams& params,
                     const LiftOptions& opts) {
    require_finite(u, "u");
    if (k < 1) throw std::invalid_argument("iterate count must be >= 1");
    const Complex xi0 = xi_from_w(u);
    const LiftResult lift = lift_segment(
        xi0, Complex{0.0, 0.0}, Complex{2.0 * std::numbers::pi * k, 0.0}, params,
        opts);
    if (!lift.completed())
        throw LiftError(lift.status, std::string("return map: lift ") +
                                         to_string(lift.status));
    const Complex xi1 = lift.xi_end;
    MapJet jet;
    jet.value = w_from_xi(xi1);
    const Complex r = xi0 / xi1;
    jet.derivative = lift.dxi_end_dxi0 * r * r * r;
    return jet;
}

}  // namespace

MapJet poincare(Complex u, const FoliationParams& params, const LiftOptions& opts) {
    require_finite(u, "u");
    if (std::abs(u) >= 1.0)
        throw std::domain_error("poincare: |u| >= 1 is outside the local chart");
    MapJet jet = map_from_lift(u, 1, params, opts);
    if (std::abs(jet.value) >= 1.0)
        throw BranchOverflow(jet.value, "poincare: image left the local chart");
    return jet;
}

MapJet poincare_iter(Complex u, int k, const FoliationParams& params,
                     const LiftOptions& opts) {
    if (k < 1) throw std::invalid_argument("poincare_iter: k must be >= 1");
    MapJet acc{u, Complex{1.0, 0.0}};
    for (int i = 0; i < k; ++i) {
        const MapJet step = poincare(acc.value, params, opts);
        acc.value = step.value;
        acc.derivative *= step.derivative;
    }
    return acc;
}

MapJet poincare_iter_lifted(Complex u, int k, const FoliationParams& params,
                            const LiftOptions& opts) {
    return map_from_lift(u, k, params, opts);
}

}  // namespace folcyc
