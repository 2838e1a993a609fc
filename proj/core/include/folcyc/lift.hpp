#pragma once

#include <utility>
#include <vector>

#include "folcyc/foliation.hpp"
#include "folcyc/types.hpp"

namespace folcyc {

enum class LiftStatus {
    Completed,
    SingularDenominator,  // leaf near-tangent to the fibration
    GuardExited,          // |xi^2| left the guard annulus; an observation, not a failure
    StepLimit,            // step budget exhausted (or step size underflowed)
};

const char* to_string(LiftStatus s);

struct LiftOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    int max_steps = 200000;
    Annulus guard{0.05, 20.0};  // A'_1 analogue, strictly containing the default A_0
    bool record_trace = false;
};

inline void validate(const LiftOptions& o) {
    require_finite(o.rel_tol, "opts.rel_tol");
    require_finite(o.abs_tol, "opts.abs_tol");
    if (!(o.rel_tol > 0.0 && o.abs_tol > 0.0))
        throw std::invalid_argument("opts: tolerances must be positive");
    if (o.max_steps < 1)
        throw std::invalid_argument("opts.max_steps: must be >= 1");
}

/// Outcome of lifting one base segment to a leaf.
struct LiftResult {
    Complex xi_end{0.0, 0.0};
    Complex dxi_end_dxi0{1.0, 0.0};  // variational derivative d xi_end / d xi_0
    double h_min = 0.0;              // extrema of |xi^2| over the accepted nodes
    double h_max = 0.0;
    LiftStatus status = LiftStatus::Completed;
    double error_estimate = 0.0;     // accumulated local error estimate on xi
    int n_steps = 0;
    std::vector<std::pair<Complex, Complex>> trace;  // (zeta, xi) if requested

    bool completed() const { return status == LiftStatus::Completed; }
};

/// Lift the straight base segment zeta0 -> zeta1 to the leaf through
/// (zeta0, xi0), integrating dxi/dzeta = leaf_rhs together with the
/// variational equation d/dzeta (dxi/dxi0) = (d rhs/d xi)(dxi/dxi0) by an
/// embedded Dormand-Prince 5(4) scheme with PI step-size control. The lift
/// aborts with GuardExited the moment |xi^2| leaves opts.guard.
LiftResult lift_segment(Complex xi0, Complex zeta0, Complex zeta1,
                        const FoliationParams& params, const LiftOptions& opts);

/// A map value together with its complex derivative.
struct MapJet {
    Complex value{0.0, 0.0};
    Complex derivative{1.0, 0.0};
};

/// Thrown when a map evaluation needs a lift that did not complete.
class LiftError : public std::runtime_error {
public:
    LiftError(LiftStatus s, const std::string& what)
        : std::runtime_error(what), status(s) {}
    LiftStatus status;
};

/// Thrown by the chart-restricted return map when the image leaves the
/// unit w-disc; the xi-representation via lift_segment remains available.
class BranchOverflow : public std::runtime_error {
public:
    BranchOverflow(Complex value, const std::string& what)
        : std::runtime_error(what), value(value) {}
    Complex value;
};

/// Return map of the base loop in the local disc coordinate u (= w):
/// u -> xi0 = (1-u)^{-1/2}, lift over [0, 2pi], back to w. P(0) = 0 for all
/// parameters. Returns the value and dP/du (variational, chain rule through
/// both chart conversions). Requires |u| < 1; throws BranchOverflow when
/// |P(u)| >= 1 and LiftError when the lift fails.
MapJet poincare(Complex u, const FoliationParams& params, const LiftOptions& opts);

/// k-th iterate of poincare as a k-fold composition with multiplied
/// derivatives. Every intermediate value must remain in the unit disc.
MapJet poincare_iter(Complex u, int k, const FoliationParams& params,
                     const LiftOptions& opts);

/// k-th iterate evaluated as a single lift over [0, 2 pi k] in the global
/// angular chart. Agrees with poincare_iter on the common domain but does
/// not police the unit w-disc, so it stays usable wherever the lift itself
/// completes. This is the non-local return map.
MapJet poincare_iter_lifted(Complex u, int k, const FoliationParams& params,
                            const LiftOptions& opts);

}  // namespace folcyc
