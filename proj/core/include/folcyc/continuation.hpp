#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folcyc/orbits.hpp"

namespace folcyc {

/// Polyline in the eps-disc along which an orbit is continued; the first
/// vertex is the starting eps, the last the target (typically 0).
struct EpsPath {
    std::vector<Complex> vertices;
    double max_step = 1e-2;
    double min_step = 1e-8;
};

/// Straight path with the default step policy max_step = |from|/50,
/// min_step = 1e-6 |from|.
EpsPath straight_path(Complex from, Complex to);

void validate(const EpsPath& path);

/// Containment of an orbit and of its m-turn representative in the annulus
/// rho < |h| < R. When the lift does not complete the report is flagged:
/// a guard exit still certifies departure (the guard strictly contains the
/// annulus), any other failure leaves the verdict indeterminate, and in both
/// cases loop_in_A0 is reported false.
struct EscapeReport {
    bool base_in_A0 = false;  // all m base values h_j inside
    bool loop_in_A0 = false;  // lift-wide |h| range of the representative inside
    double h_min = 0.0;
    double h_max = 0.0;
    LiftStatus lift_status = LiftStatus::Completed;
    bool flagged = false;
};

EscapeReport detect_escape(const OrbitRecord& orbit, int m, const Annulus& annulus,
                           const LiftOptions& opts);

enum class Terminal {
    ReachedTarget,
    EscapeConfirmedAt,
    StepUnderflow,
    BranchCollision,
    IntegrationFailure,
};

const char* to_string(Terminal t);

struct ContinuationSample {
    Complex eps{0.0, 0.0};
    OrbitRecord orbit;
    EscapeReport escape;
    double arc_pos = 0.0;     // arclength position along the path
    double step_bound = 0.0;  // predictor bound active when the sample was accepted
};

struct ContinuationTrace {
    std::vector<ContinuationSample> samples;
    Terminal terminal = Terminal::ReachedTarget;
    std::optional<Complex> eps_star;  // first eps of the final escaped tail
    std::string detail;
};

/// March a certified orbit along the path: natural-parameter predictor
/// (previous point, linear extrapolation once two samples exist) plus Newton
/// corrector, halving the step on corrector failure down to path.min_step.
/// Every accepted sample is re-certified and gets an escape report against
/// the annulus. Failures never propagate out; they are encoded in terminal.
/// If the trace ends with a confirmed escape (a containment transition whose
/// tail stays escaped), terminal is EscapeConfirmedAt and eps_star is set,
/// with the raw stop reason kept in detail.
ContinuationTrace continue_orbit(const OrbitRecord& start, const EpsPath& path,
                                 const LiftOptions& opts,
                                 const Annulus& annulus = Annulus{0.2, 5.0},
                                 const OrbitTols& tols = {});

/// First sample eps at which loop_in_A0 turns false and never returns to
/// true within the trace; absent when there is no such transition.
std::optional<Complex> find_escape_epsilon(const ContinuationTrace& trace);

}  // namespace folcyc
