#include "folcyc/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace folcyc {

namespace {
constexpr double kPi = std::numbers::pi;
}

EpsPath straight_path(Complex from, Complex to) {
    require_finite(from, "from");
    require_finite(to, "to");
    const double scale = std::abs(from);
    EpsPath path;
    path.vertices = {from, to};
    path.max_step = std::max(scale / 50.0, 1e-12);
    path.min_step = std::max(1e-6 * scale, 1e-15);
    return path;
}

void validate(const EpsPath& path) {
    if (path.vertices.size() < 2)
        throw std::invalid_argument("path: need at least 2 vertices");
    for (const Complex& v : path.vertices) require_finite(v, "path.vertex");
    require_finite(path.max_step, "path.max_step");
    require_finite(path.min_step, "path.min_step");
    if (!(path.min_step > 0.0) || path.max_step < path.min_step)
        throw std::invalid_argument("path: need 0 < min_step <= max_step");
}

namespace {

struct ArcParam {
    std::vector<double> cum;  // cumulative lengths, cum[0] = 0
    const EpsPath* path;

    explicit ArcParam(const EpsPath& p) : path(&p) {
        cum.resize(p.vertices.size());
        cum[0] = 0.0;
        for (std::size_t i = 1; i < p.vertices.size(); ++i)
            cum[i] = cum[i - 1] + std::abs(p.vertices[i] - p.vertices[i - 1]);
    }

    double length() const { return cum.back(); }

    Complex at(double s) const {
        if (s <= 0.0) return path->vertices.front();
        if (s >= length()) return path->vertices.back();
        std::size_t i = 1;
        while (cum[i] < s) ++i;
        const double seg = cum[i] - cum[i - 1];
        const double t = seg > 0.0 ? (s - cum[i - 1]) / seg : 0.0;
        return path->vertices[i - 1] +
               t * (path->vertices[i] - path->vertices[i - 1]);
    }
};

}  // namespace

const char* to_string(Terminal t) {
    switch (t) {
        case Terminal::ReachedTarget: return "ReachedTarget";
        case Terminal::EscapeConfirmedAt: return "EscapeConfirmedAt";
        case Terminal::StepUnderflow: return "StepUnderflow";
        case Terminal::BranchCollision: return "BranchCollision";
        case Terminal::IntegrationFailure: return "IntegrationFailure";
    }
    return "?";
}

EscapeReport detect_escape(const OrbitRecord& orbit, int m, const Annulus& annulus,
                           const LiftOptions& opts) {
    if (m < 1) throw std::invalid_argument("detect_escape: m must be >= 1");
    if (orbit.points.empty())
        throw std::invalid_argument("detect_escape: empty orbit");

    EscapeReport rep;
    rep.base_in_A0 = true;
    for (const Complex& h : orbit.h_values)
        if (!annulus.contains(std::abs(h))) rep.base_in_A0 = false;

    LiftResult lift;
    try {
        const Complex xi0 = xi_from_w(orbit.points.front());
        lift = lift_segment(xi0, Complex{0.0, 0.0},
                            Complex{2.0 * kPi * m, 0.0}, orbit.params, opts);
    } catch (const std::exception&) {
        rep.lift_status = LiftStatus::SingularDenominator;
        rep.flagged = true;
        rep.loop_in_A0 = false;
        return rep;
    }

    rep.h_min = lift.h_min;
    rep.h_max = lift.h_max;
    rep.lift_status = lift.status;
    if (lift.status == LiftStatus::Completed) {
        const bool contained = annulus.contains(lift.h_min) && annulus.contains(lift.h_max);
        rep.loop_in_A0 = contained && rep.base_in_A0;
    } else {
        // GuardExited certifies departure (the guard strictly contains the
        // annulus); other statuses leave the verdict open.
        rep.loop_in_A0 = false;
        rep.flagged = true;
    }
    return rep;
}

std::optional<Complex> find_escape_epsilon(const ContinuationTrace& trace) {
    const auto& samples = trace.samples;
    std::ptrdiff_t last_true = -1;
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(samples.size()); ++i)
        if (samples[i].escape.loop_in_A0) last_true = i;
    if (last_true < 0) return std::nullopt;  // never contained: no transition
    if (last_true + 1 >= static_cast<std::ptrdiff_t>(samples.size()))
        return std::nullopt;  // ends contained
    return samples[last_true + 1].eps;
}

ContinuationTrace continue_orbit(const OrbitRecord& start, const EpsPath& path,
                                 const LiftOptions& opts, const Annulus& annulus,
                                 const OrbitTols& tols) {
    validate(path);
    if (!certified(start, tols))
        throw std::invalid_argument("continue_orbit: start orbit is not certified");
    if (std::abs(start.params.eps - path.vertices.front()) >
        1e-9 * (1.0 + std::abs(path.vertices.front())))
        throw std::invalid_argument(
            "continue_orbit: start orbit eps does not match the first path vertex");

    const ArcParam arc(path);
    const double L = arc.length();
    const int m = start.m;

    ContinuationTrace trace;
    {
        ContinuationSample s0;
        s0.eps = path.vertices.front();
        s0.orbit = start;
        s0.escape = detect_escape(start, m, annulus, opts);
        s0.arc_pos = 0.0;
        s0.step_bound = 0.0;
        trace.samples.push_back(std::move(s0));
    }

    double s = 0.0;
    double step = std::min(path.max_step, std::max(L, path.min_step));
    enum class FailKind { None, Lift, Period, Other } last_fail = FailKind::None;
    std::string fail_what;

    bool stopped = false;
    while (!stopped) {
        if (s >= L) {
            trace.terminal = Terminal::ReachedTarget;
            trace.detail = "reached the end of the path";
            break;
        }

        const double s_next = std::min(s + step, L);
        const Complex eps_next = arc.at(s_next);

        // Predict: linear extrapolation of u_1 once two samples exist.
        const ContinuationSample& prev = trace.samples.back();
        Complex u_pred = prev.orbit.points.front();
        double bound = std::numeric_limits<double>::infinity();
        if (trace.samples.size() >= 2) {
            const ContinuationSample& prev2 = trace.samples[trace.samples.size() - 2];
            const double ds_prev = prev.arc_pos - prev2.arc_pos;
            const Complex du_prev =
                prev.orbit.points.front() - prev2.orbit.points.front();
            if (ds_prev > 0.0) {
                const double ratio = (s_next - prev.arc_pos) / ds_prev;
                u_pred += du_prev * ratio;
                bound = 10.0 * std::max(std::abs(du_prev) * ratio, 1e-12);
            }
        }

        FoliationParams params = start.params;
        params.eps = eps_next;

        bool ok = false;
        OrbitRecord rec;
        try {
            rec = newton_orbit(u_pred, m, params, opts, tols);
            const double jump =
                std::abs(rec.points.front() - prev.orbit.points.front());
            if (jump <= bound) {
                ok = true;
            } else {
                last_fail = FailKind::Other;
                fail_what = "corrected point jumped past the predictor bound";
            }
        } catch (const PeriodTooLow& e) {
            last_fail = FailKind::Period;
            fail_what = e.what();
        } catch (const LiftError& e) {
            last_fail = FailKind::Lift;
            fail_what = e.what();
        } catch (const std::exception& e) {
            last_fail = FailKind::Other;
            fail_what = e.what();
        }

        if (ok) {
            // Points coalescing below dedup_tol means the Weierstrass branches
            // collided; stop rather than continue on an ambiguous branch.
            bool collision = false;
            for (int i = 0; i < m && !collision; ++i)
                for (int j = i + 1; j < m; ++j)
                    if (std::abs(rec.points[i] - rec.points[j]) < tols.dedup_tol) {
                        collision = true;
                        break;
                    }
            if (collision) {
                trace.terminal = Terminal::BranchCollision;
                trace.detail = "orbit points collided within dedup_tol";
                stopped = true;
                break;
            }

            ContinuationSample smp;
            smp.eps = eps_next;
            smp.orbit = std::move(rec);
            smp.escape = detect_escape(smp.orbit, m, annulus, opts);
            smp.arc_pos = s_next;
            smp.step_bound = bound;
            trace.samples.push_back(std::move(smp));
            s = s_next;
            step = std::min(step * 1.5, path.max_step);
            last_fail = FailKind::None;
        } else {
            step *= 0.5;
            if (step < path.min_step) {
                switch (last_fail) {
                    case FailKind::Period:
                        trace.terminal = Terminal::BranchCollision;
                        break;
                    case FailKind::Lift:
                        trace.terminal = Terminal::IntegrationFailure;
                        break;
                    default:
                        trace.terminal = Terminal::StepUnderflow;
                        break;
                }
                trace.detail = "step fell below min_step: " + fail_what;
                stopped = true;
            }
        }
    }

    trace.eps_star = find_escape_epsilon(trace);
    if (trace.eps_star.has_value()) {
        std::ostringstream detail;
        detail << "escape confirmed; march then stopped: "
               << (trace.detail.empty() ? "?" : trace.detail) << " ["
               << to_string(trace.terminal) << "]";
        trace.terminal = Terminal::EscapeConfirmedAt;
        trace.detail = detail.str();
    }
    return trace;
}

}  // namespace folcyc
