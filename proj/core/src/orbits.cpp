#include "folcyc/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "folcyc/melnikov.hpp"

namespace folcyc {

namespace {

constexpr double kPi = std::numbers::pi;

// |e^{2 pi m eps} - 1| below this counts as an exact resonance.
constexpr double kDegenerateTol = 1e-14;

// The u-chart is single-valued on the open unit disc only, and the default
// guard annulus admits |h| up to 20, i.e. |1 - u| down to 0.05. Search
// circles are capped accordingly.
constexpr double kSearchRadiusCap = 0.94;

Complex linear_factor(int m, const FoliationParams& p) {
    return std::exp(2.0 * kPi * static_cast<double>(m) * p.eps) - 1.0;
}

}  // namespace

bool certified(const OrbitRecord& rec, const OrbitTols& tols) {
    if (rec.m < 1 || static_cast<int>(rec.points.size()) != rec.m) return false;
    if (!(rec.residual < tols.residual_tol)) return false;
    if (rec.m > 1 && !(rec.separation > tols.sep_tol)) return false;
    for (const Complex& u : rec.points)
        if (!(std::abs(u) > tols.zero_tol)) return false;
    return true;
}

int winding_count(Complex center, double radius, int m,
                  const FoliationParams& params, int n_samples,
                  const LiftOptions& opts, const OrbitTols& tols) {
    require_finite(center, "center");
    require_finite(radius, "radius");
    if (!(radius > 0.0)) throw std::invalid_argument("winding_count: radius must be > 0");
    if (m < 1) throw std::invalid_argument("winding_count: m must be >= 1");
    if (n_samples < 8)
        throw std::invalid_argument("winding_count: n_samples must be >= 8");

    std::vector<Complex> g(n_samples);
    double min_mod = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n_samples; ++j) {
        const double t = 2.0 * kPi * j / n_samples;
        const Complex u = center + radius * std::exp(Complex{0.0, t});
        if (std::abs(u) < tols.contour_tol)
            throw ContourThroughZero("winding_count: contour passes through u = 0");
        const Complex pm = poincare_iter_lifted(u, m, params, opts).value;
        g[j] = (pm - u) / u;
        min_mod = std::min(min_mod, std::abs(g[j]));
    }
    if (min_mod < tols.contour_tol)
        throw ContourThroughZero(
            "winding_count: |(P^m(u)-u)/u| fell below contour_tol on the contour");

    double total = 0.0;
    for (int j = 0; j < n_samples; ++j)
        total += std::arg(g[(j + 1) % n_samples] / g[j]);
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::vector<Complex> initial_guesses(int m, const FoliationParams& params) {
    if (m < 1) throw std::invalid_argument("initial_guesses: m must be >= 1");
    validate(params);
    if (params.a == Complex{0.0, 0.0})
        throw std::domain_error("initial_guesses: a = 0");

    const Complex lin = linear_factor(m, params);
    if (std::abs(lin) < kDegenerateTol)
        throw DegenerateLeadingTerm(
            "initial_guesses: e^{2 pi m eps} = 1, leading balance collapses to 0");

    const Complex target = -lin / (params.a * resonant_coeff_c(m));
    const double r = std::pow(std::abs(target), 1.0 / m);
    const double phase = std::arg(target) / m;
    std::vector<Complex> roots(m);
    for (int k = 0; k < m; ++k)
        roots[k] = r * std::exp(Complex{0.0, phase + 2.0 * kPi * k / m});
    return roots;
}

OrbitRecord newton_orbit(Complex u0, int m, const FoliationParams& params,
                         const LiftOptions& opts, const OrbitTols& tols) {
    require_finite(u0, "u0");
    if (m < 1) throw std::invalid_argument("newton_orbit: m must be >= 1");
    validate(params);
    if (u0 == Complex{0.0, 0.0})
        throw std::domain_error("newton_orbit: u0 = 0 is the trivial fixed point");

    Complex u = u0;
    MapJet jet;
    bool converged = false;
    for (int it = 0; it < tols.max_newton_iters; ++it) {
        jet = poincare_iter_lifted(u, m, params, opts);
        const Complex F = jet.value - u;
        const Complex Fp = jet.derivative - 1.0;
        if (std::abs(Fp) < 1e-14)
            throw NoConvergence("newton_orbit: derivative of P^m - id vanished");
        const Complex du = -F / Fp;
        u += du;
        if (!is_finite(u)) throw NoConvergence("newton_orbit: iterate diverged");
        if (std::abs(u) < tols.zero_tol)
            throw ConvergedToZero("newton_orbit: converged to the trivial root u = 0");
        if (std::abs(du) <= 1e-14 * (1.0 + std::abs(u))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NoConvergence("newton_orbit: no convergence within the iteration budget");

    OrbitRecord rec;
    rec.m = m;
    rec.params = params;
    rec.points.resize(m);
    rec.points[0] = u;
    for (int j = 1; j < m; ++j)
        rec.points[j] = poincare_iter_lifted(rec.points[j - 1], 1, params, opts).value;

    const MapJet closure = poincare_iter_lifted(u, m, params, opts);
    rec.residual = std::abs(closure.value - u);
    rec.multiplier = closure.derivative;

    rec.separation = std::numeric_limits<double>::infinity();
    for (int j = 1; j < m; ++j)
        rec.separation = std::min(rec.separation, std::abs(rec.points[j] - u));
    if (m == 1) rec.separation = std::numeric_limits<double>::infinity();

    rec.h_values.resize(m);
    for (int j = 0; j < m; ++j) rec.h_values[j] = h_from_w(rec.points[j]);

    if (rec.residual >= tols.residual_tol)
        throw NoConvergence("newton_orbit: residual above residual_tol");
    if (m > 1 && rec.separation <= tols.sep_tol)
        throw PeriodTooLow("newton_orbit: orbit has period k < m (k | m)");
    for (const Complex& uj : rec.points)
        if (std::abs(uj) <= tols.zero_tol)
            throw ConvergedToZero("newton_orbit: an orbit point is zero");

    return rec;
}

namespace {

bool same_orbit(const OrbitRecord& a, const OrbitRecord& b, double tol) {
    if (a.m != b.m) return false;
    const int m = a.m;
    for (int shift = 0; shift < m; ++shift) {
        double worst = 0.0;
        for (int j = 0; j < m; ++j)
            worst = std::max(worst, std::abs(a.points[j] - b.points[(j + shift) % m]));
        if (worst < tol) return true;
    }
    return false;
}

}  // namespace

FindOrbitsResult find_orbits(int m, const FoliationParams& params,
                             const LiftOptions& opts, const OrbitTols& tols) {
    if (m < 1) throw std::invalid_argument("find_orbits: m must be >= 1");
    validate(params);
    if (params.a == Complex{0.0, 0.0})
        throw EmptyResult("find_orbits: a = 0 (rotation-dilation has no nonzero periodic points)",
                          0, 0, 0);

    const std::vector<Complex> guesses = initial_guesses(m, params);
    const double guess_radius = std::abs(guesses.front());

    FindOrbitsResult out;
    out.search_radius = std::min(1.5 * guess_radius, kSearchRadiusCap);

    for (const Complex& g : guesses) {
        ++out.newton_attempts;
        try {
            OrbitRecord rec = newton_orbit(g, m, params, opts, tols);
            ++out.newton_successes;
            bool duplicate = false;
            for (const OrbitRecord& kept : out.orbits)
                if (same_orbit(rec, kept, tols.dedup_tol)) {
                    duplicate = true;
                    ++out.merged;
                    break;
                }
            if (!duplicate && certified(rec, tols)) out.orbits.push_back(std::move(rec));
        } catch (const OrbitError&) {
        } catch (const LiftError&) {
        } catch (const std::domain_error&) {
        }
    }

    // Count roots on the search circle; nudge it outward a little if a root
    // sits on the sampled contour.
    double radius = out.search_radius;
    for (int attempt = 0; attempt < 3; ++attempt) {
        try {
            out.winding = winding_count(Complex{0.0, 0.0}, radius, m, params, 512,
                                        opts, tols);
            out.search_radius = radius;
            break;
        } catch (const ContourThroughZero&) {
            radius = std::min(radius * 1.05, kSearchRadiusCap);
            if (attempt == 2) throw;
        }
    }

    if (out.orbits.empty()) {
        std::ostringstream msg;
        msg << "find_orbits: no certified orbit (winding " << out.winding << ", "
            << out.newton_successes << "/" << out.newton_attempts
            << " Newton runs converged)";
        throw EmptyResult(msg.str(), out.winding, out.newton_attempts,
                          out.newton_successes);
    }
    return out;
}

}  // namespace folcyc
