#pragma once

#include <vector>

#include "folcyc/lift.hpp"
#include "folcyc/types.hpp"

namespace folcyc {

struct OrbitTols {
    double residual_tol = 1e-10;
    double sep_tol = 1e-6;
    double zero_tol = 1e-9;
    double dedup_tol = 1e-8;
    double contour_tol = 1e-10;
    int max_newton_iters = 50;
};

/// A certified m-periodic orbit of the return map.
struct OrbitRecord {
    int m = 1;
    FoliationParams params;
    std::vector<Complex> points;    // u_1..u_m with u_{j+1} = P(u_j)
    double residual = 0.0;          // |P^m(u_1) - u_1|
    Complex multiplier{0.0, 0.0};   // d(P^m)/du at u_1
    double separation = 0.0;        // min_{1<=k<m} |P^k(u_1) - u_1|
    std::vector<Complex> h_values;  // h_j = 1/(1 - u_j)
};

/// True when the record satisfies the certification thresholds.
bool certified(const OrbitRecord& rec, const OrbitTols& tols);

class OrbitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NoConvergence : public OrbitError {
public:
    using OrbitError::OrbitError;
};
class ConvergedToZero : public OrbitError {
public:
    using OrbitError::OrbitError;
};
class PeriodTooLow : public OrbitError {
public:
    using OrbitError::OrbitError;
};
class DegenerateLeadingTerm : public OrbitError {
public:
    using OrbitError::OrbitError;
};
class ContourThroughZero : public OrbitError {
public:
    using OrbitError::OrbitError;
};
class EmptyResult : public OrbitError {
public:
    EmptyResult(const std::string& what, int winding, int attempts, int successes)
        : OrbitError(what), winding(winding), attempts(attempts),
          successes(successes) {}
    int winding = 0;
    int attempts = 0;
    int successes = 0;
};

/// Winding number of u -> (P^m(u) - u)/u about 0 along the circle
/// |u - center| = radius: the number of nonzero fixed points of P^m inside,
/// counted with multiplicity. The deflation by u removes the persistent
/// fixed point at the origin, so the count is exactly the interesting one.
/// Throws ContourThroughZero when the minimum modulus along the sampled
/// contour falls below tols.contour_tol.
int winding_count(Complex center, double radius, int m,
                  const FoliationParams& params, int n_samples,
                  const LiftOptions& opts, const OrbitTols& tols = {});

/// Leading-balance starting points: the m m-th roots of
/// -(e^{2 pi m eps} - 1)/(a c_m), equally spaced on a common circle.
/// Throws DegenerateLeadingTerm when e^{2 pi m eps} = 1.
std::vector<Complex> initial_guesses(int m, const FoliationParams& params);

/// Newton iteration on F(u) = P^m(u) - u with the variational derivative,
/// starting from u0. On convergence builds the full orbit and certifies it.
OrbitRecord newton_orbit(Complex u0, int m, const FoliationParams& params,
                         const LiftOptions& opts, const OrbitTols& tols = {});

struct FindOrbitsResult {
    std::vector<OrbitRecord> orbits;  // deduplicated, certified records
    int winding = 0;                  // count on the search circle
    double search_radius = 0.0;
    int newton_attempts = 0;
    int newton_successes = 0;
    int merged = 0;  // Newton roots that duplicated an already-found orbit
};

/// Runs initial_guesses, Newton from each, deduplicates orbits under cyclic
/// rotation of their point sets, and reports the winding count on the search
/// circle. Throws EmptyResult (with diagnostics) when nothing certifies.
FindOrbitsResult find_orbits(int m, const FoliationParams& params,
                             const LiftOptions& opts, const OrbitTols& tols = {});

}  // namespace folcyc
