#pragma once

// Sharp a-priori rearrangement bounds for entropy solutions of
// -div(a(x,u,grad u)) = f w on a subdomain G with mu(G) <= 1, the gradient
// tail bound, and r.i.-norm route verdicts.

#include <cmath>
#include <string>
#include <vector>

#include "isoperm/hardy.hpp"
#include "isoperm/profiles.hpp"
#include "isoperm/ri_spaces.hpp"
#include "isoperm/step_function.hpp"

namespace isoperm {

struct EllipticProblem {
    Profile profile;        // of the ambient (R^n, mu)
    double mass_G = 1.0;    // mu(G) in (0,1]
    double p = 2.0;         // ellipticity exponent
    StepFunction datum;     // f* on (0, mu(G)]

    void validate() const;
};

// B(t) = int_t^{mu(G)} (s/I(s))^2 f**(s) ds/s (general p via the adapted
// kernel); any entropy solution satisfies u*(t) <= B(t).  Returned as a
// tabulation on a log grid; +inf values signal possibly unbounded solutions.
StepFunction solution_bound(const EllipticProblem& prob, int grid_points = 600);
double solution_bound_at(const EllipticProblem& prob, double t);

struct GradientBoundDebug {
    double proof_kernel = 0.0;   // ((2/t) int_{t/2}^{muG} (s/I * f**)^2 ds)^{1/2}
    double display_kernel = 0.0; // same with I/s in place of s/I, for comparison
};

// Gradient tail bound with the proof-derived (s/I)^2 kernel; the display
// variant is reported alongside for inspection.
double gradient_bound(const EllipticProblem& prob, double t);
GradientBoundDebug gradient_bound_debug(const EllipticProblem& prob, double t);

struct NormBoundRoute {
    std::string name;       // "u_in_Y", "weighted_u", "ls_plus_l1", "gradient"
    Verdict applicable = Verdict::inconclusive;
    std::string predicate;  // the Boyd/operator condition that was evaluated
    double value = HUGE_VAL; // the route's norm evaluated on the bound
};

struct NormBoundsReport {
    std::vector<NormBoundRoute> routes;
    // Lorentz-Zygmund specialization: the exact weight exponents emitted for
    // a mu_{p,alpha}-type profile (2(1-1/p) on the log, 2 alpha/p on loglog).
    bool lz_weights_emitted = false;
    double log_exponent = 0.0;
    double loglog_exponent = 0.0;
};

NormBoundsReport norm_bounds(const EllipticProblem& prob, const RISpace& X, const RISpace& Y);

} // namespace isoperm
