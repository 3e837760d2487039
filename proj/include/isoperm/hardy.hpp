#pragma once

// Classical and isoperimetric Hardy-type operators between r.i. spaces:
// P, Q_a, Q_I, the tilde variants, the elliptic kernels R_I / R~_I, the
// tail functional of the gradient lemma, and capacity lower bounds.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isoperm/profiles.hpp"
#include "isoperm/ri_spaces.hpp"
#include "isoperm/step_function.hpp"

namespace isoperm {

enum class OpKind { P, Qa, QI, QItilde, RI, RItilde, TailQ };

struct OperatorSpec {
    OpKind kind = OpKind::P;
    double a = 0.0;                      // Qa exponent, in [0,1)
    double q = 2.0;                      // TailQ exponent, > 0
    double p_ellipticity = 2.0;          // RI kernel exponent (general-p variant)
    std::optional<Profile> profile;      // required for QI/QItilde/RI/RItilde
    bool support_restriction = false;    // inputs supported in (0,1/2]
    double upper_limit = 1.0;            // 1, 1/2 or mu(G)
    std::function<double(double)> weight; // TailQ weight (monotone)

    void validate() const;
    // "P", "Qa(0.3)", "QI(gaussian)", "QI(cheeger)", "QItilde(sphere:3)",
    // "RI(sphere:3, massG=0.5)", "RItilde(gaussian, massG=0.5)".
    static OperatorSpec parse(const std::string& s);
    std::string to_string() const;
};

// Evaluate (op f)(t) for a step-function input; +infinity signals divergence.
double apply(const OperatorSpec& op, const StepFunction& f, double t);
// Same for a tabulated/continuous input on (0, upper_limit).
double apply(const OperatorSpec& op, const std::function<double(double)>& f, double t);

struct OpNormEstimate {
    double lower_bound = 0.0;   // certified lower bound for the operator norm
    bool unbounded = false;     // a family member mapped to an infinite norm,
                                // or the ratios blow up along the family
    std::string witness;        // family member achieving the supremum
};

OpNormEstimate opnorm_lower(const OperatorSpec& op, const RISpace& X, const RISpace& Y,
                            const ProbeFamily& family);
OpNormEstimate opnorm_lower(const OperatorSpec& op, const RISpace& X, const RISpace& Y);

enum class Verdict { bounded, unbounded, inconclusive };
std::string to_string(Verdict v);

// Boyd-index criteria: P bounded on X iff upper index < 1; Q_a iff lower
// index > a; the tilde operators via domination by Q_a for the model
// profiles.  "inconclusive" when an estimated index sits within 0.03 of the
// threshold.
Verdict boundedness_predicate(const OperatorSpec& op, const RISpace& X);

// ((1/t) integral_t^1 (w f*)^q ds)^{1/q}.
double tail_q(const StepFunction& fstar, const std::function<double(double)>& w, double q,
              double t);

// Capacity lower bounds, constants suppressed: for p < n
// | |G|^{(p-n)/(n(p-1))} - |F|^{(p-n)/(n(p-1))} |^{1-p}; for p = n the
// (log|G| - log|F|)^{1-n} form; p = 1 falls back to |F|^{(n-1)/n}.
double capacity_lower_bound(double p, int n, double volF, double volG);

} // namespace isoperm
