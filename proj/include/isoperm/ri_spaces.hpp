#pragma once

// Rearrangement-invariant norm evaluation on step functions: Lp, Lorentz,
// Lorentz-Zygmund, Orlicz (Luxemburg), Marcinkiewicz, Lambda and the exp-L
// functional; fundamental functions, dilation-operator norms, Boyd indices,
// and the oscillation-weighted LS(X) functional.
//
// A norm that evaluates to +infinity signals divergence; evaluation never
// produces NaN on valid inputs.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "isoperm/profiles.hpp"
#include "isoperm/step_function.hpp"

namespace isoperm {

struct YoungFunction {
    std::string name;
    std::function<double(double)> N; // convex increasing, N(0)=0

    double operator()(double t) const { return N(t); }
    // N^{-1}(y) by monotone bracketing; exact enough for phi_{L_N}.
    double inverse(double y) const;

    static YoungFunction power(double p);          // t^p
    static YoungFunction exp_minus_one();          // e^t - 1
    static YoungFunction exp_sq_minus_one();       // e^{t^2} - 1
    static YoungFunction tq_log(double q);         // t^q (1 + log^+ t)
    static YoungFunction by_name(const std::string& name);
    // Tabulated (t, N(t)) pairs, linearly interpolated, convex by assumption.
    static YoungFunction tabulated(std::vector<double> t, std::vector<double> Nt);
};

enum class SpaceKind { lp, lorentz, lorentz_zygmund, orlicz, marcinkiewicz, lambda, exp_l };

class RISpace {
  public:
    static RISpace Lp(double p);
    static RISpace Linf() { return Lp(kInf); }
    static RISpace Lorentz(double p, double q);
    static RISpace LorentzZygmund(double q, double m, double lambda);
    static RISpace Orlicz(YoungFunction N);
    static RISpace Marcinkiewicz(std::function<double(double)> phi, std::string label);
    static RISpace Lambda(std::function<double(double)> phi, std::string label);
    static RISpace ExpL();

    // Compact string forms: "Lp(2)", "Lp(inf)"/"Linf", "Lorentz(4,2)",
    // "LZ(2,2,-1)", "Orlicz(exp_m1)", "ExpL", "M(Lp(2))", "Lambda(Lp(2))".
    static RISpace parse(const std::string& s);

    SpaceKind kind() const { return kind_; }
    double p() const { return p_; }
    double q() const { return q_; }
    double m() const { return m_; }
    double lambda_exp() const { return lambda_; }
    const YoungFunction& young() const { return young_; }
    const std::string& label() const { return label_; }
    bool quasi_norm() const;

    static constexpr double kInf = 1e300; // sentinel for p = infinity

  private:
    friend double norm(const RISpace&, const StepFunction&);
    friend double fundamental_function(const RISpace&, double);
    SpaceKind kind_ = SpaceKind::lp;
    double p_ = 2.0, q_ = 2.0, m_ = 1.0, lambda_ = 0.0;
    YoungFunction young_;
    std::function<double(double)> phi_; // for marcinkiewicz / lambda kinds
    std::string label_;
};

double norm(const RISpace& X, const StepFunction& fstar);

// phi_X(t) = ||chi_(0,t)||_X. phi_X(t)*phi_{X'}(t) = t defines the associate.
double fundamental_function(const RISpace& X, double t);
inline double associate_fundamental(const RISpace& X, double t) {
    double f = fundamental_function(X, t);
    return f > 0.0 ? t / f : 0.0;
}

// p-convexification: ||f||_{X^(p)} = ||(f*)^p||_X^{1/p}.
double norm_pconvex(const RISpace& X, double p, const StepFunction& fstar);

// Probe family for dilation / operator-norm sweeps: indicators, powers
// s^{-a} chi_(0,1/2) and log-perturbed powers, all as fine step functions.
struct ProbeFamily {
    std::vector<StepFunction> members;
    std::vector<std::string> names;
    // escalation parameter of the pure-power probes, -1 for the others
    std::vector<double> power_param;
    static ProbeFamily standard(int breaks_per_decade = 220, double t_min = 1e-22);
};

// E_s f as a step function (exact dilation of steps, clipped to (0,1)).
StepFunction dilate(const StepFunction& fstar, double s);

// Lower estimate of h_X(s) over the family; exact s^{1/p} for Lp.
double dilation_norm(const RISpace& X, double s, const ProbeFamily& family);
double dilation_norm(const RISpace& X, double s);

struct BoydIndices {
    double lower = 0.0;
    double upper = 1.0;
};
BoydIndices boyd_indices(const RISpace& X);

// ||(f** - f*)(t) I(t)/t||_{X-bar}, tabulated on breakpoints + log grid.
double ls_norm(const RISpace& X, const Profile& I, const StepFunction& fstar);

} // namespace isoperm
