#pragma once

// Standard normal distribution helpers used throughout the profile and
// rearrangement machinery.  Accuracy target: ~1e-15 relative for pdf/cdf,
// ~1e-14 for the quantile after Newton polish (tails down to ~1e-280).

#include <cmath>
#include <stdexcept>

namespace isoperm {

inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;

inline double normal_pdf(double x) {
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / kSqrt2);
}

// Upper tail P(X > x); keeps full precision for large positive x.
inline double normal_tail(double x) {
    return 0.5 * std::erfc(x / kSqrt2);
}

double normal_quantile(double p);

// Unit n-sphere surface area omega_n = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_surface_measure(int n);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

} // namespace isoperm
