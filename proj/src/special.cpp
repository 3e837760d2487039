#include "isoperm/special.hpp"

namespace isoperm {

namespace {

// Rational initial guess for the normal quantile (Acklam-style coefficients),
// accurate to ~1e-9 before polishing.
double quantile_seed(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double normal_quantile(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("normal_quantile: p outside [0,1]");
    if (p == 0.0) return -HUGE_VAL;
    if (p == 1.0) return HUGE_VAL;
    if (p == 0.5) return 0.0;
    // Work on the lower half for symmetric rounding behaviour.
    if (p > 0.5) return -normal_quantile(1.0 - p);
    double x = quantile_seed(p);
    // Halley iterations on Phi(x) - p.  The tail form keeps the residual
    // well-conditioned for p down to ~1e-280.
    for (int it = 0; it < 3; ++it) {
        double err = normal_cdf(x) - p;
        double pdf = normal_pdf(x);
        if (pdf <= 0.0) break;
        double u = err / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double sphere_surface_measure(int n) {
    if (n < 0) throw std::domain_error("sphere_surface_measure: n < 0");
    return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

double unit_ball_volume(int n) {
    if (n < 1) throw std::domain_error("unit_ball_volume: n < 1");
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

} // namespace isoperm
