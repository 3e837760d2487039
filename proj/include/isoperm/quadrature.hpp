#pragma once

// Adaptive Gauss-Kronrod 7-15 quadrature.  Endpoint-singular integrands on
// (0,b) are handled by the caller through the s = exp(-u) substitution
// helpers below (integrate_log_left).

#include <cmath>
#include <functional>
#include <stdexcept>

namespace isoperm {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

using Integrand = std::function<double(double)>;

QuadResult gk15(const Integrand& f, double a, double b);

// Adaptive bisection on [a,b]; rel_tol is relative to the accumulated value.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-300, int max_depth = 30);

// Integral over (0,b) of f with possible integrable endpoint behaviour at 0:
// substitutes s = exp(-u) so the mass near zero is resolved on a log scale.
double integrate_log_left(const Integrand& f, double b, double rel_tol = 1e-10,
                          double t_floor = 1e-300);

// Integral over (a,b), 0 < a < b, computed in u = log(1/s) coordinates;
// uniformly accurate for kernels like 1/I(s) or (s/I(s))^2/s that vary on a
// log scale near zero.
double integrate_log(const Integrand& f, double a, double b, double rel_tol = 1e-9);

// Semi-infinite integral over [a, inf): marches unit-ish panels until the
// running tail contribution is negligible.  Intended for rapidly decaying
// integrands (densities exp(-Phi)).
double integrate_to_inf(const Integrand& f, double a, double rel_tol = 1e-12);

} // namespace isoperm
