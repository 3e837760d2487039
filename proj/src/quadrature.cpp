#include "isoperm/quadrature.hpp"

#include <algorithm>
#include <cstdlib>

namespace isoperm {

namespace {

// 15-point Kronrod nodes/weights (positive half) with the embedded 7-point
// Gauss weights; standard values.
const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.000000000000000};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

} // namespace

QuadResult gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
    for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    QuadResult r;
    r.value = resk * h;
    r.error = std::abs((resk - resg) * h);
    return r;
}

namespace {

double integrate_rec(const Integrand& f, double a, double b, double tol, int depth,
                     int max_depth) {
    QuadResult r = gk15(f, a, b);
    // The roundoff floor stops subdivision once the local estimate is
    // resolved to machine precision; without it the halved tolerance can
    // stay forever below a stagnating error estimate.
    double floor_tol = 1e-14 * std::abs(r.value);
    if (depth >= max_depth || r.error <= std::max(tol, floor_tol) || !(std::isfinite(r.value)))
        return r.value;
    double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, depth + 1, max_depth) +
           integrate_rec(f, m, b, 0.5 * tol, depth + 1, max_depth);
}

} // namespace

double integrate(const Integrand& f, double a, double b, double rel_tol, double abs_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    QuadResult first = gk15(f, a, b);
    double tol = std::max(abs_tol, rel_tol * std::abs(first.value));
    if (first.error <= tol) return first.value;
    double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, 0.5 * tol, 1, max_depth) +
           integrate_rec(f, m, b, 0.5 * tol, 1, max_depth);
}

double integrate_log_left(const Integrand& f, double b, double rel_tol, double t_floor) {
    if (!(b > 0.0)) return 0.0;
    // s = exp(-u), ds = -s du; u from log(1/b) to log(1/t_floor).
    double u_lo = std::log(1.0 / b);
    double u_hi = std::log(1.0 / t_floor);
    auto g = [&f](double u) {
        double s = std::exp(-u);
        return f(s) * s;
    };
    // March in panels of width 4 in u; stop when panels stop contributing.
    double total = 0.0;
    double u = u_lo;
    while (u < u_hi) {
        double u2 = std::min(u + 4.0, u_hi);
        double piece = integrate(g, u, u2, rel_tol * 0.1, 1e-300, 30);
        total += piece;
        if (std::abs(piece) < rel_tol * 1e-3 * std::abs(total) && u - u_lo > 8.0) break;
        u = u2;
    }
    return total;
}

double integrate_log(const Integrand& f, double a, double b, double rel_tol) {
    if (!(a > 0.0 && b > a)) {
        if (b <= a) return 0.0;
        throw std::invalid_argument("integrate_log: need 0 < a < b");
    }
    auto g = [&f](double u) {
        double s = std::exp(-u);
        return f(s) * s;
    };
    double u_lo = std::log(1.0 / b);
    double u_hi = std::log(1.0 / a);
    double total = 0.0;
    double u = u_lo;
    while (u < u_hi) {
        double u2 = std::min(u + 3.0, u_hi);
        total += integrate(g, u, u2, rel_tol);
        u = u2;
    }
    return total;
}

double integrate_to_inf(const Integrand& f, double a, double rel_tol) {
    double total = 0.0;
    double x = a;
    double w = 1.0;
    int quiet = 0;
    for (int k = 0; k < 4000; ++k) {
        double piece = integrate(f, x, x + w, rel_tol, 1e-300, 30);
        total += piece;
        x += w;
        if (std::abs(piece) <= rel_tol * std::abs(total) + 1e-300) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        if (k > 16) w = std::min(w * 1.5, 16.0);
    }
    return total;
}

} // namespace isoperm
