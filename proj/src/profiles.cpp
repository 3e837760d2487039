#include "isoperm/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isoperm/quadrature.hpp"
#include "isoperm/special.hpp"

namespace isoperm {

namespace {

double clamp_mass(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("profile: mass outside [0,1]");
    return t;
}

// Sphere cap CDF Phi_n tabulated on theta in [-pi/2, pi/2].
struct SphereTable {
    int n;
    double cn; // omega_{n-1}/omega_n
    std::vector<double> theta, mass;

    explicit SphereTable(int n_) : n(n_) {
        cn = sphere_surface_measure(n - 1) / sphere_surface_measure(n);
        const int K = 4096;
        theta.resize(K + 1);
        mass.assign(K + 1, 0.0);
        auto dens = [this](double th) { return cn * std::pow(std::cos(th), n - 1); };
        for (int i = 0; i <= K; ++i) theta[i] = -M_PI_2 + M_PI * i / K;
        double acc = 0.0;
        for (int i = 0; i < K; ++i) {
            acc += gk15(dens, theta[i], theta[i + 1]).value;
            mass[i + 1] = acc;
        }
        // Normalize the tabulation so mass[K] == 1 exactly.
        for (auto& m : mass) m /= acc;
    }

    double density(double th) const { return cn * std::pow(std::cos(th), n - 1); }

    double quantile(double t) const {
        auto it = std::lower_bound(mass.begin(), mass.end(), t);
        std::size_t k = static_cast<std::size_t>(it - mass.begin());
        if (k == 0) return theta.front();
        const double base = theta[k - 1]; // fixed base for the local integral
        const double mlo = mass[k - 1];
        double lo = theta[k - 1], hi = theta[k];
        auto dens = [this](double th) { return density(th); };
        double th = 0.5 * (lo + hi);
        for (int iter = 0; iter < 80; ++iter) {
            double g = mlo + gk15(dens, base, th).value - t;
            double d = density(th);
            if (g > 0.0) hi = th; else lo = th;
            double nth = (d > 0.0) ? th - g / d : 0.5 * (lo + hi);
            if (!(nth > lo && nth < hi)) nth = 0.5 * (lo + hi);
            if (std::abs(nth - th) < 1e-15) { th = nth; break; }
            th = nth;
        }
        return th;
    }
};

std::shared_ptr<SphereTable> sphere_table(int n) {
    static std::vector<std::shared_ptr<SphereTable>> cache;
    for (auto& t : cache)
        if (t->n == n) return t;
    auto t = std::make_shared<SphereTable>(n);
    cache.push_back(t);
    return t;
}

} // namespace

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::gaussian: return "gaussian";
        case ProfileKind::phi_measure: return "phi_measure";
        case ProfileKind::mu_p_alpha: return "mu_p_alpha";
        case ProfileKind::sphere: return "sphere";
        case ProfileKind::euclidean: return "euclidean";
        case ProfileKind::cube_gaussian: return "cube_gaussian";
        case ProfileKind::sodin_pball: return "sodin_pball";
        case ProfileKind::semigroup_bound: return "semigroup_bound";
        case ProfileKind::tabulated: return "tabulated";
    }
    return "?";
}

double gaussian_profile(double t) {
    clamp_mass(t);
    double tt = std::min(t, 1.0 - t);
    if (tt <= 0.0) return 0.0;
    return normal_pdf(normal_quantile(tt));
}

double exact_phi_profile(const Measure1D& m, double t) {
    clamp_mass(t);
    double tt = std::min(t, 1.0 - t);
    if (tt <= 0.0) return 0.0;
    return m.density(m.quantile(tt));
}

double asymptotic_estimator(EstimatorKind kind, const Measure1D& m, double p, double alpha,
                            double t) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("asymptotic_estimator: t outside (0,1)");
    double tt = std::min(t, 1.0 - t);
    if (kind == EstimatorKind::mu_p_alpha) {
        if (!(p >= 1.0 && p <= 2.0) || alpha < 0.0)
            throw std::domain_error("asymptotic_estimator: p in [1,2], alpha >= 0 required");
        double L = std::log(1.0 / tt);
        double LL = std::log(std::log(M_E + 1.0 / tt));
        return tt * std::pow(L, 1.0 - 1.0 / p) * std::pow(LL, alpha / p);
    }
    // phi_growth: L_Phi(t) = min{t,1-t} * Phi' (Phi^{-1}(log 1/min{t,1-t})).
    double y = std::log(1.0 / tt);
    // invert Phi on [0, inf)
    double lo = 0.0, hi = 1.0;
    while (m.potential(hi) < y && hi < 1e12) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (m.potential(mid) < y) lo = mid; else hi = mid;
        if (hi - lo < 1e-13 * (1.0 + hi)) break;
    }
    double x = 0.5 * (lo + hi);
    double h = 1e-6 * (1.0 + std::abs(x));
    double dphi = (m.potential(x + h) - m.potential(std::max(0.0, x - h))) /
                  (h + std::min(x, h));
    return tt * dphi;
}

double sphere_profile(int n, double t) {
    if (n < 2) throw std::domain_error("sphere_profile: n >= 2 required");
    clamp_mass(t);
    double tt = std::min(t, 1.0 - t);
    if (tt <= 0.0) return 0.0;
    auto tab = sphere_table(n);
    return tab->density(tab->quantile(tt));
}

double euclidean_profile(int n, double v) {
    if (n < 1) throw std::domain_error("euclidean_profile: n >= 1 required");
    if (!(v > 0.0)) {
        if (v == 0.0 && n >= 2) return 0.0;
        throw std::domain_error("euclidean_profile: v must be positive");
    }
    double cn = n * std::pow(unit_ball_volume(n), 1.0 / n);
    return cn * std::pow(v, 1.0 - 1.0 / n);
}

double Profile::operator()(double t) const {
    if (!eval_) throw std::logic_error("Profile: empty");
    if (is_probability_) {
        clamp_mass(t);
        if (t <= 0.0 || t >= 1.0) return 0.0;
    } else if (!(t > 0.0)) {
        if (t == 0.0 && n_ >= 2) return 0.0;
        throw std::domain_error("Profile: volume must be positive");
    }
    return c_ * eval_(t);
}

Profile Profile::gaussian() {
    Profile p;
    p.kind_ = ProfileKind::gaussian;
    p.label_ = "gaussian";
    p.eval_ = [](double t) { return gaussian_profile(t); };
    return p;
}

Profile Profile::phi_measure(std::shared_ptr<Measure1D> m) {
    Profile p;
    p.kind_ = ProfileKind::phi_measure;
    p.label_ = "phi:" + m->name();
    p.measure_ = m;
    p.eval_ = [m](double t) { return exact_phi_profile(*m, t); };
    return p;
}

Profile Profile::mu_p_alpha_estimator(double p_, double alpha_) {
    if (!(p_ >= 1.0 && p_ <= 2.0) || alpha_ < 0.0)
        throw std::domain_error("mu_p_alpha_estimator: p in [1,2], alpha >= 0");
    Profile p;
    p.kind_ = ProfileKind::mu_p_alpha;
    p.p_ = p_;
    p.alpha_ = alpha_;
    p.label_ = "mu_p_alpha";
    p.eval_ = [p_, alpha_](double t) {
        double tt = std::min(t, 1.0 - t);
        double L = std::log(1.0 / tt);
        double LL = std::log(std::log(M_E + 1.0 / tt));
        return tt * std::pow(L, 1.0 - 1.0 / p_) * std::pow(LL, alpha_ / p_);
    };
    return p;
}

Profile Profile::sphere(int n_) {
    Profile p;
    p.kind_ = ProfileKind::sphere;
    p.n_ = n_;
    p.label_ = "sphere:" + std::to_string(n_);
    auto tab = sphere_table(n_);
    p.eval_ = [tab](double t) {
        double tt = std::min(t, 1.0 - t);
        return tab->density(tab->quantile(tt));
    };
    return p;
}

Profile Profile::euclidean(int n_, double c_multiplier) {
    Profile p;
    p.kind_ = ProfileKind::euclidean;
    p.n_ = n_;
    p.c_ = c_multiplier;
    p.is_probability_ = false;
    p.label_ = "euclidean:" + std::to_string(n_);
    p.eval_ = [n_](double v) { return euclidean_profile(n_, v); };
    return p;
}

Profile Profile::cube_gaussian() {
    Profile p = gaussian();
    p.kind_ = ProfileKind::cube_gaussian;
    p.label_ = "cube_gaussian";
    return p;
}

Profile Profile::sodin_pball(double p_, int n_, double c) {
    if (!(p_ >= 1.0 && p_ <= 2.0)) throw std::domain_error("sodin_pball: p in [1,2]");
    if (n_ < 2) throw std::domain_error("sodin_pball: n >= 2");
    Profile p;
    p.kind_ = ProfileKind::sodin_pball;
    p.n_ = n_;
    p.p_ = p_;
    p.c_ = c;
    p.label_ = "sodin_pball";
    p.eval_ = [p_, n_](double t) {
        double tt = std::min(t, 1.0 - t);
        return std::pow(double(n_), 1.0 / p_) * tt * std::pow(std::log(1.0 / tt), 1.0 - 1.0 / p_);
    };
    return p;
}

Profile Profile::semigroup_bound(std::function<double(double)> phiX,
                                 std::function<double(double)> phiY, double c1,
                                 bool sqrt_variant) {
    if (!(c1 > 0.0)) throw std::domain_error("semigroup_bound: c1 > 0 required");
    Profile p;
    p.kind_ = ProfileKind::semigroup_bound;
    p.c_ = c1;
    p.label_ = sqrt_variant ? "semigroup_sqrt" : "semigroup";
    if (sqrt_variant) {
        p.eval_ = [phiX, phiY](double t) {
            double tt = std::min(t, 1.0 - t);
            double px = phiX(tt);
            return px > 0.0 ? tt * phiY(tt) / std::sqrt(px) : 0.0;
        };
    } else {
        p.eval_ = [phiX, phiY](double t) {
            double u = t * (1.0 - t);
            double px = phiX(u);
            return px > 0.0 ? u * phiY(u) / px : 0.0;
        };
    }
    return p;
}

Profile Profile::tabulated(std::vector<double> t, std::vector<double> I, std::string label) {
    if (t.size() != I.size() || t.size() < 2)
        throw std::invalid_argument("Profile::tabulated: bad table");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (!(t[i] > t[i - 1])) throw std::invalid_argument("Profile::tabulated: t not increasing");
    Profile p;
    p.kind_ = ProfileKind::tabulated;
    p.label_ = std::move(label);
    auto ts = std::make_shared<std::vector<double>>(std::move(t));
    auto Is = std::make_shared<std::vector<double>>(std::move(I));
    p.eval_ = [ts, Is](double x) {
        const auto& tv = *ts;
        const auto& iv = *Is;
        if (x <= tv.front()) return iv.front() * (x / tv.front());
        if (x >= tv.back()) return iv.back();
        auto it = std::upper_bound(tv.begin(), tv.end(), x);
        std::size_t k = static_cast<std::size_t>(it - tv.begin());
        double w = (x - tv[k - 1]) / (tv[k] - tv[k - 1]);
        return iv[k - 1] * (1.0 - w) + iv[k] * w;
    };
    return p;
}

Profile Profile::cheeger_linear() {
    Profile p;
    p.kind_ = ProfileKind::tabulated;
    p.label_ = "cheeger_linear";
    p.eval_ = [](double t) { return std::min(t, 1.0 - t); };
    return p;
}

Profile Profile::power_law(double beta, double c) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::domain_error("power_law: beta in [0,1)");
    Profile p;
    p.kind_ = ProfileKind::tabulated;
    p.label_ = "power_law";
    p.c_ = c;
    p.eval_ = [beta](double t) {
        double tt = std::min(t, 1.0 - t);
        return std::pow(tt, 1.0 - beta);
    };
    return p;
}

EstimatorReport validate_estimator(const Profile& I, const std::vector<double>& grid,
                                   double tolerance) {
    EstimatorReport r;
    r.tolerance = tolerance;
    r.grid = grid;
    double scale = std::max(1.0, I(0.5));
    r.zero_at_origin = std::abs(I(0.0)) / scale;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double t = grid[i];
        if (!(t > 0.0 && t < 1.0)) continue;
        r.symmetric = std::max(r.symmetric, std::abs(I(t) - I(1.0 - t)) / scale);
        if (i + 1 < grid.size() && grid[i + 1] <= 0.5)
            r.monotone_half = std::max(r.monotone_half, (I(t) - I(grid[i + 1])) / scale);
        if (i + 1 < grid.size() && grid[i + 1] < 1.0) {
            double a = t, b = grid[i + 1];
            double mid = 0.5 * (a + b);
            r.concave = std::max(r.concave, (0.5 * (I(a) + I(b)) - I(mid)) / scale);
            double ra = I(a) / a, rb = I(b) / b;
            r.i_over_t_decreasing = std::max(r.i_over_t_decreasing, (rb - ra) / std::max(ra, 1e-300));
        }
    }
    return r;
}

double concon_integral(const Profile& I, double t, double b) {
    // integral_t^b I(s)/s^2 ds via u = log(1/s).
    auto g = [&I](double u) {
        double s = std::exp(-u);
        return I(s) / s; // I(s)/s^2 * s (jacobian)
    };
    double u_lo = std::log(1.0 / b);
    double u_hi = std::log(1.0 / t);
    double total = 0.0;
    double u = u_lo;
    while (u < u_hi) {
        double u2 = std::min(u + 3.0, u_hi);
        total += integrate(g, u, u2, 1e-10);
        u = u2;
    }
    return total;
}

ConconResult check_concon(const Profile& I, const std::vector<double>& grid) {
    auto sup_on = [&I](const std::vector<double>& g) {
        std::vector<double> sorted(g);
        std::sort(sorted.begin(), sorted.end(), std::greater<double>());
        double acc = 0.0;
        double prev = 1.0;
        double best = 0.0;
        for (double t : sorted) {
            if (!(t > 0.0 && t < 1.0)) continue;
            acc += concon_integral(I, t, prev);
            prev = t;
            double it = I(t);
            if (!(it > 0.0)) throw std::runtime_error("check_concon: profile vanishes on grid");
            double v = acc * t / it;
            if (!std::isfinite(v)) throw std::runtime_error("check_concon: integrand diverged");
            best = std::max(best, v);
        }
        return best;
    };
    ConconResult r;
    r.c_est = sup_on(grid);
    double tmin = *std::min_element(grid.begin(), grid.end());
    std::vector<double> refined(grid);
    for (double t = tmin; t > tmin * 1e-2 * 0.999; t *= 0.7) refined.push_back(t * 0.7);
    r.c_refined = sup_on(refined);
    r.holds = std::isfinite(r.c_refined) && r.c_refined < 1.1 * r.c_est;
    return r;
}

std::vector<double> default_profile_grid(double t_min, int points) {
    std::vector<double> g;
    int half = points / 2;
    double lo = std::log10(t_min);
    for (int i = 0; i < half; ++i) {
        double t = std::pow(10.0, lo + (std::log10(0.5) - lo) * i / (half - 1));
        g.push_back(t);
        g.push_back(1.0 - t);
    }
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

} // namespace isoperm
