#include "isoperm/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "isoperm/quadrature.hpp"

namespace isoperm {

void EllipticProblem::validate() const {
    if (!(mass_G > 0.0 && mass_G <= 1.0))
        throw std::domain_error("EllipticProblem: mu(G) in (0,1]");
    if (!(p > 1.0)) throw std::domain_error("EllipticProblem: p > 1");
    if (datum.pieces() == 0) throw std::domain_error("EllipticProblem: empty datum");
}

namespace {

// kernel of the tail integral at s: (s/I)^2 f**(s) / s for p = 2, and the
// adapted ((s/I)^p f**)^{1/(p-1)} / s for general p
double bound_kernel(const EllipticProblem& prob, double s) {
    double fss = double_star(prob.datum, s);
    double w = s / prob.profile(s);
    if (prob.p == 2.0) return w * w * fss / s;
    return std::pow(std::pow(w, prob.p) * fss, 1.0 / (prob.p - 1.0)) / s;
}

} // namespace

double solution_bound_at(const EllipticProblem& prob, double t) {
    prob.validate();
    if (!(t >= 0.0 && t <= prob.mass_G)) throw std::domain_error("solution_bound_at: t in [0,muG]");
    if (t >= prob.mass_G) return 0.0;
    double v = integrate_log([&prob](double s) { return bound_kernel(prob, s); },
                             std::max(t, 1e-300), prob.mass_G, 1e-9);
    return std::isfinite(v) ? v : HUGE_VAL;
}

StepFunction solution_bound(const EllipticProblem& prob, int grid_points) {
    prob.validate();
    std::vector<double> grid =
        log_grid(std::min(1e-8, prob.mass_G * 1e-4), prob.mass_G, grid_points / 8);
    // cumulative sweep from mu(G) downward; values at the left edge of each cell
    std::vector<double> breaks, values;
    double acc = 0.0;
    for (std::size_t i = grid.size(); i-- > 1;) {
        double a = grid[i - 1], b = grid[i];
        double lo = std::max(a, 1e-300);
        acc += integrate_log([&prob](double s) { return bound_kernel(prob, s); }, lo, b, 1e-9);
        breaks.push_back(b);
        values.push_back(acc); // B on (a, b] is at least B(b); store B(a) at b
    }
    std::reverse(breaks.begin(), breaks.end());
    std::reverse(values.begin(), values.end());
    // values are currently B(left edge) per cell: nonincreasing in cell order
    return StepFunction(std::move(breaks), std::move(values));
}

double gradient_bound(const EllipticProblem& prob, double t) {
    return gradient_bound_debug(prob, t).proof_kernel;
}

GradientBoundDebug gradient_bound_debug(const EllipticProblem& prob, double t) {
    prob.validate();
    if (!(t > 0.0 && t < prob.mass_G))
        throw std::domain_error("gradient_bound: t in (0, muG)");
    GradientBoundDebug d;
    auto proof = [&prob](double s) {
        double v = s / prob.profile(s) * double_star(prob.datum, s);
        return v * v;
    };
    auto display = [&prob](double s) {
        double v = prob.profile(s) / s * double_star(prob.datum, s);
        return v * v;
    };
    double ip = integrate_log(proof, 0.5 * t, prob.mass_G, 1e-9);
    double id = integrate_log(display, 0.5 * t, prob.mass_G, 1e-9);
    d.proof_kernel = std::isfinite(ip) ? std::sqrt(2.0 / t * ip) : HUGE_VAL;
    d.display_kernel = std::isfinite(id) ? std::sqrt(2.0 / t * id) : HUGE_VAL;
    return d;
}

NormBoundsReport norm_bounds(const EllipticProblem& prob, const RISpace& X, const RISpace& Y) {
    prob.validate();
    NormBoundsReport rep;
    const double margin = 0.03;
    BoydIndices idx = boyd_indices(X);
    StepFunction B = solution_bound(prob);

    auto weighted_norm = [&](const RISpace& Z, bool squared_weight,
                             const StepFunction& h) {
        std::vector<double> cells =
            log_grid(std::min(1e-8, prob.mass_G * 1e-4), prob.mass_G, 64);
        std::vector<double> hv(cells.size() - 1);
        for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
            double mid = cells[i] > 0.0 ? std::sqrt(cells[i] * cells[i + 1])
                                        : 0.5 * cells[i + 1];
            double w = prob.profile(mid) / mid;
            hv[i] = (squared_weight ? w * w : w) * h.value_at(mid);
        }
        return norm(Z, rearrange_tabulated(cells, hv));
    };

    { // route (u in Y): needs R_I : X -> Y on the probe family
        NormBoundRoute r;
        r.name = "u_in_Y";
        r.predicate = "R_I bounded X->Y (probe family)";
        OperatorSpec ri;
        ri.kind = OpKind::RI;
        ri.profile = prob.profile;
        ri.upper_limit = prob.mass_G;
        ri.p_ellipticity = prob.p;
        auto est = opnorm_lower(ri, X, Y);
        r.applicable = est.unbounded ? Verdict::unbounded : Verdict::bounded;
        if (!est.unbounded) r.value = norm(Y, B);
        rep.routes.push_back(std::move(r));
    }
    { // route (weighted u): needs R~_I bounded on X
        NormBoundRoute r;
        r.name = "weighted_u";
        r.predicate = "R~_I bounded on X (lower Boyd > 0, upper < 1)";
        OperatorSpec rit;
        rit.kind = OpKind::RItilde;
        rit.profile = prob.profile;
        rit.upper_limit = prob.mass_G;
        try {
            r.applicable = boundedness_predicate(rit, X);
        } catch (const std::invalid_argument&) {
            r.applicable = Verdict::inconclusive;
        }
        if (r.applicable == Verdict::bounded) r.value = weighted_norm(X, true, B);
        rep.routes.push_back(std::move(r));
    }
    { // route (oscillation + L1): needs upper Boyd of X < 1
        NormBoundRoute r;
        r.name = "ls_plus_l1";
        r.predicate = "upper Boyd index of X < 1";
        if (idx.upper < 1.0 - margin) {
            r.applicable = Verdict::bounded;
            // oscillation of the bound B with the squared weight, plus its L1
            std::vector<double> cells =
                log_grid(std::min(1e-8, prob.mass_G * 1e-4), prob.mass_G, 64);
            std::vector<double> hv(cells.size() - 1);
            for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                double mid = cells[i] > 0.0 ? std::sqrt(cells[i] * cells[i + 1])
                                            : 0.5 * cells[i + 1];
                double w = prob.profile(mid) / mid;
                hv[i] = w * w * oscillation(B, mid);
            }
            r.value = norm(X, rearrange_tabulated(cells, hv)) + B.integral();
        } else if (idx.upper > 1.0 - 1e-9) {
            r.applicable = Verdict::unbounded;
        } else {
            r.applicable = Verdict::inconclusive;
        }
        rep.routes.push_back(std::move(r));
    }
    { // gradient route: lower Boyd of the I-weighted space > 1/2; for the
      // model profiles the weighted index equals the plain one
        NormBoundRoute r;
        r.name = "gradient";
        r.predicate = "lower Boyd index of X_I > 1/2";
        if (idx.lower > 0.5 + margin) {
            r.applicable = Verdict::bounded;
            std::vector<double> cells =
                log_grid(std::min(1e-6, prob.mass_G * 1e-3), prob.mass_G * 0.999, 48);
            std::vector<double> hv(cells.size() - 1);
            for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
                double mid = cells[i] > 0.0 ? std::sqrt(cells[i] * cells[i + 1])
                                            : 0.5 * cells[i + 1];
                double w = prob.profile(mid) / mid;
                hv[i] = w * gradient_bound(prob, mid);
            }
            r.value = norm(X, rearrange_tabulated(cells, hv));
        } else if (idx.lower < 0.5 - margin) {
            r.applicable = Verdict::unbounded;
        } else {
            r.applicable = Verdict::inconclusive;
        }
        rep.routes.push_back(std::move(r));
    }
    if (prob.profile.kind() == ProfileKind::mu_p_alpha ||
        prob.profile.kind() == ProfileKind::gaussian) {
        rep.lz_weights_emitted = true;
        double pp = prob.profile.kind() == ProfileKind::gaussian ? 2.0 : prob.profile.param_p();
        double aa = prob.profile.kind() == ProfileKind::gaussian ? 0.0 : prob.profile.param_alpha();
        rep.log_exponent = 2.0 * (1.0 - 1.0 / pp);
        rep.loglog_exponent = 2.0 * aa / pp;
    }
    return rep;
}

} // namespace isoperm
