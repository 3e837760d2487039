#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isoperm/elliptic.hpp"
#include "isoperm/quadrature.hpp"
#include "isoperm/special.hpp"

using namespace isoperm;

namespace {

EllipticProblem gaussian_problem(double massG = 0.5, double datum = 1.0) {
    EllipticProblem prob;
    prob.profile = Profile::gaussian();
    prob.mass_G = massG;
    prob.p = 2.0;
    prob.datum = StepFunction({massG}, {datum});
    return prob;
}

// Independent construction of the comparison solution for the gaussian
// weight with f = 1 on the half-space of mass 1/2: the one-dimensional
// two-point boundary problem -(phi v')' = phi on (-inf, r], v(r) = 0 has
//   v(x) = int_x^r (1/phi(u)) int_-inf^u phi(s) ds du = int_x^r Phi(u)/phi(u) du,
// and v is decreasing in x, so v*(t) = v(Phi^{-1}(t)).
double explicit_vstar(double t, double massG) {
    double r = normal_quantile(massG);
    double x = normal_quantile(t);
    auto integrand = [](double u) { return normal_cdf(u) / normal_pdf(u); };
    return integrate(integrand, x, r, 1e-11);
}

// |grad v|(x) = Phi(x)/phi(x), increasing in x; its rearrangement on G is
// |grad v|*(t) = (massG - t)/phi(quantile(massG - t)).
double explicit_gradstar(double t, double massG) {
    double m = massG - t;
    return m / normal_pdf(normal_quantile(m));
}

} // namespace

TEST_CASE("solution bound basics") {
    SUBCASE("zero datum gives the zero bound") {
        EllipticProblem prob = gaussian_problem(0.5, 0.0);
        auto B = solution_bound(prob);
        CHECK(B.integral() == 0.0);
        CHECK(solution_bound_at(prob, 0.25) == 0.0);
    }
    SUBCASE("bound is nonincreasing and vanishes at mu(G)") {
        EllipticProblem prob = gaussian_problem();
        auto B = solution_bound(prob);
        double prev = HUGE_VAL;
        for (double t : {0.01, 0.05, 0.1, 0.2, 0.3, 0.45}) {
            double v = B.value_at(t);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
        CHECK(B.value_at(0.5) == 0.0);
        CHECK(solution_bound_at(prob, 0.5) == 0.0);
    }
    SUBCASE("euclidean closed form") {
        // I = c3 v^{2/3}, f = 1, |G| = 1: B(t) = (3/(2 c3^2))(1 - t^{2/3})
        EllipticProblem prob;
        prob.profile = Profile::euclidean(3);
        prob.mass_G = 1.0;
        prob.datum = StepFunction({1.0}, {1.0});
        double c3 = euclidean_profile(3, 1.0);
        for (double t : {0.1, 0.5, 0.9}) {
            double expect = 1.5 * (1.0 - std::pow(t, 2.0 / 3.0)) / (c3 * c3);
            CHECK(solution_bound_at(prob, t) == doctest::Approx(expect).epsilon(1e-8));
        }
        // gradient bound closed form: 2/t int_{t/2}^1 (s^{1/3}/c3)^2 ds
        for (double t : {0.2, 0.6}) {
            double expect = std::sqrt(
                2.0 / t * (3.0 / 5.0) * (1.0 - std::pow(t / 2, 5.0 / 3.0)) / (c3 * c3));
            CHECK(gradient_bound(prob, t) == doctest::Approx(expect).epsilon(1e-8));
        }
    }
}

TEST_CASE("sharpness against the explicit gaussian comparison solution") {
    EllipticProblem prob = gaussian_problem();
    // the two routes compute the same function through different quadratures
    for (double t : {1e-4, 1e-3, 0.01, 0.1, 0.25, 0.4, 0.49}) {
        double B = solution_bound_at(prob, t);
        double v = explicit_vstar(t, 0.5);
        CHECK(std::abs(v - B) <= 1e-5 * B);
        CHECK(v <= (1.0 + 1e-4) * B);
    }
    // the gradient bound dominates the explicit |grad v|* pointwise
    for (double t : {1e-3, 0.01, 0.1, 0.25, 0.4, 0.49})
        CHECK(gradient_bound(prob, t) >= explicit_gradstar(t, 0.5) * (1.0 - 1e-9));
}

TEST_CASE("debug output exposes both gradient kernels") {
    EllipticProblem prob = gaussian_problem();
    auto d = gradient_bound_debug(prob, 0.25);
    CHECK(std::isfinite(d.proof_kernel));
    CHECK(std::isfinite(d.display_kernel));
    CHECK(d.proof_kernel != d.display_kernel);
}

TEST_CASE("datum monotonicity") {
    EllipticProblem small = gaussian_problem(0.5, 1.0);
    EllipticProblem big = gaussian_problem(0.5, 2.0);
    for (double t : {0.01, 0.1, 0.3})
        CHECK(solution_bound_at(small, t) <= solution_bound_at(big, t) + 1e-12);
}

TEST_CASE("oscillation of the bound obeys the second-order kernel form") {
    EllipticProblem prob = gaussian_problem();
    StepFunction B = solution_bound(prob, 1200);
    // (I/t)^2 (B** - B*) <= (1/t) int_0^t f**(s) ds with f the datum
    for (double t : {0.01, 0.05, 0.2, 0.4}) {
        double w = prob.profile(t) / t;
        double lhs = w * w * oscillation(B, t);
        double rhs = double_star(prob.datum, t);
        CHECK(lhs <= rhs * 1.02);
    }
}

TEST_CASE("general p kernel") {
    EllipticProblem prob = gaussian_problem();
    prob.p = 3.0;
    // kernel ((s/I)^3 f**)^{1/2} / s stays integrable for the gaussian profile
    double v = solution_bound_at(prob, 0.1);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    // p = 2 reduces to the standard kernel
    prob.p = 2.0;
    CHECK(solution_bound_at(prob, 0.1) > 0.0);
}

TEST_CASE("norm bound routes") {
    EllipticProblem prob = gaussian_problem();
    SUBCASE("gaussian X = Y = L2: weighted route applies with a finite value") {
        auto rep = norm_bounds(prob, RISpace::Lp(2), RISpace::Lp(2));
        bool weighted_ok = false;
        for (const auto& r : rep.routes)
            if (r.name == "weighted_u" && r.applicable == Verdict::bounded &&
                std::isfinite(r.value))
                weighted_ok = true;
        CHECK(weighted_ok);
        CHECK(rep.lz_weights_emitted);
        CHECK(rep.log_exponent == doctest::Approx(1.0)); // 2(1 - 1/2)
        CHECK(rep.loglog_exponent == 0.0);
    }
    SUBCASE("L1 refuses the oscillation route by the Boyd predicate") {
        auto rep = norm_bounds(prob, RISpace::Lp(1), RISpace::Lp(1));
        for (const auto& r : rep.routes)
            if (r.name == "ls_plus_l1") CHECK(r.applicable == Verdict::unbounded);
    }
    SUBCASE("mu_p_alpha profile emits the lorentz-zygmund weights") {
        EllipticProblem p2;
        p2.profile = Profile::mu_p_alpha_estimator(1.5, 1.0);
        p2.mass_G = 0.5;
        p2.datum = StepFunction({0.5}, {1.0});
        auto rep = norm_bounds(p2, RISpace::LorentzZygmund(2, 2, 0), RISpace::Lp(2));
        CHECK(rep.lz_weights_emitted);
        CHECK(rep.log_exponent == doctest::Approx(2.0 * (1.0 - 1.0 / 1.5)));
        CHECK(rep.loglog_exponent == doctest::Approx(2.0 / 1.5));
    }
}
