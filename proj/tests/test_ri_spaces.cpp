#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "isoperm/ri_spaces.hpp"

using namespace isoperm;

namespace {

std::mt19937_64 rng(77002u);

StepFunction random_step(std::size_t pieces) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> b(pieces), v(pieces);
    for (auto& x : b) x = u(rng);
    std::sort(b.begin(), b.end());
    b.back() = 1.0;
    double val = 3.0 * u(rng) + 1.0;
    for (auto& x : v) {
        x = val;
        val *= 0.97 * u(rng);
    }
    std::vector<double> clean_b, clean_v;
    double prev = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        if (b[i] > prev + 1e-12) {
            clean_b.push_back(b[i]);
            clean_v.push_back(v[i]);
            prev = b[i];
        }
    }
    return StepFunction(clean_b, clean_v);
}

} // namespace

TEST_CASE("Lp norms on indicators and steps") {
    auto chi = indicator_step(0.3);
    for (double p : {1.0, 1.5, 2.0, 4.0})
        CHECK(norm(RISpace::Lp(p), chi) == doctest::Approx(std::pow(0.3, 1.0 / p)).epsilon(1e-13));
    CHECK(norm(RISpace::Linf(), chi) == 1.0);
}

TEST_CASE("Lorentz norm closed form on indicators") {
    // L(p,q) of chi_(0,r): (p/q)^{1/q} r^{1/p} from the power integral
    for (auto [p, q] : {std::pair{4.0, 2.0}, {2.0, 1.0}, {3.0, 3.0}, {2.0, 4.0}}) {
        double r = 0.37;
        double expect = std::pow(p / q, 1.0 / q) * std::pow(r, 1.0 / p);
        CHECK(norm(RISpace::Lorentz(p, q), indicator_step(r)) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("Orlicz fundamental function is 1/N^{-1}(1/t)") {
    auto X = RISpace::Orlicz(YoungFunction::exp_minus_one());
    for (double t : {0.05, 0.2, 0.6}) {
        double expect = 1.0 / std::log1p(1.0 / t); // N^{-1}(y) = log(1+y)
        CHECK(fundamental_function(X, t) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(norm(X, indicator_step(t)) == doctest::Approx(expect).epsilon(1e-9));
    }
    // duality: phi_X(t) phi_X'(t) = t by construction of the associate
    for (double t : {0.1, 0.5})
        CHECK(fundamental_function(X, t) * associate_fundamental(X, t) ==
              doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("fundamental functions") {
    for (double p : {1.0, 2.0, 5.0})
        for (double t : {0.04, 0.3, 0.9})
            CHECK(fundamental_function(RISpace::Lp(p), t) ==
                  doctest::Approx(std::pow(t, 1.0 / p)).epsilon(1e-12));
    // ExpL indicator norm: sup min(1,t/s)/(1+log 1/s) attained at s=t
    for (double t : {0.05, 0.3})
        CHECK(fundamental_function(RISpace::ExpL(), t) ==
              doctest::Approx(1.0 / (1.0 + std::log(1.0 / t))).epsilon(1e-6));
}

TEST_CASE("space parser round trips") {
    CHECK(RISpace::parse("Lp(2)").kind() == SpaceKind::lp);
    CHECK(RISpace::parse("Lorentz(4,2)").q() == 2.0);
    CHECK(RISpace::parse("LZ(2,2,-1)").lambda_exp() == -1.0);
    CHECK(RISpace::parse("Orlicz(exp_m1)").kind() == SpaceKind::orlicz);
    CHECK(RISpace::parse("ExpL").kind() == SpaceKind::exp_l);
    CHECK(RISpace::parse("Linf").p() >= RISpace::kInf);
    CHECK(RISpace::parse("M(Lp(2))").kind() == SpaceKind::marcinkiewicz);
    CHECK(RISpace::parse("Lambda(Lp(2))").kind() == SpaceKind::lambda);
    CHECK_THROWS(RISpace::parse("what"));
}

TEST_CASE("lattice monotonicity across kinds") {
    std::vector<RISpace> spaces = {RISpace::Lp(1.5),
                                   RISpace::Lp(3),
                                   RISpace::Linf(),
                                   RISpace::Lorentz(2, 1),
                                   RISpace::Lorentz(2, 4),
                                   RISpace::LorentzZygmund(2, 2, -1),
                                   RISpace::Orlicz(YoungFunction::exp_minus_one()),
                                   RISpace::ExpL(),
                                   RISpace::parse("M(Lp(2))"),
                                   RISpace::parse("Lambda(Lp(2))")};
    for (int rep = 0; rep < 8; ++rep) {
        auto f = random_step(12);
        // g >= f pointwise: scale values up
        std::vector<double> gv(f.values());
        for (auto& x : gv) x *= 1.25;
        StepFunction g(f.breakpoints(), gv);
        for (const auto& X : spaces)
            CHECK(norm(X, f) <= norm(X, g) * (1 + 1e-10));
    }
}

TEST_CASE("HLP majorization implies norm domination (Banach kinds)") {
    // g* obtained from f* by shifting mass toward 0 dominates all prefix
    // integrals; Banach r.i. norms must respect it.
    for (int rep = 0; rep < 8; ++rep) {
        auto f = random_step(10);
        std::vector<double> gb(f.breakpoints()), gv(f.values());
        // push 10% of each value onto the first piece
        double bump = 0.1 * gv[0];
        gv[0] += bump;
        StepFunction g(gb, gv);
        std::vector<RISpace> banach = {RISpace::Lp(1), RISpace::Lp(2.5), RISpace::Linf(),
                                       RISpace::Lorentz(2, 2),
                                       RISpace::Orlicz(YoungFunction::power(2)),
                                       RISpace::parse("Lambda(Lp(2))")};
        for (const auto& X : banach) {
            double r = 1.0;
            for (std::size_t i = 0; i < f.pieces(); ++i)
                r = std::min(r, 1.0); // prefix-domination holds by construction
            CHECK(norm(X, f) <= norm(X, g) * (1 + 1e-10));
        }
    }
}

TEST_CASE("embedding chain Linf in X in L1 with fundamental constants") {
    for (int rep = 0; rep < 8; ++rep) {
        auto f = random_step(14);
        std::vector<RISpace> spaces = {RISpace::Lp(2), RISpace::Lorentz(3, 2),
                                       RISpace::Orlicz(YoungFunction::exp_minus_one())};
        for (const auto& X : spaces) {
            double nX = norm(X, f);
            double n1 = norm(RISpace::Lp(1), f);
            double ninf = norm(RISpace::Linf(), f);
            // |f|_1 <= phi_{X'}(1) |f|_X and |f|_X <= phi_X(1) |f|_inf
            CHECK(n1 <= associate_fundamental(X, 1.0) * nX * (1 + 1e-9));
            CHECK(nX <= fundamental_function(X, 1.0) * ninf * (1 + 1e-9));
        }
    }
}

TEST_CASE("Lambda(X) - X - M(X) sandwich") {
    for (int rep = 0; rep < 8; ++rep) {
        auto f = random_step(14);
        for (const char* base : {"Lp(2)", "Lorentz(3,2)"}) {
            RISpace X = RISpace::parse(base);
            RISpace MX = RISpace::parse(std::string("M(") + base + ")");
            RISpace LX = RISpace::parse(std::string("Lambda(") + base + ")");
            CHECK(norm(MX, f) <= norm(X, f) * (1 + 1e-9));
            CHECK(norm(X, f) <= norm(LX, f) * (1 + 1e-9));
        }
    }
}

TEST_CASE("Orlicz vs Lambda(phi, q) comparison when N(t)/t^q increases") {
    // N(t) = t^2 (1 + log^+ t): N(t)/t^2 nondecreasing, so the Orlicz norm
    // is dominated by the Lambda(phi_{L_N}, 2) functional up to a constant;
    // record the constant, assert finiteness and domination with it.
    auto N = YoungFunction::tq_log(2.0);
    auto X = RISpace::Orlicz(N);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        auto f = random_step(12);
        double lhs = norm(X, f);
        // Lambda(phi,q) functional: (int [f* phi]^q ds/s)^{1/q}
        double acc = 0.0;
        double prev = 0.0;
        for (std::size_t i = 0; i < f.pieces(); ++i) {
            double b = f.breakpoints()[i];
            double v = f.values()[i];
            int steps = 200;
            for (int k = 0; k < steps; ++k) {
                double s0 = prev + (b - prev) * k / steps;
                double s1 = prev + (b - prev) * (k + 1) / steps;
                double sm = 0.5 * (s0 + s1);
                double phi = fundamental_function(X, sm);
                acc += std::pow(v * phi, 2.0) * (s1 - s0) / sm;
            }
            prev = b;
        }
        double rhs = std::sqrt(acc);
        CHECK(std::isfinite(rhs));
        if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
    }
    // recorded constant: stays of moderate size on the probe set
    CHECK(worst < 10.0);
    CHECK(worst > 0.0);
}

TEST_CASE("dilation norm") {
    auto fam = ProbeFamily::standard();
    SUBCASE("never exceeds max(1,s) for norm kinds") {
        // the LZ functional with negative log exponent is only a quasi-norm
        // and can overshoot the cap slightly, so it is not asserted here
        for (const char* name : {"Lorentz(2,2)", "Orlicz(exp_m1)", "ExpL"}) {
            RISpace X = RISpace::parse(name);
            for (double s : {0.25, 0.5, 2.0, 8.0})
                CHECK(dilation_norm(X, s, fam) <= std::max(1.0, s) * (1 + 1e-9));
        }
    }
    SUBCASE("exact on Lp") {
        CHECK(dilation_norm(RISpace::Lp(2), 0.5, fam) == doctest::Approx(std::sqrt(0.5)));
        CHECK(dilation_norm(RISpace::Lp(2), 1.0, fam) == 1.0);
    }
}

TEST_CASE("boyd indices") {
    SUBCASE("Lp is (1/p, 1/p)") {
        for (double p : {1.5, 2.0, 4.0}) {
            auto idx = boyd_indices(RISpace::Lp(p));
            CHECK(std::abs(idx.lower - 1.0 / p) < 0.02);
            CHECK(std::abs(idx.upper - 1.0 / p) < 0.02);
        }
    }
    SUBCASE("Linf is (0,0)") {
        auto idx = boyd_indices(RISpace::Linf());
        CHECK(idx.lower < 0.02);
        CHECK(idx.upper < 0.02);
    }
    SUBCASE("Lorentz(p,q) is (1/p, 1/p) within 0.03") {
        for (auto [p, q] : {std::pair{2.0, 1.0}, {4.0, 2.0}}) {
            auto idx = boyd_indices(RISpace::Lorentz(p, q));
            CHECK(std::abs(idx.lower - 1.0 / p) < 0.03);
            CHECK(std::abs(idx.upper - 1.0 / p) < 0.03);
        }
    }
}

TEST_CASE("p-convexification") {
    // ||x||_{X^(p)} = || |x|^p ||_X^{1/p}; for X = L2, X^(2) = L4
    auto f = random_step(10);
    CHECK(norm_pconvex(RISpace::Lp(2), 2.0, f) ==
          doctest::Approx(norm(RISpace::Lp(4), f)).epsilon(1e-10));
}

TEST_CASE("ls_norm basic forms") {
    SUBCASE("constant functions have zero oscillation norm") {
        StepFunction c({1.0}, {5.0});
        CHECK(ls_norm(RISpace::Lp(2), Profile::gaussian(), c) < 1e-12);
    }
    SUBCASE("euclidean weight reproduces the pure oscillation functional") {
        // with I(t) = t^{1-1/n} (unit multiplier) and X = L^n the weighted
        // norm is exactly (int (f**-f*)^n dt/t)^{1/n}
        int n = 3;
        double cn = euclidean_profile(n, 1.0);
        Profile I = Profile::euclidean(n, 1.0 / cn);
        auto f = indicator_step(0.25);
        double lhs = ls_norm(RISpace::Lp(n), I, f);
        // oracle by quadrature: (chi_(0,r))** - chi = (r/t - 1)^+ beyond r
        double r = 0.25;
        double acc = 0.0;
        int steps = 400000;
        double T = 1e6;
        for (int k = 0; k < steps; ++k) {
            double t0 = r * std::pow(T / r, static_cast<double>(k) / steps);
            double t1 = r * std::pow(T / r, static_cast<double>(k + 1) / steps);
            double tm = std::sqrt(t0 * t1);
            double osc = r / tm - (tm < r ? 1.0 : 0.0);
            if (tm < r) osc = 0.0;
            acc += std::pow(osc, n) * (t1 - t0) / tm;
        }
        CHECK(lhs == doctest::Approx(std::pow(acc, 1.0 / n)).epsilon(2e-3));
    }
}
