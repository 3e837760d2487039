#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "isoperm/ri_spaces.hpp"
#include "isoperm/special.hpp"
#include "isoperm/step_function.hpp"

using namespace isoperm;

namespace {

std::mt19937_64 rng(20240811u);

WeightedSample random_sample(std::size_t atoms, double total = 1.0) {
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    std::uniform_real_distribution<double> wgt(0.05, 1.0);
    WeightedSample s;
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        s.atoms.push_back({val(rng), wgt(rng)});
        acc += s.atoms.back().weight;
    }
    for (auto& a : s.atoms) a.weight *= total / acc;
    return s;
}

// Independent oracle: sort (|value| desc, index asc), cumulate weights.
StepFunction brute_force_rearrangement(const WeightedSample& f) {
    std::vector<std::size_t> idx(f.atoms.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(f.atoms[a].value) > std::abs(f.atoms[b].value);
    });
    std::vector<double> breaks, values;
    double acc = 0.0;
    for (std::size_t k : idx) {
        acc += f.atoms[k].weight;
        double v = std::abs(f.atoms[k].value);
        if (!values.empty() && values.back() == v) breaks.back() = acc;
        else {
            breaks.push_back(acc);
            values.push_back(v);
        }
    }
    return StepFunction(breaks, values);
}

} // namespace

TEST_CASE("distribution function basics") {
    WeightedSample konst{{{2.5, 1.0}}};
    CHECK(distribution(konst, 1.0) == 1.0);
    CHECK(distribution(konst, 2.5) == 0.0);
    WeightedSample ind{{{1.0, 0.37}, {0.0, 0.63}}};
    CHECK(distribution(ind, 0.0) == 0.37);
    CHECK(distribution(ind, 0.999) == 0.37);
    CHECK(distribution(ind, 1.0) == 0.0);
}

TEST_CASE("distribution matches brute-force filter-and-sum on random samples") {
    std::uniform_real_distribution<double> thr(0.0, 3.2);
    for (int rep = 0; rep < 50; ++rep) {
        auto f = random_sample(20);
        double t = thr(rng);
        double direct = 0.0;
        for (auto& a : f.atoms)
            if (std::abs(a.value) > t) direct += a.weight;
        CHECK(distribution(f, t) == direct);
    }
}

TEST_CASE("decreasing rearrangement equals the sort-based oracle exactly") {
    std::uniform_int_distribution<int> n_atoms(1, 20);
    for (int rep = 0; rep < 1000; ++rep) {
        auto f = random_sample(static_cast<std::size_t>(n_atoms(rng)));
        CHECK(decreasing_rearrangement(f) == brute_force_rearrangement(f));
    }
}

TEST_CASE("rearrangement of indicators and constants") {
    WeightedSample chi{{{1.0, 0.3}, {0.0, 0.7}}};
    auto fs = decreasing_rearrangement(chi);
    CHECK(fs.value_at(0.1) == 1.0);
    CHECK(fs.value_at(0.31) == 0.0);
    WeightedSample konst{{{-2.0, 0.5}, {2.0, 0.5}}};
    auto cs = decreasing_rearrangement(konst);
    CHECK(cs.pieces() == 1);
    CHECK(cs.value_at(0.9) == 2.0);
}

TEST_CASE("rearrangement preserves the integral of |f|") {
    for (int rep = 0; rep < 20; ++rep) {
        auto f = random_sample(1000);
        double direct = 0.0;
        for (auto& a : f.atoms) direct += std::abs(a.value) * a.weight;
        CHECK(decreasing_rearrangement(f).integral() == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("equimeasurability: distribution of f equals measure of {f* > t}") {
    std::uniform_real_distribution<double> thr(0.0, 3.2);
    for (int rep = 0; rep < 10; ++rep) {
        auto f = random_sample(200);
        auto fs = decreasing_rearrangement(f);
        for (int k = 0; k < 100; ++k) {
            double t = thr(rng);
            // Lebesgue measure of {f* > t}: last breakpoint with value > t
            double meas = 0.0;
            for (std::size_t i = 0; i < fs.pieces(); ++i)
                if (fs.values()[i] > t) meas = fs.breakpoints()[i];
            CHECK(distribution(f, t) == doctest::Approx(meas).epsilon(1e-12));
        }
    }
}

TEST_CASE("double star closed forms") {
    SUBCASE("indicator gives min(1, r/t)") {
        auto chi = indicator_step(0.25);
        for (double t : {0.01, 0.1, 0.25, 0.3, 0.8, 1.0})
            CHECK(double_star(chi, t) == doctest::Approx(std::min(1.0, 0.25 / t)).epsilon(1e-14));
    }
    SUBCASE("constant is a fixed point") {
        StepFunction c({1.0}, {3.3});
        for (double t : {0.1, 0.5, 1.0}) CHECK(double_star(c, t) == doctest::Approx(3.3));
    }
    SUBCASE("linear step approximation of 1 - s gives 1 - t/2") {
        int n = 20000;
        std::vector<double> b, v;
        for (int i = 1; i <= n; ++i) {
            b.push_back(static_cast<double>(i) / n);
            v.push_back(1.0 - (i - 0.5) / n);
        }
        StepFunction f(b, v);
        for (double t : {0.2, 0.5, 0.9})
            CHECK(double_star(f, t) == doctest::Approx(1.0 - t / 2).epsilon(1e-6));
    }
    CHECK_THROWS_AS(double_star(indicator_step(0.5), 0.0), std::domain_error);
}

TEST_CASE("oscillation") {
    StepFunction c({1.0}, {2.0});
    for (double t : {0.1, 0.7}) CHECK(oscillation(c, t) == 0.0);
    auto chi = indicator_step(0.25);
    CHECK(oscillation(chi, 0.5) == doctest::Approx(0.5)); // r/t at t=2r
    CHECK(oscillation(chi, 1e-9) == 0.0);
}

TEST_CASE("f** dominates f*, decreases, and t f** increases") {
    for (int rep = 0; rep < 30; ++rep) {
        auto fs = decreasing_rearrangement(random_sample(50));
        double prev_ds = HUGE_VAL, prev_tds = 0.0;
        for (int k = 1; k <= 60; ++k) {
            double t = k / 60.0;
            double ds = double_star(fs, t);
            CHECK(ds >= fs.value_at(t) - 1e-15);
            CHECK(ds <= prev_ds + 1e-12);
            CHECK(t * ds >= prev_tds - 1e-12);
            prev_ds = ds;
            prev_tds = t * ds;
        }
    }
}

TEST_CASE("hardy-littlewood supremum property on small samples") {
    // sup over subsets of mass <= t of the integral of |u| equals the prefix
    // integral of u*; brute force over all 2^12 subsets
    for (int rep = 0; rep < 20; ++rep) {
        auto f = random_sample(12);
        auto fs = decreasing_rearrangement(f);
        std::vector<std::size_t> idx(f.atoms.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return std::abs(f.atoms[a].value) > std::abs(f.atoms[b].value);
        });
        double t = 0.0;
        for (std::size_t j = 0; j < 5; ++j) t += f.atoms[idx[j]].weight;
        double best = 0.0;
        for (unsigned mask = 0; mask < (1u << 12); ++mask) {
            double w = 0.0, s = 0.0;
            for (int b = 0; b < 12; ++b)
                if (mask & (1u << b)) {
                    w += f.atoms[static_cast<std::size_t>(b)].weight;
                    s += std::abs(f.atoms[static_cast<std::size_t>(b)].value) *
                         f.atoms[static_cast<std::size_t>(b)].weight;
                }
            if (w <= t + 1e-12) best = std::max(best, s);
        }
        CHECK(best == doctest::Approx(fs.integral_to(t)).epsilon(1e-10));
    }
}

TEST_CASE("median") {
    WeightedSample sym{{{-1.0, 0.5}, {1.0, 0.5}}};
    CHECK(median(sym) == -1.0); // smallest valid median
    WeightedSample konst{{{3.14, 1.0}}};
    CHECK(median(konst) == 3.14);
    WeightedSample bad{{{1.0, 0.4}}};
    CHECK_THROWS_AS(median(bad), std::invalid_argument);
    // gaussian-weighted grid of f(x) = x has median ~ 0
    WeightedSample g;
    int n = 100000;
    for (int i = 0; i < n; ++i) {
        double x = -8.0 + 16.0 * (i + 0.5) / n;
        g.atoms.push_back({x, normal_pdf(x) * 16.0 / n});
    }
    double total = g.total_mass();
    for (auto& a : g.atoms) a.weight /= total;
    CHECK(std::abs(median(g)) < 1e-3);
}

TEST_CASE("median sandwich against the mean (factor 1/2 and 3)") {
    for (int rep = 0; rep < 200; ++rep) {
        auto f = random_sample(40, 1.0);
        double mean = 0.0;
        for (auto& a : f.atoms) mean += a.value * a.weight;
        double m_e = median(f);
        WeightedSample fm = f, fmean = f;
        for (auto& a : fm.atoms) a.value -= m_e;
        for (auto& a : fmean.atoms) a.value -= mean;
        auto fms = decreasing_rearrangement(fm);
        auto fmeans = decreasing_rearrangement(fmean);
        for (const RISpace& X : {RISpace::Lp(1), RISpace::Lp(2), RISpace::Linf()}) {
            double nm = norm(X, fms);
            double nmean = norm(X, fmeans);
            CHECK(0.5 * nmean <= nm * (1 + 1e-12));
            CHECK(nm <= 3.0 * nmean * (1 + 1e-12));
        }
    }
}
