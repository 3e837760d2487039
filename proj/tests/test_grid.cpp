#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isoperm/grid_field.hpp"
#include "isoperm/special.hpp"

using namespace isoperm;

TEST_CASE("omp kernels match the serial reference bit-for-bit") {
    GridField f = unit_cube(2, 129);
    f.fill([](const std::vector<double>& x) {
        return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]) + x[0] * x[1];
    });
    SUBCASE("gradient modulus") {
        std::vector<double> a(f.size()), b(f.size());
        kernels::gradient_modulus_serial(f.shape(), f.values().data(), a.data());
        kernels::gradient_modulus_omp(f.shape(), f.values().data(), b.data());
        CHECK(a == b);
    }
    SUBCASE("distance transform") {
        std::vector<std::uint8_t> mask(f.size(), 0);
        for (std::size_t i = 0; i < f.size(); i += 7) mask[i] = 1;
        std::vector<double> a(f.size()), b(f.size());
        kernels::distance_transform_serial(f.shape(), mask.data(), a.data());
        kernels::distance_transform_omp(f.shape(), mask.data(), b.data());
        CHECK(a == b);
    }
    SUBCASE("drift laplacian") {
        std::vector<double> drift(f.size() * 2, 0.5);
        std::vector<double> a(f.size()), b(f.size());
        kernels::drift_laplacian_serial(f.shape(), f.values().data(), drift.data(), a.data());
        kernels::drift_laplacian_omp(f.shape(), f.values().data(), drift.data(), b.data());
        CHECK(a == b);
    }
}

TEST_CASE("distance transform equals brute force on a small grid") {
    GridField f = unit_cube(2, 33);
    std::vector<std::uint8_t> mask(f.size(), 0);
    mask[5 * 33 + 7] = 1;
    mask[20 * 33 + 28] = 1;
    mask[16 * 33 + 0] = 1;
    std::vector<double> d2(f.size());
    kernels::distance_transform_serial(f.shape(), mask.data(), d2.data());
    double h = f.spacing(0);
    for (int i = 0; i < 33; ++i)
        for (int j = 0; j < 33; ++j) {
            double best = HUGE_VAL;
            for (int a = 0; a < 33; ++a)
                for (int b = 0; b < 33; ++b)
                    if (mask[static_cast<std::size_t>(a) * 33 + b]) {
                        double dx = (i - a) * h, dy = (j - b) * h;
                        best = std::min(best, dx * dx + dy * dy);
                    }
            CHECK(d2[static_cast<std::size_t>(i) * 33 + j] == doctest::Approx(best).epsilon(1e-12));
        }
}

TEST_CASE("gradient modulus exactness") {
    SUBCASE("affine functions give constant modulus everywhere") {
        GridField f = unit_cube(3, 17);
        f.fill([](const std::vector<double>& x) { return x[0]; });
        auto g = gradient_modulus(f);
        for (double v : g.values()) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("constants give zero") {
        GridField f = unit_cube(2, 17);
        f.fill([](const std::vector<double>&) { return 4.2; });
        auto g = gradient_modulus(f);
        for (double v : g.values()) CHECK(v == 0.0);
    }
    SUBCASE("quadratic |x|^2/2 gives |x| on interior nodes") {
        GridField f = unit_cube(2, 33);
        f.fill([](const std::vector<double>& x) {
            return 0.5 * (x[0] * x[0] + x[1] * x[1]);
        });
        auto g = gradient_modulus(f);
        std::vector<double> x;
        for (std::size_t i = 0; i < f.size(); ++i) {
            f.coords_of(i, x);
            bool interior = x[0] > 0.01 && x[0] < 0.99 && x[1] > 0.01 && x[1] < 0.99;
            if (interior)
                CHECK(g.values()[i] ==
                      doctest::Approx(std::hypot(x[0], x[1])).epsilon(1e-10));
        }
    }
    CHECK_THROWS(GridField({0.0}, {1.0}, {1}));
}

TEST_CASE("product measure box masses") {
    Measure1D m = Measure1D::gaussian();
    GridField f = product_measure_box(m, 2, 5.5, 41);
    CHECK(f.mass_deficit() > 0.0);
    CHECK(f.mass_deficit() < 1e-6);
    CHECK(f.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("model rearrangement") {
    auto m = std::make_shared<Measure1D>(Measure1D::gaussian());
    SUBCASE("monotone functions of H(x1) are fixed points") {
        GridField f = product_measure_box(*m, 2, 5.5, 61);
        f.fill([&m](const std::vector<double>& x) {
            return 2.0 * (1.0 - m->cdf(x[0])); // nonincreasing in H(x1), >= 0
        });
        GridField fo = model_rearrangement(f, *m);
        double worst = 0.0;
        std::vector<double> x;
        for (std::size_t i = 0; i < f.size(); ++i) {
            f.coords_of(i, x);
            if (std::abs(x[0]) < 4.0)
                worst = std::max(worst, std::abs(fo.values()[i] - f.values()[i]));
        }
        CHECK(worst < 2e-2); // grid-resolution tolerance
    }
    SUBCASE("x1 under the gaussian rearranges to the quantile reflection") {
        GridField f = product_measure_box(*m, 1, 6.5, 5001);
        f.fill([](const std::vector<double>& x) { return x[0]; });
        GridField fo = model_rearrangement(f, *m);
        // |x1|* (t) = quantile(1 - t/2); here f°(x) = f*(H(x)), compare at
        // interior nodes against the closed form
        std::vector<double> x;
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            f.coords_of(i, x);
            if (std::abs(x[0]) > 3.0) continue;
            double H = m->cdf(x[0]);
            double expect = normal_quantile(1.0 - H / 2.0);
            worst = std::max(worst, std::abs(fo.values()[i] - expect));
        }
        CHECK(worst < 5e-3);
    }
    SUBCASE("equimeasurability of the rearranged field") {
        GridField f = product_measure_box(*m, 2, 5.5, 61);
        f.fill([](const std::vector<double>& x) {
            return x[0] + 0.3 * std::sin(x[1]);
        });
        GridField fo = model_rearrangement(f, *m);
        auto fs = f.rearrangement();
        auto fos = fo.rearrangement();
        // sorted value multisets agree at matched quantiles
        double worst = 0.0;
        for (double t : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9})
            worst = std::max(worst, std::abs(fs.value_at(t) - fos.value_at(t)));
        CHECK(worst < 5e-2);
    }
    SUBCASE("mass deficit error") {
        GridField f = product_measure_box(*m, 2, 2.0, 21); // narrow box
        f.fill([](const std::vector<double>& x) { return x[0]; });
        CHECK_THROWS_AS(model_rearrangement(f, *m), std::runtime_error);
    }
}

TEST_CASE("minkowski perimeter") {
    SUBCASE("empty set") {
        GridField f = unit_cube(2, 65);
        f.fill([](const std::vector<double>&) { return 0.0; });
        auto est = minkowski_perimeter(f, {0.1, 0.08, 0.06, 0.04});
        CHECK(est.extrapolated == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("gaussian half-line content equals the density at the cut") {
        Measure1D m = Measure1D::gaussian();
        GridField f = product_measure_box(m, 1, 8.0, 20001);
        double r = 0.7;
        f.fill([r](const std::vector<double>& x) { return x[0] <= r ? 1.0 : 0.0; });
        auto est = minkowski_perimeter(f, {0.08, 0.06, 0.05, 0.04, 0.03, 0.02});
        CHECK(est.extrapolated == doctest::Approx(normal_pdf(r)).epsilon(0.02));
    }
    SUBCASE("disk boundary length") {
        GridField f = unit_cube(2, 513);
        f.fill([](const std::vector<double>& x) {
            return std::hypot(x[0] - 0.5, x[1] - 0.5) <= 0.3 ? 1.0 : 0.0;
        });
        auto est = minkowski_perimeter(f, {0.05, 0.04, 0.03, 0.025, 0.02, 0.015});
        CHECK(est.extrapolated == doctest::Approx(2.0 * M_PI * 0.3).epsilon(0.02));
    }
    SUBCASE("resolution guard") {
        GridField f = unit_cube(2, 65);
        f.fill([](const std::vector<double>&) { return 1.0; });
        CHECK_THROWS_AS(minkowski_perimeter(f, {0.01}), std::invalid_argument);
    }
}
