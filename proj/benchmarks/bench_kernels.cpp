// Compares the serial reference kernels against the OpenMP versions: checks
// bit-identical output and reports wall times.

#include <chrono>
#include <cmath>
#include <functional>
#include <cstdio>
#include <vector>

#include "isoperm/grid_field.hpp"

using namespace isoperm;

namespace {

double time_of(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best,
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                            .count());
    }
    return best;
}

} // namespace

int main() {
    std::printf("threads: %d\n", kernels::effective_threads());

    {
        GridField f = unit_cube(3, 129); // ~2.1M nodes
        f.fill([](const std::vector<double>& x) {
            return std::sin(3 * x[0]) * std::cos(2 * x[1]) + x[2] * x[0];
        });
        std::vector<double> a(f.size()), b(f.size());
        double ts = time_of([&] { kernels::gradient_modulus_serial(f.shape(), f.values().data(), a.data()); });
        double tp = time_of([&] { kernels::gradient_modulus_omp(f.shape(), f.values().data(), b.data()); });
        std::printf("gradient_modulus  129^3: serial %7.1f ms | omp %7.1f ms | speedup %.2fx | identical: %s\n",
                    ts * 1e3, tp * 1e3, ts / tp, a == b ? "yes" : "NO");
    }
    {
        GridField f = unit_cube(2, 1025); // ~1M nodes
        std::vector<std::uint8_t> mask(f.size(), 0);
        std::vector<double> x;
        for (std::size_t i = 0; i < f.size(); i += 1) {
            f.coords_of(i, x);
            if (std::hypot(x[0] - 0.5, x[1] - 0.5) < 0.3) mask[i] = 1;
        }
        std::vector<double> a(f.size()), b(f.size());
        double ts = time_of([&] { kernels::distance_transform_serial(f.shape(), mask.data(), a.data()); });
        double tp = time_of([&] { kernels::distance_transform_omp(f.shape(), mask.data(), b.data()); });
        std::printf("distance_transform 1025^2: serial %7.1f ms | omp %7.1f ms | speedup %.2fx | identical: %s\n",
                    ts * 1e3, tp * 1e3, ts / tp, a == b ? "yes" : "NO");
    }
    {
        GridField f = unit_cube(3, 101);
        f.fill([](const std::vector<double>& x) { return x[0] * x[0] + std::sin(x[1] * x[2]); });
        std::vector<double> drift(f.size() * 3, 0.25);
        std::vector<double> a(f.size()), b(f.size());
        double ts = time_of([&] { kernels::drift_laplacian_serial(f.shape(), f.values().data(), drift.data(), a.data()); });
        double tp = time_of([&] { kernels::drift_laplacian_omp(f.shape(), f.values().data(), drift.data(), b.data()); });
        std::printf("drift_laplacian   101^3: serial %7.1f ms | omp %7.1f ms | speedup %.2fx | identical: %s\n",
                    ts * 1e3, tp * 1e3, ts / tp, a == b ? "yes" : "NO");
    }
    return 0;
}
