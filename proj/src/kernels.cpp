#include "isoperm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace isoperm::kernels {

int effective_threads() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("ISOPERM_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(1, n);
}

namespace {

// Decompose a flat node index into coordinates.
inline void unravel(const GridShape& g, std::size_t idx, int* coord) {
    for (int a = g.dim() - 1; a >= 0; --a) {
        coord[a] = static_cast<int>(idx % g.extent[a]);
        idx /= g.extent[a];
    }
}

inline double gradient_at(const GridShape& g, const double* f, std::size_t idx,
                          const int* coord) {
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        std::size_t st = g.stride(a);
        double h = g.spacing[a];
        int c = coord[a];
        int n = g.extent[a];
        double d;
        if (n < 2) throw std::invalid_argument("gradient: axis with < 2 nodes");
        if (c == 0)
            d = (f[idx + st] - f[idx]) / h;
        else if (c == n - 1)
            d = (f[idx] - f[idx - st]) / h;
        else
            d = (f[idx + st] - f[idx - st]) / (2.0 * h);
        acc += d * d;
    }
    return std::sqrt(acc);
}

inline double drift_laplacian_at(const GridShape& g, const double* f, const double* drift,
                                 std::size_t idx, const int* coord, std::size_t n_nodes) {
    double acc = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        std::size_t st = g.stride(a);
        double h = g.spacing[a];
        int c = coord[a];
        int n = g.extent[a];
        if (n < 3) throw std::invalid_argument("laplacian: axis with < 3 nodes");
        double fxx, fx;
        if (c == 0) {
            fxx = (f[idx + 2 * st] - 2.0 * f[idx + st] + f[idx]) / (h * h);
            fx = (f[idx + st] - f[idx]) / h;
        } else if (c == n - 1) {
            fxx = (f[idx] - 2.0 * f[idx - st] + f[idx - 2 * st]) / (h * h);
            fx = (f[idx] - f[idx - st]) / h;
        } else {
            fxx = (f[idx + st] - 2.0 * f[idx] + f[idx - st]) / (h * h);
            fx = (f[idx + st] - f[idx - st]) / (2.0 * h);
        }
        acc += fxx;
        if (drift) acc -= drift[a * n_nodes + idx] * fx;
    }
    return acc;
}

// 1-D squared-distance lower envelope (Felzenszwalb-Huttenlocher) along a
// strided line; positions are k*h.
void dt1d(double* f, int n, double h, std::size_t stride, double* scratch_d, int* scratch_v,
          double* scratch_z) {
    const double inf = std::numeric_limits<double>::infinity();
    auto fval = [&](int i) { return f[static_cast<std::size_t>(i) * stride]; };
    int k = 0;
    scratch_v[0] = 0;
    scratch_z[0] = -inf;
    scratch_z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double fq = fval(q) + (q * h) * (q * h);
        if (fq == inf) continue; // an infinite parabola never wins
        while (true) {
            int v = scratch_v[k];
            double fv = fval(v) + (v * h) * (v * h);
            if (fv == inf) {
                // replace the (unreachable) seed parabola outright
                if (k == 0) {
                    scratch_v[0] = q;
                    scratch_z[0] = -inf;
                    scratch_z[1] = inf;
                    break;
                }
                --k;
                continue;
            }
            double s = (fq - fv) / (2.0 * h * (q - v));
            if (s <= scratch_z[k]) {
                --k;
                continue;
            }
            ++k;
            scratch_v[k] = q;
            scratch_z[k] = s;
            scratch_z[k + 1] = inf;
            break;
        }
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (scratch_z[k + 1] < q * h) ++k;
        int v = scratch_v[k];
        double d = (q - v) * h;
        scratch_d[q] = d * d + fval(v);
    }
    for (int q = 0; q < n; ++q) f[static_cast<std::size_t>(q) * stride] = scratch_d[q];
}

template <bool Parallel>
void distance_transform_impl(const GridShape& g, const std::uint8_t* mask, double* d2) {
    const std::size_t n = g.size();
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) d2[i] = mask[i] ? 0.0 : inf;
    for (int a = 0; a < g.dim(); ++a) {
        const int len = g.extent[a];
        const std::size_t st = g.stride(a);
        const std::size_t lines = n / static_cast<std::size_t>(len);
#ifdef _OPENMP
#pragma omp parallel if (Parallel) num_threads(effective_threads())
#endif
        {
            std::vector<double> sd(static_cast<std::size_t>(len));
            std::vector<int> sv(static_cast<std::size_t>(len));
            std::vector<double> sz(static_cast<std::size_t>(len) + 1);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (long long li = 0; li < static_cast<long long>(lines); ++li) {
                // map line index to the base offset of the line along axis a
                std::size_t rem = static_cast<std::size_t>(li);
                std::size_t base = 0;
                for (int b = g.dim() - 1; b >= 0; --b) {
                    if (b == a) continue;
                    std::size_t e = static_cast<std::size_t>(g.extent[b]);
                    std::size_t c = rem % e;
                    rem /= e;
                    base += c * g.stride(b);
                }
                dt1d(d2 + base, len, g.spacing[a], st, sd.data(), sv.data(), sz.data());
            }
        }
    }
}

template <bool Parallel>
void gradient_impl(const GridShape& g, const double* f, double* out) {
    const std::size_t n = g.size();
#ifdef _OPENMP
#pragma omp parallel for if (Parallel) num_threads(effective_threads()) schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        int coord[8];
        unravel(g, static_cast<std::size_t>(i), coord);
        out[i] = gradient_at(g, f, static_cast<std::size_t>(i), coord);
    }
}

template <bool Parallel>
void drift_laplacian_impl(const GridShape& g, const double* f, const double* drift, double* out) {
    const std::size_t n = g.size();
#ifdef _OPENMP
#pragma omp parallel for if (Parallel) num_threads(effective_threads()) schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        int coord[8];
        unravel(g, static_cast<std::size_t>(i), coord);
        out[i] = drift_laplacian_at(g, f, drift, static_cast<std::size_t>(i), coord, n);
    }
}

} // namespace

void gradient_modulus_serial(const GridShape& g, const double* f, double* out) {
    gradient_impl<false>(g, f, out);
}
void gradient_modulus_omp(const GridShape& g, const double* f, double* out) {
    gradient_impl<true>(g, f, out);
}

void distance_transform_serial(const GridShape& g, const std::uint8_t* mask, double* d2) {
    distance_transform_impl<false>(g, mask, d2);
}
void distance_transform_omp(const GridShape& g, const std::uint8_t* mask, double* d2) {
    distance_transform_impl<true>(g, mask, d2);
}

void drift_laplacian_serial(const GridShape& g, const double* f, const double* drift,
                            double* out) {
    drift_laplacian_impl<false>(g, f, drift, out);
}
void drift_laplacian_omp(const GridShape& g, const double* f, const double* drift, double* out) {
    drift_laplacian_impl<true>(g, f, drift, out);
}

} // namespace isoperm::kernels
