#pragma once

// Data-parallel grid kernels with serial reference implementations.  The
// OpenMP versions partition work by disjoint output ranges (lines or nodes),
// so results are bit-identical to the serial ones regardless of thread
// count; tests and the benchmark target compare the two.

#include <cstdint>
#include <vector>

namespace isoperm::kernels {

// Number of threads to use: min(omp_get_max_threads(), ISOPERM_THREADS).
int effective_threads();

struct GridShape {
    std::vector<int> extent;     // nodes per axis
    std::vector<double> spacing; // grid step per axis

    int dim() const { return static_cast<int>(extent.size()); }
    std::size_t size() const {
        std::size_t n = 1;
        for (int e : extent) n *= static_cast<std::size_t>(e);
        return n;
    }
    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int a = axis + 1; a < dim(); ++a) s *= static_cast<std::size_t>(extent[a]);
        return s;
    }
};

// |grad f| by centered differences (one-sided at the boundary).
void gradient_modulus_serial(const GridShape& g, const double* f, double* out);
void gradient_modulus_omp(const GridShape& g, const double* f, double* out);

// Squared Euclidean distance (in physical units) to the masked node set;
// exact lower-envelope transform, axis by axis.
void distance_transform_serial(const GridShape& g, const std::uint8_t* mask, double* d2);
void distance_transform_omp(const GridShape& g, const std::uint8_t* mask, double* d2);

// Weighted Laplacian with drift: (sum_k f_xx_k) - drift_k * f_x_k per node;
// drift supplied per node and axis (may be null for plain Laplacian).
void drift_laplacian_serial(const GridShape& g, const double* f, const double* drift,
                            double* out);
void drift_laplacian_omp(const GridShape& g, const double* f, const double* drift, double* out);

} // namespace isoperm::kernels
