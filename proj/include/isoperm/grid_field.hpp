#pragma once

// Functions sampled on regular box grids in R^d with per-cell measure
// weights; the discrete stand-in for Lipschitz functions.  Heavy per-node
// work is delegated to the kernels module.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "isoperm/kernels.hpp"
#include "isoperm/measure1d.hpp"
#include "isoperm/step_function.hpp"

namespace isoperm {

class GridField {
  public:
    GridField() = default;
    GridField(std::vector<double> lo, std::vector<double> hi, std::vector<int> extent);

    int dim() const { return shape_.dim(); }
    std::size_t size() const { return shape_.size(); }
    const kernels::GridShape& shape() const { return shape_; }
    double spacing(int axis) const { return shape_.spacing[axis]; }
    double node_coord(int axis, int index) const { return lo_[axis] + index * spacing(axis); }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& weights() { return weights_; }
    const std::vector<double>& weights() const { return weights_; }

    double total_mass() const;
    void coords_of(std::size_t idx, std::vector<double>& x) const;

    // Fill values from a callable on coordinates.
    void fill(const std::function<double(const std::vector<double>&)>& f);

    WeightedSample to_sample() const;
    StepFunction rearrangement() const { return decreasing_rearrangement(to_sample()); }

    // mass lost to the box truncation before renormalization
    double mass_deficit() const { return mass_deficit_; }
    void set_mass_deficit(double d) { mass_deficit_ = d; }

  private:
    std::vector<double> lo_, hi_;
    kernels::GridShape shape_;
    std::vector<double> values_, weights_;
    double mass_deficit_ = 0.0;
};

// Product-measure box: weights are products of per-axis cell masses computed
// from the 1-D CDF (cells centered at nodes), renormalized to total mass 1;
// the truncation deficit is recorded on the field.
GridField product_measure_box(const Measure1D& m, int dim, double half_width, int nodes_per_axis);

// Lebesgue measure on [0,1]^d, total mass 1.
GridField unit_cube(int dim, int nodes_per_axis);

// |grad f| as a field on the same grid (OpenMP kernel).
GridField gradient_modulus(const GridField& f);

// Measure-weighted Laplacian Delta f - drift . grad f with drift_k(x) given
// per axis as a callable (null for plain Laplacian).
GridField drift_laplacian(const GridField& f,
                          const std::function<double(const std::vector<double>&, int)>& drift);

// f°(x) = f*_mu(H(x_1)) on the same grid; requires boundary mass < tol.
GridField model_rearrangement(const GridField& f, const Measure1D& m,
                              double boundary_tol = 1e-6);

struct PerimeterEstimate {
    double extrapolated = 0.0;
    std::vector<double> h;
    std::vector<double> quotient; // (mu(A_h) - mu(A)) / h
};

// Minkowski content estimator: dilates by the exact Euclidean distance
// transform, fractional-coverage boundary cells, then a least-squares linear
// extrapolation of the difference quotients to h -> 0.
PerimeterEstimate minkowski_perimeter(const GridField& indicator, std::vector<double> h_seq);

} // namespace isoperm
