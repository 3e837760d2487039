#pragma once

// One-dimensional even log-concave model measures mu = Z^{-1} exp(-Phi(|x|)) dx.
// The CDF is held as per-panel tail integrals on [0, x_max] (log-uniform in
// mass near the tails by construction, since mass decays like exp(-Phi));
// quantiles are found by monotone bracketing plus Newton polish against the
// quadrature-backed CDF.  Never extrapolates beyond the tabulated range.

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace isoperm {

class Measure1D {
  public:
    using Potential = std::function<double(double)>;

    // potential must be convex increasing on [0,inf) with potential(0) = 0;
    // evaluated on |x|.
    static Measure1D build(Potential potential, std::string name, int panels = 4096);

    static Measure1D gaussian();
    static Measure1D double_exponential();
    // Phi(x) = |x|^p * log(gamma + |x|)^alpha, gamma = exp(2 alpha / (2-p)).
    static Measure1D mu_p_alpha(double p, double alpha);

    const std::string& name() const { return name_; }
    double normalization() const { return Z_; }
    double potential(double x) const { return phi_pot_(std::abs(x)); }
    double density(double x) const;
    double cdf(double x) const;
    // H^{-1}(t); throws std::out_of_range outside the tabulated mass range.
    double quantile(double t) const;

    double mass_min() const { return mass_min_; }
    double x_max() const { return xmax_; }

    // Max violation of discrete midpoint concavity of sqrt(Phi) on a grid.
    double sqrt_potential_concavity_violation(int grid = 512) const;

    // Quantile/CDF round-trip error over a probe mass set.
    double roundtrip_error() const;

  private:
    Measure1D() = default;
    double tail_unnormalized(double x) const; // integral_x^inf exp(-Phi), x >= 0

    std::string name_;
    Potential phi_pot_;
    double Z_ = 0.0;
    double xmax_ = 0.0;
    double mass_min_ = 0.0;
    std::vector<double> panel_x_;    // panel boundaries on [0, xmax]
    std::vector<double> panel_tail_; // unnormalized tail at each boundary
};

} // namespace isoperm
