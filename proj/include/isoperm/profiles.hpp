#pragma once

// Isoperimetric profiles and estimators for the model geometries, plus the
// validation and (concon)-condition machinery.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "isoperm/measure1d.hpp"

namespace isoperm {

enum class ProfileKind {
    gaussian,
    phi_measure,
    mu_p_alpha,
    sphere,
    euclidean,
    cube_gaussian,
    sodin_pball,
    semigroup_bound,
    tabulated,
};

std::string to_string(ProfileKind k);

class Profile {
  public:
    Profile() = default;

    ProfileKind kind() const { return kind_; }
    bool is_probability() const { return is_probability_; }
    double domain_mass() const { return domain_mass_; }
    int dim() const { return n_; }
    double param_p() const { return p_; }
    double param_alpha() const { return alpha_; }
    double multiplier() const { return c_; }
    const std::string& label() const { return label_; }

    // Probability profiles evaluate masses in [0,1] (exactly 0 at 0 and 1);
    // the Euclidean profile evaluates volumes in (0, inf).
    double operator()(double t) const;

    static Profile gaussian();
    static Profile phi_measure(std::shared_ptr<Measure1D> m);
    static Profile mu_p_alpha_estimator(double p, double alpha);
    static Profile sphere(int n);
    static Profile euclidean(int n, double c_multiplier = 1.0);
    static Profile cube_gaussian();
    static Profile sodin_pball(double p, int n, double c = 1.0);
    static Profile semigroup_bound(std::function<double(double)> phiX,
                                   std::function<double(double)> phiY, double c1,
                                   bool sqrt_variant = false);
    static Profile tabulated(std::vector<double> t, std::vector<double> I,
                             std::string label = "tabulated");
    // I(t) = min(t, 1-t), the linear Cheeger estimator.
    static Profile cheeger_linear();
    // I(t) = c * min(t,1-t)^{1-beta} on (0,1/2], symmetrized.
    static Profile power_law(double beta, double c = 1.0);

    std::shared_ptr<Measure1D> measure() const { return measure_; }

  private:
    ProfileKind kind_ = ProfileKind::tabulated;
    bool is_probability_ = true;
    double domain_mass_ = 1.0;
    int n_ = 0;
    double p_ = 2.0, alpha_ = 0.0, c_ = 1.0;
    std::string label_;
    std::shared_ptr<Measure1D> measure_;
    std::function<double(double)> eval_;
};

// Exact closed forms / point evaluators.
double gaussian_profile(double t);
double exact_phi_profile(const Measure1D& m, double t);
enum class EstimatorKind { phi_growth, mu_p_alpha };
double asymptotic_estimator(EstimatorKind kind, const Measure1D& m, double p, double alpha,
                            double t);
double sphere_profile(int n, double t);
double euclidean_profile(int n, double v);

struct EstimatorReport {
    double zero_at_origin = 0.0;
    double symmetric = 0.0;
    double monotone_half = 0.0;
    double concave = 0.0;
    double i_over_t_decreasing = 0.0;
    double tolerance = 1e-6;
    std::vector<double> grid;
    bool zero_ok() const { return zero_at_origin <= tolerance; }
    bool symmetric_ok() const { return symmetric <= tolerance; }
    bool monotone_ok() const { return monotone_half <= tolerance; }
    bool concave_ok() const { return concave <= tolerance; }
    bool ratio_ok() const { return i_over_t_decreasing <= tolerance; }
    bool pass() const {
        return zero_ok() && symmetric_ok() && monotone_ok() && concave_ok() && ratio_ok();
    }
};

EstimatorReport validate_estimator(const Profile& I, const std::vector<double>& grid,
                                   double tolerance = 1e-6);

struct ConconResult {
    bool holds = false;
    double c_est = 0.0;         // sup over the supplied grid
    double c_refined = 0.0;     // sup on the refined grid (stability probe)
};

// c_est = sup_t (t/I(t)) * integral_t^1 I(s)/s^2 ds; holds iff the sup is
// stable (< 10% growth) when the grid is pushed two decades lower.
ConconResult check_concon(const Profile& I, const std::vector<double>& grid);

// Integral_t^b I(s)/s^2 ds with log-scale resolution near zero.
double concon_integral(const Profile& I, double t, double b = 1.0);

// Default validation grid: ~1000 points, log-refined near 0 and 1.
std::vector<double> default_profile_grid(double t_min = 1e-8, int points = 1000);

} // namespace isoperm
