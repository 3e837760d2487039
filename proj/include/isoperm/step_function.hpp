#pragma once

// Discrete measure-space functions and their decreasing rearrangements.
// StepFunction is the canonical carrier: nonincreasing, right-continuous,
// piecewise constant on (0, total]; all integrals are closed-form.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace isoperm {

struct WeightedAtom {
    double value = 0.0;
    double weight = 0.0;
};

struct WeightedSample {
    std::vector<WeightedAtom> atoms;

    double total_mass() const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight;
        return s;
    }
    void validate() const;
};

class StepFunction {
  public:
    StepFunction() = default;
    // breaks: 0 < t_1 < ... < t_k = total; values: v_1 >= ... >= v_k >= 0.
    StepFunction(std::vector<double> breaks, std::vector<double> values);

    std::size_t pieces() const { return breaks_.size(); }
    double total() const { return breaks_.empty() ? 0.0 : breaks_.back(); }
    const std::vector<double>& breakpoints() const { return breaks_; }
    const std::vector<double>& values() const { return values_; }

    // f*(s): value on [t_{i-1}, t_i); 0 beyond total.
    double value_at(double s) const;
    // Exact integral of f* over (0, t]; extends by zero past total.
    double integral_to(double t) const;
    double integral() const { return integral_to(total()); }
    // Prefix integrals cache (A_i = integral over (0, t_i]).
    const std::vector<double>& prefix() const { return prefix_; }

    bool operator==(const StepFunction& o) const {
        return breaks_ == o.breaks_ && values_ == o.values_;
    }

  private:
    std::vector<double> breaks_;
    std::vector<double> values_;
    std::vector<double> prefix_;
};

// mu_u(t) = sum of weights where |value| > t.
double distribution(const WeightedSample& f, double t);

// Stable sort on (|value| desc, index asc); equal-value plateaus merge into a
// single step so the output is canonical.
StepFunction decreasing_rearrangement(const WeightedSample& f);

// f**(t) = (1/t) integral_0^t f*(s) ds, exact.
double double_star(const StepFunction& fstar, double t);

// f**(t) - f*(t) >= 0.
double oscillation(const StepFunction& fstar, double t);

// Smallest m with mu{f >= m} >= 1/2 and mu{f <= m} >= 1/2; требует total == 1.
double median(const WeightedSample& f);

// Builds chi_(0,r) as a step function (indicator of mass r at height 1).
StepFunction indicator_step(double r);

// Samples a nonnegative function g on (0,total] over the given increasing
// grid (cell midpoint values, cell-length weights) and returns its decreasing
// rearrangement; the generic route for norms of non-monotone tabulations.
StepFunction rearrange_tabulated(const std::vector<double>& grid,
                                 const std::vector<double>& cell_values);

// Breakpoint grid: union of a log-spaced grid on (t_min, total] and extras.
std::vector<double> log_grid(double t_min, double total, int per_decade,
                             const std::vector<double>& extras = {});

} // namespace isoperm
