#include "isoperm/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace isoperm {

void WeightedSample::validate() const {
    for (const auto& a : atoms)
        if (!(a.weight > 0.0)) throw std::invalid_argument("WeightedSample: weight <= 0");
}

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
    if (breaks_.size() != values_.size())
        throw std::invalid_argument("StepFunction: size mismatch");
    double prev_t = 0.0;
    double prev_v = HUGE_VAL;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        if (!(breaks_[i] > prev_t)) throw std::invalid_argument("StepFunction: breaks not increasing");
        if (values_[i] < 0.0) throw std::invalid_argument("StepFunction: negative value");
        if (values_[i] > prev_v * (1.0 + 1e-12) + 1e-300)
            throw std::invalid_argument("StepFunction: values not nonincreasing");
        prev_t = breaks_[i];
        prev_v = values_[i];
    }
    prefix_.resize(breaks_.size());
    double acc = 0.0;
    prev_t = 0.0;
    for (std::size_t i = 0; i < breaks_.size(); ++i) {
        acc += values_[i] * (breaks_[i] - prev_t);
        prefix_[i] = acc;
        prev_t = breaks_[i];
    }
}

double StepFunction::value_at(double s) const {
    if (breaks_.empty() || s > total()) return 0.0;
    if (s < 0.0) throw std::domain_error("StepFunction::value_at: s < 0");
    if (s == total()) return values_.back();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    return values_[static_cast<std::size_t>(it - breaks_.begin())];
}

double StepFunction::integral_to(double t) const {
    if (t <= 0.0 || breaks_.empty()) return 0.0;
    if (t >= total()) return prefix_.back();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
    double base = (i == 0) ? 0.0 : prefix_[i - 1];
    double left = (i == 0) ? 0.0 : breaks_[i - 1];
    return base + values_[i] * (t - left);
}

double distribution(const WeightedSample& f, double t) {
    double s = 0.0;
    for (const auto& a : f.atoms)
        if (std::abs(a.value) > t) s += a.weight;
    return s;
}

StepFunction decreasing_rearrangement(const WeightedSample& f) {
    std::vector<std::size_t> idx(f.atoms.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&f](std::size_t a, std::size_t b) {
        return std::abs(f.atoms[a].value) > std::abs(f.atoms[b].value);
    });
    std::vector<double> breaks, values;
    breaks.reserve(idx.size());
    values.reserve(idx.size());
    double acc = 0.0;
    for (std::size_t k : idx) {
        double v = std::abs(f.atoms[k].value);
        acc += f.atoms[k].weight;
        if (!values.empty() && values.back() == v) {
            breaks.back() = acc;   // merge plateau
        } else {
            breaks.push_back(acc);
            values.push_back(v);
        }
    }
    return StepFunction(std::move(breaks), std::move(values));
}

double double_star(const StepFunction& fstar, double t) {
    if (!(t > 0.0)) throw std::domain_error("double_star: t <= 0");
    if (fstar.pieces() > 0 && t <= fstar.breakpoints().front())
        return fstar.values().front(); // exact on the first piece
    return fstar.integral_to(t) / t;
}

double oscillation(const StepFunction& fstar, double t) {
    double osc = double_star(fstar, t) - fstar.value_at(t);
    return osc < 0.0 ? 0.0 : osc;
}

double median(const WeightedSample& f) {
    double total = f.total_mass();
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("median: total mass must be 1");
    std::vector<WeightedAtom> atoms = f.atoms;
    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const WeightedAtom& a, const WeightedAtom& b) { return a.value < b.value; });
    // mu{f <= m} as cumulative from the left; mu{f >= m} from the right.
    double below = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        double v = atoms[i].value;
        double le = below + atoms[i].weight;
        std::size_t j = i;
        while (j + 1 < atoms.size() && atoms[j + 1].value == v) {
            ++j;
            le += atoms[j].weight;
        }
        double ge = total - below;
        if (ge >= 0.5 - 1e-15 && le >= 0.5 - 1e-15) return v;
        below = le;
        i = j;
    }
    return atoms.back().value;
}

StepFunction indicator_step(double r) {
    if (!(r > 0.0)) throw std::domain_error("indicator_step: r <= 0");
    return StepFunction({r}, {1.0});
}

StepFunction rearrange_tabulated(const std::vector<double>& grid,
                                 const std::vector<double>& cell_values) {
    if (grid.size() != cell_values.size() + 1)
        throw std::invalid_argument("rearrange_tabulated: grid/value size mismatch");
    WeightedSample s;
    s.atoms.reserve(cell_values.size());
    for (std::size_t i = 0; i < cell_values.size(); ++i) {
        double w = grid[i + 1] - grid[i];
        if (w <= 0.0) throw std::invalid_argument("rearrange_tabulated: grid not increasing");
        s.atoms.push_back({cell_values[i], w});
    }
    return decreasing_rearrangement(s);
}

std::vector<double> log_grid(double t_min, double total, int per_decade,
                             const std::vector<double>& extras) {
    std::vector<double> g;
    g.push_back(0.0);
    double lo = std::log10(t_min);
    double hi = std::log10(total);
    int n = std::max(2, static_cast<int>((hi - lo) * per_decade));
    for (int i = 0; i <= n; ++i)
        g.push_back(std::pow(10.0, lo + (hi - lo) * i / n));
    for (double e : extras)
        if (e > 0.0 && e < total) g.push_back(e);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.back() < total) g.push_back(total);
    else g.back() = total;
    return g;
}

} // namespace isoperm
