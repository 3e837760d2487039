#include "isoperm/ri_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "isoperm/quadrature.hpp"

namespace isoperm {

double YoungFunction::inverse(double y) const {
    if (y <= 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (N(hi) < y) {
        hi *= 2.0;
        if (++guard > 2000) throw std::runtime_error("YoungFunction::inverse: no bracket");
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (N(mid) < y) lo = mid; else hi = mid;
        if (hi - lo <= 1e-14 * hi) break;
    }
    return 0.5 * (lo + hi);
}

YoungFunction YoungFunction::power(double p) {
    if (!(p >= 1.0)) throw std::domain_error("YoungFunction::power: p >= 1");
    return {"pow(" + std::to_string(p) + ")", [p](double t) { return std::pow(t, p); }};
}

YoungFunction YoungFunction::exp_minus_one() {
    return {"exp_m1", [](double t) { return std::expm1(t); }};
}

YoungFunction YoungFunction::exp_sq_minus_one() {
    return {"exp2_m1", [](double t) { return std::expm1(t * t); }};
}

YoungFunction YoungFunction::tq_log(double q) {
    if (!(q >= 1.0)) throw std::domain_error("YoungFunction::tq_log: q >= 1");
    return {"tq_log(" + std::to_string(q) + ")",
            [q](double t) { return std::pow(t, q) * (1.0 + std::max(0.0, std::log(t))); }};
}

YoungFunction YoungFunction::by_name(const std::string& name) {
    if (name == "exp_m1") return exp_minus_one();
    if (name == "exp2_m1") return exp_sq_minus_one();
    if (name.rfind("pow(", 0) == 0)
        return power(std::stod(name.substr(4, name.size() - 5)));
    if (name.rfind("tq_log(", 0) == 0)
        return tq_log(std::stod(name.substr(7, name.size() - 8)));
    throw std::invalid_argument("YoungFunction::by_name: unknown '" + name + "'");
}

YoungFunction YoungFunction::tabulated(std::vector<double> t, std::vector<double> Nt) {
    if (t.size() != Nt.size() || t.size() < 2)
        throw std::invalid_argument("YoungFunction::tabulated: bad table");
    auto ts = std::make_shared<std::vector<double>>(std::move(t));
    auto ns = std::make_shared<std::vector<double>>(std::move(Nt));
    return {"tabulated", [ts, ns](double x) {
                const auto& tv = *ts;
                const auto& nv = *ns;
                if (x <= 0.0) return 0.0;
                if (x <= tv.front()) return nv.front() * x / tv.front();
                if (x >= tv.back()) {
                    // extend linearly with the last slope (keeps convexity)
                    double slope = (nv.back() - nv[nv.size() - 2]) / (tv.back() - tv[tv.size() - 2]);
                    return nv.back() + slope * (x - tv.back());
                }
                auto it = std::upper_bound(tv.begin(), tv.end(), x);
                std::size_t k = static_cast<std::size_t>(it - tv.begin());
                double w = (x - tv[k - 1]) / (tv[k] - tv[k - 1]);
                return nv[k - 1] * (1.0 - w) + nv[k] * w;
            }};
}

RISpace RISpace::Lp(double p) {
    if (!(p >= 1.0)) throw std::domain_error("RISpace::Lp: p >= 1");
    RISpace X;
    X.kind_ = SpaceKind::lp;
    X.p_ = p;
    X.label_ = (p >= kInf) ? "Linf" : "Lp(" + std::to_string(p) + ")";
    return X;
}

RISpace RISpace::Lorentz(double p, double q) {
    if (!(p >= 1.0 && q >= 1.0)) throw std::domain_error("RISpace::Lorentz: p,q >= 1");
    RISpace X;
    X.kind_ = SpaceKind::lorentz;
    X.p_ = p;
    X.q_ = q;
    X.label_ = "Lorentz(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return X;
}

RISpace RISpace::LorentzZygmund(double q, double m, double lambda) {
    if (!(q >= 1.0 && m >= 1.0)) throw std::domain_error("RISpace::LZ: q,m >= 1");
    RISpace X;
    X.kind_ = SpaceKind::lorentz_zygmund;
    X.p_ = q;
    X.m_ = m;
    X.lambda_ = lambda;
    X.label_ = "LZ(" + std::to_string(q) + "," + std::to_string(m) + "," + std::to_string(lambda) + ")";
    return X;
}

RISpace RISpace::Orlicz(YoungFunction N) {
    RISpace X;
    X.kind_ = SpaceKind::orlicz;
    X.label_ = "Orlicz(" + N.name + ")";
    X.young_ = std::move(N);
    return X;
}

RISpace RISpace::Marcinkiewicz(std::function<double(double)> phi, std::string label) {
    RISpace X;
    X.kind_ = SpaceKind::marcinkiewicz;
    X.phi_ = std::move(phi);
    X.label_ = "M(" + label + ")";
    return X;
}

RISpace RISpace::Lambda(std::function<double(double)> phi, std::string label) {
    RISpace X;
    X.kind_ = SpaceKind::lambda;
    X.phi_ = std::move(phi);
    X.label_ = "Lambda(" + label + ")";
    return X;
}

RISpace RISpace::ExpL() {
    RISpace X;
    X.kind_ = SpaceKind::exp_l;
    X.label_ = "ExpL";
    return X;
}

bool RISpace::quasi_norm() const {
    switch (kind_) {
        case SpaceKind::lorentz: return q_ < p_;
        case SpaceKind::marcinkiewicz: return true; // defined through f*, not f**
        case SpaceKind::lambda: return false;
        default: return false;
    }
}

RISpace RISpace::parse(const std::string& str) {
    std::string s;
    for (char c : str)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto args = [&s](std::size_t open) {
        std::vector<std::string> out;
        std::string cur;
        int depth = 0;
        for (std::size_t i = open + 1; i < s.size(); ++i) {
            char c = s[i];
            if (c == '(') ++depth;
            if (c == ')') {
                if (depth == 0) break;
                --depth;
            }
            if (c == ',' && depth == 0) {
                out.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };
    auto num = [](const std::string& a) {
        if (a == "inf" || a == "Inf" || a == "INF") return kInf;
        return std::stod(a);
    };
    if (s == "ExpL" || s == "expL") return ExpL();
    if (s == "Linf" || s == "Lp(inf)") return Linf();
    if (s.rfind("Lp(", 0) == 0) return Lp(num(args(2)[0]));
    if (s.rfind("Lorentz(", 0) == 0) {
        auto a = args(7);
        return Lorentz(num(a[0]), num(a[1]));
    }
    if (s.rfind("LZ(", 0) == 0) {
        auto a = args(2);
        return LorentzZygmund(num(a[0]), num(a[1]), num(a[2]));
    }
    if (s.rfind("Orlicz(", 0) == 0) return Orlicz(YoungFunction::by_name(args(6)[0]));
    if (s.rfind("M(", 0) == 0) {
        RISpace inner = parse(args(1)[0]);
        return Marcinkiewicz([inner](double t) { return fundamental_function(inner, t); },
                             inner.label());
    }
    if (s.rfind("Lambda(", 0) == 0) {
        RISpace inner = parse(args(6)[0]);
        return Lambda([inner](double t) { return fundamental_function(inner, t); }, inner.label());
    }
    throw std::invalid_argument("RISpace::parse: cannot parse '" + str + "'");
}

namespace {

double lp_norm(double p, const StepFunction& f) {
    if (f.pieces() == 0) return 0.0;
    if (p >= RISpace::kInf) return f.values().front();
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        acc += std::pow(f.values()[i], p) * (f.breakpoints()[i] - prev);
        prev = f.breakpoints()[i];
    }
    return std::pow(acc, 1.0 / p);
}

double lorentz_norm(double p, double q, const StepFunction& f) {
    if (f.pieces() == 0) return 0.0;
    if (q >= RISpace::kInf) {
        double best = 0.0;
        for (std::size_t i = 0; i < f.pieces(); ++i)
            best = std::max(best, f.values()[i] * std::pow(f.breakpoints()[i], 1.0 / p));
        return best;
    }
    // (int (t^{1/p} f*)^q dt/t)^{1/q} = (sum v^q (p/q)(t_i^{q/p}-t_{i-1}^{q/p}))^{1/q}
    double acc = 0.0;
    double prev = 0.0;
    const double e = q / p;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        double t = f.breakpoints()[i];
        acc += std::pow(f.values()[i], q) * (std::pow(t, e) - std::pow(prev, e)) / e;
        prev = t;
    }
    return std::pow(acc, 1.0 / q);
}

double lz_norm(double q, double m, double lambda, const StepFunction& f) {
    if (f.pieces() == 0) return 0.0;
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        double t = f.breakpoints()[i];
        double v = f.values()[i];
        if (v > 0.0) {
            auto g = [q, m, lambda](double s) {
                return std::pow(s, m / q - 1.0) * std::pow(1.0 + std::log(1.0 / s), lambda * m);
            };
            double piece;
            if (prev <= 1e-14 * t) {
                // resolve the endpoint on a log scale
                piece = integrate_log_left(g, t, 1e-10, std::max(prev, 1e-280));
            } else {
                piece = integrate(g, prev, t, 1e-10);
            }
            acc += std::pow(v, m) * piece;
        }
        prev = t;
    }
    return std::pow(acc, 1.0 / m);
}

double orlicz_modular(const YoungFunction& N, const StepFunction& f, double lam) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        if (f.values()[i] > 0.0) acc += N(f.values()[i] / lam) * (f.breakpoints()[i] - prev);
        prev = f.breakpoints()[i];
        if (!std::isfinite(acc)) return HUGE_VAL;
    }
    return acc;
}

// Luxemburg norm by bisection on the modular; 60 iterations.
double orlicz_norm(const YoungFunction& N, const StepFunction& f) {
    double vmax = f.pieces() ? f.values().front() : 0.0;
    if (vmax <= 0.0) return 0.0;
    double lo = vmax * 1e-18, hi = vmax * 2.0;
    while (orlicz_modular(N, f, hi) > 1.0) hi *= 2.0;
    while (orlicz_modular(N, f, lo) < 1.0 && lo > vmax * 1e-40) lo *= 0.5;
    for (int i = 0; i < 60; ++i) {
        double mid = 0.5 * (lo + hi);
        if (orlicz_modular(N, f, mid) > 1.0) lo = mid; else hi = mid;
        if (hi - lo <= 1e-10 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double marcinkiewicz_norm(const std::function<double(double)>& phi, const StepFunction& f) {
    double best = 0.0;
    for (std::size_t i = 0; i < f.pieces(); ++i)
        best = std::max(best, f.values()[i] * phi(f.breakpoints()[i]));
    return best;
}

double lambda_norm(const std::function<double(double)>& phi, const StepFunction& f) {
    double acc = 0.0;
    double prev_phi = phi(0.0);
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        double ph = phi(f.breakpoints()[i]);
        acc += f.values()[i] * (ph - prev_phi);
        prev_phi = ph;
    }
    return acc;
}

// sup_{0<t<1} f**(t) / (1 + log(1/t)); per-piece dense sampling.
double expl_norm(const StepFunction& f) {
    if (f.pieces() == 0) return 0.0;
    double best = 0.0;
    double prev = 0.0;
    auto ratio = [&f](double t) { return double_star(f, t) / (1.0 + std::log(1.0 / t)); };
    for (std::size_t i = 0; i < f.pieces(); ++i) {
        double t1 = f.breakpoints()[i];
        double t0 = std::max(prev, 1e-14 * t1);
        for (int k = 0; k <= 48; ++k) {
            double t = t0 + (t1 - t0) * k / 48.0;
            if (t > 0.0 && t <= 1.0) best = std::max(best, ratio(t));
        }
        prev = t1;
    }
    if (f.total() < 1.0)
        for (int k = 0; k <= 48; ++k) {
            double t = f.total() + (1.0 - f.total()) * k / 48.0;
            if (t > 0.0 && t <= 1.0) best = std::max(best, ratio(std::min(t, 1.0)));
        }
    return best;
}

} // namespace

double norm(const RISpace& X, const StepFunction& fstar) {
    switch (X.kind_) {
        case SpaceKind::lp: return lp_norm(X.p_, fstar);
        case SpaceKind::lorentz: return lorentz_norm(X.p_, X.q_, fstar);
        case SpaceKind::lorentz_zygmund: return lz_norm(X.p_, X.m_, X.lambda_, fstar);
        case SpaceKind::orlicz: return orlicz_norm(X.young_, fstar);
        case SpaceKind::marcinkiewicz: return marcinkiewicz_norm(X.phi_, fstar);
        case SpaceKind::lambda: return lambda_norm(X.phi_, fstar);
        case SpaceKind::exp_l: return expl_norm(fstar);
    }
    throw std::logic_error("norm: bad kind");
}

double fundamental_function(const RISpace& X, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("fundamental_function: t in [0,1]");
    if (t == 0.0) return 0.0;
    switch (X.kind_) {
        case SpaceKind::lp: return (X.p_ >= RISpace::kInf) ? 1.0 : std::pow(t, 1.0 / X.p_);
        case SpaceKind::orlicz: return 1.0 / X.young_.inverse(1.0 / t);
        case SpaceKind::marcinkiewicz:
        case SpaceKind::lambda: return X.phi_(t);
        default: return norm(X, indicator_step(t));
    }
}

double norm_pconvex(const RISpace& X, double p, const StepFunction& fstar) {
    if (!(p > 0.0)) throw std::domain_error("norm_pconvex: p > 0");
    std::vector<double> vals(fstar.values());
    for (auto& v : vals) v = std::pow(v, p);
    StepFunction powered(fstar.breakpoints(), vals);
    return std::pow(norm(X, powered), 1.0 / p);
}

ProbeFamily ProbeFamily::standard(int breaks_per_decade, double t_min) {
    ProbeFamily fam;
    auto add_tab = [&fam, breaks_per_decade, t_min](std::function<double(double)> g, double support,
                                                    const std::string& name, double param) {
        std::vector<double> grid = log_grid(t_min, support, breaks_per_decade);
        std::vector<double> breaks, values;
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double mid = (grid[i - 1] > 0.0) ? std::sqrt(grid[i - 1] * grid[i]) : 0.5 * grid[i];
            breaks.push_back(grid[i]);
            values.push_back(g(mid));
        }
        // enforce nonincreasing (probe functions are decreasing anyway)
        for (std::size_t i = 1; i < values.size(); ++i)
            values[i] = std::min(values[i], values[i - 1]);
        fam.members.emplace_back(std::move(breaks), std::move(values));
        fam.names.push_back(name);
        fam.power_param.push_back(param);
    };
    for (double r : {1e-6, 1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5}) {
        fam.members.push_back(indicator_step(r));
        fam.names.push_back("chi(0," + std::to_string(r) + ")");
        fam.power_param.push_back(-1.0);
    }
    for (double a : {0.05, 0.15, 0.25, 0.35, 0.42, 0.45, 0.47, 0.49}) {
        add_tab([a](double s) { return std::pow(s, -a); }, 0.5, "s^-" + std::to_string(a), a);
    }
    for (double mlog : {-2.0, -1.0, 1.0, 2.0}) {
        add_tab([mlog](double s) { return std::pow(s, -0.25) * std::pow(1.0 + std::log(1.0 / s), mlog); },
                0.5, "s^-0.25 log^" + std::to_string(mlog), -1.0);
    }
    return fam;
}

StepFunction dilate(const StepFunction& fstar, double s) {
    if (!(s > 0.0)) throw std::domain_error("dilate: s > 0");
    std::vector<double> breaks, values;
    for (std::size_t i = 0; i < fstar.pieces(); ++i) {
        double b = fstar.breakpoints()[i] * s;
        if (b >= 1.0) {
            breaks.push_back(1.0);
            values.push_back(fstar.values()[i]);
            break;
        }
        breaks.push_back(b);
        values.push_back(fstar.values()[i]);
    }
    return StepFunction(std::move(breaks), std::move(values));
}

double dilation_norm(const RISpace& X, double s, const ProbeFamily& family) {
    if (s == 1.0) return 1.0;
    if (X.kind() == SpaceKind::lp)
        return (X.p() >= RISpace::kInf) ? 1.0 : std::pow(s, 1.0 / X.p());
    double best = 0.0;
    for (const auto& f : family.members) {
        double denom = norm(X, f);
        if (!(denom > 0.0) || !std::isfinite(denom)) continue;
        double v = norm(X, dilate(f, s)) / denom;
        best = std::max(best, v);
    }
    return best;
}

double dilation_norm(const RISpace& X, double s) {
    static const ProbeFamily fam = ProbeFamily::standard();
    return dilation_norm(X, s, fam);
}

BoydIndices boyd_indices(const RISpace& X) {
    static const ProbeFamily fam = ProbeFamily::standard();
    BoydIndices idx;
    double upper = HUGE_VAL, lower = -HUGE_VAL;
    for (int k = 1; k <= 20; ++k) {
        double s_hi = std::pow(2.0, k);
        double s_lo = std::pow(2.0, -k);
        double h_hi = dilation_norm(X, s_hi, fam);
        double h_lo = dilation_norm(X, s_lo, fam);
        if (h_hi > 0.0) upper = std::min(upper, std::log(h_hi) / std::log(s_hi));
        if (h_lo > 0.0) lower = std::max(lower, std::log(h_lo) / std::log(s_lo));
    }
    idx.upper = std::clamp(upper, 0.0, 1.0);
    idx.lower = std::clamp(lower, 0.0, 1.0);
    if (idx.lower > idx.upper) idx.lower = idx.upper;
    return idx;
}

double ls_norm(const RISpace& X, const Profile& I, const StepFunction& fstar) {
    // On probability spaces the weighted oscillation lives on (0,1); for the
    // Euclidean (volume) profile it has an algebraic tail past the support,
    // so the tabulation is extended until the tail is negligible.
    double support_end = I.is_probability() ? 1.0 : std::max(fstar.total(), 1.0) * 1e8;
    double t_lo = std::min(1e-10, fstar.pieces() ? fstar.breakpoints().front() : 1e-10);
    std::vector<double> grid = log_grid(t_lo, support_end, 160, fstar.breakpoints());
    std::vector<double> vals;
    vals.reserve(grid.size() - 1);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double mid = (grid[i - 1] > 0.0) ? std::sqrt(grid[i - 1] * grid[i]) : 0.5 * grid[i];
        double w = I(mid) / mid;
        vals.push_back(oscillation(fstar, mid) * w);
    }
    StepFunction g = rearrange_tabulated(grid, vals);
    return norm(X, g);
}

} // namespace isoperm
