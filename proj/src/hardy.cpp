#include "isoperm/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "isoperm/quadrature.hpp"

namespace isoperm {

void OperatorSpec::validate() const {
    if (kind == OpKind::Qa && !(a >= 0.0 && a < 1.0))
        throw std::domain_error("OperatorSpec: Qa needs a in [0,1)");
    if (kind == OpKind::TailQ && !(q > 0.0))
        throw std::domain_error("OperatorSpec: TailQ needs q > 0");
    bool needs_profile = kind == OpKind::QI || kind == OpKind::QItilde || kind == OpKind::RI ||
                         kind == OpKind::RItilde;
    if (needs_profile != profile.has_value())
        throw std::domain_error("OperatorSpec: profile present iff the kind needs it");
    if (!(upper_limit > 0.0 && upper_limit <= 1.0))
        throw std::domain_error("OperatorSpec: upper_limit in (0,1]");
}

namespace {

Profile profile_by_name(const std::string& name) {
    if (name == "gaussian") return Profile::gaussian();
    if (name == "cheeger") return Profile::cheeger_linear();
    if (name.rfind("sphere:", 0) == 0) return Profile::sphere(std::stoi(name.substr(7)));
    if (name.rfind("mupalpha:", 0) == 0) {
        auto rest = name.substr(9);
        auto comma = rest.find(',');
        return Profile::mu_p_alpha_estimator(std::stod(rest.substr(0, comma)),
                                             std::stod(rest.substr(comma + 1)));
    }
    if (name.rfind("power:", 0) == 0) return Profile::power_law(std::stod(name.substr(6)));
    throw std::invalid_argument("unknown profile name '" + name + "'");
}

} // namespace

OperatorSpec OperatorSpec::parse(const std::string& str) {
    std::string s;
    for (char c : str)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    OperatorSpec op;
    auto inner = [&s](std::size_t open) {
        return s.substr(open + 1, s.rfind(')') - open - 1);
    };
    auto split_mass = [&op](std::string body) {
        auto pos = body.find(",massG=");
        if (pos != std::string::npos) {
            op.upper_limit = std::stod(body.substr(pos + 7));
            body = body.substr(0, pos);
        }
        return body;
    };
    if (s == "P") {
        op.kind = OpKind::P;
    } else if (s.rfind("Qa(", 0) == 0) {
        op.kind = OpKind::Qa;
        op.a = std::stod(inner(2));
    } else if (s.rfind("QItilde(", 0) == 0) {
        op.kind = OpKind::QItilde;
        op.profile = profile_by_name(split_mass(inner(7)));
    } else if (s.rfind("QI(", 0) == 0) {
        op.kind = OpKind::QI;
        op.profile = profile_by_name(split_mass(inner(2)));
    } else if (s.rfind("RItilde(", 0) == 0) {
        op.kind = OpKind::RItilde;
        op.profile = profile_by_name(split_mass(inner(7)));
    } else if (s.rfind("RI(", 0) == 0) {
        op.kind = OpKind::RI;
        op.profile = profile_by_name(split_mass(inner(2)));
    } else {
        throw std::invalid_argument("OperatorSpec::parse: cannot parse '" + str + "'");
    }
    op.validate();
    return op;
}

std::string OperatorSpec::to_string() const {
    switch (kind) {
        case OpKind::P: return "P";
        case OpKind::Qa: return "Qa(" + std::to_string(a) + ")";
        case OpKind::QI: return "QI(" + (profile ? profile->label() : "?") + ")";
        case OpKind::QItilde: return "QItilde(" + (profile ? profile->label() : "?") + ")";
        case OpKind::RI: return "RI(" + (profile ? profile->label() : "?") + ")";
        case OpKind::RItilde: return "RItilde(" + (profile ? profile->label() : "?") + ")";
        case OpKind::TailQ: return "TailQ(" + std::to_string(q) + ")";
    }
    return "?";
}

namespace {

// Tail kernel g for the integral part of each operator kind; the prefactor
// is applied separately.
std::function<double(double)> tail_kernel(const OperatorSpec& op) {
    switch (op.kind) {
        case OpKind::Qa: {
            double a = op.a;
            return [a](double s) { return std::pow(s, a - 1.0); };
        }
        case OpKind::QI:
        case OpKind::QItilde: {
            const Profile I = *op.profile;
            return [I](double s) { return 1.0 / I(s); };
        }
        case OpKind::RI:
        case OpKind::RItilde: {
            const Profile I = *op.profile;
            return [I](double s) {
                double r = s / I(s);
                return r * r / s;
            };
        }
        default: throw std::logic_error("tail_kernel: not a tail operator");
    }
}

double tail_upper(const OperatorSpec& op) {
    return op.kind == OpKind::QItilde ? std::min(op.upper_limit, 0.5) : op.upper_limit;
}

double prefactor(const OperatorSpec& op, double t) {
    switch (op.kind) {
        case OpKind::Qa: return std::pow(t, -op.a);
        case OpKind::QItilde: return (*op.profile)(t) / t;
        case OpKind::RItilde: {
            double w = (*op.profile)(t) / t;
            return w * w;
        }
        default: return 1.0;
    }
}

// integral_lo^hi f(s) g(s) ds for a step function f (f = 0 past its support).
double step_tail_integral(const StepFunction& f, double lo, double hi,
                          const std::function<double(double)>& g) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < f.pieces() && prev < hi; ++i) {
        double b = f.breakpoints()[i];
        double a = std::max(prev, lo);
        double bb = std::min(b, hi);
        if (bb > a && f.values()[i] != 0.0) {
            acc += f.values()[i] * integrate_log(g, a, bb, 1e-9);
            if (!std::isfinite(acc)) return HUGE_VAL;
        }
        prev = b;
    }
    return acc;
}

} // namespace

double apply(const OperatorSpec& op, const StepFunction& f, double t) {
    op.validate();
    switch (op.kind) {
        case OpKind::P:
            if (!(t > 0.0)) throw std::domain_error("apply(P): t > 0 required");
            return f.integral_to(t) / t;
        case OpKind::Qa: {
            if (!(t > 0.0)) throw std::domain_error("apply(Qa): t > 0 required");
            // closed form on steps: sum v_i (b^a - a^a)/a, or log for a = 0
            double acc = 0.0;
            double prev = 0.0;
            double U = op.upper_limit;
            for (std::size_t i = 0; i < f.pieces() && prev < U; ++i) {
                double b = std::min(f.breakpoints()[i], U);
                double a0 = std::max(prev, t);
                if (b > a0 && f.values()[i] != 0.0) {
                    double piece = (op.a == 0.0) ? std::log(b / a0)
                                                 : (std::pow(b, op.a) - std::pow(a0, op.a)) / op.a;
                    acc += f.values()[i] * piece;
                }
                prev = f.breakpoints()[i];
            }
            return acc * prefactor(op, t);
        }
        case OpKind::QI:
        case OpKind::QItilde:
        case OpKind::RItilde: {
            if (!(t > 0.0)) throw std::domain_error("apply: t > 0 required");
            double v = step_tail_integral(f, t, tail_upper(op), tail_kernel(op));
            return std::isfinite(v) ? v * prefactor(op, t) : HUGE_VAL;
        }
        case OpKind::RI: {
            if (!(t > 0.0)) throw std::domain_error("apply: t > 0 required");
            const Profile& I = *op.profile;
            double p = op.p_ellipticity;
            if (p == 2.0) {
                double v = step_tail_integral(f, t, op.upper_limit, tail_kernel(op));
                return std::isfinite(v) ? v : HUGE_VAL;
            }
            double e = 1.0 / (p - 1.0);
            auto g = [&I, &f, p, e](double s) {
                return std::pow(std::pow(s / I(s), p) * f.value_at(s), e) / s;
            };
            double v = integrate_log(g, t, op.upper_limit, 1e-9);
            return std::isfinite(v) ? v : HUGE_VAL;
        }
        case OpKind::TailQ:
            throw std::invalid_argument("apply: use tail_q for the TailQ functional");
    }
    throw std::logic_error("apply: bad kind");
}

double apply(const OperatorSpec& op, const std::function<double(double)>& f, double t) {
    op.validate();
    switch (op.kind) {
        case OpKind::P: {
            if (!(t > 0.0)) throw std::domain_error("apply(P): t > 0 required");
            double v = integrate_log(f, std::min(1e-14 * t, t), t, 1e-9) / t;
            return std::isfinite(v) ? v : HUGE_VAL;
        }
        case OpKind::Qa:
        case OpKind::QI:
        case OpKind::QItilde:
        case OpKind::RItilde: {
            if (!(t > 0.0)) throw std::domain_error("apply: t > 0 required");
            auto g = tail_kernel(op);
            auto fg = [&f, &g](double s) { return f(s) * g(s); };
            double v = integrate_log(fg, t, tail_upper(op), 1e-9);
            return std::isfinite(v) ? v * prefactor(op, t) : HUGE_VAL;
        }
        case OpKind::RI: {
            const Profile& I = *op.profile;
            double p = op.p_ellipticity;
            double e = 1.0 / (p - 1.0);
            auto g = [&I, &f, p, e](double s) {
                if (p == 2.0) {
                    double r = s / I(s);
                    return r * r * f(s) / s;
                }
                return std::pow(std::pow(s / I(s), p) * f(s), e) / s;
            };
            double v = integrate_log(g, t, op.upper_limit, 1e-9);
            return std::isfinite(v) ? v : HUGE_VAL;
        }
        case OpKind::TailQ:
            throw std::invalid_argument("apply: use tail_q for the TailQ functional");
    }
    throw std::logic_error("apply: bad kind");
}

namespace {

// Piecewise log-log interpolant of a positive kernel on s in [1e-17, 1];
// keeps profile-backed kernels cheap inside the sweep loops.
struct KernelCache {
    static constexpr int kPoints = 6000;
    double u_lo = std::log(1e-17), u_hi = 0.0;
    std::vector<double> log_g;

    explicit KernelCache(const std::function<double(double)>& g) {
        log_g.resize(kPoints + 1);
        for (int i = 0; i <= kPoints; ++i) {
            double u = u_lo + (u_hi - u_lo) * i / kPoints;
            log_g[i] = std::log(g(std::exp(u)));
        }
    }
    double operator()(double s) const {
        double u = std::log(std::min(std::max(s, 1e-17), 1.0));
        double x = (u - u_lo) / (u_hi - u_lo) * kPoints;
        int i = std::min(kPoints - 1, std::max(0, static_cast<int>(x)));
        double w = x - i;
        return std::exp(log_g[i] * (1.0 - w) + log_g[i + 1] * w);
    }
    // prefactors derived back from the cached kernel
    double qi_prefactor(double t) const { return 1.0 / (t * (*this)(t)); }       // I(t)/t
    double ri_prefactor(double t) const { return 1.0 / (t * (*this)(t)); }       // (I(t)/t)^2
};

double cached_prefactor(const OperatorSpec& op, const KernelCache& g, double t) {
    switch (op.kind) {
        case OpKind::Qa: return std::pow(t, -op.a);
        case OpKind::QItilde: return g.qi_prefactor(t);
        case OpKind::RItilde: return g.ri_prefactor(t);
        default: return 1.0;
    }
}

// Tabulates (op f) at the midpoints of a log grid with one cumulative sweep;
// O(grid + pieces) kernel-panel integrations per probe.
bool tabulate_operator(const OperatorSpec& op, const KernelCache* cache, const StepFunction& f,
                       const std::vector<double>& grid, std::vector<double>& out) {
    out.assign(grid.size() - 1, 0.0);
    std::vector<double> mids(grid.size() - 1);
    for (std::size_t i = 1; i < grid.size(); ++i)
        mids[i - 1] = (grid[i - 1] > 0.0) ? std::sqrt(grid[i - 1] * grid[i]) : 0.5 * grid[i];

    if (op.kind == OpKind::P) {
        for (std::size_t i = 0; i < mids.size(); ++i) out[i] = f.integral_to(mids[i]) / mids[i];
        return true;
    }
    if (op.kind == OpKind::RI && op.p_ellipticity != 2.0) {
        for (std::size_t i = 0; i < mids.size(); ++i) {
            out[i] = apply(op, f, mids[i]);
            if (!std::isfinite(out[i])) return false;
        }
        return true;
    }
    std::function<double(double)> g;
    if (cache)
        g = [cache](double s) { return (*cache)(s); };
    else
        g = tail_kernel(op);
    double U = tail_upper(op);
    // nodes: mids ∪ breakpoints ∪ {U}, descending cumulative tail integral
    std::vector<double> nodes(mids);
    for (double b : f.breakpoints())
        if (b > 0.0 && b < U) nodes.push_back(b);
    nodes.push_back(U);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    // tail[k] = integral_{nodes[k]}^{U} f g ds
    std::vector<double> tail(nodes.size(), 0.0);
    std::size_t iU = static_cast<std::size_t>(
        std::lower_bound(nodes.begin(), nodes.end(), U) - nodes.begin());
    double acc = 0.0;
    for (std::size_t k = iU; k-- > 0;) {
        double a = nodes[k], b = nodes[k + 1];
        double v = f.value_at(0.5 * (a + std::min(b, f.total())));
        if (a < f.total() && v != 0.0) {
            double piece = (b / a > 1.5) ? integrate_log(g, a, b, 1e-9)
                                         : gk15(g, a, b).value;
            acc += v * piece;
        }
        tail[k] = acc;
        if (!std::isfinite(acc)) {
            for (std::size_t j = 0; j <= k; ++j) tail[j] = HUGE_VAL;
            break;
        }
    }
    for (std::size_t i = 0; i < mids.size(); ++i) {
        auto it = std::lower_bound(nodes.begin(), nodes.end(), mids[i]);
        double v = tail[static_cast<std::size_t>(it - nodes.begin())];
        if (!std::isfinite(v)) return false;
        out[i] = v * (cache ? cached_prefactor(op, *cache, mids[i]) : prefactor(op, mids[i]));
        if (!std::isfinite(out[i])) return false;
    }
    return true;
}

} // namespace

OpNormEstimate opnorm_lower(const OperatorSpec& op, const RISpace& X, const RISpace& Y,
                            const ProbeFamily& family) {
    op.validate();
    OpNormEstimate est;
    std::size_t finite_members = 0;
    std::unique_ptr<KernelCache> cache;
    if (op.profile) cache = std::make_unique<KernelCache>(tail_kernel(op));
    // (a, ratio) pairs for the escalating power probes; unboundedness shows
    // up as ratios blowing up toward the critical exponent.
    std::vector<std::pair<double, double>> trail;
    for (std::size_t k = 0; k < family.members.size(); ++k) {
        const StepFunction& f = family.members[k];
        double nx = norm(X, f);
        if (!(nx > 0.0) || !std::isfinite(nx)) continue;
        std::vector<double> grid = log_grid(1e-24, 1.0, 140);
        std::vector<double> vals;
        if (!tabulate_operator(op, cache.get(), f, grid, vals)) {
            est.unbounded = true;
            est.witness = family.names[k];
            continue;
        }
        double ny = norm(Y, rearrange_tabulated(grid, vals));
        if (!std::isfinite(ny)) {
            est.unbounded = true;
            est.witness = family.names[k];
            continue;
        }
        ++finite_members;
        double ratio = ny / nx;
        if (ratio > 1e6) { // no meaningful constant at desk scale
            est.unbounded = true;
            est.witness = family.names[k];
        }
        double param = (k < family.power_param.size()) ? family.power_param[k] : -1.0;
        if (param >= 0.0) trail.emplace_back(param, ratio);
        if (ratio > est.lower_bound) {
            est.lower_bound = ratio;
            if (!est.unbounded) est.witness = family.names[k];
        }
    }
    if (finite_members == 0)
        throw std::runtime_error("opnorm_lower: every family member mapped to +inf");
    // Escalation rule: the top-parameter ratios keep growing geometrically
    // (>= 1.3x per step, >= 2x over the last two steps) and the last one is
    // already large.  Bounded pairs flatten out along the escalation instead.
    std::sort(trail.begin(), trail.end());
    std::size_t n = trail.size();
    if (n >= 3 && trail[n - 1].second > 10.0 && trail[n - 1].second > 1.3 * trail[n - 2].second &&
        trail[n - 2].second > 1.3 * trail[n - 3].second &&
        trail[n - 1].second > 2.0 * trail[n - 3].second)
        est.unbounded = true;
    return est;
}

OpNormEstimate opnorm_lower(const OperatorSpec& op, const RISpace& X, const RISpace& Y) {
    static const ProbeFamily fam = ProbeFamily::standard();
    return opnorm_lower(op, X, Y, fam);
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::bounded: return "bounded";
        case Verdict::unbounded: return "unbounded";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict boundedness_predicate(const OperatorSpec& op, const RISpace& X) {
    op.validate();
    const double margin = 0.03;
    BoydIndices idx = boyd_indices(X);
    switch (op.kind) {
        case OpKind::P:
            if (idx.upper < 1.0 - margin) return Verdict::bounded;
            if (idx.upper >= 1.0 - 1e-9) return Verdict::unbounded;
            return Verdict::inconclusive;
        case OpKind::Qa:
            if (idx.lower > op.a + margin) return Verdict::bounded;
            if (idx.lower < op.a - margin || (op.a > 0.0 && idx.lower <= 1e-9))
                return Verdict::unbounded;
            return Verdict::inconclusive;
        case OpKind::QItilde:
        case OpKind::RItilde: {
            const Profile& I = *op.profile;
            if (I.kind() == ProfileKind::sphere) {
                // kernel weight grows like t^{1/n} (squared for the R~ kind)
                double thr = (op.kind == OpKind::QItilde ? 1.0 : 2.0) / I.dim();
                if (idx.lower > thr + margin) return Verdict::bounded;
                if (idx.lower < thr - margin) return Verdict::unbounded;
                return Verdict::inconclusive;
            }
            if (I.kind() == ProfileKind::mu_p_alpha || I.kind() == ProfileKind::gaussian ||
                I.kind() == ProfileKind::phi_measure || I.kind() == ProfileKind::cube_gaussian) {
                // t^a beta(t) increases near zero for every a > 0, so the
                // operator is dominated by Q_a for any 0 < a < lower index.
                bool upper_ok = op.kind == OpKind::QItilde || idx.upper < 1.0 - margin;
                if (idx.lower > margin && upper_ok) return Verdict::bounded;
                if (idx.lower <= 1e-9) return Verdict::unbounded;
                return Verdict::inconclusive;
            }
            throw std::invalid_argument(
                "boundedness_predicate: tilde criterion needs a model profile");
        }
        default:
            throw std::invalid_argument("boundedness_predicate: no Boyd criterion for this kind");
    }
}

double tail_q(const StepFunction& fstar, const std::function<double(double)>& w, double q,
              double t) {
    if (!(q > 0.0)) throw std::domain_error("tail_q: q > 0");
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("tail_q: t in (0,1)");
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < fstar.pieces(); ++i) {
        double b = fstar.breakpoints()[i];
        double a = std::max(prev, t);
        double hi = std::min(b, 1.0);
        if (hi > a && fstar.values()[i] > 0.0) {
            double v = fstar.values()[i];
            acc += integrate([&w, v, q](double s) { return std::pow(w(s) * v, q); }, a, hi, 1e-10);
        }
        prev = b;
    }
    return std::pow(acc / t, 1.0 / q);
}

double capacity_lower_bound(double p, int n, double volF, double volG) {
    if (n < 2) throw std::domain_error("capacity_lower_bound: n >= 2");
    if (!(p >= 1.0 && p <= static_cast<double>(n)))
        throw std::domain_error("capacity_lower_bound: 1 <= p <= n");
    if (!(volF > 0.0 && volF < volG)) throw std::domain_error("capacity_lower_bound: 0 < |F| < |G|");
    if (std::abs(p - 1.0) < 1e-12) return std::pow(volF, (n - 1.0) / n); // p -> 1 limit
    if (std::abs(p - static_cast<double>(n)) < 1e-12)
        return std::pow(std::log(volG) - std::log(volF), 1.0 - n);
    double e = (p - n) / (n * (p - 1.0));
    return std::pow(std::abs(std::pow(volG, e) - std::pow(volF, e)), 1.0 - p);
}

} // namespace isoperm
