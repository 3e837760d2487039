// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion.  Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "isoperm/elliptic.hpp"
#include "isoperm/io.hpp"
#include "isoperm/quadrature.hpp"
#include "isoperm/special.hpp"
#include "isoperm/verifier.hpp"

using namespace isoperm;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int idx, const std::string& what, bool ok, double seconds, double budget) {
    bool in_budget = budget <= 0.0 || seconds < budget;
    bool pass = ok && in_budget;
    if (!pass) ++g_failures;
    std::printf("[%s] %2d. %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", idx, what.c_str(), seconds,
                in_budget ? "" : " OVER BUDGET");
    std::fflush(stdout);
}

StepFunction brute_force_rearrangement(const WeightedSample& f) {
    std::vector<std::size_t> idx(f.atoms.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(f.atoms[a].value) > std::abs(f.atoms[b].value);
    });
    std::vector<double> breaks, values;
    double acc = 0.0;
    for (std::size_t k : idx) {
        acc += f.atoms[k].weight;
        double v = std::abs(f.atoms[k].value);
        if (!values.empty() && values.back() == v) breaks.back() = acc;
        else {
            breaks.push_back(acc);
            values.push_back(v);
        }
    }
    return StepFunction(breaks, values);
}

bool files_identical(const fs::path& a, const fs::path& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    return !sa.empty() && sa == sb;
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli_bin = argc > 1 ? argv[1] : "";

    { // 1. gaussian profile value and tail asymptote
        Timer tm;
        bool ok = std::abs(gaussian_profile(0.5) - 0.39894228040) < 1e-9;
        double t = 1e-10;
        double ratio = gaussian_profile(t) / (t * std::sqrt(2.0 * std::log(1.0 / t)));
        ok = ok && ratio >= 0.9 && ratio <= 1.1;
        report(1, "gaussian profile: center value 1e-9, tail ratio in [0.9,1.1]", ok,
               tm.seconds(), 1.0);
    }

    { // 2. sphere closed form, oracle derived symbolically from the cap CDF
        Timer tm;
        double worst = 0.0;
        for (int i = 1; i < 1000; ++i) {
            double t = i / 1000.0;
            worst = std::max(worst, std::abs(sphere_profile(2, t) - std::sqrt(t * (1.0 - t))));
        }
        report(2, "sphere n=2 vs sqrt(t(1-t)) within 1e-8 on the 1e3 grid", worst < 1e-8,
               tm.seconds(), 1.0);
    }

    { // 3. rearrangement oracle + indicator maximal-average identity
        Timer tm;
        std::mt19937_64 rng(777u);
        std::uniform_int_distribution<int> n_atoms(1, 20);
        std::uniform_real_distribution<double> val(-3.0, 3.0), wgt(0.01, 1.0);
        bool ok = true;
        for (int rep = 0; rep < 1000 && ok; ++rep) {
            WeightedSample s;
            int n = n_atoms(rng);
            for (int i = 0; i < n; ++i) s.atoms.push_back({val(rng), wgt(rng)});
            ok = decreasing_rearrangement(s) == brute_force_rearrangement(s);
        }
        StepFunction chi = indicator_step(0.25);
        ok = ok && double_star(chi, 0.125) == 1.0;
        ok = ok && double_star(chi, 0.5) == 0.5;
        ok = ok && double_star(chi, 1.0) == 0.25;
        report(3, "rearrangement equals the sort oracle exactly; (chi)** = min(1,r/t)", ok,
               tm.seconds(), 0.0);
    }

    { // 4. classical Hardy constant and the Boyd predicate
        Timer tm;
        auto est = opnorm_lower(OperatorSpec::parse("P"), RISpace::Lp(2), RISpace::Lp(2));
        bool ok = est.lower_bound >= 1.8 && est.lower_bound <= 2.0 && !est.unbounded;
        ok = ok && boundedness_predicate(OperatorSpec::parse("P"), RISpace::Lp(2)) ==
                       Verdict::bounded;
        report(4, "P on L2: lower bound in [1.8,2.0], predicate bounded", ok, tm.seconds(), 5.0);
    }

    { // 5. first-order oscillation record on the gaussian corpus, n = 1,2,3
        Timer tm;
        bool ok = true;
        auto mu = gaussian_measure_spec();
        double ledoux_ratio_x1 = 0.0;
        for (int n = 1; n <= 3 && ok; ++n) {
            int nodes = n == 1 ? 4001 : (n == 2 ? 97 : 37);
            GridField box = product_measure_box(*mu.one_dim, n, 5.5, nodes);
            for (const auto& member : builtin_corpus(n)) {
                GridField f = box;
                f.fill(member.f);
                auto suite = check_first_order(f, mu, Profile::gaussian());
                for (const auto& r : suite.records) {
                    if (r.skipped) continue;
                    if (r.name == "oscillation" && !r.pass) ok = false;
                    if (r.name == "ledoux") {
                        if (!r.pass) ok = false;
                        if (member.name == "x1" && n == 2)
                            ledoux_ratio_x1 = r.lhs[0] / r.rhs[0];
                    }
                }
            }
        }
        ok = ok && ledoux_ratio_x1 >= 0.95;
        report(5, "oscillation record within 1e-4 rel on gamma_n corpus; x1 near-extremal", ok,
               tm.seconds(), 60.0);
    }

    { // 6. model-rearrangement comparison with constant 1 on the gaussian corpus
        Timer tm;
        bool ok = true;
        auto m = std::make_shared<Measure1D>(Measure1D::gaussian());
        GridField box = product_measure_box(*m, 2, 5.5, 97);
        for (const auto& member : builtin_corpus(2)) {
            GridField f = box;
            f.fill(member.f);
            auto r = check_polya_szego_model(f, *m, 1.0); // gate throws on failure
            if (!r.pass) ok = false;
        }
        report(6, "model rearrangement: grad integrals within 2%, equimeasurable", ok,
               tm.seconds(), 60.0);
    }

    { // 7. median-vs-mean sandwich on 200 random unit-mass samples
        Timer tm;
        std::mt19937_64 rng(3141u);
        std::uniform_real_distribution<double> val(-3.0, 3.0), wgt(0.05, 1.0);
        bool ok = true;
        for (int rep = 0; rep < 200 && ok; ++rep) {
            WeightedSample f;
            double acc = 0.0;
            for (int i = 0; i < 40; ++i) {
                f.atoms.push_back({val(rng), wgt(rng)});
                acc += f.atoms.back().weight;
            }
            for (auto& a : f.atoms) a.weight /= acc;
            double mean = 0.0;
            for (auto& a : f.atoms) mean += a.value * a.weight;
            double med = median(f);
            WeightedSample fm = f, fc = f;
            for (auto& a : fm.atoms) a.value -= med;
            for (auto& a : fc.atoms) a.value -= mean;
            auto fms = decreasing_rearrangement(fm);
            auto fcs = decreasing_rearrangement(fc);
            for (const RISpace& X : {RISpace::Lp(1), RISpace::Lp(2), RISpace::Linf()}) {
                double nm = norm(X, fms), nc = norm(X, fcs);
                if (!(0.5 * nc <= nm * (1 + 1e-12) && nm <= 3.0 * nc * (1 + 1e-12))) ok = false;
            }
        }
        report(7, "median sandwich: factors 1/2 and 3 on 200 random samples", ok, tm.seconds(),
               0.0);
    }

    { // 8. tail condition: sphere passes with c <= 2.05, gaussian diverges
        Timer tm;
        auto grid_to = [](double lo) {
            std::vector<double> g;
            for (int i = 0; i < 160; ++i)
                g.push_back(lo * std::pow(0.5 / lo, i / 159.0));
            return g;
        };
        auto sph = check_concon(Profile::sphere(2), grid_to(1e-6));
        bool ok = sph.holds && sph.c_est <= 2.05;
        auto g3 = check_concon(Profile::gaussian(), grid_to(1e-3));
        auto g9 = check_concon(Profile::gaussian(), grid_to(1e-9));
        ok = ok && g9.c_est / g3.c_est >= 2.0;
        report(8, "tail condition: sphere c<=2.05 holds; gaussian divergence witnessed", ok,
               tm.seconds(), 0.0);
    }

    { // 9. elliptic sharpness against the explicit comparison solution
        Timer tm;
        EllipticProblem prob;
        prob.profile = Profile::gaussian();
        prob.mass_G = 0.5;
        prob.datum = StepFunction({0.5}, {1.0});
        bool ok = true;
        for (int i = 0; i <= 40; ++i) {
            double t = 1e-4 * std::pow(0.49 / 1e-4, i / 40.0);
            double B = solution_bound_at(prob, t);
            double r = normal_quantile(0.5);
            double x = normal_quantile(t);
            double v = integrate([](double u) { return normal_cdf(u) / normal_pdf(u); }, x, r,
                                 1e-11);
            if (std::abs(v - B) > 1e-5 * B) ok = false;
            double grad_true = (0.5 - t) / normal_pdf(normal_quantile(0.5 - t));
            if (gradient_bound(prob, t) < grad_true * (1 - 1e-9)) ok = false;
        }
        report(9, "elliptic bound matches the explicit solution to 1e-5; gradient dominates",
               ok, tm.seconds(), 30.0);
    }

    { // 10. Boyd indices
        Timer tm;
        bool ok = true;
        for (double p : {1.5, 2.0, 4.0}) {
            auto idx = boyd_indices(RISpace::Lp(p));
            if (std::abs(idx.lower - 1.0 / p) > 0.03 || std::abs(idx.upper - 1.0 / p) > 0.03)
                ok = false;
        }
        auto inf_idx = boyd_indices(RISpace::Linf());
        if (inf_idx.lower > 0.03 || inf_idx.upper > 0.03) ok = false;
        report(10, "Boyd indices within 0.03 of (1/p,1/p) and (0,0)", ok, tm.seconds(), 0.0);
    }

    { // 11. cheeger suite forward/reverse and the quadratic refusal
        Timer tm;
        auto rep = cheeger_suite(Profile::cheeger_linear());
        bool ok = rep.e1_holds && !rep.qi_l2.unbounded && !rep.qi_expl.unbounded;
        ok = ok && rep.reverse_constant >= 1.0 / 8.0 && rep.reverse_constant <= 1.0;
        std::vector<double> t, I;
        for (int i = 0; i <= 900; ++i) {
            double x = std::pow(10.0, -9.0 + 9.0 * i / 900.0);
            t.push_back(x);
            I.push_back(x * x);
        }
        auto rep2 = cheeger_suite(Profile::tabulated(t, I));
        ok = ok && !rep2.e1_holds;
        report(11, "cheeger: forward checks pass, reverse in [1/8,1]; quadratic refused", ok,
               tm.seconds(), 0.0);
    }

    { // 12. dimension-free cube inequality, q = 2, n = 2..5
        Timer tm;
        bool ok = true;
        double first_const = 0.0;
        for (int n = 2; n <= 5; ++n) {
            auto rep = triebel_check(2.0, n);
            if (n == 2) first_const = rep.transferred_constant;
            if (std::memcmp(&first_const, &rep.transferred_constant, sizeof(double)) != 0)
                ok = false;
            for (const auto& r : rep.suite.records)
                if (!r.pass) ok = false;
        }
        report(12, "cube log-Sobolev form holds for n=2..5 with a bit-identical constant", ok,
               tm.seconds(), 120.0);
    }

    { // 13. CLI determinism: identical config + seed => identical bytes
        Timer tm;
        bool ok = false;
        if (!cli_bin.empty()) {
            fs::path base = fs::temp_directory_path() / "isoperm_acceptance";
            fs::remove_all(base);
            fs::create_directories(base);
            auto run = [&](const std::string& out) {
                std::string cmd = cli_bin + " --out " + (base / out).string() +
                                  " --seed 42 verify --suite thm31 --measure gaussian --n 2 " +
                                  "--corpus builtin --grid 49 > /dev/null 2>&1";
                return std::system(cmd.c_str());
            };
            int rc1 = run("a");
            int rc2 = run("b");
            ok = rc1 == rc2 && files_identical(base / "a/records.csv", base / "b/records.csv") &&
                 files_identical(base / "a/summary.json", base / "b/summary.json");
        }
        report(13, "CLI determinism: byte-identical CSV/JSON across two seeded runs", ok,
               tm.seconds(), 0.0);
    }

    if (g_failures == 0) std::printf("acceptance: all 13 criteria passed\n");
    else std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
