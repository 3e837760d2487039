// Batch front-end: build profiles, run rearrangements, execute verification
// suites, estimate Poincare constants, emit elliptic bound tables.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "isoperm/elliptic.hpp"
#include "isoperm/io.hpp"
#include "isoperm/verifier.hpp"

using namespace isoperm;
namespace fs = std::filesystem;

namespace {

int exit_code_from(const VerificationSuite& suite) {
    if (suite.fail_count() > 0) return 1;
    if (suite.skip_count() > 0) return 2;
    return 0;
}

Profile parse_profile_arg(const std::string& kind) {
    if (kind == "gaussian") return Profile::gaussian();
    if (kind == "cheeger") return Profile::cheeger_linear();
    if (kind == "cube") return Profile::cube_gaussian();
    if (kind == "doubleexp")
        return Profile::phi_measure(std::make_shared<Measure1D>(Measure1D::double_exponential()));
    if (kind.rfind("sphere:", 0) == 0) return Profile::sphere(std::stoi(kind.substr(7)));
    if (kind.rfind("euclidean:", 0) == 0) return Profile::euclidean(std::stoi(kind.substr(10)));
    if (kind.rfind("power:", 0) == 0) return Profile::power_law(std::stod(kind.substr(6)));
    if (kind.rfind("mupalpha:", 0) == 0) {
        auto rest = kind.substr(9);
        auto comma = rest.find(',');
        return Profile::mu_p_alpha_estimator(std::stod(rest.substr(0, comma)),
                                             std::stod(rest.substr(comma + 1)));
    }
    if (kind.rfind("csv:", 0) == 0) return read_profile_csv(kind.substr(4));
    throw CLI::ValidationError("--kind", "unknown profile kind '" + kind + "'");
}

MeasureSpec parse_measure_arg(const std::string& m) {
    if (m == "gaussian") return gaussian_measure_spec();
    if (m == "lebesgue") return lebesgue_cube_spec();
    if (m == "doubleexp")
        return phi_measure_spec(std::make_shared<Measure1D>(Measure1D::double_exponential()));
    if (m.rfind("mupalpha:", 0) == 0) {
        auto rest = m.substr(9);
        auto comma = rest.find(',');
        return phi_measure_spec(std::make_shared<Measure1D>(Measure1D::mu_p_alpha(
            std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)))));
    }
    throw CLI::ValidationError("--measure", "unknown measure '" + m + "'");
}

StepFunction parse_datum_arg(const std::string& d, double mass_G) {
    if (d.rfind("const:", 0) == 0)
        return StepFunction({mass_G}, {std::stod(d.substr(6))});
    if (d.rfind("csv:", 0) == 0) return read_step_csv(d.substr(4));
    throw CLI::ValidationError("--datum", "unknown datum '" + d + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"isoperimetric symmetrization toolkit"};
    app.require_subcommand(1);

    std::string out_dir = ".";
    long long seed = 0;
    double tol = 0.0;
    int grid = 0;
    std::string format = "csv";
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "seed for randomized corpora");
    app.add_option("--tol", tol, "tolerance override (0 = defaults)");
    app.add_option("--grid", grid, "grid size override (0 = defaults)");
    app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    auto* cmd_profile = app.add_subcommand("profile", "tabulate and validate a profile");
    std::string kind = "gaussian";
    cmd_profile->add_option("--kind", kind, "gaussian|sphere:N|cheeger|mupalpha:p,a|power:b|"
                                            "euclidean:N|cube|doubleexp|csv:PATH");

    auto* cmd_rearr = app.add_subcommand("rearrange", "decreasing rearrangement of a sample");
    std::string input;
    cmd_rearr->add_option("--input", input, "CSV with columns ...,value,weight")->required();

    auto* cmd_verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite_name = "thm31", measure = "gaussian", corpus = "builtin";
    int dim = 2;
    cmd_verify->add_option("--suite", suite_name, "thm31|polya|second|cheeger|triebel");
    cmd_verify->add_option("--measure", measure, "gaussian|lebesgue|doubleexp|mupalpha:p,a");
    cmd_verify->add_option("--n", dim, "dimension");
    cmd_verify->add_option("--corpus", corpus, "builtin (or csv:PATH for rearrange-only checks)");

    auto* cmd_poincare = app.add_subcommand("poincare", "Poincare constant estimate");
    std::string pk = "gaussian", xs = "Lp(2)", ys = "Lp(2)";
    cmd_poincare->add_option("--profile", pk, "profile kind");
    cmd_poincare->add_option("--X", xs, "gradient-side space");
    cmd_poincare->add_option("--Y", ys, "target space");

    auto* cmd_elliptic = app.add_subcommand("elliptic", "a-priori bound tables");
    std::string ek = "gaussian", datum = "const:1";
    double mass_G = 0.5, pexp = 2.0;
    cmd_elliptic->add_option("--profile", ek, "profile kind");
    cmd_elliptic->add_option("--massG", mass_G, "mu(G)");
    cmd_elliptic->add_option("--datum", datum, "const:V or csv:PATH (f* table)");
    cmd_elliptic->add_option("--p", pexp, "ellipticity exponent");

    CLI11_PARSE(app, argc, argv);
    fs::create_directories(out_dir);
    std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
    (void)rng; // the built-in corpora are deterministic; the seed is recorded

    try {
        if (*cmd_profile) {
            Profile I = parse_profile_arg(kind);
            int n = grid > 0 ? grid : 1024;
            auto g = default_profile_grid(1e-8, n);
            write_profile_csv(out_dir + "/profile.csv", I, g);
            VerificationSuite suite;
            suite.name = "profile:" + kind;
            if (I.is_probability()) {
                auto rep = validate_estimator(I, g, tol > 0 ? tol : 1e-6);
                InequalityRecord r;
                r.name = "estimator_checks";
                r.rel_tolerance = rep.tolerance;
                r.t_grid = {0, 1, 2, 3, 4};
                r.lhs = {rep.zero_at_origin, rep.symmetric, rep.monotone_half, rep.concave,
                         rep.i_over_t_decreasing};
                r.rhs = {rep.tolerance, rep.tolerance, rep.tolerance, rep.tolerance,
                         rep.tolerance};
                r.rel_tolerance = 0.0;
                r.finalize();
                suite.records.push_back(std::move(r));
            }
            write_suite_json(out_dir + "/summary.json", suite);
            std::cout << profile_config(I);
            return exit_code_from(suite);
        }
        if (*cmd_rearr) {
            WeightedSample s = read_sample_csv(input);
            write_step_csv(out_dir + "/fstar.csv", decreasing_rearrangement(s));
            return 0;
        }
        if (*cmd_verify) {
            VerificationSuite all;
            all.name = suite_name;
            if (suite_name == "thm31" || suite_name == "second") {
                MeasureSpec mu = parse_measure_arg(measure);
                Profile I = measure == "lebesgue"
                                ? Profile::euclidean(dim)
                                : (mu.kind == MeasureKind::gaussian_product
                                       ? Profile::gaussian()
                                       : Profile::phi_measure(mu.one_dim));
                int nodes = grid > 0 ? grid : (dim == 1 ? 4001 : (dim == 2 ? 97 : 41));
                GridField box = (mu.kind == MeasureKind::lebesgue_cube)
                                    ? unit_cube(dim, nodes)
                                    : product_measure_box(*mu.one_dim, dim, 5.5, nodes);
                for (const auto& member : builtin_corpus(dim)) {
                    if (mu.kind == MeasureKind::lebesgue_cube && member.name != "bump")
                        continue; // interior level sets required for the volume profile
                    GridField f = box;
                    if (mu.kind == MeasureKind::lebesgue_cube)
                        f.fill([&member](const std::vector<double>& x) {
                            std::vector<double> y(x);
                            for (auto& v : y) v = 4.0 * (v - 0.5); // center the bump
                            return member.f(y);
                        });
                    else
                        f.fill(member.f);
                    VerificationSuite s = suite_name == "thm31" ? check_first_order(f, mu, I)
                                                                : check_second_order(f, mu, I);
                    for (auto& r : s.records) {
                        r.name = member.name + "/" + r.name;
                        all.records.push_back(std::move(r));
                    }
                }
            } else if (suite_name == "polya") {
                MeasureSpec mu = parse_measure_arg(measure);
                if (mu.kind == MeasureKind::lebesgue_cube)
                    throw CLI::ValidationError("--measure", "polya needs a product measure");
                int nodes = grid > 0 ? grid : (dim == 1 ? 2001 : (dim == 2 ? 97 : 41));
                GridField box = product_measure_box(*mu.one_dim, dim, 5.5, nodes);
                for (const auto& member : builtin_corpus(dim)) {
                    GridField f = box;
                    f.fill(member.f);
                    auto r = check_polya_szego_model(f, *mu.one_dim);
                    r.name = member.name + "/" + r.name;
                    all.records.push_back(std::move(r));
                }
            } else if (suite_name == "cheeger") {
                Profile I = parse_profile_arg(measure == "gaussian" ? "gaussian" : measure);
                auto rep = cheeger_suite(I);
                InequalityRecord r;
                r.name = "e1_and_operators";
                r.t_grid = {0, 1, 2};
                r.lhs = {rep.e1_holds ? 0.0 : 1.0, rep.qi_l2.unbounded ? 1.0 : 0.0,
                         rep.qi_expl.unbounded ? 1.0 : 0.0};
                r.rhs = {0.0, 0.0, 0.0};
                r.rel_tolerance = 0.0;
                r.finalize();
                all.records.push_back(std::move(r));
            } else if (suite_name == "triebel") {
                auto rep = triebel_check(2.0, dim, grid);
                all = rep.suite;
                all.name = "triebel";
            } else {
                throw CLI::ValidationError("--suite", "unknown suite '" + suite_name + "'");
            }
            write_records_csv(out_dir + "/records.csv", all);
            write_suite_json(out_dir + "/summary.json", all);
            std::cout << all.name << ": " << all.pass_count() << " pass, " << all.fail_count()
                      << " fail, " << all.skip_count() << " skipped\n";
            return exit_code_from(all);
        }
        if (*cmd_poincare) {
            Profile I = parse_profile_arg(pk);
            auto b = poincare_bound(RISpace::parse(xs), RISpace::parse(ys), I);
            VerificationSuite suite;
            suite.name = "poincare";
            InequalityRecord r;
            r.name = "composed_constant";
            r.t_grid = {0.0};
            r.lhs = {b.unbounded ? 1.0 : 0.0};
            r.rhs = {0.0};
            r.rel_tolerance = 0.0;
            r.finalize();
            suite.records.push_back(std::move(r));
            write_suite_json(out_dir + "/summary.json", suite);
            if (b.unbounded) {
                std::cout << "unbounded (witness " << b.witness << ")\n";
                return 1;
            }
            const char* route = b.route == PoincareRoute::qi_tilde
                                    ? "QItilde"
                                    : (b.route == PoincareRoute::concon ? "concon" : "QI_opnorm");
            std::cout << "C = " << format_double(b.constant) << " route=" << route
                      << " floor=" << format_double(b.qi_opnorm_floor)
                      << " l1_term=" << format_double(b.l1_term) << "\n";
            return 0;
        }
        if (*cmd_elliptic) {
            EllipticProblem prob;
            prob.profile = parse_profile_arg(ek);
            prob.mass_G = mass_G;
            prob.p = pexp;
            prob.datum = parse_datum_arg(datum, mass_G);
            prob.validate();
            int n = grid > 0 ? grid : 200;
            auto out = std::ofstream(out_dir + "/elliptic.csv", std::ios::binary);
            out << "t,u_bound,grad_bound\n";
            for (int i = 1; i < n; ++i) {
                double t = mass_G * i / n;
                out << format_double(t) << "," << format_double(solution_bound_at(prob, t)) << ","
                    << format_double(gradient_bound(prob, t)) << "\n";
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
