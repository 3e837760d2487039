#include "isoperm/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace isoperm {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // '\n' endings on every platform
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!line.empty() && (std::isalpha(static_cast<unsigned char>(line[0])) || line[0] == '#'))
            continue; // header or comment
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

void write_profile_csv(const std::string& path, const Profile& I,
                       const std::vector<double>& grid) {
    auto out = open_out(path);
    out << "t,I\n";
    for (double t : grid) out << format_double(t) << "," << format_double(I(t)) << "\n";
}

void write_step_csv(const std::string& path, const StepFunction& f) {
    auto out = open_out(path);
    out << "breakpoint,value\n";
    for (std::size_t i = 0; i < f.pieces(); ++i)
        out << format_double(f.breakpoints()[i]) << "," << format_double(f.values()[i]) << "\n";
}

StepFunction read_step_csv(const std::string& path) {
    auto rows = read_numeric_csv(path);
    std::vector<double> b, v;
    for (auto& row : rows) {
        if (row.size() != 2) throw std::runtime_error("step csv: expected 2 columns");
        b.push_back(row[0]);
        v.push_back(row[1]);
    }
    return StepFunction(std::move(b), std::move(v));
}

WeightedSample read_sample_csv(const std::string& path) {
    auto rows = read_numeric_csv(path);
    WeightedSample s;
    for (auto& row : rows) {
        if (row.size() < 2) throw std::runtime_error("sample csv: expected >= 2 columns");
        s.atoms.push_back({row[row.size() - 2], row[row.size() - 1]});
    }
    s.validate();
    return s;
}

Profile read_profile_csv(const std::string& path) {
    auto rows = read_numeric_csv(path);
    std::vector<double> t, I;
    for (auto& row : rows) {
        if (row.size() != 2) throw std::runtime_error("profile csv: expected 2 columns");
        t.push_back(row[0]);
        I.push_back(row[1]);
    }
    return Profile::tabulated(std::move(t), std::move(I), "csv");
}

void write_records_csv(const std::string& path, const VerificationSuite& suite) {
    auto out = open_out(path);
    out << "record,t,lhs,rhs,slack\n";
    for (const auto& r : suite.records) {
        if (r.skipped) continue;
        for (std::size_t i = 0; i < r.t_grid.size(); ++i)
            out << r.name << "," << format_double(r.t_grid[i]) << "," << format_double(r.lhs[i])
                << "," << format_double(r.rhs[i]) << ","
                << format_double(r.rhs[i] - r.lhs[i]) << "\n";
    }
}

void write_suite_json(const std::string& path, const VerificationSuite& suite) {
    auto out = open_out(path);
    out << "{\n";
    out << "  \"suite\": \"" << suite.name << "\",\n";
    out << "  \"pass_count\": " << suite.pass_count() << ",\n";
    out << "  \"fail_count\": " << suite.fail_count() << ",\n";
    out << "  \"skip_count\": " << suite.skip_count() << ",\n";
    out << "  \"worst_slack\": " << format_double(suite.worst_slack()) << ",\n";
    out << "  \"records\": [\n";
    for (std::size_t i = 0; i < suite.records.size(); ++i) {
        const auto& r = suite.records[i];
        out << "    {\"name\": \"" << r.name << "\", \"status\": \""
            << (r.skipped ? "skipped" : (r.pass ? "pass" : "fail"))
            << "\", \"min_slack\": " << format_double(r.skipped ? 0.0 : r.min_slack) << "}"
            << (i + 1 < suite.records.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

std::string profile_config(const Profile& I) {
    std::ostringstream out;
    out << "kind=" << to_string(I.kind()) << "\n";
    if (I.dim() > 0) out << "n=" << I.dim() << "\n";
    out << "p=" << format_double(I.param_p()) << "\n";
    out << "alpha=" << format_double(I.param_alpha()) << "\n";
    out << "c=" << format_double(I.multiplier()) << "\n";
    out << "domain_mass=" << format_double(I.domain_mass()) << "\n";
    out << "is_probability=" << (I.is_probability() ? 1 : 0) << "\n";
    return out.str();
}

Profile parse_profile_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("profile config line " + std::to_string(lineno) +
                                     ": expected key=value");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    auto num = [&kv](const std::string& k, double dflt) {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : std::stod(it->second);
    };
    const std::string kind = kv.count("kind") ? kv["kind"] : "gaussian";
    if (kind == "gaussian") return Profile::gaussian();
    if (kind == "cube_gaussian") return Profile::cube_gaussian();
    if (kind == "sphere") return Profile::sphere(static_cast<int>(num("n", 2)));
    if (kind == "euclidean")
        return Profile::euclidean(static_cast<int>(num("n", 2)), num("c", 1.0));
    if (kind == "mu_p_alpha")
        return Profile::mu_p_alpha_estimator(num("p", 2.0), num("alpha", 0.0));
    if (kind == "sodin_pball")
        return Profile::sodin_pball(num("p", 2.0), static_cast<int>(num("n", 2)), num("c", 1.0));
    throw std::runtime_error("profile config: kind '" + kind + "' does not round-trip");
}

YoungFunction read_young_csv(const std::string& path) {
    auto rows = read_numeric_csv(path);
    std::vector<double> t, N;
    for (auto& row : rows) {
        if (row.size() != 2) throw std::runtime_error("young csv: expected 2 columns");
        t.push_back(row[0]);
        N.push_back(row[1]);
    }
    return YoungFunction::tabulated(std::move(t), std::move(N));
}

void write_records_svg(const std::string& path, const VerificationSuite& suite) {
    auto out = open_out(path);
    const int W = 720, H = 220, pad = 36;
    int panels = 0;
    for (const auto& r : suite.records)
        if (!r.skipped && r.t_grid.size() > 1) ++panels;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
        << (H * std::max(panels, 1)) << "\">\n";
    int row = 0;
    for (const auto& r : suite.records) {
        if (r.skipped || r.t_grid.size() < 2) continue;
        double tmin = r.t_grid.front(), tmax = r.t_grid.back();
        double vmax = 1e-300;
        for (std::size_t i = 0; i < r.t_grid.size(); ++i)
            vmax = std::max({vmax, r.lhs[i], r.rhs[i]});
        bool logx = tmin > 0.0 && tmax / tmin > 50.0;
        auto xpix = [&](double t) {
            double u = logx ? (std::log(t / tmin) / std::log(tmax / tmin))
                            : (t - tmin) / (tmax - tmin);
            return pad + u * (W - 2 * pad);
        };
        auto ypix = [&](double v) {
            return row * H + (H - pad) - (v / vmax) * (H - 2 * pad);
        };
        auto polyline = [&](const std::vector<double>& v, const char* color) {
            out << "  <polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
            for (std::size_t i = 0; i < r.t_grid.size(); ++i)
                out << xpix(r.t_grid[i]) << "," << ypix(v[i]) << " ";
            out << "\"/>\n";
        };
        out << "  <text x=\"" << pad << "\" y=\"" << (row * H + 16) << "\" font-size=\"12\">"
            << r.name << (r.pass ? " [pass]" : " [FAIL]") << "</text>\n";
        polyline(r.rhs, "#1f77b4");
        polyline(r.lhs, "#d62728");
        ++row;
    }
    out << "</svg>\n";
}

} // namespace isoperm
