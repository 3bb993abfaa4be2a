#include "cli_support.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bosegas/common.hpp"
#include "bosegas/version.hpp"

namespace bosegas::cli {

void run_config::validate() const {
    if (shape != "ball" && shape != "csv") throw config_error("cli: shape must be ball or csv");
    if (shape == "csv" && potential_csv.empty())
        throw config_error("cli: shape csv needs --potential-csv");
    if (shape == "ball" && !potential_csv.empty())
        throw config_error("cli: --potential-csv requires --shape csv");
    if (n_list.empty()) throw config_error("cli: at least one --n is required");
    for (long long n : n_list) {
        if (n < 2) throw config_error("cli: every --n must be >= 2");
    }
    if (!(ell > 0.0) || !(ell < 0.5)) throw config_error("cli: --ell must lie in (0, 1/2)");
    if (!(p_max > 0.0)) throw config_error("cli: --pmax must be positive");
    if (n_max < 0) throw config_error("cli: --nmax must be >= 0");
    if (eigencount < 1) throw config_error("cli: --m must be >= 1");
    if (k_max < 1) throw config_error("cli: --kmax must be >= 1");
    if (depth < 0) throw config_error("cli: --depth must be >= 0");
    if (method != "lattice" && method != "radial")
        throw config_error("cli: --method must be lattice or radial");
    if (kind != "lambda" && kind != "born")
        throw config_error("cli: --kind must be lambda or born");
    if (out_dir.empty()) throw config_error("cli: --out must not be empty");
    if (threads < 1) throw config_error("cli: --threads must be >= 1");
    make_potential(n_list.front()).validate();
}

potential_spec run_config::make_potential(long long n) const {
    if (shape == "csv") return load_tabulated_csv(potential_csv, kappa, beta, n);
    return ball_potential(v0, radius, kappa, beta, n);
}

nlohmann::json run_config::echo() const {
    nlohmann::json j;
    j["shape"] = shape;
    j["v0"] = v0;
    j["radius"] = radius;
    j["potential_csv"] = potential_csv;
    j["kappa"] = kappa;
    j["beta"] = beta;
    j["n"] = n_list;
    j["ell"] = ell;
    j["p_max"] = p_max;
    j["n_max"] = n_max;
    j["m"] = eigencount;
    j["k_max"] = k_max;
    j["depth"] = depth;
    j["method"] = method;
    j["kind"] = kind;
    j["evaluate"] = evaluate;
    j["out"] = out_dir;
    j["seed"] = seed;
    j["threads"] = threads;
    return j;
}

loglog_fit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw config_error("fit: need two or more points");
    std::vector<double> lx(xs.size()), ly(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw config_error("fit: abscissae must be positive");
        if (!(ys[i] > 0.0)) throw numerical_error("fit: nonpositive value in log fit");
        lx[i] = std::log(xs[i]);
        ly[i] = std::log(ys[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(ly.size());
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw config_error("fit: abscissae must be distinct");
    loglog_fit fit;
    fit.exponent = sxy / sxx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw config_error("cli: cannot write " + path);
    return out;
}

void write_header(std::ofstream& out, const run_config& cfg,
                  const std::vector<std::string>& notes) {
    out << "# bosegas " << version_string << "\n";
    out << "# config " << cfg.echo().dump() << "\n";
    for (const std::string& n : notes) out << "# " << n << "\n";
}

} // namespace

void write_json_report(const std::string& path, const run_config& cfg, nlohmann::json body) {
    body["config"] = cfg.echo();
    body["version"] = version_string;
    std::ofstream out = open_out(path);
    out << body.dump(2) << "\n";
}

void write_csv(const std::string& path, const run_config& cfg, const csv_table& table) {
    std::ofstream out = open_out(path);
    write_header(out, cfg, table.notes);
    out << "# columns:";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i == 0 ? " " : ",") << table.columns[i];
    out << "\n";
    for (const std::vector<double>& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i == 0 ? "" : ",") << format_float(row[i]);
        out << "\n";
    }
}

void write_lines(const std::string& path, const run_config& cfg,
                 const std::vector<std::string>& notes, const std::string& payload) {
    std::ofstream out = open_out(path);
    write_header(out, cfg, notes);
    out << payload;
}

} // namespace bosegas::cli
