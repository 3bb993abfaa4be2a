#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bosegas/potential.hpp"

namespace bosegas::cli {

// flag set shared by every subcommand; one instance per subcommand so each
// command ships its own defaults
struct run_config {
    std::string shape = "ball"; // ball | csv
    double v0 = 1.0;
    double radius = 1.0;
    std::string potential_csv;

    double kappa = 0.05;
    double beta = 0.5;
    std::vector<long long> n_list = {10000};
    double ell = 0.4;
    double p_max = 4.0 * two_pi;

    int n_max = 4;      // occupation cap of the truncated excitation basis
    int eigencount = 6; // eigenvalues requested from the diagonalizers
    int k_max = 3;      // Born terms
    int depth = 3;      // commutator expansion depth
    std::string method = "lattice"; // born: lattice | radial
    std::string kind = "lambda";    // study: lambda | born
    bool evaluate = false;          // expand: also export the evaluated matrix

    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    unsigned threads = 1; // reserved; results never depend on it

    void validate() const; // cross-field checks; throws config_error
    potential_spec make_potential(long long n) const;
    nlohmann::json echo() const; // every field, embedded in output headers
};

// least-squares slope of log y against log x, with the r^2 of that line;
// every y must be positive
struct loglog_fit {
    double exponent = 0.0;
    double r2 = 0.0;
};
loglog_fit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

std::string format_float(double v); // %.17g, round-trip exact

// JSON report with the config echo and artifact version injected at the top
// level; creates the parent directory, appends a trailing newline
void write_json_report(const std::string& path, const run_config& cfg, nlohmann::json body);

// CSV with '#' header lines (version, config echo, free-form notes, column
// names) and %.17g cells
struct csv_table {
    std::vector<std::string> notes;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::string& path, const run_config& cfg, const csv_table& table);

// golden text file (one payload line per entry) behind the same '#' header
void write_lines(const std::string& path, const run_config& cfg,
                 const std::vector<std::string>& notes, const std::string& payload);

} // namespace bosegas::cli
