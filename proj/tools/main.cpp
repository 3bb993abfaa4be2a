#include <array>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bosegas/bogoliubov.hpp"
#include "bosegas/commutator.hpp"
#include "bosegas/common.hpp"
#include "bosegas/fock.hpp"
#include "bosegas/lattice.hpp"
#include "bosegas/potential.hpp"
#include "bosegas/scattering.hpp"
#include "cli_support.hpp"

namespace bosegas::cli {
namespace {

std::string out_path(const run_config& cfg, const char* name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

struct solved_modes {
    potential_spec spec;
    mode_set set;
    scattering_solution sol;
};

solved_modes solve_on_modes(const run_config& cfg, long long n) {
    solved_modes s;
    s.spec = cfg.make_potential(n);
    s.set = enumerate_shell(cfg.p_max);
    s.sol = solve_neumann(s.spec, cfg.ell);
    eta_coefficients(s.sol, s.set);
    return s;
}

quadratic_coeffs full_coeffs(const solved_modes& s) {
    quadratic_coeffs qc = fg_coeffs(s.spec, s.sol, s.set);
    ap_defect(qc, s.spec);
    tau_coeffs(qc);
    return qc;
}

double nd(long long n) { return static_cast<double>(n); }

int cmd_scatter(const run_config& cfg) {
    cfg.validate();
    const long long n = cfg.n_list.front();
    const solved_modes s = solve_on_modes(cfg, n);

    mode_set targets;
    targets.cutoff_radius = 0.5 * cfg.p_max;
    for (const momentum& p : s.set)
        if (p.norm() <= targets.cutoff_radius) targets.momenta.push_back(p);
    const std::vector<double> residuals = scattering_residuals(s.sol, s.spec, s.set, targets);
    double max_residual = 0.0;
    for (double r : residuals) max_residual = std::max(max_residual, std::abs(r));

    nlohmann::json body;
    body["n_particles"] = n;
    body["ell"] = s.sol.ell;
    body["lambda"] = s.sol.lambda;
    body["eta0_tilde"] = s.sol.eta0_tilde;
    body["mode_count"] = s.set.size();
    body["max_residual"] = max_residual;
    nlohmann::json eta = nlohmann::json::array();
    for (std::size_t i = 0; i < s.set.size(); ++i) {
        const momentum& p = s.set.momenta[i];
        eta.push_back({p.n[0], p.n[1], p.n[2], s.sol.eta[i]});
    }
    body["eta"] = eta;
    write_json_report(out_path(cfg, "scatter.json"), cfg, body);

    csv_table t;
    t.notes = {"max_residual " + format_float(max_residual)};
    t.columns = {"n1", "n2", "n3", "p_abs", "eta", "residual"};
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const momentum& p = targets.momenta[i];
        const auto j = static_cast<std::size_t>(s.set.index_of(p));
        t.rows.push_back({double(p.n[0]), double(p.n[1]), double(p.n[2]), p.norm(),
                          s.sol.eta[j], residuals[i]});
    }
    write_csv(out_path(cfg, "residuals.csv"), cfg, t);

    std::cout << "wrote " << out_path(cfg, "scatter.json") << " and residuals.csv (lambda="
              << format_float(s.sol.lambda) << ", max_residual=" << format_float(max_residual)
              << ")\n";
    return 0;
}

int cmd_coeffs(const run_config& cfg) {
    cfg.validate();
    const solved_modes s = solve_on_modes(cfg, cfg.n_list.front());
    const quadratic_coeffs qc = full_coeffs(s);

    csv_table t;
    t.notes = {"conv_tail " + format_float(qc.conv_tail),
               "max_identity_residual " + format_float(qc.max_identity_residual),
               "max_gf_ratio " + format_float(qc.max_gf_ratio)};
    t.columns = {"n1", "n2", "n3", "p_sq", "f", "g", "s", "a", "tau", "sigma", "gamma", "vhat"};
    for (std::size_t i = 0; i < qc.size(); ++i) {
        const momentum& p = qc.modes.momenta[i];
        t.rows.push_back({double(p.n[0]), double(p.n[1]), double(p.n[2]), p.norm_sq(),
                          qc.f_p[i], qc.g_p[i], qc.s_p[i], qc.a_p[i], qc.tau[i], qc.sigma[i],
                          qc.gamma[i], qc.vhat_p[i]});
    }
    write_csv(out_path(cfg, "coeffs.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "coeffs.csv") << " (" << qc.size()
              << " modes, max_gf_ratio=" << format_float(qc.max_gf_ratio) << ")\n";
    return 0;
}

int cmd_energy(const run_config& cfg) {
    cfg.validate();
    nlohmann::json runs = nlohmann::json::array();
    csv_table t;
    t.columns = {"n", "lambda", "c_n", "diag_shift", "e_direct", "a_n", "e_asymptotic"};
    for (long long n : cfg.n_list) {
        const solved_modes s = solve_on_modes(cfg, n);
        const quadratic_coeffs qc = full_coeffs(s);
        const energy_report rep = ground_energy(s.spec, s.sol, qc);
        nlohmann::json r;
        r["n"] = n;
        r["lambda"] = s.sol.lambda;
        r["c_n"] = rep.c_n;
        r["c_n_tail"] = rep.c_n_tail;
        r["diag_shift"] = rep.diag_shift;
        r["e_direct"] = rep.e_direct;
        r["born_terms"] = rep.born_terms;
        r["born_tails"] = rep.born_tails;
        r["a_n"] = rep.a_n;
        r["asym_sum"] = rep.asym_sum;
        r["asym_tail"] = rep.asym_tail;
        r["e_asymptotic"] = rep.e_asymptotic;
        r["conv_tail"] = qc.conv_tail;
        r["max_identity_residual"] = qc.max_identity_residual;
        runs.push_back(r);
        t.rows.push_back({nd(n), s.sol.lambda, rep.c_n, rep.diag_shift, rep.e_direct, rep.a_n,
                          rep.e_asymptotic});
    }
    nlohmann::json body;
    body["runs"] = runs;
    write_json_report(out_path(cfg, "energy.json"), cfg, body);
    write_csv(out_path(cfg, "energy.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "energy.json") << " and energy.csv ("
              << cfg.n_list.size() << " runs)\n";
    return 0;
}

int cmd_born(const run_config& cfg) {
    cfg.validate();
    const potential_spec spec = cfg.make_potential(cfg.n_list.front());
    born_result br;
    if (cfg.method == "radial") {
        br = born_series_radial(spec, cfg.k_max);
    } else {
        br = born_series(spec, enumerate_shell(cfg.p_max), cfg.k_max);
    }
    csv_table t;
    if (cfg.beta > 0.0) {
        const int m = mbeta(cfg.beta);
        t.notes.push_back("m_beta " + std::to_string(m));
        if (cfg.k_max < m)
            t.notes.push_back("warning: k_max " + std::to_string(cfg.k_max) +
                              " below m_beta " + std::to_string(m));
    }
    t.columns = {"k", "value", "tail"};
    for (std::size_t k = 0; k < br.terms.size(); ++k)
        t.rows.push_back({double(k + 1), br.terms[k], br.tails[k]});
    write_csv(out_path(cfg, "born.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "born.csv") << " (" << br.terms.size() << " terms, "
              << cfg.method << ")\n";
    return 0;
}

int cmd_spectrum(const run_config& cfg) {
    cfg.validate();
    const potential_spec spec = cfg.make_potential(cfg.n_list.front());
    const mode_set set = enumerate_shell(cfg.p_max);
    const double kv0 = spec.kappa * hat_zero(spec);
    csv_table t;
    t.notes = {"kappa_vhat0 " + format_float(kv0)};
    t.columns = {"n1", "n2", "n3", "p_sq", "eps"};
    for (const momentum& p : set)
        t.rows.push_back({double(p.n[0]), double(p.n[1]), double(p.n[2]), p.norm_sq(),
                          dispersion(p, kv0)});
    write_csv(out_path(cfg, "spectrum.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "spectrum.csv") << " (" << set.size() << " modes)\n";
    return 0;
}

int cmd_ed(const run_config& cfg) {
    cfg.validate();
    const long long n = cfg.n_list.front();
    const solved_modes s = solve_on_modes(cfg, n);
    const quadratic_coeffs qc = full_coeffs(s);
    const fock_basis basis = build_basis(s.set, n, cfg.n_max);
    const ed_comparison cmp = ed_compare(s.spec, s.sol, qc, basis, cfg.eigencount);

    csv_table t;
    t.notes = {"basis_dim " + std::to_string(basis.dim()),
               "lambda0 " + format_float(cmp.lambda0),
               "quadratic_constant " + format_float(cmp.quadratic_constant),
               "constant_err " + format_float(cmp.constant_err)};
    t.columns = {"level", "ed_gap", "predicted", "abs_err"};
    for (const ed_row& r : cmp.rows)
        t.rows.push_back({double(r.level), r.ed_gap, r.predicted, r.abs_err});
    write_csv(out_path(cfg, "ed.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "ed.csv") << " (dim " << basis.dim()
              << ", constant_err=" << format_float(cmp.constant_err) << ")\n";
    return 0;
}

int cmd_expand(const run_config& cfg) {
    cfg.validate();
    const term_list list = expand_ad(cfg.depth);
    const structure_report rep = verify_structure(list);
    if (!rep.ok)
        throw numerical_error("expand: structural validation failed: " + rep.violations.front());
    write_lines(out_path(cfg, "expand.txt"), cfg,
                {"depth " + std::to_string(cfg.depth),
                 "terms " + std::to_string(list.terms.size())},
                to_text(list));
    std::cout << "wrote " << out_path(cfg, "expand.txt") << " (" << list.terms.size()
              << " terms)\n";

    if (!cfg.evaluate) return 0;
    const long long n = cfg.n_list.front();
    const solved_modes s = solve_on_modes(cfg, n);
    const fock_basis basis = build_basis(s.set, n, cfg.n_max);
    const momentum p = s.set.momenta.front();
    const sparse_matrix mat = evaluate_sum(list, s.sol.eta, p, basis);
    csv_table t;
    t.notes = {"basis_dim " + std::to_string(basis.dim()), "external " + to_string(p)};
    t.columns = {"row", "col", "value"};
    for (const coordinate_entry& e : coordinate_entries(mat))
        t.rows.push_back({double(e.row), double(e.col), e.value});
    write_csv(out_path(cfg, "expand_matrix.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "expand_matrix.csv") << " (dim " << basis.dim()
              << ")\n";
    return 0;
}

int cmd_study(const run_config& cfg) {
    cfg.validate();
    if (!(cfg.kappa > 0.0)) throw config_error("study: kappa must be positive");
    if (cfg.n_list.size() < 2) throw config_error("study: need at least two --n values");
    std::vector<double> ns;
    for (long long n : cfg.n_list) ns.push_back(nd(n));

    nlohmann::json body;
    body["kind"] = cfg.kind;
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json fits = nlohmann::json::array();
    csv_table t;

    if (cfg.kind == "lambda") {
        const double vhat0 = hat_zero(cfg.make_potential(cfg.n_list.front()));
        std::vector<double> deviations;
        t.columns = {"n", "lambda", "scaled_ratio", "deviation"};
        for (long long n : cfg.n_list) {
            const potential_spec spec = cfg.make_potential(n);
            const scattering_solution sol = solve_neumann(spec, cfg.ell);
            const double scaled = nd(n) * sol.lambda * 8.0 * pi * std::pow(cfg.ell, 3) /
                                  (3.0 * cfg.kappa * vhat0);
            const double dev = std::abs(scaled - 1.0);
            deviations.push_back(dev);
            rows.push_back({{"n", n},
                            {"lambda", sol.lambda},
                            {"scaled_ratio", scaled},
                            {"deviation", dev}});
            t.rows.push_back({nd(n), sol.lambda, scaled, dev});
        }
        const loglog_fit fit = fit_loglog(ns, deviations);
        fits.push_back({{"name", "lambda_deviation"},
                        {"exponent", fit.exponent},
                        {"r2", fit.r2},
                        {"reference", cfg.beta - 1.0}});
        t.notes = {"fit lambda_deviation exponent " + format_float(fit.exponent) + " r2 " +
                   format_float(fit.r2) + " reference " + format_float(cfg.beta - 1.0)};
    } else {
        t.columns = {"n"};
        for (int k = 1; k <= cfg.k_max; ++k) t.columns.push_back("term_" + std::to_string(k));
        std::vector<std::vector<double>> magnitudes(static_cast<std::size_t>(cfg.k_max));
        for (long long n : cfg.n_list) {
            const potential_spec spec = cfg.make_potential(n);
            const born_result br = born_series_radial(spec, cfg.k_max);
            nlohmann::json row;
            row["n"] = n;
            row["terms"] = br.terms;
            rows.push_back(row);
            std::vector<double> csv_row = {nd(n)};
            for (std::size_t k = 0; k < br.terms.size(); ++k) {
                magnitudes[k].push_back(std::abs(br.terms[k]));
                csv_row.push_back(br.terms[k]);
            }
            t.rows.push_back(csv_row);
        }
        for (std::size_t k = 0; k < magnitudes.size(); ++k) {
            const loglog_fit fit = fit_loglog(ns, magnitudes[k]);
            const double reference = static_cast<double>(k + 1) * (cfg.beta - 1.0);
            fits.push_back({{"name", "born_term_" + std::to_string(k + 1)},
                            {"exponent", fit.exponent},
                            {"r2", fit.r2},
                            {"reference", reference}});
            t.notes.push_back("fit born_term_" + std::to_string(k + 1) + " exponent " +
                              format_float(fit.exponent) + " r2 " + format_float(fit.r2) +
                              " reference " + format_float(reference));
        }
    }
    body["rows"] = rows;
    body["fits"] = fits;
    write_json_report(out_path(cfg, "study.json"), cfg, body);
    write_csv(out_path(cfg, "study.csv"), cfg, t);
    std::cout << "wrote " << out_path(cfg, "study.json") << " and study.csv ("
              << fits.size() << " fits)\n";
    return 0;
}

struct command {
    CLI::App* app = nullptr;
    run_config cfg;
    int (*run)(const run_config&) = nullptr;
};

void add_common_flags(CLI::App* sub, run_config& cfg) {
    sub->add_option("--shape", cfg.shape, "potential shape: ball | csv")->capture_default_str();
    sub->add_option("--v0", cfg.v0, "ball height")->capture_default_str();
    sub->add_option("--radius", cfg.radius, "ball support radius")->capture_default_str();
    sub->add_option("--potential-csv", cfg.potential_csv, "two-column r,V(r) profile path");
    sub->add_option("--kappa", cfg.kappa, "coupling")->capture_default_str();
    sub->add_option("--beta", cfg.beta, "scaling exponent in [0,1)")->capture_default_str();
    sub->add_option("--n", cfg.n_list, "particle number; repeat for scans")
        ->capture_default_str();
    sub->add_option("--ell", cfg.ell, "scattering ball radius, in (0, 1/2)")
        ->capture_default_str();
    sub->add_option("--pmax", cfg.p_max, "momentum cutoff of the mode set")
        ->capture_default_str();
    sub->add_option("--nmax", cfg.n_max, "occupation cap of the truncated basis")
        ->capture_default_str();
    sub->add_option("--m", cfg.eigencount, "eigenvalue count")->capture_default_str();
    sub->add_option("--kmax", cfg.k_max, "Born term count")->capture_default_str();
    sub->add_option("--depth", cfg.depth, "commutator expansion depth")->capture_default_str();
    sub->add_option("--method", cfg.method, "born evaluation: lattice | radial")
        ->capture_default_str();
    sub->add_option("--kind", cfg.kind, "study kind: lambda | born")->capture_default_str();
    sub->add_flag("--evaluate", cfg.evaluate, "expand: also export the evaluated matrix");
    sub->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed recorded in outputs")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "reserved; outputs never depend on it")
        ->capture_default_str();
}

} // namespace
} // namespace bosegas::cli

int main(int argc, char** argv) {
    using namespace bosegas;
    using namespace bosegas::cli;

    CLI::App app{"scaled Bose gas studies: scattering, quadratic diagonalization, Born "
                 "series, exact diagonalization, commutator expansions"};
    app.require_subcommand(1);

    std::array<command, 8> cmds;
    const std::array<std::tuple<const char*, const char*, int (*)(const run_config&)>, 8> defs =
        {{{"scatter", "solve the two-body Neumann problem; export eta and residuals",
           cmd_scatter},
          {"coeffs", "quadratic-form coefficient table with identity defects", cmd_coeffs},
          {"energy", "ground-state energy report, one run per --n", cmd_energy},
          {"born", "Born series terms with cutoff tails", cmd_born},
          {"spectrum", "excitation dispersion table", cmd_spectrum},
          {"ed", "exact diagonalization against the quadratic predictions", cmd_ed},
          {"expand", "commutator term expansion golden file", cmd_expand},
          {"study", "N-scan with fitted exponents and r^2", cmd_study}}};

    for (std::size_t i = 0; i < cmds.size(); ++i) {
        cmds[i].app = app.add_subcommand(std::get<0>(defs[i]), std::get<1>(defs[i]));
        cmds[i].run = std::get<2>(defs[i]);
    }
    // per-command defaults tuned to small truncated bases
    cmds[5].cfg.p_max = two_pi;
    cmds[5].cfg.n_list = {50};
    cmds[6].cfg.p_max = two_pi;
    cmds[6].cfg.n_list = {50};
    cmds[6].cfg.n_max = 6;
    cmds[7].cfg.n_list = {1000, 10000, 100000};
    for (command& c : cmds) add_common_flags(c.app, c.cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    for (command& c : cmds) {
        if (!c.app->parsed()) continue;
        try {
            return c.run(c.cfg);
        } catch (const config_error& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 2;
        } catch (const numerical_error& e) {
            std::cerr << "numerical error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return 2;
}
