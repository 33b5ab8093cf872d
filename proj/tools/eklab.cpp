// Command-line driver: single runs, epsilon sweeps, identity checks,
// GN interpolation checks, and the wave-function oracle comparison.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include <clocale>
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "eklab/config.hpp"
#include "eklab/errors.hpp"
#include "eklab/experiments.hpp"
#include "eklab/identities.hpp"
#include "eklab/io.hpp"

using namespace eklab;

namespace {

KVConfig load_config(const std::string& path) {
    if (path.empty()) return KVConfig::from_string("", config_schema());
    return KVConfig::from_file(path, config_schema());
}

int cmd_simulate(const std::string& config_path, const std::string& out) {
    SimulationSetup setup = setup_from_config(load_config(config_path));
    RunReport report = run_simulation(setup, out);
    const auto& last = report.rows.back();
    std::cout << "simulate: tau=" << fmt_double(setup.tau) << " eps=" << fmt_double(setup.epsilon)
              << " dist_L1=" << fmt_double(last.dist.l1)
              << " dist_Lgamma=" << fmt_double(last.dist.lgamma)
              << " dist_Lambda=" << fmt_double(last.dist.lambda)
              << " dist_gradbeta=" << fmt_double(last.dist.gradbeta) << "\n";
    std::cout << "simulate: E_EK drift rel=" << fmt_double(report.energy_drift_rel)
              << " mass drift rel=" << fmt_double(report.mass_drift_rel)
              << " gronwall margins=(" << fmt_double(report.gronwall_first.min_margin) << ", "
              << fmt_double(report.gronwall_high.min_margin) << ")\n";
    if (report.energy_drift_rel > setup.energy_drift_tol)
        throw NumericalFailure("total-energy drift exceeds ek.energy_drift_tol");
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out, bool serial) {
    SweepSetup setup = sweep_from_config(load_config(config_path));
    SweepReport report = run_sweep(setup, out, serial);
    for (const auto& r : report.rows) {
        std::cout << "sweep: eps=" << fmt_double(r.epsilon) << " n=" << r.n_cells;
        if (r.error.empty())
            std::cout << " dist_L1=" << fmt_double(r.dist.l1)
                      << " dist_Lgamma=" << fmt_double(r.dist.lgamma)
                      << " dist_Lambda=" << fmt_double(r.dist.lambda)
                      << " dist_gradbeta=" << fmt_double(r.dist.gradbeta) << "\n";
        else
            std::cout << " ERROR: " << r.error << "\n";
    }
    std::cout << "sweep: fitted orders L1=" << fmt_double(report.order_l1.slope)
              << " Lgamma=" << fmt_double(report.order_lgamma.slope)
              << " Lambda=" << fmt_double(report.order_lambda.slope)
              << " gradbeta=" << fmt_double(report.order_gradbeta.slope) << "\n";
    if (!report.complete) throw NumericalFailure("sweep incomplete: a run aborted");
    if (!report.monotone)
        throw NumericalFailure("sweep distances are not monotonically decreasing in epsilon");
    return 0;
}

int cmd_check_identities(const std::string& config_path, const std::string& out,
                         std::uint64_t seed) {
    KVConfig cfg = load_config(config_path);
    SimulationSetup sim = setup_from_config(cfg);
    IdentityOptions opts;
    opts.count = cfg.get_size("identities.count", 100);
    opts.seed = seed;
    if (opts.count == 0) {
        std::cout << "check-identities: count=0, vacuous pass (warning: nothing was checked)\n";
        return 0;
    }
    auto results = run_identity_suite(sim.state_functions(), opts);
    for (const auto& r : results)
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name
                  << " residual=" << fmt_double(r.residual) << " tol=" << fmt_double(r.tol)
                  << (r.pass ? "" : " worst_seed=" + std::to_string(r.worst_seed)) << "\n";
    if (!out.empty()) {
        std::filesystem::create_directories(out);
        CsvWriter csv(out + "/identities.csv", {"pass", "residual", "tol"});
        for (const auto& r : results) csv.row({r.pass ? 1.0 : 0.0, r.residual, r.tol});
    }
    if (!all_pass(results)) throw NumericalFailure("identity suite failed");
    return 0;
}

int cmd_gn_check(const std::string& config_path, const std::string& out, std::uint64_t seed) {
    GNCheckSetup setup = gn_setup_from_config(load_config(config_path));
    setup.seed = seed;
    auto rows = run_gn_check(setup, out);
    for (const auto& r : rows)
        std::cout << "gn-check: d=" << r.dim << " alpha=" << fmt_double(r.alpha)
                  << " max_ratio=" << fmt_double(r.max_ratio)
                  << " refined=" << fmt_double(r.max_ratio_refined)
                  << " rel_change=" << fmt_double(r.rel_change) << "\n";
    return 0;
}

int cmd_nls_compare(const std::string& config_path, const std::string& out) {
    NLSCompareSetup setup = nls_setup_from_config(load_config(config_path));
    NLSCompareReport report = run_nls_compare(setup, out);
    for (const auto& gr : report.grids)
        std::cout << "nls-compare: n=" << gr.n_cells
                  << " final_dist_rho=" << fmt_double(gr.rows.back().dist_rho_l2)
                  << " final_dist_J=" << fmt_double(gr.rows.back().dist_J_l2)
                  << " mass_drift=" << fmt_double(gr.nls_mass_drift_rel) << "\n";
    if (report.setup.refine)
        std::cout << "nls-compare: halving-grid ratio=" << fmt_double(report.refinement_ratio)
                  << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"numerical laboratory for the Euler-Korteweg system, its zero-capillarity "
                 "limit, and the relative-entropy machinery that certifies it"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool serial = false;
    std::uint64_t seed = 20240901ull;
    app.add_option("--config", config_path, "path to a key = value configuration file");
    app.add_option("--out", out_dir, "output directory for CSV/JSON/SVG artifacts");
    app.add_flag("--serial", serial, "force sequential execution (bit-exact reference mode)");
    app.add_option("--seed", seed, "seed for randomized checks");

    auto* simulate = app.add_subcommand("simulate", "one EK run + Euler reference + entropy report");
    auto* sweep = app.add_subcommand("sweep", "epsilon sweep with fitted convergence orders");
    auto* check = app.add_subcommand("check-identities", "identity suite on random field draws");
    auto* gn = app.add_subcommand("gn-check", "interpolation-inequality ratio tables");
    auto* nls = app.add_subcommand("nls-compare", "cross-check against the wave-function oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, out_dir, serial);
        if (check->parsed()) return cmd_check_identities(config_path, out_dir, seed);
        if (gn->parsed()) return cmd_gn_check(config_path, out_dir, seed);
        if (nls->parsed()) return cmd_nls_compare(config_path, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
