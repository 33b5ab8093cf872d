#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "eklab/boundary_layer.hpp"
#include "eklab/config.hpp"
#include "eklab/ek_solver.hpp"
#include "eklab/entropy.hpp"
#include "eklab/euler_solver.hpp"
#include "eklab/nls_oracle.hpp"
#include "eklab/presets.hpp"
#include "eklab/rate_fit.hpp"
#include "eklab/state_functions.hpp"

namespace eklab {

using ordered_json = nlohmann::ordered_json;

// Fully resolved single-run setup.
struct SimulationSetup {
    double gamma = 2.0;
    double alpha = -1.0;
    double c_alpha = 0.25;
    double epsilon = 0.1;
    std::string preset_name = "cosine-bump";
    double tau = 0.2;

    double x_min = 0.0, x_max = 1.0;
    std::size_t n_cells = 512;

    double ek_cfl = 0.8;
    double vacuum_floor = 1e-10;
    double energy_drift_tol = 1e-3;
    bool ek_limit_slopes = false;

    std::size_t euler_ratio = 5;
    double euler_cfl = 0.4;
    double blowup_threshold = 0.0; // <= 0: automatic
    bool euler_snapshot_derivatives = false;

    double bl_c = 1.0;
    double bl_s = 0.0; // <= 0: default 0.9 * admissible supremum
    bool bl_scaling = false;
    std::vector<double> scaling_deltas = {0.2, 0.1, 0.05, 0.025};

    std::size_t samples = 201;
    std::vector<double> snapshot_times;
    bool well_prepared = true;
    double perturb_amplitude = 0.0; // ill-prepared EK data when well_prepared = false

    StateFunctions state_functions() const {
        return StateFunctions(gamma, alpha, c_alpha, epsilon);
    }
    double resolved_s() const;
    ordered_json echo() const;
};

SimulationSetup setup_from_config(const KVConfig& cfg);

struct RunReport {
    SimulationSetup setup;
    std::vector<EntropyRow> rows;
    EKRunStats stats;
    double T_window = 0.0;
    double delta = 0.0;
    double s_used = 0.0;
    double tol_discrete = 0.0;
    double energy_drift_abs = 0.0;
    double energy_drift_rel = 0.0;
    double mass_drift_rel = 0.0;
    GronwallResult gronwall_first;
    GronwallResult gronwall_high;
    double corrected_bound_min_margin = 0.0;
    std::vector<ScalingRow> scaling; // empty unless requested
};

// out_dir empty: no files written.
RunReport run_simulation(const SimulationSetup& setup, const std::string& out_dir);

ordered_json summarize(const RunReport& report);

// --- epsilon sweep -----------------------------------------------------------

struct SweepSetup {
    SimulationSetup base;
    std::vector<double> epsilons = {0.1, 0.05, 0.025, 0.0125}; // decreasing
    std::size_t n_base = 512; // cells at the largest epsilon; n ~ 1/eps
    std::size_t n_cap = 8192;
};

SweepSetup sweep_from_config(const KVConfig& cfg);

struct SweepRow {
    double epsilon = 0.0;
    std::size_t n_cells = 0;
    DistanceSet dist;
    double E_tau = 0.0;
    double Eh_tau = 0.0;
    double E0 = 0.0;
    double Eh0 = 0.0;
    double C_fit = 0.0;
    double C_fit_high = 0.0;
    double margin_first = 0.0;
    double margin_high = 0.0;
    bool gronwall_ok = true;
    std::string error; // nonempty if the run aborted
};

struct SweepReport {
    SweepSetup setup;
    std::vector<SweepRow> rows;
    FitResult order_l1, order_lgamma, order_lambda, order_gradbeta, order_momentum;
    bool complete = true;
    bool monotone = true;
};

SweepReport run_sweep(const SweepSetup& setup, const std::string& out_dir, bool serial);

ordered_json summarize(const SweepReport& report);

// --- NLS oracle comparison ----------------------------------------------------

struct NLSCompareSetup {
    double epsilon = 0.5;
    std::string preset_name = "cosine-bump";
    std::size_t n_cells = 512;
    bool refine = true; // also run at 2 n_cells for the halving ratio
    double dt_factor = 0.1;
    std::vector<double> times = {0.05, 0.1, 0.15, 0.2};
    double ek_cfl = 0.8;
};

NLSCompareSetup nls_setup_from_config(const KVConfig& cfg);

struct NLSCompareRow {
    double t = 0.0;
    double dist_rho_l2 = 0.0;
    double dist_J_l2 = 0.0;
};

struct NLSGridResult {
    std::size_t n_cells = 0;
    std::vector<NLSCompareRow> rows;
    bool truncated = false; // vacuum approached; comparison window cut short
    double nls_mass_drift_rel = 0.0;
    double entropy_ek = 0.0;  // E of the EK fields against the Euler reference
    double entropy_nls = 0.0; // E of the Madelung fields against the same reference
};

struct NLSCompareReport {
    NLSCompareSetup setup;
    std::vector<NLSGridResult> grids;
    double refinement_ratio = 0.0; // final-time density divergence, coarse/fine
};

NLSCompareReport run_nls_compare(const NLSCompareSetup& setup, const std::string& out_dir);

ordered_json summarize(const NLSCompareReport& report);

// --- GN interpolation checks ----------------------------------------------------

struct GNCheckSetup {
    std::vector<int> dims = {1, 2, 3};
    std::vector<double> alphas = {-0.5, 0.0, 1.0};
    std::size_t draws = 100;
    std::size_t n_base = 256; // cells per side in d=1; scaled down for d=2,3
    std::uint64_t seed = 7u;
};

GNCheckSetup gn_setup_from_config(const KVConfig& cfg);

struct GNCheckRow {
    int dim = 1;
    double alpha = 0.0;
    double max_ratio = 0.0;
    double max_ratio_refined = 0.0;
    double rel_change = 0.0;
};

std::vector<GNCheckRow> run_gn_check(const GNCheckSetup& setup, const std::string& out_dir);

std::size_t gn_grid_size(int dim, std::size_t n_base);

} // namespace eklab
