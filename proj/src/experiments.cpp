#include "eklab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "eklab/errors.hpp"
#include "eklab/io.hpp"

namespace fs = std::filesystem;

namespace eklab {

double SimulationSetup::resolved_s() const {
    const double sup = admissible_s_sup(1, alpha);
    const double s = bl_s > 0.0 ? bl_s : 0.9 * sup;
    if (!(s > 0.0) || s >= sup) {
        std::ostringstream os;
        os << "boundary-layer exponent s=" << s << " is outside the admissible range (0, " << sup
           << ") for alpha=" << alpha;
        throw ConfigError(os.str());
    }
    return s;
}

ordered_json SimulationSetup::echo() const {
    ordered_json j;
    j["run.preset"] = preset_name;
    j["run.gamma"] = gamma;
    j["run.alpha"] = alpha;
    j["run.c_alpha"] = c_alpha;
    j["run.epsilon"] = epsilon;
    j["run.tau"] = tau;
    j["grid.x_min"] = x_min;
    j["grid.x_max"] = x_max;
    j["grid.n_cells"] = n_cells;
    j["ek.cfl"] = ek_cfl;
    j["ek.vacuum_floor"] = vacuum_floor;
    j["ek.energy_drift_tol"] = energy_drift_tol;
    j["euler.refine_ratio"] = euler_ratio;
    j["euler.cfl"] = euler_cfl;
    j["euler.blowup_threshold"] = blowup_threshold;
    j["bl.c"] = bl_c;
    j["bl.s"] = resolved_s();
    j["entropy.samples"] = samples;
    j["sweep.well_prepared"] = well_prepared;
    j["sim.perturb_amplitude"] = perturb_amplitude;
    return j;
}

SimulationSetup setup_from_config(const KVConfig& cfg) {
    SimulationSetup s;
    s.preset_name = cfg.get_string("run.preset", s.preset_name);
    s.gamma = cfg.get_double("run.gamma", s.gamma);
    s.alpha = cfg.get_double("run.alpha", s.alpha);
    s.c_alpha = cfg.get_double("run.c_alpha", s.c_alpha);
    s.epsilon = cfg.get_double("run.epsilon", s.epsilon);
    s.tau = cfg.get_double("run.tau", s.tau);
    s.x_min = cfg.get_double("grid.x_min", s.x_min);
    s.x_max = cfg.get_double("grid.x_max", s.x_max);
    s.n_cells = cfg.get_size("grid.n_cells", s.n_cells);
    s.ek_cfl = cfg.get_double("ek.cfl", s.ek_cfl);
    s.vacuum_floor = cfg.get_double("ek.vacuum_floor", s.vacuum_floor);
    s.energy_drift_tol = cfg.get_double("ek.energy_drift_tol", s.energy_drift_tol);
    s.ek_limit_slopes = cfg.get_bool("ek.limit_slopes", s.ek_limit_slopes);
    s.euler_ratio = cfg.get_size("euler.refine_ratio", s.euler_ratio);
    s.euler_cfl = cfg.get_double("euler.cfl", s.euler_cfl);
    s.blowup_threshold = cfg.get_double("euler.blowup_threshold", s.blowup_threshold);
    s.euler_snapshot_derivatives =
        cfg.get_bool("euler.snapshot_derivatives", s.euler_snapshot_derivatives);
    s.bl_c = cfg.get_double("bl.c", s.bl_c);
    s.bl_s = cfg.get_double("bl.s", s.bl_s);
    s.bl_scaling = cfg.get_bool("bl.scaling_report", s.bl_scaling);
    s.scaling_deltas = cfg.get_double_list("bl.scaling_deltas", s.scaling_deltas);
    s.samples = cfg.get_size("entropy.samples", s.samples);
    s.snapshot_times = cfg.get_double_list("sim.snapshots", s.snapshot_times);
    s.well_prepared = cfg.get_bool("sweep.well_prepared", s.well_prepared);
    s.perturb_amplitude = cfg.get_double("sim.perturb_amplitude", s.perturb_amplitude);
    if (s.samples < 8) throw ConfigError("entropy.samples must be >= 8");
    return s;
}

namespace {

std::vector<double> merged_sample_times(const SimulationSetup& setup) {
    std::vector<double> times;
    times.reserve(setup.samples + setup.snapshot_times.size());
    for (std::size_t k = 0; k < setup.samples; ++k)
        times.push_back(setup.tau * double(k) / double(setup.samples - 1));
    for (double t : setup.snapshot_times) {
        if (t < 0.0 || t > setup.tau + 1e-13)
            throw ConfigError("sim.snapshots: snapshot time outside [0, tau]");
        times.push_back(std::min(t, setup.tau));
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                times.end());
    return times;
}

bool is_snapshot_time(const SimulationSetup& setup, double t) {
    for (double ts : setup.snapshot_times)
        if (std::abs(ts - t) < 1e-12) return true;
    return false;
}

void write_series_csv(const std::string& path, const std::vector<EntropyRow>& rows) {
    std::vector<std::string> header = {
        "t",         "E_EK",     "E",           "E_h",       "E_h_E",      "R1",
        "R2",        "R3",       "R4",          "R5",        "R",          "R_rel",
        "R_in",      "R_bl_1",   "R_bl_2",      "R_bl_3",    "R_bl_4",     "R_bl_5",
        "R_bl_6",    "R_bl_7",   "R_bl_8",      "R_bl_9",    "R_bl_10",    "R_bl",
        "R_h",       "dist_L1",  "dist_Lgamma", "dist_Lambda", "dist_gradbeta", "dist_J",
        "vbl_gap",   "mass",     "min_rho",     "max_abs_u"};
    CsvWriter csv(path, header);
    for (const auto& r : rows) {
        std::vector<double> vals = {r.t, r.E_EK, r.E, r.E_h, r.E_h_E};
        for (int k = 0; k < 5; ++k) vals.push_back(r.first.r[std::size_t(k)]);
        vals.push_back(r.first.total);
        vals.push_back(r.high.r_rel);
        vals.push_back(r.high.r_in);
        for (int k = 0; k < 10; ++k) vals.push_back(r.high.r_bl[std::size_t(k)]);
        vals.push_back(r.high.r_bl_total);
        vals.push_back(r.high.total);
        vals.insert(vals.end(), {r.dist.l1, r.dist.lgamma, r.dist.lambda, r.dist.gradbeta,
                                 r.dist.momentum, r.vbl_gap, r.mass, r.min_rho, r.max_abs_u});
        csv.row(vals);
    }
}

} // namespace

RunReport run_simulation(const SimulationSetup& setup, const std::string& out_dir) {
    RunReport report;
    report.setup = setup;
    const StateFunctions sf = setup.state_functions();
    const Grid1D grid(setup.x_min, setup.x_max, setup.n_cells);

    report.s_used = setup.resolved_s();
    report.delta = std::pow(setup.epsilon, report.s_used);

    if (setup.euler_ratio % 2 == 0)
        throw ConfigError("euler.refine_ratio must be odd so cell centers align");
    const Grid1D ref_grid(setup.x_min, setup.x_max, setup.n_cells * setup.euler_ratio);

    const Preset preset = make_preset(setup.preset_name);
    EulerConfigOptions euler_opts;
    euler_opts.cfl = setup.euler_cfl;
    euler_opts.blowup_threshold = setup.blowup_threshold;
    EulerSolver euler(sf, ref_grid, preset.rho0, preset.u0, euler_opts);

    // Strong-solution window gate: tau must sit inside 90% of the window.
    const double window_probe = setup.tau / 0.9 + 1e-9;
    report.T_window = euler.detect_window(window_probe);
    if (setup.tau > 0.9 * report.T_window + 1e-12) {
        std::ostringstream os;
        os << "requested tau=" << setup.tau << " exceeds 0.9 * T_window=" << 0.9 * report.T_window
           << " (Euler solution loses smoothness)";
        throw ConfigError(os.str());
    }

    if (setup.bl_scaling)
        report.scaling = scaling_report(euler.reference(), setup.bl_c, setup.scaling_deltas);

    // EK initial data.
    const bool perturb = !setup.well_prepared && setup.perturb_amplitude > 0.0;
    FlowState state(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
        const double x = grid.center(i);
        double r0 = preset.rho0(x);
        if (perturb) r0 *= 1.0 + setup.perturb_amplitude * std::cos(2.0 * M_PI * x);
        state.rho[i] = r0;
        state.J[i] = r0 * preset.u0(x);
    }

    EKConfig ek_cfg(sf, grid, setup.tau);
    ek_cfg.cfl = setup.ek_cfl;
    ek_cfg.vacuum_floor = setup.vacuum_floor;
    ek_cfg.energy_drift_tol = setup.energy_drift_tol;
    ek_cfg.limit_slopes = setup.ek_limit_slopes;
    EKSolver solver(ek_cfg);

    if (!out_dir.empty()) fs::create_directories(out_dir);

    EKRunOptions opts;
    opts.sample_times = merged_sample_times(setup);
    opts.on_sample = [&](double t, const FlowState& s) {
        euler.advance_to(t);
        EulerReference ref =
            restrict_reference(euler.reference(), grid, setup.euler_ratio);
        BoundaryLayerField bl =
            build_boundary_layer(ref, setup.bl_c, report.delta, report.s_used);
        report.rows.push_back(evaluate_entropy_row(t, s, sf, grid, ref, bl));
        if (!out_dir.empty() && is_snapshot_time(setup, t)) {
            std::ostringstream name;
            name << out_dir << "/snapshot_t" << fmt_double(t) << ".csv";
            CsvWriter csv(name.str(), {"x", "rho", "J"});
            for (std::size_t i = 0; i < s.size(); ++i)
                csv.row({grid.center(i), s.rho[i], s.J[i]});
            std::ostringstream ename;
            ename << out_dir << "/euler_snapshot_t" << fmt_double(t) << ".csv";
            if (setup.euler_snapshot_derivatives) {
                CsvWriter ecsv(ename.str(),
                               {"x", "rho", "u", "rho_x", "div_u", "grad_div_u", "v", "div_v"});
                for (std::size_t i = 0; i < grid.n_cells; ++i)
                    ecsv.row({grid.center(i), ref.rho[i], ref.u[i], ref.rho_x[i], ref.u_x[i],
                              ref.u_xx[i], ref.v[i], ref.v_x[i]});
            } else {
                CsvWriter ecsv(ename.str(), {"x", "rho", "u"});
                for (std::size_t i = 0; i < grid.n_cells; ++i)
                    ecsv.row({grid.center(i), ref.rho[i], ref.u[i]});
            }
        }
    };
    report.stats = solver.run(state, opts);

    // Discrete tolerance budget: stencil/quadrature scale plus the measured
    // total-energy drift, which is the dominant discrete violation channel.
    const auto& rows = report.rows;
    double maxE = 0.0;
    for (const auto& r : rows) maxE = std::max(maxE, r.E_EK);
    for (const auto& r : rows)
        report.energy_drift_abs = std::max(report.energy_drift_abs, std::abs(r.E_EK - rows[0].E_EK));
    report.energy_drift_rel = report.energy_drift_abs / std::max(rows[0].E_EK, 1e-300);
    for (const auto& r : rows)
        report.mass_drift_rel = std::max(report.mass_drift_rel,
                                         std::abs(r.mass - rows[0].mass) /
                                             std::max(std::abs(rows[0].mass), 1e-300));
    const double dt_mean = setup.tau / double(std::max<std::size_t>(report.stats.steps, 1));
    report.tol_discrete =
        10.0 * (grid.dx * grid.dx + dt_mean * dt_mean) * maxE + 10.0 * report.energy_drift_abs;

    std::vector<double> ts, E1, R1, Eh, Rh;
    for (const auto& r : rows) {
        ts.push_back(r.t);
        E1.push_back(r.E);
        R1.push_back(r.first.total);
        Eh.push_back(r.E_h);
        Rh.push_back(r.high.total);
    }
    report.gronwall_first = gronwall_check(ts, E1, R1, report.tol_discrete);
    report.gronwall_high = gronwall_check(ts, Eh, Rh, report.tol_discrete);

    report.corrected_bound_min_margin = 1e300;
    for (const auto& r : rows) {
        const double margin =
            r.E_h + r.vbl_gap + 1e-12 * std::max(1.0, r.E_h_E) - 0.5 * r.E_h_E;
        report.corrected_bound_min_margin = std::min(report.corrected_bound_min_margin, margin);
    }

    if (!out_dir.empty()) {
        write_series_csv(out_dir + "/entropy_series.csv", rows);
        {
            CsvWriter csv(out_dir + "/diagnostics.csv", {"t", "mass", "E_EK", "min_rho", "max_abs_u"});
            for (const auto& r : rows) csv.row({r.t, r.mass, r.E_EK, r.min_rho, r.max_abs_u});
        }
        if (!report.scaling.empty()) {
            CsvWriter csv(out_dir + "/bl_scaling.csv",
                          {"delta", "sup_vbl", "sup_grad_vbl", "sup_dt_vbl"});
            SvgSeries s1{"sup|v_bl|", {}, {}}, s2{"sup|grad v_bl|", {}, {}};
            for (const auto& row : report.scaling) {
                csv.row({row.delta, row.sup_v_bl, row.sup_grad_v_bl, row.sup_dt_v_bl});
                s1.x.push_back(row.delta);
                s1.y.push_back(row.sup_v_bl);
                s2.x.push_back(row.delta);
                s2.y.push_back(row.sup_grad_v_bl);
            }
            write_loglog_svg(out_dir + "/bl_scaling.svg", "corrector sup norms vs delta", {s1, s2});
        }
        std::ofstream js(out_dir + "/summary.json");
        js << summarize(report).dump(2) << "\n";
    }

    if (!report.gronwall_first.ok || !report.gronwall_high.ok) {
        std::ostringstream os;
        os << "relative-entropy inequality violated beyond the discrete tolerance (margins "
           << report.gronwall_first.min_margin << ", " << report.gronwall_high.min_margin
           << ", tol " << report.tol_discrete << "); refine the grid or shorten tau";
        throw NumericalFailure(os.str());
    }
    return report;
}

ordered_json summarize(const RunReport& report) {
    const auto& last = report.rows.back();
    ordered_json j;
    j["epsilon"] = report.setup.epsilon;
    j["s"] = report.s_used;
    j["c"] = report.setup.bl_c;
    j["delta"] = report.delta;
    j["C_fit"] = report.gronwall_first.C_fit;
    j["C_fit_high"] = report.gronwall_high.C_fit;
    j["final_distances"] = {{"L1", last.dist.l1},
                            {"Lgamma", last.dist.lgamma},
                            {"Lambda", last.dist.lambda},
                            {"gradbeta", last.dist.gradbeta},
                            {"momentum", last.dist.momentum}};
    j["margins"] = {{"gronwall_first", report.gronwall_first.min_margin},
                    {"gronwall_high", report.gronwall_high.min_margin},
                    {"corrected_bound", report.corrected_bound_min_margin}};
    j["tol_discrete"] = report.tol_discrete;
    j["energy_drift_rel"] = report.energy_drift_rel;
    j["mass_drift_rel"] = report.mass_drift_rel;
    j["E0"] = report.rows.front().E;
    j["Eh0"] = report.rows.front().E_h;
    j["E_tau"] = last.E;
    j["Eh_tau"] = last.E_h;
    j["T_window"] = report.T_window;
    j["steps"] = report.stats.steps;
    j["vacuum_events"] = report.stats.vacuum_events;
    j["envelope_offset_first"] = report.gronwall_first.envelope_offset;
    j["envelope_offset_high"] = report.gronwall_high.envelope_offset;
    j["config"] = report.setup.echo();
    return j;
}

// --- sweep --------------------------------------------------------------------

SweepSetup sweep_from_config(const KVConfig& cfg) {
    SweepSetup s;
    s.base = setup_from_config(cfg);
    s.epsilons = cfg.get_double_list("sweep.epsilons", s.epsilons);
    s.n_base = cfg.get_size("sweep.n_base", s.n_base);
    s.n_cap = cfg.get_size("sweep.n_cap", s.n_cap);
    if (s.epsilons.size() < 3) throw ConfigError("sweep.epsilons needs >= 3 values");
    for (std::size_t k = 1; k < s.epsilons.size(); ++k)
        if (!(s.epsilons[k] < s.epsilons[k - 1]))
            throw ConfigError("sweep.epsilons must be strictly decreasing");
    return s;
}

SweepReport run_sweep(const SweepSetup& setup, const std::string& out_dir, bool serial) {
    SweepReport report;
    report.setup = setup;

    auto one = [&](std::size_t idx) -> SweepRow {
        SweepRow row;
        row.epsilon = setup.epsilons[idx];
        const double scale = setup.epsilons.front() / setup.epsilons[idx];
        row.n_cells = std::min(setup.n_cap,
                               std::size_t(std::llround(double(setup.n_base) * scale)));
        SimulationSetup sim = setup.base;
        sim.epsilon = row.epsilon;
        sim.n_cells = row.n_cells;
        std::string dir;
        if (!out_dir.empty()) dir = out_dir + "/eps" + std::to_string(idx);
        try {
            RunReport run = run_simulation(sim, dir);
            const auto& last = run.rows.back();
            row.dist = last.dist;
            row.E_tau = last.E;
            row.Eh_tau = last.E_h;
            row.E0 = run.rows.front().E;
            row.Eh0 = run.rows.front().E_h;
            row.C_fit = run.gronwall_first.C_fit;
            row.C_fit_high = run.gronwall_high.C_fit;
            row.margin_first = run.gronwall_first.min_margin;
            row.margin_high = run.gronwall_high.min_margin;
            row.gronwall_ok = run.gronwall_first.ok && run.gronwall_high.ok;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    report.rows.resize(setup.epsilons.size());
    if (serial) {
        for (std::size_t k = 0; k < setup.epsilons.size(); ++k) report.rows[k] = one(k);
    } else {
        std::vector<std::future<SweepRow>> futs;
        futs.reserve(setup.epsilons.size());
        for (std::size_t k = 0; k < setup.epsilons.size(); ++k)
            futs.push_back(std::async(std::launch::async, one, k));
        for (std::size_t k = 0; k < setup.epsilons.size(); ++k) report.rows[k] = futs[k].get();
    }

    for (const auto& r : report.rows)
        if (!r.error.empty()) report.complete = false;

    auto fit_or_zero = [&](auto pick) {
        FitResult f;
        if (!report.complete) return f;
        std::vector<double> xs, ys;
        for (const auto& r : report.rows) {
            const double v = pick(r);
            if (!(v > 0.0)) return f;
            xs.push_back(r.epsilon);
            ys.push_back(v);
        }
        return fit_loglog(xs, ys);
    };
    report.order_l1 = fit_or_zero([](const SweepRow& r) { return r.dist.l1; });
    report.order_lgamma = fit_or_zero([](const SweepRow& r) { return r.dist.lgamma; });
    report.order_lambda = fit_or_zero([](const SweepRow& r) { return r.dist.lambda; });
    report.order_gradbeta = fit_or_zero([](const SweepRow& r) { return r.dist.gradbeta; });
    report.order_momentum = fit_or_zero([](const SweepRow& r) { return r.dist.momentum; });

    if (report.complete) {
        for (std::size_t k = 1; k < report.rows.size(); ++k) {
            const auto& a = report.rows[k - 1].dist;
            const auto& b = report.rows[k].dist;
            if (!(b.l1 < a.l1 && b.lgamma < a.lgamma && b.lambda < a.lambda &&
                  b.gradbeta < a.gradbeta && b.momentum < a.momentum))
                report.monotone = false;
        }
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        CsvWriter csv(out_dir + "/sweep_report.csv",
                      {"epsilon", "n_cells", "dist_L1", "dist_Lgamma", "dist_Lambda",
                       "dist_gradbeta", "dist_J", "E0", "Eh0", "E_tau", "Eh_tau", "C_fit",
                       "C_fit_high", "margin_first", "margin_high"});
        SvgSeries sl1{"L1", {}, {}}, slg{"Lgamma", {}, {}}, sla{"Lambda", {}, {}},
            sgb{"eps|grad beta - sqrt(rho) v^E|", {}, {}};
        for (const auto& r : report.rows) {
            csv.row({r.epsilon, double(r.n_cells), r.dist.l1, r.dist.lgamma, r.dist.lambda,
                     r.dist.gradbeta, r.dist.momentum, r.E0, r.Eh0, r.E_tau, r.Eh_tau, r.C_fit,
                     r.C_fit_high, r.margin_first, r.margin_high});
            sl1.x.push_back(r.epsilon);
            sl1.y.push_back(r.dist.l1);
            slg.x.push_back(r.epsilon);
            slg.y.push_back(r.dist.lgamma);
            sla.x.push_back(r.epsilon);
            sla.y.push_back(r.dist.lambda);
            sgb.x.push_back(r.epsilon);
            sgb.y.push_back(r.dist.gradbeta);
        }
        write_loglog_svg(out_dir + "/sweep_distances.svg", "distances vs epsilon",
                         {sl1, slg, sla, sgb});
        std::ofstream js(out_dir + "/sweep_summary.json");
        js << summarize(report).dump(2) << "\n";
    }
    return report;
}

ordered_json summarize(const SweepReport& report) {
    ordered_json j;
    j["epsilons"] = report.setup.epsilons;
    j["n_base"] = report.setup.n_base;
    j["complete"] = report.complete;
    j["monotone"] = report.monotone;
    auto fit = [](const FitResult& f) {
        return ordered_json{{"order", f.slope}, {"r2", f.r2}};
    };
    j["fitted_orders"] = {{"L1", fit(report.order_l1)},
                          {"Lgamma", fit(report.order_lgamma)},
                          {"Lambda", fit(report.order_lambda)},
                          {"gradbeta", fit(report.order_gradbeta)},
                          {"momentum", fit(report.order_momentum)}};
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["epsilon"] = r.epsilon;
        row["n_cells"] = r.n_cells;
        row["dist_L1"] = r.dist.l1;
        row["dist_Lgamma"] = r.dist.lgamma;
        row["dist_Lambda"] = r.dist.lambda;
        row["dist_gradbeta"] = r.dist.gradbeta;
        row["dist_J"] = r.dist.momentum;
        row["C_fit"] = r.C_fit;
        row["C_fit_high"] = r.C_fit_high;
        row["margin_first"] = r.margin_first;
        row["margin_high"] = r.margin_high;
        if (!r.error.empty()) row["error"] = r.error;
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["config"] = report.setup.base.echo();
    return j;
}

// --- NLS comparison -------------------------------------------------------------

NLSCompareSetup nls_setup_from_config(const KVConfig& cfg) {
    NLSCompareSetup s;
    s.epsilon = cfg.get_double("nls.epsilon", s.epsilon);
    s.preset_name = cfg.get_string("run.preset", s.preset_name);
    s.n_cells = cfg.get_size("nls.n_cells", s.n_cells);
    s.refine = cfg.get_bool("nls.refine", s.refine);
    s.dt_factor = cfg.get_double("nls.dt_factor", s.dt_factor);
    s.times = cfg.get_double_list("nls.times", s.times);
    s.ek_cfl = cfg.get_double("ek.cfl", s.ek_cfl);
    return s;
}

namespace {

NLSGridResult nls_compare_one(const NLSCompareSetup& setup, std::size_t n) {
    NLSGridResult res;
    res.n_cells = n;
    const Grid1D grid(0.0, 1.0, n);
    const StateFunctions sf = StateFunctions::qhd(setup.epsilon);
    const Preset preset = make_preset(setup.preset_name);

    // Wave-function side.
    NLSOracle oracle(grid, setup.epsilon);
    std::vector<cplx> psi = oracle.from_hydro(preset.rho0, preset.S0);
    const double mass0 = oracle.mass(psi);
    const double dt_nls = setup.dt_factor * grid.dx * std::min(1.0, setup.epsilon);

    // Hydrodynamic side.
    FlowState state(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.center(i);
        state.rho[i] = preset.rho0(x);
        state.J[i] = preset.rho0(x) * preset.u0(x);
    }
    EKConfig cfg(sf, grid, setup.times.back());
    cfg.cfl = setup.ek_cfl;
    EKSolver solver(cfg);

    double t_nls = 0.0;
    EKRunOptions opts;
    opts.sample_times = setup.times;
    opts.on_sample = [&](double t, const FlowState& s) {
        if (res.truncated) return;
        if (t > t_nls + 1e-13) {
            oracle.run(psi, t - t_nls, dt_nls);
            t_nls = t;
        }
        FlowState mad = oracle.madelung(psi);
        for (std::size_t i = 0; i < n; ++i)
            if (s.rho[i] < 1e-6 || mad.rho[i] < 1e-6) {
                res.truncated = true; // vacuum forming: stop the comparison here
                return;
            }
        NLSCompareRow row;
        row.t = t;
        double sr = 0.0, sj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sr += (s.rho[i] - mad.rho[i]) * (s.rho[i] - mad.rho[i]);
            sj += (s.J[i] - mad.J[i]) * (s.J[i] - mad.J[i]);
        }
        row.dist_rho_l2 = std::sqrt(sr * grid.dx);
        row.dist_J_l2 = std::sqrt(sj * grid.dx);
        res.rows.push_back(row);
    };
    solver.run(state, opts);
    res.nls_mass_drift_rel = std::abs(oracle.mass(psi) - mass0) / mass0;

    // Entropy agreement: both field sets against the same Euler reference.
    EulerSolver euler(sf, grid, preset.rho0, preset.u0);
    euler.advance_to(setup.times.back());
    EulerReference ref = euler.reference();
    FlowState mad = oracle.madelung(psi);
    res.entropy_ek =
        entropy_E(StateFields::from_flow(state, sf, grid), sf, grid, ref.rho, ref.u);
    res.entropy_nls =
        entropy_E(StateFields::from_flow(mad, sf, grid), sf, grid, ref.rho, ref.u);
    return res;
}

} // namespace

NLSCompareReport run_nls_compare(const NLSCompareSetup& setup, const std::string& out_dir) {
    NLSCompareReport report;
    report.setup = setup;
    report.grids.push_back(nls_compare_one(setup, setup.n_cells));
    if (setup.refine) {
        report.grids.push_back(nls_compare_one(setup, 2 * setup.n_cells));
        report.refinement_ratio = report.grids[0].rows.back().dist_rho_l2 /
                                  std::max(report.grids[1].rows.back().dist_rho_l2, 1e-300);
    }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        for (const auto& gr : report.grids) {
            CsvWriter csv(out_dir + "/nls_divergence_n" + std::to_string(gr.n_cells) + ".csv",
                          {"t", "dist_rho_l2", "dist_J_l2"});
            for (const auto& r : gr.rows) csv.row({r.t, r.dist_rho_l2, r.dist_J_l2});
        }
        std::ofstream js(out_dir + "/nls_summary.json");
        js << summarize(report).dump(2) << "\n";
    }
    return report;
}

ordered_json summarize(const NLSCompareReport& report) {
    ordered_json j;
    j["epsilon"] = report.setup.epsilon;
    j["preset"] = report.setup.preset_name;
    j["n_cells"] = report.setup.n_cells;
    j["dt_factor"] = report.setup.dt_factor;
    j["times"] = report.setup.times;
    j["refine"] = report.setup.refine;
    j["ek_cfl"] = report.setup.ek_cfl;
    j["refinement_ratio"] = report.refinement_ratio;
    ordered_json grids = ordered_json::array();
    for (const auto& gr : report.grids) {
        ordered_json g;
        g["n_cells"] = gr.n_cells;
        g["truncated"] = gr.truncated;
        g["final_dist_rho_l2"] = gr.rows.back().dist_rho_l2;
        g["final_dist_J_l2"] = gr.rows.back().dist_J_l2;
        g["nls_mass_drift_rel"] = gr.nls_mass_drift_rel;
        g["entropy_ek"] = gr.entropy_ek;
        g["entropy_nls"] = gr.entropy_nls;
        grids.push_back(g);
    }
    j["grids"] = grids;
    return j;
}

// --- GN checks ---------------------------------------------------------------------

GNCheckSetup gn_setup_from_config(const KVConfig& cfg) {
    GNCheckSetup s;
    auto dims = cfg.get_double_list("gn.dims", {1, 2, 3});
    s.dims.clear();
    for (double d : dims) s.dims.push_back(int(d));
    s.alphas = cfg.get_double_list("gn.alphas", s.alphas);
    s.draws = cfg.get_size("gn.draws", s.draws);
    s.n_base = cfg.get_size("gn.n_base", s.n_base);
    return s;
}

std::size_t gn_grid_size(int dim, std::size_t n_base) {
    if (dim == 1) return n_base;
    if (dim == 2) return std::max<std::size_t>(32, n_base / 4);
    return std::max<std::size_t>(24, n_base / 8);
}

std::vector<GNCheckRow> run_gn_check(const GNCheckSetup& setup, const std::string& out_dir) {
    std::vector<GNCheckRow> rows;
    for (int dim : setup.dims)
        for (double alpha : setup.alphas) {
            GNCheckRow row;
            row.dim = dim;
            row.alpha = alpha;
            const std::size_t n = gn_grid_size(dim, setup.n_base);
            for (int pass = 0; pass < 2; ++pass) {
                std::uint64_t rng = setup.seed; // same draws on both grids
                double max_ratio = 0.0;
                for (std::size_t d = 0; d < setup.draws; ++d) {
                    GNFieldSpec spec = random_gn_spec(rng);
                    TensorField f = sample_gn_field(spec, dim, pass == 0 ? n : 2 * n);
                    max_ratio = std::max(max_ratio, gn_ratio(f, alpha, 1.0));
                }
                if (pass == 0)
                    row.max_ratio = max_ratio;
                else
                    row.max_ratio_refined = max_ratio;
            }
            row.rel_change =
                std::abs(row.max_ratio - row.max_ratio_refined) / std::max(row.max_ratio, 1e-300);
            rows.push_back(row);
        }

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        CsvWriter csv(out_dir + "/gn_check.csv",
                      {"dim", "alpha", "max_ratio", "max_ratio_refined", "rel_change"});
        SvgSeries series{"max ratio", {}, {}};
        double idx = 1.0;
        for (const auto& r : rows) {
            csv.row({double(r.dim), r.alpha, r.max_ratio, r.max_ratio_refined, r.rel_change});
            series.x.push_back(idx);
            series.y.push_back(r.max_ratio);
            idx += 1.0;
        }
        write_loglog_svg(out_dir + "/gn_check.svg", "GN max ratios per (d, alpha)", {series});
    }
    return rows;
}

} // namespace eklab
