// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Optional argv[1]: path to the CLI binary (used by the determinism check;
// falls back to in-process execution when absent).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eklab/ek_solver.hpp"
#include "eklab/experiments.hpp"
#include "eklab/identities.hpp"
#include "eklab/io.hpp"
#include "eklab/rate_fit.hpp"

using namespace eklab;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

bool g_all_ok = true;

void record(int criterion, bool pass, const std::string& text) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, text.c_str());
    std::fflush(stdout);
    if (!pass) g_all_ok = false;
}

double seconds_since(clk::time_point t0) {
    return std::chrono::duration<double>(clk::now() - t0).count();
}

std::string fmt(double v) { return fmt_double(v); }

FlowState preset_state(const Grid1D& g, const Preset& p) {
    FlowState s(g.n_cells);
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        const double x = g.center(i);
        s.rho[i] = p.rho0(x);
        s.J[i] = p.rho0(x) * p.u0(x);
    }
    return s;
}

double observed_order(const std::vector<double>& h, const std::vector<double>& e) {
    return fit_loglog(h, e).slope;
}

// --- criterion 1: identity suite --------------------------------------------

void criterion_1() {
    const auto t0 = clk::now();
    try {
        IdentityOptions opts;
        opts.count = 100;
        bool ok = true;
        std::string worst;
        for (const StateFunctions& sf :
             {StateFunctions::qhd(0.1), StateFunctions(1.7, -0.5, 0.8, 0.3)}) {
            auto results = run_identity_suite(sf, opts);
            for (const auto& r : results)
                if (!r.pass) {
                    ok = false;
                    worst = r.name + " residual=" + fmt(r.residual);
                }
        }
        const double secs = seconds_since(t0);
        record(1, ok && secs <= 60.0,
               "identity suite on 100 random draws (1e-8 integral / 1e-10 scalar), " +
                   fmt(secs) + " s" + (worst.empty() ? "" : "; worst: " + worst));
    } catch (const std::exception& e) {
        record(1, false, std::string("identity suite threw: ") + e.what());
    }
}

// --- criterion 2: conservation ------------------------------------------------

void criterion_2() {
    const auto t0 = clk::now();
    try {
        const Preset p = make_preset("cosine-bump");
        double drift512 = 0.0, drift1024 = 0.0, mass_drift = 0.0;
        for (std::size_t n : {512, 1024}) {
            Grid1D g(0.0, 1.0, n);
            EKConfig cfg(StateFunctions::qhd(0.1), g, 0.5);
            EKSolver solver(cfg);
            FlowState s = preset_state(g, p);
            const double e0 = solver.total_energy(s);
            const double m0 = integral(s.rho, g);
            EKRunOptions opts;
            solver.run(s, opts);
            const double drift = std::abs(solver.total_energy(s) - e0) / e0;
            if (n == 512) {
                drift512 = drift;
                mass_drift = std::abs(integral(s.rho, g) - m0) / m0;
            } else {
                drift1024 = drift;
            }
        }
        const double ratio = drift512 / std::max(drift1024, 1e-300);
        const double secs = seconds_since(t0);
        const bool ok = mass_drift <= 1e-12 && drift512 <= 1e-3 && ratio >= 2.0 &&
                        ratio <= 8.0 && secs <= 120.0;
        record(2, ok,
               "QHD eps=0.1 n=512 t=[0,0.5]: mass drift " + fmt(mass_drift) + " (<=1e-12), "
               "E_EK drift " + fmt(drift512) + " (<=1e-3), halving ratio " + fmt(ratio) +
                   " (in [2,8]), " + fmt(secs) + " s");
    } catch (const std::exception& e) {
        record(2, false, std::string("conservation run threw: ") + e.what());
    }
}

// --- criterion 3: weak-form residuals ------------------------------------------

void criterion_3() {
    try {
        WeakTestPair test;
        test.psi = [](double x, double) { return std::cos(M_PI * x); };
        test.psi_t = [](double, double) { return 0.0; };
        test.psi_x = [](double x, double) { return -M_PI * std::sin(M_PI * x); };
        test.phi = [](double x, double) { return std::sin(M_PI * x); };
        test.phi_t = [](double, double) { return 0.0; };
        test.phi_x = [](double x, double) { return M_PI * std::cos(M_PI * x); };
        test.phi_xx = [](double x, double) { return -M_PI * M_PI * std::sin(M_PI * x); };

        const Preset p = make_preset("cosine-bump");
        std::vector<double> hs, rm, rj;
        double const_mass_residual = 0.0;
        for (std::size_t n : {64, 128, 256}) {
            Grid1D g(0.0, 1.0, n);
            EKConfig cfg(StateFunctions::qhd(0.5), g, 0.02);
            EKSolver solver(cfg);
            FlowState s = preset_state(g, p);
            std::vector<std::pair<double, FlowState>> traj;
            EKRunOptions opts;
            opts.trajectory = &traj;
            solver.run(s, opts);
            WeakResiduals res = solver.weak_residual(traj, test);
            hs.push_back(g.dx);
            rm.push_back(std::abs(res.mass) + 1e-16);
            rj.push_back(std::abs(res.momentum) + 1e-16);
            if (n == 256) {
                WeakTestPair unit;
                unit.psi = [](double, double) { return 1.0; };
                unit.psi_t = [](double, double) { return 0.0; };
                unit.psi_x = unit.psi_t;
                unit.phi = unit.psi_t;
                unit.phi_t = unit.psi_t;
                unit.phi_x = unit.psi_t;
                unit.phi_xx = unit.psi_t;
                const_mass_residual = std::abs(solver.weak_residual(traj, unit).mass);
            }
        }
        const double om = observed_order(hs, rm), oj = observed_order(hs, rj);
        const bool ok = om >= 1.0 && oj >= 1.0 && const_mass_residual <= 1e-13;
        record(3, ok,
               "weak-form residual orders: mass " + fmt(om) + ", momentum " + fmt(oj) +
                   " (both >=1); psi=1 residual " + fmt(const_mass_residual));
    } catch (const std::exception& e) {
        record(3, false, std::string("weak residual study threw: ") + e.what());
    }
}

// --- criterion 4: m-equation and augmented system --------------------------------

void criterion_4() {
    try {
        const Preset p = make_preset("traveling-bump");
        std::vector<double> hs, rm, ru, rv;
        for (std::size_t n : {64, 128, 256}) {
            Grid1D g(0.0, 1.0, n);
            EKConfig cfg(StateFunctions::qhd(0.5), g, 0.02);
            EKSolver solver(cfg);
            FlowState s = preset_state(g, p);
            ResidualNorms m_res, u_res, v_res;
            EKRunOptions opts;
            opts.probe_times = {0.01};
            opts.on_probe = [&](double, const FlowState& prev, const FlowState& cur,
                                const FlowState& next, double dt) {
                m_res = solver.m_equation_residual(prev, cur, next, dt);
                auto uv = solver.augmented_residuals(prev, cur, next, dt);
                u_res = uv.first;
                v_res = uv.second;
            };
            solver.run(s, opts);
            hs.push_back(g.dx);
            rm.push_back(m_res.l2 + 1e-16);
            ru.push_back(u_res.l2 + 1e-16);
            rv.push_back(v_res.l2 + 1e-16);
        }
        const double om = observed_order(hs, rm);
        const double ou = observed_order(hs, ru);
        const double ov = observed_order(hs, rv);
        record(4, om >= 1.0 && ou >= 1.0 && ov >= 1.0,
               "m-equation order " + fmt(om) + ", augmented-u order " + fmt(ou) +
                   ", augmented-v order " + fmt(ov) + " (all >=1)");
    } catch (const std::exception& e) {
        record(4, false, std::string("residual study threw: ") + e.what());
    }
}

// --- criterion 5: boundary-layer corrector ----------------------------------------

void criterion_5() {
    try {
        const Preset p = make_preset("cosine-bump");
        StateFunctions sf = StateFunctions::qhd(0.1);
        EulerSolver euler(sf, Grid1D(0.0, 1.0, 2048), p.rho0, p.u0);
        double max_defect = 0.0;
        for (double t : {0.0, 0.05, 0.1, 0.15, 0.2}) {
            euler.advance_to(t);
            BoundaryLayerField bl = build_boundary_layer(euler.reference(), 1.0, 0.1);
            max_defect = std::max(max_defect, std::abs(bl.wall_defect_left));
            max_defect = std::max(max_defect, std::abs(bl.wall_defect_right));
        }
        euler.reset();
        std::vector<ScalingRow> rows =
            scaling_report(euler.reference(), 1.0, {0.2, 0.1, 0.05, 0.025});
        std::vector<double> d, s0, s1;
        for (const auto& r : rows) {
            d.push_back(r.delta);
            s0.push_back(r.sup_v_bl);
            s1.push_back(r.sup_grad_v_bl);
        }
        const double slope0 = fit_loglog(d, s0).slope;
        const double slope1 = fit_loglog(d, s1).slope;
        const bool ok = max_defect <= 1e-12 && std::abs(slope0 + 1.0) <= 0.2 &&
                        std::abs(slope1 + 2.0) <= 0.2;
        record(5, ok,
               "wall defect " + fmt(max_defect) + " (<=1e-12); sup|v_bl| slope " + fmt(slope0) +
                   " (-1 +/- 0.2), sup|grad v_bl| slope " + fmt(slope1) + " (-2 +/- 0.2)");
    } catch (const std::exception& e) {
        record(5, false, std::string("corrector study threw: ") + e.what());
    }
}

// --- criteria 6-9: the epsilon sweep ----------------------------------------------

void criteria_6_to_9() {
    SweepReport report;
    double secs = 0.0;
    try {
        SweepSetup setup;
        setup.base.preset_name = "cosine-bump";
        setup.base.tau = 0.2;
        setup.base.samples = 201;
        setup.epsilons = {0.1, 0.05, 0.025, 0.0125};
        setup.n_base = 512;
        const auto t0 = clk::now();
        report = run_sweep(setup, "", /*serial=*/false);
        secs = seconds_since(t0);
    } catch (const std::exception& e) {
        const std::string msg = std::string("sweep threw: ") + e.what();
        for (int c : {6, 7, 8, 9}) record(c, false, msg);
        return;
    }

    if (!report.complete) {
        std::string msg = "sweep incomplete:";
        for (const auto& r : report.rows)
            if (!r.error.empty()) msg += " [eps=" + fmt(r.epsilon) + "] " + r.error;
        for (int c : {6, 7, 8, 9}) record(c, false, msg);
        return;
    }
    const auto& rows = report.rows;

    { // 6: remainder bound constant stable across eps in {0.1, 0.05, 0.025}
        double cmin = 1e300, cmax = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            cmin = std::min(cmin, rows[k].C_fit);
            cmax = std::max(cmax, rows[k].C_fit);
        }
        const bool ok = std::isfinite(cmax) && cmax > 0.0 && cmax / cmin <= 2.0;
        record(6, ok,
               "C_fit = sup|R|/E over eps {0.1,0.05,0.025}: [" + fmt(cmin) + ", " + fmt(cmax) +
                   "], spread x" + fmt(cmax / cmin) + " (<=2)");
    }

    { // 7: Gronwall inequalities within the discrete tolerance on every run
        bool ok = true;
        double worst_first = 1e300, worst_high = 1e300;
        for (const auto& r : rows) {
            ok = ok && r.gronwall_ok && r.margin_first >= 0.0 && r.margin_high >= 0.0;
            worst_first = std::min(worst_first, r.margin_first);
            worst_high = std::min(worst_high, r.margin_high);
        }
        record(7, ok,
               "entropy inequalities at all sampled tau: min margins " + fmt(worst_first) +
                   " (first-order), " + fmt(worst_high) + " (high-order), both >= 0");
    }

    { // 8: zero-capillarity convergence of the hydrodynamic distances
        bool monotone = true, drop = true;
        for (std::size_t k = 1; k < rows.size(); ++k) {
            monotone = monotone && rows[k].dist.l1 < rows[k - 1].dist.l1 &&
                       rows[k].dist.lgamma < rows[k - 1].dist.lgamma &&
                       rows[k].dist.lambda < rows[k - 1].dist.lambda;
        }
        drop = rows.back().dist.l1 < 0.1 * rows.front().dist.l1 &&
               rows.back().dist.lgamma < 0.1 * rows.front().dist.lgamma &&
               rows.back().dist.lambda < 0.1 * rows.front().dist.lambda;
        const bool ok = monotone && drop && secs <= 1200.0;
        record(8, ok,
               "QHD sweep tau=0.2: distances strictly decrease and drop >10x (L1 " +
                   fmt(rows.front().dist.l1) + " -> " + fmt(rows.back().dist.l1) +
                   "); fitted orders L1 " + fmt(report.order_l1.slope) + ", Lgamma " +
                   fmt(report.order_lgamma.slope) + ", Lambda " +
                   fmt(report.order_lambda.slope) + " (reported); " + fmt(secs) + " s (<=1200)");
    }

    { // 9: gradient-distance convergence under an admissible rate exponent
        const double s_used = report.setup.base.resolved_s();
        const double s_sup = admissible_s_sup(1, report.setup.base.alpha);
        bool decreasing = true;
        for (std::size_t k = 1; k < rows.size(); ++k)
            decreasing = decreasing && rows[k].dist.gradbeta < rows[k - 1].dist.gradbeta;
        record(9, s_used < s_sup && decreasing,
               "s=" + fmt(s_used) + " < sup " + fmt(s_sup) + "; eps|grad beta - sqrt(rho) v^E| " +
                   fmt(rows.front().dist.gradbeta) + " -> " + fmt(rows.back().dist.gradbeta) +
                   ", strictly decreasing, fitted order " + fmt(report.order_gradbeta.slope));
    }
}

// --- criterion 10: GN interpolation ratios ------------------------------------------

void criterion_10() {
    try {
        GNCheckSetup setup;
        setup.dims = {1, 2, 3};
        setup.alphas = {-0.5, 0.0, 1.0};
        setup.draws = 100;
        auto rows = run_gn_check(setup, "");
        bool ok = true;
        double worst_change = 0.0, max_ratio = 0.0;
        for (const auto& r : rows) {
            ok = ok && std::isfinite(r.max_ratio) && r.max_ratio > 0.0 && r.rel_change <= 0.2;
            worst_change = std::max(worst_change, r.rel_change);
            max_ratio = std::max(max_ratio, r.max_ratio);
        }
        // degenerate case: d=1, alpha=-1 collapses to equality
        std::uint64_t rng = 2024;
        double worst_degenerate = 0.0;
        for (int k = 0; k < 100; ++k) {
            GNFieldSpec spec = random_gn_spec(rng);
            TensorField f = sample_gn_field(spec, 1, 256);
            worst_degenerate =
                std::max(worst_degenerate, std::abs(gn_ratio(f, -1.0, 0.25) - 1.0));
        }
        ok = ok && worst_degenerate <= 1e-12;
        record(10, ok,
               "GN ratios finite over {1,2,3}x{-0.5,0,1} (max " + fmt(max_ratio) +
                   "), refinement change " + fmt(worst_change) + " (<=0.2); degenerate case |ratio-1| " +
                   fmt(worst_degenerate) + " (<=1e-12)");
    } catch (const std::exception& e) {
        record(10, false, std::string("GN check threw: ") + e.what());
    }
}

// --- criterion 11: NLS oracle -----------------------------------------------------

void criterion_11() {
    try {
        NLSCompareSetup setup;
        setup.epsilon = 0.5;
        setup.n_cells = 512;
        setup.refine = true;
        setup.times = {0.05, 0.1, 0.15, 0.2};
        NLSCompareReport report = run_nls_compare(setup, "");
        const double div512 = report.grids[0].rows.back().dist_rho_l2;
        const double ratio = report.refinement_ratio;
        const double mass_drift = std::max(report.grids[0].nls_mass_drift_rel,
                                           report.grids[1].nls_mass_drift_rel);
        const bool ok =
            div512 < 1e-2 && ratio >= 2.5 && ratio <= 6.5 && mass_drift <= 1e-10;
        record(11, ok,
               "QHD vs wave-function oracle at eps=0.5 t=0.2: density divergence " + fmt(div512) +
                   " (<1e-2) on n=512, halving ratio " + fmt(ratio) +
                   " (~4, accepted [2.5,6.5]), oracle mass drift " + fmt(mass_drift) +
                   " (<=1e-10)");
    } catch (const std::exception& e) {
        record(11, false, std::string("oracle comparison threw: ") + e.what());
    }
}

// --- criterion 12: determinism ------------------------------------------------------

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool dirs_identical(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> rel_a, rel_b;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) rel_a.push_back(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) rel_b.push_back(fs::relative(e.path(), b));
    std::sort(rel_a.begin(), rel_a.end());
    std::sort(rel_b.begin(), rel_b.end());
    if (rel_a != rel_b) return false;
    for (const auto& r : rel_a)
        if (read_file(a / r) != read_file(b / r)) return false;
    return !rel_a.empty();
}

void criterion_12(const std::string& cli_path) {
    try {
        const fs::path base = fs::temp_directory_path() / "eklab_acceptance_det";
        fs::remove_all(base);
        fs::create_directories(base);
        const fs::path cfg_path = base / "sweep.cfg";
        {
            std::ofstream cfg(cfg_path);
            cfg << "run.preset = cosine-bump\n"
                   "run.tau = 0.05\n"
                   "bl.c = 0.5\n"
                   "entropy.samples = 21\n"
                   "sweep.epsilons = 0.4, 0.2, 0.1\n"
                   "sweep.n_base = 64\n";
        }
        bool ok = false;
        std::string how;
        if (!cli_path.empty()) {
            how = "two CLI executions";
            for (int k = 1; k <= 2; ++k) {
                std::ostringstream cmd;
                cmd << '"' << cli_path << '"' << " --config " << cfg_path << " --out "
                    << (base / ("run" + std::to_string(k))) << " --serial sweep"
                    << " > " << (base / ("log" + std::to_string(k))) << " 2>&1";
                if (std::system(cmd.str().c_str()) != 0)
                    throw std::runtime_error("CLI sweep exited nonzero");
            }
            ok = dirs_identical(base / "run1", base / "run2");
        } else {
            how = "two in-process executions";
            KVConfig cfg = KVConfig::from_file(cfg_path.string(), config_schema());
            SweepSetup setup = sweep_from_config(cfg);
            run_sweep(setup, (base / "run1").string(), /*serial=*/true);
            run_sweep(setup, (base / "run2").string(), /*serial=*/true);
            ok = dirs_identical(base / "run1", base / "run2");
        }
        record(12, ok, "serial sweep reruns byte-identical (" + how + ")");
        fs::remove_all(base);
    } catch (const std::exception& e) {
        record(12, false, std::string("determinism check threw: ") + e.what());
    }
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli_path = argc > 1 ? argv[1] : "";
    const auto t0 = clk::now();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criteria_6_to_9();
    criterion_10();
    criterion_11();
    criterion_12(cli_path);
    std::printf("acceptance: %s (%.1f s total)\n", g_all_ok ? "ALL CRITERIA PASSED" : "FAILURES",
                seconds_since(t0));
    return g_all_ok ? 0 : 1;
}
