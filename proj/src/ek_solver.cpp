#include "eklab/ek_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "eklab/errors.hpp"

namespace eklab {

EKConfig::EKConfig(StateFunctions sf, Grid1D g, double t_end_)
    : state(sf), grid(g), t_end(t_end_) {
    if (!(t_end > 0.0)) throw ConfigError("EKConfig: t_end must be > 0");
}

EKSolver::EKSolver(EKConfig cfg) : cfg_(std::move(cfg)) {
    if (!(cfg_.cfl > 0.0 && cfg_.cfl < 1.0)) throw ConfigError("EKSolver: cfl must lie in (0,1)");
    if (!(cfg_.vacuum_floor > 0.0)) throw ConfigError("EKSolver: vacuum_floor must be > 0");
}

double EKSolver::stable_dt(const FlowState& s) const {
    const auto& sf = cfg_.state;
    const double dx = cfg_.grid.dx;
    double max_signal = 0.0;
    double max_mu_prime = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = std::max(s.rho[i], cfg_.vacuum_floor);
        const double u = s.J[i] / r;
        max_signal = std::max(max_signal, std::abs(u) + sf.sound_speed(r));
        max_mu_prime = std::max(max_mu_prime, sf.mu_prime(r));
    }
    double dt = dx / std::max(max_signal, 1e-14);
    if (cfg_.include_capillarity) {
        const double pi2 = M_PI * M_PI;
        dt = std::min(dt, dx * dx / (pi2 * sf.epsilon * std::max(max_mu_prime, 1e-14)));
    }
    return cfg_.cfl * dt;
}

void EKSolver::hyperbolic_tendency(const FlowState& s, Field& d_rho, Field& d_J) const {
    const auto& sf = cfg_.state;
    const long n = static_cast<long>(s.size());
    const double dx = cfg_.grid.dx;

    if (d_rho.size() != s.size()) d_rho = Field(s.size(), Ghost::Even);
    if (d_J.size() != s.size()) d_J = Field(s.size(), Ghost::Odd);

    // Padded copies (two ghosts each side) keep the face loop branch-free.
    const std::size_t np = static_cast<std::size_t>(n) + 4;
    std::vector<double> rp(np), jp(np);
    for (long i = -2; i < n + 2; ++i) {
        rp[static_cast<std::size_t>(i + 2)] = s.rho.at(i);
        jp[static_cast<std::size_t>(i + 2)] = s.J.at(i);
    }

    // One slope per cell c in [-1, n], stored at c+1.
    std::vector<double> sr(static_cast<std::size_t>(n) + 2), sj(static_cast<std::size_t>(n) + 2);
    auto minmod3 = [](double a, double b, double c) {
        if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
        if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
        return 0.0;
    };
    const bool limit = cfg_.limit_slopes;
    for (long c = -1; c <= n; ++c) {
        const std::size_t p = static_cast<std::size_t>(c + 2);
        const double cr = 0.5 * (rp[p + 1] - rp[p - 1]);
        const double cj = 0.5 * (jp[p + 1] - jp[p - 1]);
        if (limit) {
            sr[p - 1] = minmod3(cr, 2.0 * (rp[p + 1] - rp[p]), 2.0 * (rp[p] - rp[p - 1]));
            sj[p - 1] = minmod3(cj, 2.0 * (jp[p + 1] - jp[p]), 2.0 * (jp[p] - jp[p - 1]));
        } else {
            sr[p - 1] = cr;
            sj[p - 1] = cj;
        }
    }

    // Face loop: face f sits between cells f-1 and f, f = 0..n.
    std::vector<double> fmass(static_cast<std::size_t>(n) + 1);
    std::vector<double> fmom(static_cast<std::size_t>(n) + 1);
    const double floor = cfg_.vacuum_floor;
    for (long f = 0; f <= n; ++f) {
        const std::size_t k = static_cast<std::size_t>(f);
        const double rho_L = rp[k + 1] + 0.5 * sr[k];
        const double J_L = jp[k + 1] + 0.5 * sj[k];
        const double rho_R = rp[k + 2] - 0.5 * sr[k + 1];
        const double J_R = jp[k + 2] - 0.5 * sj[k + 1];
        const double rl = std::max(rho_L, floor);
        const double rr = std::max(rho_R, floor);
        const double uL = J_L / rl, uR = J_R / rr;
        const double speed =
            std::max(std::abs(uL) + sf.sound_speed(rl), std::abs(uR) + sf.sound_speed(rr));
        fmass[k] = 0.5 * (J_L + J_R) - 0.5 * speed * (rho_R - rho_L);
        fmom[k] = 0.5 * (J_L * uL + sf.pressure(rl) + J_R * uR + sf.pressure(rr)) -
                  0.5 * speed * (J_R - J_L);
    }
    // Mirror ghosts already cancel the wall mass flux exactly; pin it anyway.
    fmass[0] = 0.0;
    fmass[static_cast<std::size_t>(n)] = 0.0;

    const double inv_dx = 1.0 / dx;
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        d_rho[k] = -(fmass[k + 1] - fmass[k]) * inv_dx;
        d_J[k] = -(fmom[k + 1] - fmom[k]) * inv_dx;
    }
}

Field EKSolver::korteweg_tendency(const FlowState& s) const {
    const auto& sf = cfg_.state;
    const auto& g = cfg_.grid;
    const double eps2 = sf.epsilon * sf.epsilon;

    Field grad_rho = gradient(s.rho, g);
    Field beta = s.beta_field(sf);
    Field grad_beta = gradient(beta, g);
    Field K = map_field(s.rho, Ghost::Even, [&](double r) { return sf.cap_K(r); });
    Field lapK = laplacian(K, g);
    Field pi_c(s.size(), Ghost::Even);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double ks = sf.cap_K_second(std::max(s.rho[i], cfg_.vacuum_floor));
        pi_c[i] = lapK[i] - 0.5 * ks * grad_rho[i] * grad_rho[i] - grad_beta[i] * grad_beta[i];
    }
    Field out = gradient(pi_c, g);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] *= eps2;
    return out;
}

Field EKSolver::korteweg_tendency_mu_form(const FlowState& s) const {
    const auto& sf = cfg_.state;
    const auto& g = cfg_.grid;
    const double eps2 = sf.epsilon * sf.epsilon;

    Field grad_beta = gradient(s.beta_field(sf), g);
    Field m = zip_fields(s.rho, grad_beta, Ghost::Odd,
                         [](double r, double b) { return std::sqrt(r) * b; });
    Field div_m = divergence(m, g);
    Field q(s.size(), Ghost::Even);
    for (std::size_t i = 0; i < s.size(); ++i)
        q[i] = sf.mu_prime(std::max(s.rho[i], cfg_.vacuum_floor)) * div_m[i] -
               grad_beta[i] * grad_beta[i];
    Field out = gradient(q, g);
    for (std::size_t i = 0; i < s.size(); ++i) out[i] *= eps2;
    return out;
}

void EKSolver::rhs(const FlowState& s, Field& d_rho, Field& d_J) const {
    hyperbolic_tendency(s, d_rho, d_J);
    if (cfg_.include_capillarity) {
        Field cap = korteweg_tendency(s);
        for (std::size_t i = 0; i < s.size(); ++i) d_J[i] += cap[i];
    }
}

void EKSolver::check_finite(const Field& f, const char* what, double t_hint) const {
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!std::isfinite(f[i])) {
            std::ostringstream os;
            os << "EKSolver: non-finite " << what << " at cell " << i << " (x="
               << cfg_.grid.center(i) << ", t~" << t_hint << ")";
            throw NumericalFailure(os.str());
        }
}

// Shu-Osher stages in increment form, out = base + w ((ref - base) + dt d);
// constants with zero tendency are bit-exact fixed points this way.
FlowState EKSolver::stage_tendency_apply(const FlowState& base, const FlowState& ref,
                                         double w_ref, double dt_w, const Field& d_rho,
                                         const Field& d_J, std::size_t* flags) const {
    FlowState out(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.rho[i] = base.rho[i] + w_ref * ((ref.rho[i] - base.rho[i]) + dt_w * d_rho[i]);
        out.J[i] = base.J[i] + w_ref * ((ref.J[i] - base.J[i]) + dt_w * d_J[i]);
    }
    const std::size_t n_flagged = out.apply_floor(cfg_.vacuum_floor);
    if (flags) *flags += n_flagged;
    return out;
}

FlowState EKSolver::step(const FlowState& s, double dt, std::size_t* vacuum_flags) const {
    const double bound = stable_dt(s);
    if (dt > bound * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "EKSolver::step: dt=" << dt << " exceeds stability bound " << bound;
        throw NumericalFailure(os.str());
    }
    Field d_rho, d_J;

    rhs(s, d_rho, d_J);
    check_finite(d_J, "momentum tendency", dt);
    FlowState s1 = stage_tendency_apply(s, s, 1.0, dt, d_rho, d_J, vacuum_flags);

    rhs(s1, d_rho, d_J);
    FlowState s2 = stage_tendency_apply(s, s1, 0.25, dt, d_rho, d_J, vacuum_flags);

    rhs(s2, d_rho, d_J);
    return stage_tendency_apply(s, s2, 2.0 / 3.0, dt, d_rho, d_J, vacuum_flags);
}

EKRunStats EKSolver::run(FlowState& state, const EKRunOptions& opts) const {
    EKRunStats stats;
    const double t_end = cfg_.t_end;
    double t = 0.0;
    state.apply_floor(cfg_.vacuum_floor);

    std::size_t next_sample = 0;
    auto emit_samples_at = [&](double tt) {
        while (next_sample < opts.sample_times.size() &&
               opts.sample_times[next_sample] <= tt + 1e-13) {
            if (opts.on_sample) opts.on_sample(opts.sample_times[next_sample], state);
            ++next_sample;
        }
    };
    emit_samples_at(0.0);
    if (opts.trajectory) opts.trajectory->emplace_back(0.0, state);

    std::size_t next_probe = 0;

    while (t < t_end - 1e-13) {
        double dt = stable_dt(state);
        double t_stop = t_end;
        if (next_sample < opts.sample_times.size())
            t_stop = std::min(t_stop, opts.sample_times[next_sample]);
        bool hit_stop = false;
        if (t + dt >= t_stop - 1e-13) {
            dt = t_stop - t;
            hit_stop = true;
        }
        state = step(state, dt, &stats.vacuum_events);
        ++stats.steps;
        t = hit_stop ? t_stop : t + dt;

        emit_samples_at(t);
        if (opts.trajectory) opts.trajectory->emplace_back(t, state);

        if (next_probe < opts.probe_times.size() && t >= opts.probe_times[next_probe] - 1e-13) {
            const double pdt = stable_dt(state);
            FlowState s1 = step(state, pdt);
            FlowState s2 = step(s1, pdt);
            if (opts.on_probe) opts.on_probe(t + pdt, state, s1, s2, pdt);
            ++next_probe;
        }
    }
    stats.final_time = t;
    return stats;
}

double EKSolver::total_energy(const FlowState& s) const {
    const auto& sf = cfg_.state;
    Field gb = s.grad_beta(sf, cfg_.grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = std::max(s.rho[i], cfg_.vacuum_floor);
        sum += 0.5 * s.J[i] * s.J[i] / r + sf.internal_energy(r) +
               0.5 * sf.epsilon * sf.epsilon * gb[i] * gb[i];
    }
    return sum * cfg_.grid.dx;
}

double EKSolver::total_energy_kform(const FlowState& s) const {
    const auto& sf = cfg_.state;
    Field gr = gradient(s.rho, cfg_.grid);
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double r = std::max(s.rho[i], cfg_.vacuum_floor);
        sum += 0.5 * s.J[i] * s.J[i] / r + sf.internal_energy(r) +
               0.5 * sf.epsilon * sf.epsilon * sf.capillarity_k(r) * gr[i] * gr[i];
    }
    return sum * cfg_.grid.dx;
}

WeakResiduals EKSolver::weak_residual(const std::vector<std::pair<double, FlowState>>& traj,
                                      const WeakTestPair& test) const {
    if (traj.size() < 2) throw ConfigError("weak_residual: trajectory needs >= 2 entries");
    const auto& g = cfg_.grid;
    const auto& sf = cfg_.state;
    const double eps2 = sf.epsilon * sf.epsilon;

    // phi must be admissible: zero normal component at both walls.
    for (const double tt : {traj.front().first, 0.5 * (traj.front().first + traj.back().first),
                            traj.back().first}) {
        if (std::abs(test.phi(g.x_min, tt)) > 1e-12 || std::abs(test.phi(g.x_max, tt)) > 1e-12)
            throw ConfigError("weak_residual: phi violates phi.n = 0 at the walls");
    }

    auto mass_integrand = [&](double t, const FlowState& s) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double x = g.center(i);
            sum += s.rho[i] * test.psi_t(x, t) + s.J[i] * test.psi_x(x, t);
        }
        return sum * g.dx;
    };
    auto momentum_integrand = [&](double t, const FlowState& s) {
        Field grad_rho = gradient(s.rho, g);
        Field grad_beta = gradient(s.beta_field(sf), g);
        Field K = map_field(s.rho, Ghost::Even, [&](double r) { return sf.cap_K(r); });
        Field grad_K = gradient(K, g);
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double x = g.center(i);
            const double r = std::max(s.rho[i], cfg_.vacuum_floor);
            const double lam2 = s.J[i] * s.J[i] / r;
            sum += s.J[i] * test.phi_t(x, t) + lam2 * test.phi_x(x, t) +
                   sf.pressure(r) * test.phi_x(x, t) +
                   eps2 * grad_beta[i] * grad_beta[i] * test.phi_x(x, t) +
                   0.5 * eps2 * sf.cap_K_second(r) * grad_rho[i] * grad_rho[i] *
                       test.phi_x(x, t) +
                   eps2 * grad_K[i] * test.phi_xx(x, t);
        }
        return sum * g.dx;
    };

    double rhs_mass = 0.0, rhs_mom = 0.0;
    double prev_mass = mass_integrand(traj[0].first, traj[0].second);
    double prev_mom = momentum_integrand(traj[0].first, traj[0].second);
    for (std::size_t k = 1; k < traj.size(); ++k) {
        const double cur_mass = mass_integrand(traj[k].first, traj[k].second);
        const double cur_mom = momentum_integrand(traj[k].first, traj[k].second);
        const double h = traj[k].first - traj[k - 1].first;
        rhs_mass += 0.5 * h * (prev_mass + cur_mass);
        rhs_mom += 0.5 * h * (prev_mom + cur_mom);
        prev_mass = cur_mass;
        prev_mom = cur_mom;
    }

    auto boundary_term = [&](const FlowState& s, double t,
                             const std::function<double(double, double)>& w, bool momentum) {
        double sum = 0.0;
        for (std::size_t i = 0; i < s.size(); ++i)
            sum += (momentum ? s.J[i] : s.rho[i]) * w(g.center(i), t);
        return sum * g.dx;
    };
    const double lhs_mass = boundary_term(traj.back().second, traj.back().first, test.psi, false) -
                            boundary_term(traj.front().second, traj.front().first, test.psi, false);
    const double lhs_mom = boundary_term(traj.back().second, traj.back().first, test.phi, true) -
                           boundary_term(traj.front().second, traj.front().first, test.phi, true);

    return WeakResiduals{lhs_mass - rhs_mass, lhs_mom - rhs_mom};
}

ResidualNorms EKSolver::m_equation_residual(const FlowState& prev, const FlowState& cur,
                                            const FlowState& next, double dt) const {
    const auto& g = cfg_.grid;
    const auto& sf = cfg_.state;

    Field m_prev = prev.m_field(sf, g);
    Field m_next = next.m_field(sf, g);

    Field muJ = zip_fields(cur.rho, cur.J, Ghost::Odd,
                           [&](double r, double j) { return sf.mu_prime(r) * j; });
    Field div_muJ = divergence(muJ, g);
    Field grad_rho = gradient(cur.rho, g);
    Field lam = cur.lambda();
    Field a(cur.size(), Ghost::Even);
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const double r = std::max(cur.rho[i], cfg_.vacuum_floor);
        a[i] = div_muJ[i] - lam[i] * std::sqrt(r) * sf.mu_second(r) * grad_rho[i];
    }
    Field grad_a = gradient(a, g);

    ResidualNorms out;
    double s2 = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const double res = (m_next[i] - m_prev[i]) / (2.0 * dt) + grad_a[i];
        s2 += res * res;
        out.linf = std::max(out.linf, std::abs(res));
    }
    out.l2 = std::sqrt(s2 * g.dx);
    return out;
}

std::pair<ResidualNorms, ResidualNorms> EKSolver::augmented_residuals(const FlowState& prev,
                                                                      const FlowState& cur,
                                                                      const FlowState& next,
                                                                      double dt) const {
    const auto& g = cfg_.grid;
    const auto& sf = cfg_.state;
    const double eps2 = sf.epsilon * sf.epsilon;

    auto u_of = [&](const FlowState& s) { return s.velocity(); };
    auto v_of = [&](const FlowState& s) {
        Field th = map_field(s.rho, Ghost::Even, [&](double r) { return sf.theta(r); });
        return gradient(th, g);
    };

    Field u_prev = u_of(prev), u_cur = u_of(cur), u_next = u_of(next);
    Field v_prev = v_of(prev), v_cur = v_of(cur), v_next = v_of(next);

    Field grad_u = gradient(u_cur, g);
    Field div_v = divergence(v_cur, g);
    Field p_u(cur.size(), Ghost::Even); // f'(rho) - eps^2 mu' div v - eps^2/2 |v|^2
    Field p_v(cur.size(), Ghost::Even); // u v + mu'(rho) div u
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const double r = std::max(cur.rho[i], cfg_.vacuum_floor);
        p_u[i] = sf.internal_energy_prime(r) - eps2 * sf.mu_prime(r) * div_v[i] -
                 0.5 * eps2 * v_cur[i] * v_cur[i];
        p_v[i] = u_cur[i] * v_cur[i] + sf.mu_prime(r) * grad_u[i];
    }
    Field grad_pu = gradient(p_u, g);
    Field grad_pv = gradient(p_v, g);

    ResidualNorms res_u, res_v;
    double s2u = 0.0, s2v = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const double ru =
            (u_next[i] - u_prev[i]) / (2.0 * dt) + u_cur[i] * grad_u[i] + grad_pu[i];
        const double rv = (v_next[i] - v_prev[i]) / (2.0 * dt) + grad_pv[i];
        s2u += ru * ru;
        s2v += rv * rv;
        res_u.linf = std::max(res_u.linf, std::abs(ru));
        res_v.linf = std::max(res_v.linf, std::abs(rv));
    }
    res_u.l2 = std::sqrt(s2u * g.dx);
    res_v.l2 = std::sqrt(s2v * g.dx);
    return {res_u, res_v};
}

} // namespace eklab
