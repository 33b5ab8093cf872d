#include "eklab/euler_solver.hpp"

#include <cmath>
#include <sstream>

#include "eklab/errors.hpp"

namespace eklab {

EulerSolver::EulerSolver(StateFunctions sf, Grid1D grid, std::function<double(double)> rho0,
                         std::function<double(double)> u0, EulerConfigOptions opts)
    : sf_(sf), grid_(grid), opts_(opts), rho0_(std::move(rho0)), u0_(std::move(u0)) {
    reset();
    double inf_rho = rho_[0];
    for (std::size_t i = 0; i < rho_.size(); ++i) inf_rho = std::min(inf_rho, rho_[i]);
    if (!(inf_rho > 0.0)) throw ConfigError("EulerSolver: initial density must be positive");

    if (opts_.blowup_threshold > 0.0) {
        threshold_ = opts_.blowup_threshold;
    } else {
        Field cs = map_field(rho_, Ghost::Even, [&](double r) { return sf_.sound_speed(r); });
        const double g0 = std::max(gradient_monitor(), norm_linf(gradient4(cs, grid_)));
        threshold_ = std::max(50.0, 50.0 * g0);
    }
}

void EulerSolver::reset() {
    rho_ = from_function(grid_, rho0_, Ghost::Even);
    u_ = from_function(grid_, u0_, Ghost::Odd);
    t_ = 0.0;
}

double EulerSolver::stable_dt() const {
    double max_signal = 0.0;
    for (std::size_t i = 0; i < rho_.size(); ++i)
        max_signal = std::max(max_signal, std::abs(u_[i]) + sf_.sound_speed(rho_[i]));
    return opts_.cfl * grid_.dx / std::max(max_signal, 1e-14);
}

double EulerSolver::gradient_monitor() const { return norm_linf(gradient4(u_, grid_)); }

void EulerSolver::rhs(const Field& rho, const Field& u, Field& d_rho, Field& d_u) const {
    Field flux = zip_fields(rho, u, Ghost::Odd, [](double r, double uu) { return r * uu; });
    Field div_flux = gradient4(flux, grid_);
    Field fp = map_field(rho, Ghost::Even, [&](double r) { return sf_.internal_energy_prime(r); });
    Field grad_fp = gradient4(fp, grid_);
    Field grad_u = gradient4(u, grid_);
    d_rho = Field(rho.size(), Ghost::Even);
    d_u = Field(rho.size(), Ghost::Odd);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        d_rho[i] = -div_flux[i];
        d_u[i] = -u[i] * grad_u[i] - grad_fp[i];
    }
}

void EulerSolver::rk4_step(double dt) {
    Field k1r, k1u, k2r, k2u, k3r, k3u, k4r, k4u;
    rhs(rho_, u_, k1r, k1u);
    Field r2 = rho_, u2 = u_;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        r2[i] += 0.5 * dt * k1r[i];
        u2[i] += 0.5 * dt * k1u[i];
    }
    rhs(r2, u2, k2r, k2u);
    Field r3 = rho_, u3 = u_;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        r3[i] += 0.5 * dt * k2r[i];
        u3[i] += 0.5 * dt * k2u[i];
    }
    rhs(r3, u3, k3r, k3u);
    Field r4 = rho_, u4 = u_;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        r4[i] += dt * k3r[i];
        u4[i] += dt * k3u[i];
    }
    rhs(r4, u4, k4r, k4u);
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        rho_[i] += dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i] + k4r[i]);
        u_[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
    }
    t_ += dt;
    for (std::size_t i = 0; i < rho_.size(); ++i)
        if (!(rho_[i] > opts_.density_floor)) {
            std::ostringstream os;
            os << "EulerSolver: density floor breached at t=" << t_ << " (strong-solution window ended)";
            throw NumericalFailure(os.str());
        }
}

void EulerSolver::advance_to(double t) {
    if (t < t_ - 1e-13) throw ConfigError("EulerSolver::advance_to: cannot integrate backwards");
    while (t_ < t - 1e-13) {
        double dt = std::min(stable_dt(), t - t_);
        rk4_step(dt);
        if (std::abs(t_ - t) < 1e-13) t_ = t;
    }
}

double EulerSolver::detect_window(double t_end) const {
    EulerSolver probe(*this);
    probe.reset();
    while (probe.t_ < t_end - 1e-13) {
        if (probe.gradient_monitor() >= probe.threshold_) return probe.t_;
        double dt = std::min(probe.stable_dt(), t_end - probe.t_);
        try {
            probe.rk4_step(dt);
        } catch (const NumericalFailure&) {
            return probe.t_;
        }
    }
    return t_end;
}

double EulerSolver::total_energy() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < rho_.size(); ++i)
        sum += 0.5 * rho_[i] * u_[i] * u_[i] + sf_.internal_energy(rho_[i]);
    return sum * grid_.dx;
}

double EulerSolver::mass() const { return integral(rho_, grid_); }

Field EulerSolver::conservative_momentum_tendency() const {
    Field flux(rho_.size(), Ghost::Even); // rho u^2 + p is even
    for (std::size_t i = 0; i < rho_.size(); ++i)
        flux[i] = rho_[i] * u_[i] * u_[i] + sf_.pressure(rho_[i]);
    Field out = gradient4(flux, grid_);
    for (std::size_t i = 0; i < rho_.size(); ++i) out[i] = -out[i];
    return out;
}

Field EulerSolver::nonconservative_momentum_tendency() const {
    Field d_rho, d_u;
    rhs(rho_, u_, d_rho, d_u);
    Field out(rho_.size(), Ghost::Odd); // rho dt_u + u dt_rho
    for (std::size_t i = 0; i < rho_.size(); ++i)
        out[i] = rho_[i] * d_u[i] + u_[i] * d_rho[i];
    return out;
}

EulerReference EulerSolver::reference() const {
    EulerReference ref;
    ref.t = t_;
    ref.grid = grid_;
    ref.rho = rho_;
    ref.u = u_;
    ref.rho_x = gradient4(rho_, grid_);
    ref.u_x = gradient4(u_, grid_);
    ref.u_xx = gradient4(ref.u_x, grid_);

    ref.v = Field(rho_.size(), Ghost::Odd);
    ref.mu_p = Field(rho_.size(), Ghost::Even);
    ref.theta_val = Field(rho_.size(), Ghost::Even);
    for (std::size_t i = 0; i < rho_.size(); ++i) {
        ref.v[i] = sf_.theta_prime(rho_[i]) * ref.rho_x[i];
        ref.mu_p[i] = sf_.mu_prime(rho_[i]);
        ref.theta_val[i] = sf_.theta(rho_[i]);
    }
    ref.v_x = gradient4(ref.v, grid_);
    ref.v_xx = gradient4(ref.v_x, grid_);
    ref.mu_p_x = gradient4(ref.mu_p, grid_);

    Field d_rho, d_u;
    rhs(rho_, u_, d_rho, d_u);
    ref.dt_rho = d_rho;
    ref.dt_u = d_u;

    // dt v from the exact evolution equation dt v = -grad(u v + mu'(rho) div u),
    // a consequence of the continuity equation alone.
    Field pv(rho_.size(), Ghost::Even);
    for (std::size_t i = 0; i < rho_.size(); ++i)
        pv[i] = u_[i] * ref.v[i] + ref.mu_p[i] * ref.u_x[i];
    Field grad_pv = gradient4(pv, grid_);
    ref.dt_v = Field(rho_.size(), Ghost::Odd);
    for (std::size_t i = 0; i < rho_.size(); ++i) ref.dt_v[i] = -grad_pv[i];

    ref.dt_theta = Field(rho_.size(), Ghost::Even);
    for (std::size_t i = 0; i < rho_.size(); ++i)
        ref.dt_theta[i] = sf_.theta_prime(rho_[i]) * d_rho[i];
    ref.dt_theta_x = gradient4(ref.dt_theta, grid_);

    ref.rin_w = Field(rho_.size(), Ghost::Even);
    for (std::size_t i = 0; i < rho_.size(); ++i)
        ref.rin_w[i] = ref.mu_p[i] * ref.v_x[i] + 0.5 * ref.v[i] * ref.v[i];
    ref.rin_w_x = gradient4(ref.rin_w, grid_);

    ref.max_grad_u = norm_linf(ref.u_x);
    return ref;
}

EulerReference restrict_reference(const EulerReference& fine, const Grid1D& coarse,
                                  std::size_t ratio) {
    if (ratio % 2 == 0) throw ConfigError("restrict_reference: ratio must be odd");
    if (fine.grid.n_cells != coarse.n_cells * ratio)
        throw ConfigError("restrict_reference: grid sizes do not match the ratio");

    auto pick = [&](const Field& f) {
        Field out(coarse.n_cells, f.ghost());
        const std::size_t off = (ratio - 1) / 2;
        for (std::size_t i = 0; i < coarse.n_cells; ++i) out[i] = f[i * ratio + off];
        return out;
    };
    EulerReference out;
    out.t = fine.t;
    out.grid = coarse;
    out.rho = pick(fine.rho);
    out.u = pick(fine.u);
    out.rho_x = pick(fine.rho_x);
    out.u_x = pick(fine.u_x);
    out.u_xx = pick(fine.u_xx);
    out.v = pick(fine.v);
    out.v_x = pick(fine.v_x);
    out.v_xx = pick(fine.v_xx);
    out.mu_p = pick(fine.mu_p);
    out.mu_p_x = pick(fine.mu_p_x);
    out.theta_val = pick(fine.theta_val);
    out.dt_rho = pick(fine.dt_rho);
    out.dt_u = pick(fine.dt_u);
    out.dt_v = pick(fine.dt_v);
    out.dt_theta = pick(fine.dt_theta);
    out.dt_theta_x = pick(fine.dt_theta_x);
    out.rin_w = pick(fine.rin_w);
    out.rin_w_x = pick(fine.rin_w_x);
    out.max_grad_u = fine.max_grad_u;
    return out;
}

} // namespace eklab
