#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "eklab/flow_state.hpp"
#include "eklab/grid.hpp"
#include "eklab/state_functions.hpp"

namespace eklab {

struct EKConfig {
    StateFunctions state;
    Grid1D grid;
    double cfl = 0.8;             // in (0,1)
    double t_end = 0.0;           // > 0
    double vacuum_floor = 1e-10;  // > 0
    double energy_drift_tol = 1e-3;
    bool include_capillarity = true; // false runs the bare Euler limit of the scheme
    // MC-limited MUSCL reconstruction. Off by default: the acceptance regime
    // is smooth, and extremum clipping pollutes the 2nd-order residual
    // diagnostics. Enable for discontinuous data.
    bool limit_slopes = false;

    EKConfig(StateFunctions sf, Grid1D g, double t_end_);
};

struct EKRunStats {
    std::size_t steps = 0;
    std::size_t vacuum_events = 0; // cells floored, summed over stages
    double final_time = 0.0;
};

struct EKRunOptions {
    std::vector<double> sample_times; // ascending, inside [0, t_end]
    std::function<void(double, const FlowState&)> on_sample;

    // Record (t, state) after every step; only sensible for small runs.
    std::vector<std::pair<double, FlowState>>* trajectory = nullptr;

    // At each probe time, three consecutive fixed-dt states are produced for
    // centered time differencing: on_probe(t_center, prev, cur, next, dt).
    std::vector<double> probe_times;
    std::function<void(double, const FlowState&, const FlowState&, const FlowState&, double)>
        on_probe;
};

// Scalar test functions for the discrete weak-form residuals. phi must have
// zero trace at both walls.
struct WeakTestPair {
    std::function<double(double, double)> psi, psi_t, psi_x;
    std::function<double(double, double)> phi, phi_t, phi_x, phi_xx;
};

struct WeakResiduals {
    double mass = 0.0;
    double momentum = 0.0;
};

struct ResidualNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

// Finite-volume integrator for the Euler-Korteweg system in (rho, J) form:
// Rusanov fluxes with unlimited central MUSCL reconstruction for the
// hyperbolic part, centered stencils for the Korteweg stress, SSP-RK3 in
// time. Walls are no-flux: even/odd mirror ghosts make the mass flux through
// the walls vanish identically.
class EKSolver {
  public:
    explicit EKSolver(EKConfig cfg);

    const EKConfig& config() const { return cfg_; }
    const Grid1D& grid() const { return cfg_.grid; }
    const StateFunctions& state_functions() const { return cfg_.state; }

    // cfl * min( dx / max(|u|+c),  dx^2 / (pi^2 eps max mu'(rho)) )
    double stable_dt(const FlowState& s) const;

    void hyperbolic_tendency(const FlowState& s, Field& d_rho, Field& d_J) const;
    Field korteweg_tendency(const FlowState& s) const;         // K-form (primary)
    Field korteweg_tendency_mu_form(const FlowState& s) const; // mu' div m cross-check
    void rhs(const FlowState& s, Field& d_rho, Field& d_J) const;

    // One SSP-RK3 step; refuses dt above the stability bound.
    FlowState step(const FlowState& s, double dt, std::size_t* vacuum_flags = nullptr) const;

    EKRunStats run(FlowState& state, const EKRunOptions& opts) const;

    double total_energy(const FlowState& s) const;       // capillary term as |grad beta|^2
    double total_energy_kform(const FlowState& s) const; // capillary term as k |grad rho|^2

    WeakResiduals weak_residual(const std::vector<std::pair<double, FlowState>>& trajectory,
                                const WeakTestPair& test) const;

    // Discrete residual of the auxiliary momentum equation
    //   dt m + grad( div(mu'(rho) J) - Lambda . (sqrt(rho) grad mu'(rho)) ) = 0
    ResidualNorms m_equation_residual(const FlowState& prev, const FlowState& cur,
                                      const FlowState& next, double dt) const;

    // Discrete residuals of the augmented (u, v) system.
    std::pair<ResidualNorms, ResidualNorms> augmented_residuals(const FlowState& prev,
                                                                const FlowState& cur,
                                                                const FlowState& next,
                                                                double dt) const;

  private:
    EKConfig cfg_;

    FlowState stage_tendency_apply(const FlowState& base, const FlowState& ref, double w_ref,
                                   double dt_w, const Field& d_rho, const Field& d_J,
                                   std::size_t* flags) const;
    void check_finite(const Field& f, const char* what, double t_hint) const;
};

} // namespace eklab
