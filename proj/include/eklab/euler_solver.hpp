#pragma once

#include <functional>
#include <vector>

#include "eklab/grid.hpp"
#include "eklab/state_functions.hpp"

namespace eklab {

// Smooth fields of the limiting Euler solution at one instant, with every
// spatial/time derivative the entropy functionals and the boundary-layer
// corrector consume. All derivatives come from 4th-order centered stencils;
// time derivatives come from the equations themselves.
struct EulerReference {
    double t = 0.0;
    Grid1D grid;
    Field rho;      // even
    Field u;        // odd
    Field rho_x;    // odd
    Field u_x;      // even  (div u)
    Field u_xx;     // odd   (grad div u)
    Field v;        // odd   v = grad theta(rho) = theta'(rho) rho_x
    Field v_x;      // even  (div v)
    Field v_xx;     // odd   (grad div v)
    Field mu_p;     // even  mu'(rho)
    Field mu_p_x;   // odd
    Field theta_val;   // even theta(rho)
    Field dt_rho;      // even  from the continuity equation
    Field dt_u;        // odd   from the velocity equation
    Field dt_v;        // odd   from the v-equation
    Field dt_theta;    // even  theta'(rho) dt_rho
    Field dt_theta_x;  // odd
    Field rin_w;       // even  mu'(rho) div v + |v|^2 / 2
    Field rin_w_x;     // odd
    double max_grad_u = 0.0;
};

struct EulerConfigOptions {
    double cfl = 0.4;
    double density_floor = 1e-8;
    // <= 0 selects the automatic threshold 50 * max(initial |grad u|, initial |grad c_s|),
    // floored at the absolute value 50.
    double blowup_threshold = 0.0;
};

// 4th-order finite-difference integrator (RK4) for the compressible Euler
// system in non-conservative smooth-solution form,
//   dt rho = -(rho u)_x,   dt u = -u u_x - f'(rho)_x,
// with u = 0 at both walls imposed through the odd mirror extension. Valid on
// the strong-solution window only; the gradient monitor detects its end.
class EulerSolver {
  public:
    EulerSolver(StateFunctions sf, Grid1D grid, std::function<double(double)> rho0,
                std::function<double(double)> u0, EulerConfigOptions opts = {});

    const Grid1D& grid() const { return grid_; }
    double time() const { return t_; }
    const Field& rho() const { return rho_; }
    const Field& u() const { return u_; }
    double blowup_threshold() const { return threshold_; }

    double stable_dt() const;
    double gradient_monitor() const; // max |grad4 u|

    // Advance with RK4 to exactly time t (t >= current time).
    void advance_to(double t);

    // Integrate a fresh copy of the initial data up to t_end; returns the
    // first time the monitor crosses the blowup threshold or the density
    // floor is breached (== t_end if neither happens).
    double detect_window(double t_end) const;

    void reset(); // back to the initial data

    EulerReference reference() const;

    // Euler total energy and mass (4th-order conserved diagnostics).
    double total_energy() const;
    double mass() const;

    // Tendency in conservative momentum form, for the consistency cross-check.
    Field conservative_momentum_tendency() const;
    Field nonconservative_momentum_tendency() const;

  private:
    StateFunctions sf_;
    Grid1D grid_;
    EulerConfigOptions opts_;
    std::function<double(double)> rho0_, u0_;
    Field rho_, u_;
    double t_ = 0.0;
    double threshold_ = 0.0;

    void rhs(const Field& rho, const Field& u, Field& d_rho, Field& d_u) const;
    void rk4_step(double dt);
};

// Subsample a reference onto a coarser grid whose cell centers coincide with
// every `ratio`-th fine center (ratio must be odd).
EulerReference restrict_reference(const EulerReference& fine, const Grid1D& coarse,
                                  std::size_t ratio);

} // namespace eklab
