#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "eklab/flow_state.hpp"
#include "eklab/grid.hpp"

namespace eklab {

using cplx = std::complex<double>;

// Semiclassical NLS
//   i eps dt psi = -eps^2/2 dxx psi + gamma/(gamma-1) |psi|^{2(gamma-1)} psi
// on [x_min, x_max] with homogeneous Neumann walls, discretized by cosine
// collocation (points = cell centers, so hydrodynamic fields line up with the
// finite-volume grid) and advanced by Strang splitting. Both sub-flows are
// exact, so mass is conserved to roundoff and the energy error is O(dt^2).
class NLSOracle {
  public:
    // n_cells must be a power of two.
    NLSOracle(Grid1D grid, double epsilon, double gamma = 2.0);

    const Grid1D& grid() const { return grid_; }
    double epsilon() const { return eps_; }

    // psi0 = sqrt(rho0) exp(i S0 / eps) built from hydrodynamic data.
    std::vector<cplx> from_hydro(const std::function<double(double)>& rho0,
                                 const std::function<double(double)>& S0) const;

    void step(std::vector<cplx>& psi, double dt) const;
    void run(std::vector<cplx>& psi, double t_end, double dt) const;

    double mass(const std::vector<cplx>& psi) const;   // int |psi|^2
    double energy(const std::vector<cplx>& psi) const; // int eps^2/2 |dx psi|^2 + f(|psi|^2)

    // Spectral derivative through the even extension.
    std::vector<cplx> derivative(const std::vector<cplx>& psi) const;

    // Spectral derivative of a field that is odd about both walls (e.g. the
    // Madelung momentum density).
    std::vector<double> derivative_odd(const std::vector<double>& f) const;

    // Madelung map: rho = |psi|^2 (even), J = eps Im(conj(psi) dx psi) (odd).
    FlowState madelung(const std::vector<cplx>& psi) const;

    // Residual of the even-extension symmetry of the spectrum (the sine modes);
    // identically zero for fields generated by this oracle.
    double odd_mode_residual(const std::vector<cplx>& psi) const;

    // Forward/backward cosine transform (DCT-II coefficients, unnormalized).
    std::vector<cplx> dct(const std::vector<cplx>& f) const;
    std::vector<cplx> idct(const std::vector<cplx>& c) const;

  private:
    Grid1D grid_;
    double eps_;
    double gamma_;

    void phase_step(std::vector<cplx>& psi, double dt) const;  // nonlinear sub-flow
    void linear_step(std::vector<cplx>& psi, double dt) const; // cosine multiplier
};

} // namespace eklab
