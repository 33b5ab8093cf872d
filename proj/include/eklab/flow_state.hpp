#pragma once

#include <cmath>
#include <cstddef>

#include "eklab/grid.hpp"
#include "eklab/state_functions.hpp"

namespace eklab {

// Cell-averaged (rho, J) with the no-flux ghost encoding: even extension for
// rho (zero normal derivative of beta(rho) at the walls), odd extension for J
// (zero normal trace of Lambda).
struct FlowState {
    Field rho; // Ghost::Even
    Field J;   // Ghost::Odd

    FlowState() = default;
    FlowState(std::size_t n) : rho(n, Ghost::Even, 1.0), J(n, Ghost::Odd, 0.0) {}

    std::size_t size() const { return rho.size(); }

    // Clamp density at the vacuum floor; returns the number of floored cells.
    std::size_t apply_floor(double floor) {
        std::size_t flagged = 0;
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (rho[i] < floor) {
                rho[i] = floor;
                ++flagged;
            }
        return flagged;
    }

    Field sqrt_rho() const {
        return map_field(rho, Ghost::Even, [](double r) { return std::sqrt(r); });
    }

    Field lambda() const { // Lambda = J / sqrt(rho)
        return zip_fields(J, rho, Ghost::Odd,
                          [](double j, double r) { return j / std::sqrt(r); });
    }

    Field velocity() const { // u = J / rho (well-defined above the floor)
        return zip_fields(J, rho, Ghost::Odd, [](double j, double r) { return j / r; });
    }

    Field beta_field(const StateFunctions& sf) const {
        return map_field(rho, Ghost::Even, [&](double r) { return sf.beta(r); });
    }

    Field grad_beta(const StateFunctions& sf, const Grid1D& g) const {
        return gradient(beta_field(sf), g);
    }

    // m = sqrt(rho) grad beta(rho)
    Field m_field(const StateFunctions& sf, const Grid1D& g) const {
        Field gb = grad_beta(sf, g);
        return zip_fields(rho, gb, Ghost::Odd,
                          [](double r, double b) { return std::sqrt(r) * b; });
    }

    // v = m / rho
    Field v_field(const StateFunctions& sf, const Grid1D& g) const {
        Field m = m_field(sf, g);
        return zip_fields(m, rho, Ghost::Odd, [](double mm, double r) { return mm / r; });
    }
};

} // namespace eklab
