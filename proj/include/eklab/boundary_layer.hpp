#pragma once

#include <vector>

#include "eklab/euler_solver.hpp"
#include "eklab/grid.hpp"
#include "eklab/state_functions.hpp"

namespace eklab {

// C^2 cutoff with a plateau: chi == 1 on [0, 1/4], quintic-smoothstep descent
// on [1/4, 1], chi == 0 on [1, inf). chi(0) = 1 and chi'(0) = 0 hold exactly,
// which is what makes the corrected wall condition an identity.
struct Cutoff {
    static double chi(double xi);
    static double chi_p(double xi);
    static double chi_pp(double xi);
};

// Supremum of admissible layer-rate exponents s (delta ~ eps^s).
double admissible_s_sup(int dim, double alpha);

// Corrector v_bl = grad( chi(d_Omega/(c delta)) theta(rho^E) ) and the
// corrected test velocity v^E_bl = v^E - v_bl, built on the grid of the
// reference snapshot passed in.
struct BoundaryLayerField {
    double c = 1.0;
    double delta = 0.0;
    double s_exponent = 0.0; // informational: delta = epsilon^s when built that way
    Field v_bl;          // odd
    Field v_E_bl;        // odd
    Field dt_v_bl;       // odd
    Field div_v_bl;      // even
    Field grad_div_v_bl; // odd
    double wall_defect_left = 0.0;  // (v^E - v_bl) . n at x_min
    double wall_defect_right = 0.0; // (v^E - v_bl) . n at x_max
};

BoundaryLayerField build_boundary_layer(const EulerReference& ref, double c, double delta,
                                        double s_exponent = 0.0);

struct ScalingRow {
    double delta = 0.0;
    double sup_v_bl = 0.0;
    double sup_grad_v_bl = 0.0;
    double sup_dt_v_bl = 0.0;
};

std::vector<ScalingRow> scaling_report(const EulerReference& ref, double c,
                                       const std::vector<double>& deltas);

} // namespace eklab
