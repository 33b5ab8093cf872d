#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "eklab/boundary_layer.hpp"
#include "eklab/euler_solver.hpp"
#include "eklab/flow_state.hpp"
#include "eklab/grid.hpp"
#include "eklab/state_functions.hpp"

namespace eklab {

// The fields a relative-entropy evaluation consumes. Built from a FlowState
// (stencil gradients) or assembled from analytic closures by the identity
// suite, which is what keeps pointwise identities at roundoff level there.
struct StateFields {
    Field rho;       // even
    Field J;         // odd
    Field lambda;    // odd
    Field sqrt_rho;  // even
    Field grad_beta; // odd

    static StateFields from_flow(const FlowState& s, const StateFunctions& sf, const Grid1D& g);
};

double total_energy_ek(const StateFields& s, const StateFunctions& sf, const Grid1D& g);

// E([rho,Lambda]|[r,U]) = int 1/2|Lambda - sqrt(rho) U|^2 + f(rho|r) + eps^2/2 |grad beta|^2
double entropy_E(const StateFields& s, const StateFunctions& sf, const Grid1D& g, const Field& r,
                 const Field& U);

// Expanded form: E_EK - int J.U + rho(-|U|^2/2 + f'(r)) + int p(r)
double entropy_E_expanded(const StateFields& s, const StateFunctions& sf, const Grid1D& g,
                          const Field& r, const Field& U);

// E_h = 1/2 int |Lambda - sqrt(rho)U|^2 + eps^2 |grad beta - sqrt(rho)V|^2 + int f(rho|r)
double entropy_Eh(const StateFields& s, const StateFunctions& sf, const Grid1D& g, const Field& r,
                  const Field& U, const Field& V);

// Energy-expanded form of E_h (v = grad beta / sqrt(rho) route).
double entropy_Eh_expanded(const StateFields& s, const StateFunctions& sf, const Grid1D& g,
                           const Field& r, const Field& U, const Field& V);

struct RemainderFirst {
    std::array<double, 5> r{};
    double total = 0.0;
};

RemainderFirst remainder_R(const FlowState& s, const StateFunctions& sf, const Grid1D& g,
                           const EulerReference& ref);

struct RemainderHigh {
    double r_rel = 0.0;
    double r_in = 0.0;
    std::array<double, 10> r_bl{};
    double r_bl_total = 0.0;
    double total = 0.0;
};

RemainderHigh remainder_Rh(const FlowState& s, const StateFunctions& sf, const Grid1D& g,
                           const EulerReference& ref, const BoundaryLayerField& bl);

struct DistanceSet {
    double l1 = 0.0;       // |rho - rho^E|_L1
    double lgamma = 0.0;   // |rho - rho^E|_Lgamma
    double lambda = 0.0;   // |Lambda - sqrt(rho) u^E|_L2
    double gradbeta = 0.0; // eps |grad beta(rho) - sqrt(rho) v^E|_L2
    double momentum = 0.0; // |J - rho^E u^E|_L1
};

DistanceSet distances(const FlowState& s, const StateFunctions& sf, const Grid1D& g,
                      const EulerReference& ref);

// eps^2/2 int rho |v_bl|^2: the measured O(eps^{2-2s}) gap between corrected
// and uncorrected high-order entropies.
double vbl_energy_gap(const FlowState& s, const StateFunctions& sf, const Grid1D& g,
                      const BoundaryLayerField& bl);

// One time level of the full report.
struct EntropyRow {
    double t = 0.0;
    double E_EK = 0.0;
    double E = 0.0;
    double E_h = 0.0;   // with corrected v^E_bl
    double E_h_E = 0.0; // with uncorrected v^E
    RemainderFirst first;
    RemainderHigh high;
    DistanceSet dist;
    double vbl_gap = 0.0;
    double mass = 0.0;
    double min_rho = 0.0;
    double max_abs_u = 0.0;
};

EntropyRow evaluate_entropy_row(double t, const FlowState& s, const StateFunctions& sf,
                                const Grid1D& g, const EulerReference& ref,
                                const BoundaryLayerField& bl);

struct GronwallResult {
    double C_fit = 0.0;
    double min_margin = 0.0; // min over tau of E(0) + int_0^tau R + tol - E(tau)
    double tol = 0.0;
    double envelope_offset = 0.0; // smallest b with E(tau) <= e^{C tau} (E(0) + b)
    bool ok = true;
};

GronwallResult gronwall_check(const std::vector<double>& t, const std::vector<double>& E,
                              const std::vector<double>& R, double tol);

// --- Gagliardo-Nirenberg interpolation checks on synthetic fields -----------

struct GNExponents {
    double a = 0.0;
    double b = 0.0;
};

GNExponents gn_exponents(int dim, double alpha);

// Scalar field on the tensor-product cube [0,1]^dim with n cells per side.
struct TensorField {
    int dim = 1;
    std::size_t n = 0;
    double dx = 0.0;
    std::vector<double> v;

    TensorField(int dim_, std::size_t n_);
    std::size_t index(std::size_t i, std::size_t j = 0, std::size_t k = 0) const;
};

// ratio = |rho^{(2+alpha)/2}|_L2 / ( |rho|_L1^a  |grad beta(rho)|_L2^b )
double gn_ratio(const TensorField& rho, double alpha, double c_alpha);

// Deterministic random smooth nonnegative field with zero boundary values,
// evaluable on any grid (refinement studies re-sample the same closure).
struct GNFieldSpec {
    static constexpr int n_modes = 4;
    double amp[n_modes];
    double freq[n_modes][3];
    double phase[n_modes][3];

    double eval(int dim, const double x[3]) const;
};

GNFieldSpec random_gn_spec(std::uint64_t& rng_state);
TensorField sample_gn_field(const GNFieldSpec& spec, int dim, std::size_t n);

} // namespace eklab
