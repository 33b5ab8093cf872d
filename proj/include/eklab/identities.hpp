#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eklab/state_functions.hpp"

namespace eklab {

struct IdentityResult {
    std::string name;
    double residual = 0.0; // max relative residual over all draws
    double tol = 0.0;
    bool pass = true;
    std::uint64_t worst_seed = 0; // draw seed that produced the residual
};

struct IdentityOptions {
    std::size_t count = 100;
    std::uint64_t seed = 20240901ull;
    // Fault injection for self-tests of the suite: scales grad beta away from
    // its consistent value, which must break the cross-route checks.
    double beta_fault_scale = 1.0;
};

// Runs every pointwise/integral identity of the relative-entropy machinery on
// `count` random smooth analytic field draws (trigonometric sums; the grid
// only supplies quadrature). Scalar identities are held to 1e-10 relative,
// integral identities to 1e-8.
std::vector<IdentityResult> run_identity_suite(const StateFunctions& sf,
                                               const IdentityOptions& opts);

bool all_pass(const std::vector<IdentityResult>& results);

} // namespace eklab
