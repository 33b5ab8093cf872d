#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "eklab/boundary_layer.hpp"
#include "eklab/errors.hpp"
#include "eklab/rate_fit.hpp"
#include "test_support.hpp"

using namespace eklab;
using test_support::observed_order;

namespace {
EulerReference make_ref(const StateFunctions& sf, std::size_t n,
                        const std::function<double(double)>& rho0,
                        const std::function<double(double)>& u0, double t = 0.0) {
    EulerSolver euler(sf, Grid1D(0.0, 1.0, n), rho0, u0);
    if (t > 0.0) euler.advance_to(t);
    return euler.reference();
}
const auto rho_bump = [](double x) { return 1.0 + 0.2 * std::cos(M_PI * x); };
const auto u_zero = [](double) { return 0.0; };
} // namespace

TEST_CASE("cutoff profile") {
    CHECK(Cutoff::chi(0.0) == 1.0);
    CHECK(Cutoff::chi_p(0.0) == 0.0);
    CHECK(Cutoff::chi(0.2) == 1.0);  // plateau
    CHECK(Cutoff::chi(1.0) == 0.0);  // support
    CHECK(Cutoff::chi(3.0) == 0.0);
    double prev = 1.0;
    for (double xi = 0.0; xi <= 1.3; xi += 0.01) {
        const double c = Cutoff::chi(xi);
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
        CHECK(c <= prev + 1e-14); // monotone nonincreasing
        prev = c;
    }
    // C^2 continuity at the junctions
    for (double xi : {0.25, 1.0}) {
        CHECK(std::abs(Cutoff::chi(xi - 1e-9) - Cutoff::chi(xi + 1e-9)) < 1e-7);
        CHECK(std::abs(Cutoff::chi_p(xi - 1e-9) - Cutoff::chi_p(xi + 1e-9)) < 1e-6);
        CHECK(std::abs(Cutoff::chi_pp(xi - 1e-9) - Cutoff::chi_pp(xi + 1e-9)) < 1e-5);
    }
    // chi' consistent with chi by differencing
    for (double xi : {0.3, 0.5, 0.8}) {
        const double fd = (Cutoff::chi(xi + 1e-6) - Cutoff::chi(xi - 1e-6)) / 2e-6;
        CHECK(fd == doctest::Approx(Cutoff::chi_p(xi)).epsilon(1e-5));
        const double fd2 = (Cutoff::chi_p(xi + 1e-6) - Cutoff::chi_p(xi - 1e-6)) / 2e-6;
        CHECK(fd2 == doctest::Approx(Cutoff::chi_pp(xi)).epsilon(1e-5));
    }
}

TEST_CASE("admissible rate exponents") {
    CHECK(admissible_s_sup(1, -1.0) == doctest::Approx(0.5));
    CHECK(admissible_s_sup(1, 0.0) == doctest::Approx(0.5)); // 5/9 > 1/2
    CHECK(admissible_s_sup(1, 3.0) == doctest::Approx(8.0 / 18.0));
    CHECK(admissible_s_sup(2, 0.0) == doctest::Approx(0.5));
    CHECK(admissible_s_sup(3, 0.0) == doctest::Approx(7.0 / 15.0));
    CHECK_THROWS_AS(admissible_s_sup(0, 0.0), ConfigError);
}

TEST_CASE("corrected wall condition holds identically") {
    StateFunctions sf = StateFunctions::qhd(0.1);
    EulerReference ref = make_ref(sf, 256, rho_bump, u_zero);
    BoundaryLayerField bl = build_boundary_layer(ref, 1.0, 0.1);
    CHECK(std::abs(bl.wall_defect_left) <= 1e-12);
    CHECK(std::abs(bl.wall_defect_right) <= 1e-12);
    for (std::size_t i = 0; i < ref.grid.n_cells; ++i)
        CHECK(bl.v_E_bl[i] == ref.v[i] - bl.v_bl[i]);
}

TEST_CASE("support containment and the constant-density form") {
    StateFunctions sf = StateFunctions::qhd(0.1);
    EulerReference ref = make_ref(sf, 512, [](double) { return 1.5; }, u_zero);
    const double c = 1.0, delta = 0.12;
    BoundaryLayerField bl = build_boundary_layer(ref, c, delta);
    const Grid1D& g = ref.grid;
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        const double x = g.center(i);
        const double d = g.dist_to_boundary(x);
        if (d >= c * delta) {
            CHECK(bl.v_bl[i] == 0.0);
        } else {
            // first term vanishes for constant density; only the cutoff term remains
            const double expect = sf.theta(1.5) * Cutoff::chi_p(d / (c * delta)) *
                                  g.dist_gradient_sign(x) / (c * delta);
            CHECK(bl.v_bl[i] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    // interior midpoint: exactly zero
    CHECK(bl.v_bl[g.n_cells / 2] == 0.0);
}

TEST_CASE("product-rule corrector agrees with the gradient of chi*theta") {
    StateFunctions sf = StateFunctions::qhd(0.1);
    const double c = 1.0, delta = 0.15;
    std::vector<double> hs, errs;
    for (std::size_t n : {256, 512, 1024}) {
        EulerReference ref = make_ref(sf, n, rho_bump, u_zero);
        BoundaryLayerField bl = build_boundary_layer(ref, c, delta);
        const Grid1D& g = ref.grid;
        Field w(n, Ghost::Even);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = Cutoff::chi(g.dist_to_boundary(g.center(i)) / (c * delta)) * ref.theta_val[i];
        Field grad_w = gradient(w, g);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(grad_w[i] - bl.v_bl[i]));
        hs.push_back(g.dx);
        errs.push_back(err);
    }
    CHECK(observed_order(hs, errs) > 1.5);
}

TEST_CASE("time derivative of the corrector matches time differencing") {
    StateFunctions sf = StateFunctions::qhd(0.1);
    const double c = 1.0, delta = 0.15, t0 = 0.05;
    const std::size_t n = 512;
    auto bl_at = [&](double t) {
        return build_boundary_layer(make_ref(sf, n, rho_bump, u_zero, t), c, delta);
    };
    BoundaryLayerField centre = bl_at(t0);
    std::vector<double> hs, errs;
    for (double h : {0.02, 0.01, 0.005}) {
        BoundaryLayerField bm = bl_at(t0 - h), bp = bl_at(t0 + h);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            err = std::max(err,
                           std::abs((bp.v_bl[i] - bm.v_bl[i]) / (2.0 * h) - centre.dt_v_bl[i]));
        hs.push_back(h);
        errs.push_back(err);
    }
    const double order = observed_order(hs, errs);
    CHECK(order > 1.6);
    CHECK(order < 2.6);
}

TEST_CASE("sup-norm scaling in delta") {
    StateFunctions sf = StateFunctions::qhd(0.1);
    EulerReference ref = make_ref(sf, 2048, rho_bump, u_zero);
    const std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
    std::vector<ScalingRow> rows = scaling_report(ref, 1.0, deltas);

    // sup|v_bl| * delta stays within a factor-3 band across the sweep
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rows) {
        lo = std::min(lo, r.sup_v_bl * r.delta);
        hi = std::max(hi, r.sup_v_bl * r.delta);
    }
    CHECK(hi / lo < 3.0);

    std::vector<double> d, s0, s1;
    for (const auto& r : rows) {
        d.push_back(r.delta);
        s0.push_back(r.sup_v_bl);
        s1.push_back(r.sup_grad_v_bl);
    }
    const double slope0 = fit_loglog(d, s0).slope;
    const double slope1 = fit_loglog(d, s1).slope;
    CHECK(slope0 == doctest::Approx(-1.0).epsilon(0.2));
    CHECK(slope1 == doctest::Approx(-2.0).epsilon(0.1));
}

TEST_CASE("overlapping layers are a configuration error") {
    StateFunctions sf = StateFunctions::qhd(0.1);
    EulerReference ref = make_ref(sf, 256, rho_bump, u_zero);
    CHECK_THROWS_AS(build_boundary_layer(ref, 1.0, 0.6), ConfigError);
    CHECK_THROWS_AS(build_boundary_layer(ref, 6.0, 0.1), ConfigError);
    CHECK_THROWS_AS(build_boundary_layer(ref, -1.0, 0.1), ConfigError);
}
