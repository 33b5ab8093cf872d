#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace eklab {

// Power with fast paths for the half-integer exponents the power laws
// produce; solvers call these per cell per stage, and the generic pow is the
// dominant cost otherwise.
inline double pow_se(double x, double e) {
    if (e == 0.0) return 1.0;
    if (e == 0.5) return std::sqrt(x);
    if (e == 1.0) return x;
    if (e == 1.5) return x * std::sqrt(x);
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == -0.5) return 1.0 / std::sqrt(x);
    if (e == -1.0) return 1.0 / x;
    return std::pow(x, e);
}

// Scalar thermodynamic and capillarity state maps for the barotropic
// Euler-Korteweg system with
//
//   p(rho)   = rho^gamma                  (gamma > 1)
//   k(rho)   = c_alpha * rho^alpha        (c_alpha > 0, alpha >= -1)
//
// and the derived state functions
//
//   f(rho)      = rho^gamma / (gamma - 1)            internal energy density
//   beta(rho)   = int_0^rho sqrt(k)        = 2 sqrt(c_alpha)/(2+alpha) rho^{(2+alpha)/2}
//   K(rho)      = int_0^rho s k(s) ds      = c_alpha/(2+alpha) rho^{2+alpha}
//   mu'(rho)    = sqrt(rho k(rho)),  theta'(rho) = sqrt(k(rho)/rho).
//
// The closed-form prefactors come from the defining integrals (beta' = sqrt(k)
// is what every energy identity uses); tests cross-check each one against
// quadrature of its integral.
//
// All maps are pure and allocation-free so solvers can call them per cell.
struct StateFunctions {
    double gamma;   // adiabatic exponent, > 1
    double alpha;   // capillarity exponent, >= -1
    double c_alpha; // capillarity amplitude, > 0
    double epsilon; // capillarity strength, > 0
    double omega;   // |alpha|; satisfies |rho k'(rho)| <= omega k(rho)

    StateFunctions(double gamma_, double alpha_, double c_alpha_, double epsilon_)
        : gamma(gamma_), alpha(alpha_), c_alpha(c_alpha_), epsilon(epsilon_),
          omega(std::abs(alpha_)) {
        if (!(gamma > 1.0)) throw std::domain_error("StateFunctions: gamma must be > 1");
        if (!(alpha >= -1.0)) throw std::domain_error("StateFunctions: alpha must be >= -1");
        if (!(c_alpha > 0.0)) throw std::domain_error("StateFunctions: c_alpha must be > 0");
        if (!(epsilon > 0.0)) throw std::domain_error("StateFunctions: epsilon must be > 0");
    }

    static StateFunctions qhd(double epsilon_) {
        // k(rho) = 1/(4 rho), quadratic pressure: the quantum hydrodynamics case.
        return StateFunctions(2.0, -1.0, 0.25, epsilon_);
    }

    // --- pressure and internal energy -------------------------------------

    double pressure(double rho) const {
        require_nonneg(rho, "pressure");
        return pow_se(rho, gamma);
    }

    double pressure_prime(double rho) const {
        require_nonneg(rho, "pressure_prime");
        return gamma * pow_se(rho, gamma - 1.0);
    }

    double internal_energy(double rho) const {
        require_nonneg(rho, "internal_energy");
        return pow_se(rho, gamma) / (gamma - 1.0);
    }

    double internal_energy_prime(double rho) const {
        require_nonneg(rho, "internal_energy_prime");
        return gamma / (gamma - 1.0) * pow_se(rho, gamma - 1.0);
    }

    double internal_energy_second(double rho) const {
        require_nonneg(rho, "internal_energy_second");
        return gamma * pow_se(rho, gamma - 2.0);
    }

    // f(rho|r) = f(rho) - f'(r)(rho - r) - f(r); nonnegative, zero iff rho == r.
    double relative_internal_energy(double rho, double r) const {
        require_nonneg(rho, "relative_internal_energy");
        if (!(r > 0.0))
            throw std::domain_error("relative_internal_energy: reference r must be > 0");
        const double val =
            internal_energy(rho) - internal_energy_prime(r) * (rho - r) - internal_energy(r);
        // Convexity makes the exact value nonnegative; clamp the roundoff tail.
        return val > 0.0 ? val : 0.0;
    }

    double sound_speed(double rho) const { return std::sqrt(pressure_prime(rho)); }

    // --- capillarity -------------------------------------------------------

    double capillarity_k(double rho) const {
        require_capillarity_arg(rho, "capillarity_k");
        return c_alpha * pow_se(rho, alpha);
    }

    double capillarity_k_prime(double rho) const {
        if (alpha == 0.0) return 0.0;
        require_capillarity_arg(rho, "capillarity_k_prime");
        if (rho == 0.0 && alpha < 1.0)
            throw std::domain_error("capillarity_k_prime: singular at rho = 0");
        return alpha * c_alpha * pow_se(rho, alpha - 1.0);
    }

    double beta(double rho) const {
        require_nonneg(rho, "beta");
        return 2.0 * std::sqrt(c_alpha) / (2.0 + alpha) * pow_se(rho, 0.5 * (2.0 + alpha));
    }

    double beta_prime(double rho) const { // = sqrt(k(rho))
        require_capillarity_arg(rho, "beta_prime");
        return std::sqrt(c_alpha) * pow_se(rho, 0.5 * alpha);
    }

    double cap_K(double rho) const {
        require_nonneg(rho, "cap_K");
        return c_alpha / (2.0 + alpha) * pow_se(rho, 2.0 + alpha);
    }

    double cap_K_prime(double rho) const { // = rho k(rho)
        require_nonneg(rho, "cap_K_prime");
        return c_alpha * pow_se(rho, 1.0 + alpha);
    }

    double cap_K_second(double rho) const { // = k + rho k' = c_alpha (1+alpha) rho^alpha
        if (alpha == -1.0) return 0.0;
        require_capillarity_arg(rho, "cap_K_second");
        return c_alpha * (1.0 + alpha) * pow_se(rho, alpha);
    }

    double mu(double rho) const {
        require_nonneg(rho, "mu");
        return 2.0 * std::sqrt(c_alpha) / (3.0 + alpha) * pow_se(rho, 0.5 * (3.0 + alpha));
    }

    double mu_prime(double rho) const { // = sqrt(rho k(rho))
        require_nonneg(rho, "mu_prime");
        return std::sqrt(c_alpha) * pow_se(rho, 0.5 * (1.0 + alpha));
    }

    double mu_second(double rho) const {
        if (alpha == -1.0) return 0.0;
        require_capillarity_arg(rho, "mu_second");
        return std::sqrt(c_alpha) * 0.5 * (1.0 + alpha) * pow_se(rho, 0.5 * (alpha - 1.0));
    }

    // theta'(rho) = sqrt(k/rho); the alpha = -1 branch is logarithmic.
    double theta(double rho) const {
        if (alpha == -1.0) {
            if (!(rho > 0.0))
                throw std::domain_error("theta: logarithmic branch singular at rho = 0");
            return std::sqrt(c_alpha) * std::log(rho);
        }
        require_nonneg(rho, "theta");
        return 2.0 * std::sqrt(c_alpha) / (1.0 + alpha) * pow_se(rho, 0.5 * (1.0 + alpha));
    }

    double theta_prime(double rho) const {
        if (!(rho > 0.0)) throw std::domain_error("theta_prime: requires rho > 0");
        return std::sqrt(c_alpha) * pow_se(rho, 0.5 * (alpha - 1.0));
    }

    double theta_second(double rho) const {
        if (!(rho > 0.0)) throw std::domain_error("theta_second: requires rho > 0");
        return std::sqrt(c_alpha) * 0.5 * (alpha - 1.0) * pow_se(rho, 0.5 * (alpha - 3.0));
    }

    // v(rho) = sqrt(k/rho) grad rho = grad theta(rho); pointwise value.
    double aux_velocity(double rho, double grad_rho) const {
        return theta_prime(rho) * grad_rho;
    }

  private:
    static void require_nonneg(double rho, const char* who) {
        if (!(rho >= 0.0))
            throw std::domain_error(std::string(who) + ": negative density " +
                                    std::to_string(rho));
    }
    void require_capillarity_arg(double rho, const char* who) const {
        require_nonneg(rho, who);
        if (rho == 0.0 && alpha < 0.0)
            throw std::domain_error(std::string(who) + ": singular at rho = 0 for alpha < 0");
    }
};

} // namespace eklab
