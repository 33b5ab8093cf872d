#include "eklab/nls_oracle.hpp"

#include <cmath>

#include "eklab/errors.hpp"

namespace eklab {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 FFT, in place. sign = -1 forward, +1 inverse (unscaled).
void fft(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / double(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace

NLSOracle::NLSOracle(Grid1D grid, double epsilon, double gamma)
    : grid_(grid), eps_(epsilon), gamma_(gamma) {
    if (!is_pow2(grid_.n_cells))
        throw ConfigError("NLSOracle: n_cells must be a power of two");
    if (!(eps_ > 0.0)) throw ConfigError("NLSOracle: epsilon must be > 0");
    if (!(gamma_ > 1.0)) throw ConfigError("NLSOracle: gamma must be > 1");
}

std::vector<cplx> NLSOracle::from_hydro(const std::function<double(double)>& rho0,
                                        const std::function<double(double)>& S0) const {
    std::vector<cplx> psi(grid_.n_cells);
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double x = grid_.center(i);
        const double amp = std::sqrt(rho0(x));
        const double phase = S0(x) / eps_;
        psi[i] = cplx(amp * std::cos(phase), amp * std::sin(phase));
    }
    return psi;
}

// DCT-II via the symmetric extension of length 2N:
//   G_k = 2 exp(i pi k /(2N)) C_k,   C_k = sum_j f_j cos(pi k (j+1/2)/N).
std::vector<cplx> NLSOracle::dct(const std::vector<cplx>& f) const {
    const std::size_t n = f.size();
    std::vector<cplx> g(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = f[j];
        g[2 * n - 1 - j] = f[j];
    }
    fft(g, -1);
    std::vector<cplx> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = -M_PI * double(k) / double(2 * n);
        c[k] = 0.5 * g[k] * cplx(std::cos(ang), std::sin(ang));
    }
    return c;
}

std::vector<cplx> NLSOracle::idct(const std::vector<cplx>& c) const {
    const std::size_t n = c.size();
    std::vector<cplx> g(2 * n, cplx(0.0, 0.0));
    g[0] = 2.0 * c[0];
    for (std::size_t k = 1; k < n; ++k) {
        const double ang = M_PI * double(k) / double(2 * n);
        g[k] = 2.0 * c[k] * cplx(std::cos(ang), std::sin(ang));
        // symmetry of the even extension: G_{2N-k} = exp(-i pi k / N) G_k
        const double ang2 = -M_PI * double(k) / double(n);
        g[2 * n - k] = g[k] * cplx(std::cos(ang2), std::sin(ang2));
    }
    fft(g, +1);
    std::vector<cplx> f(n);
    const double scale = 1.0 / double(2 * n);
    for (std::size_t j = 0; j < n; ++j) f[j] = g[j] * scale;
    return f;
}

void NLSOracle::phase_step(std::vector<cplx>& psi, double dt) const {
    const double coef = gamma_ / (gamma_ - 1.0);
    for (auto& p : psi) {
        const double rho = std::norm(p);
        const double angle = -dt * coef * std::pow(rho, gamma_ - 1.0) / eps_;
        p *= cplx(std::cos(angle), std::sin(angle));
    }
}

void NLSOracle::linear_step(std::vector<cplx>& psi, double dt) const {
    std::vector<cplx> c = dct(psi);
    const double L = grid_.length();
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double wave = M_PI * double(k) / L;
        const double angle = -dt * eps_ * wave * wave / 2.0;
        c[k] *= cplx(std::cos(angle), std::sin(angle));
    }
    psi = idct(c);
}

void NLSOracle::step(std::vector<cplx>& psi, double dt) const {
    phase_step(psi, 0.5 * dt);
    linear_step(psi, dt);
    phase_step(psi, 0.5 * dt);
}

void NLSOracle::run(std::vector<cplx>& psi, double t_end, double dt) const {
    double t = 0.0;
    while (t < t_end - 1e-13) {
        const double h = std::min(dt, t_end - t);
        step(psi, h);
        t += h;
    }
}

double NLSOracle::mass(const std::vector<cplx>& psi) const {
    double s = 0.0;
    for (const auto& p : psi) s += std::norm(p);
    return s * grid_.dx;
}

std::vector<cplx> NLSOracle::derivative(const std::vector<cplx>& psi) const {
    const std::size_t n = psi.size();
    std::vector<cplx> g(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = psi[j];
        g[2 * n - 1 - j] = psi[j];
    }
    fft(g, -1);
    const double L = grid_.length();
    // Wavenumbers of the doubled domain [0, 2L): k_m = pi m / L, m = -N..N-1.
    for (std::size_t m = 0; m < 2 * n; ++m) {
        const double mm = (m <= n) ? double(m) : double(m) - double(2 * n);
        const double k = M_PI * mm / L;
        g[m] *= cplx(0.0, k);
        if (m == n) g[m] = cplx(0.0, 0.0); // Nyquist mode carries no derivative
    }
    fft(g, +1);
    std::vector<cplx> out(n);
    const double scale = 1.0 / double(2 * n);
    for (std::size_t j = 0; j < n; ++j) out[j] = g[j] * scale;
    return out;
}

std::vector<double> NLSOracle::derivative_odd(const std::vector<double>& f) const {
    const std::size_t n = f.size();
    std::vector<cplx> g(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = f[j];
        g[2 * n - 1 - j] = -f[j];
    }
    fft(g, -1);
    const double L = grid_.length();
    for (std::size_t m = 0; m < 2 * n; ++m) {
        const double mm = (m <= n) ? double(m) : double(m) - double(2 * n);
        const double k = M_PI * mm / L;
        g[m] *= cplx(0.0, k);
        if (m == n) g[m] = cplx(0.0, 0.0);
    }
    fft(g, +1);
    std::vector<double> out(n);
    const double scale = 1.0 / double(2 * n);
    for (std::size_t j = 0; j < n; ++j) out[j] = std::real(g[j]) * scale;
    return out;
}

double NLSOracle::energy(const std::vector<cplx>& psi) const {
    std::vector<cplx> dpsi = derivative(psi);
    double s = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        const double rho = std::norm(psi[i]);
        s += 0.5 * eps_ * eps_ * std::norm(dpsi[i]) +
             std::pow(rho, gamma_) / (gamma_ - 1.0);
    }
    return s * grid_.dx;
}

FlowState NLSOracle::madelung(const std::vector<cplx>& psi) const {
    std::vector<cplx> dpsi = derivative(psi);
    FlowState s(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        s.rho[i] = std::norm(psi[i]);
        s.J[i] = eps_ * std::imag(std::conj(psi[i]) * dpsi[i]);
    }
    return s;
}

double NLSOracle::odd_mode_residual(const std::vector<cplx>& psi) const {
    const std::size_t n = psi.size();
    std::vector<cplx> g(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        g[j] = psi[j];
        g[2 * n - 1 - j] = psi[j];
    }
    fft(g, -1);
    // For an even-symmetric extension, G_{2N-k} = exp(-i pi k/N) G_k.
    double res = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double ang = -M_PI * double(k) / double(n);
        const cplx expect = g[k] * cplx(std::cos(ang), std::sin(ang));
        res = std::max(res, std::abs(g[2 * n - k] - expect));
    }
    res = std::max(res, std::abs(g[n]));
    return res;
}

} // namespace eklab
