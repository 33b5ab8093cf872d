#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eklab {

// 1D cell-centered grid on [x_min, x_max] with n_cells uniform cells.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_cells = 0;
    double dx = 0.0;

    Grid1D() = default;
    Grid1D(double a, double b, std::size_t n) : x_min(a), x_max(b), n_cells(n) {
        if (n_cells < 8) throw std::domain_error("Grid1D: n_cells must be >= 8");
        if (!(b > a)) throw std::domain_error("Grid1D: x_max must exceed x_min");
        dx = (b - a) / static_cast<double>(n);
    }

    double center(std::size_t i) const { return x_min + (static_cast<double>(i) + 0.5) * dx; }
    double length() const { return x_max - x_min; }

    // Distance to the boundary; zero exactly at the endpoints, |grad| = 1
    // away from the midpoint.
    double dist_to_boundary(double x) const { return std::min(x - x_min, x_max - x); }
    // Sign of grad d_Omega: +1 on the left half, -1 on the right half.
    double dist_gradient_sign(double x) const {
        return (x - x_min <= x_max - x) ? 1.0 : -1.0;
    }
};

// Ghost extension policy for a cell field. The parity policies mirror the
// field about the wall faces:
//   Even: f(-x) =  f(x)  -> zero normal derivative at the wall,
//   Odd:  f(-x) = -f(x)  -> zero trace at the wall,
//   Extrapolated: linear continuation from the two interior cells.
enum class Ghost { Even, Odd, Extrapolated };

inline Ghost flipped(Ghost g) {
    switch (g) {
        case Ghost::Even: return Ghost::Odd;
        case Ghost::Odd: return Ghost::Even;
        default: return Ghost::Extrapolated;
    }
}

// One scalar value per cell plus a ghost policy. Two ghost cells per side are
// available through at(); centered stencils up to 5 points stay inside that
// band because ghost values of derived fields are re-imposed by parity (which
// commutes exactly with symmetric stencils).
class Field {
  public:
    Field() = default;
    Field(std::size_t n, Ghost g, double fill = 0.0) : v_(n, fill), ghost_(g) {}

    std::size_t size() const { return v_.size(); }
    Ghost ghost() const { return ghost_; }
    void set_ghost(Ghost g) { ghost_ = g; }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    // Ghost-aware access for i in [-2, n+2).
    double at(long i) const {
        const long n = static_cast<long>(v_.size());
        if (i >= 0 && i < n) return v_[static_cast<std::size_t>(i)];
        if (i < 0) {
            const long m = -1 - i; // mirror cell
            switch (ghost_) {
                case Ghost::Even: return v_[static_cast<std::size_t>(m)];
                case Ghost::Odd: return -v_[static_cast<std::size_t>(m)];
                default: return v_[0] + (v_[0] - v_[1]) * static_cast<double>(-i);
            }
        }
        const long m = 2 * n - 1 - i;
        switch (ghost_) {
            case Ghost::Even: return v_[static_cast<std::size_t>(m)];
            case Ghost::Odd: return -v_[static_cast<std::size_t>(m)];
            default:
                return v_[v_.size() - 1] +
                       (v_[v_.size() - 1] - v_[v_.size() - 2]) * static_cast<double>(i - n + 1);
        }
    }

  private:
    std::vector<double> v_;
    Ghost ghost_ = Ghost::Even;
};

inline Field from_function(const Grid1D& g, const std::function<double(double)>& fn, Ghost pol) {
    Field f(g.n_cells, pol);
    for (std::size_t i = 0; i < g.n_cells; ++i) f[i] = fn(g.center(i));
    return f;
}

// --- discrete operators (2nd-order centered; derivative flips parity) -------

inline Field gradient(const Field& f, const Grid1D& g) {
    Field out(f.size(), flipped(f.ghost()));
    const double inv = 1.0 / (2.0 * g.dx);
    const long n = static_cast<long>(f.size());
    const double* v = f.values().data();
    double* o = out.values().data();
    for (long i = 1; i + 1 < n; ++i) o[i] = (v[i + 1] - v[i - 1]) * inv;
    out[0] = (f.at(1) - f.at(-1)) * inv;
    if (n > 1) out[static_cast<std::size_t>(n - 1)] = (f.at(n) - f.at(n - 2)) * inv;
    return out;
}

inline Field divergence(const Field& f, const Grid1D& g) { return gradient(f, g); }

// Composition by construction: laplacian = divergence(gradient(.)).
inline Field laplacian(const Field& f, const Grid1D& g) { return divergence(gradient(f, g), g); }

// 4th-order centered first derivative (used by the Euler reference).
inline Field gradient4(const Field& f, const Grid1D& g) {
    Field out(f.size(), flipped(f.ghost()));
    const double inv = 1.0 / (12.0 * g.dx);
    const long n = static_cast<long>(f.size());
    const double* v = f.values().data();
    double* o = out.values().data();
    // Grouped as differences so constants map to exact zero.
    for (long i = 2; i + 2 < n; ++i)
        o[i] = (8.0 * (v[i + 1] - v[i - 1]) - (v[i + 2] - v[i - 2])) * inv;
    for (long i : {0L, 1L, n - 2, n - 1})
        if (i >= 0 && i < n)
            out[static_cast<std::size_t>(i)] =
                (8.0 * (f.at(i + 1) - f.at(i - 1)) - (f.at(i + 2) - f.at(i - 2))) * inv;
    return out;
}

// --- midpoint-rule integrals and norms --------------------------------------

inline double integral(const Field& f, const Grid1D& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i];
    return s * g.dx;
}

inline double norm_l1(const Field& f, const Grid1D& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::abs(f[i]);
    return s * g.dx;
}

inline double norm_l2(const Field& f, const Grid1D& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * f[i];
    return std::sqrt(s * g.dx);
}

inline double norm_lp(const Field& f, const Grid1D& g, double p) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p);
    return std::pow(s * g.dx, 1.0 / p);
}

inline double norm_linf(const Field& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s = std::max(s, std::abs(f[i]));
    return s;
}

struct Norms {
    double l1 = 0, l2 = 0, lgamma = 0, linf = 0;
};

inline Norms norms(const Field& f, const Grid1D& g, double gamma) {
    return Norms{norm_l1(f, g), norm_l2(f, g), norm_lp(f, g, gamma), norm_linf(f)};
}

// --- elementwise helpers -----------------------------------------------------

template <typename Fn> Field map_field(const Field& f, Ghost pol, Fn&& fn) {
    Field out(f.size(), pol);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = fn(f[i]);
    return out;
}

template <typename Fn> Field zip_fields(const Field& a, const Field& b, Ghost pol, Fn&& fn) {
    Field out(a.size(), pol);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = fn(a[i], b[i]);
    return out;
}

} // namespace eklab
