#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "eklab/errors.hpp"

namespace eklab {

// Analytic initial-data closures. All presets keep the density away from
// vacuum, satisfy u0 = 0 at the walls, and extend smoothly under the even/odd
// mirror about both walls of [0,1], so the strong Euler solution stays smooth
// up to the boundary. S0 is the phase potential (S0' = u0) used to seed the
// wave-function oracle.
struct Preset {
    std::string name;
    std::function<double(double)> rho0;
    std::function<double(double)> u0;
    std::function<double(double)> S0;
};

inline Preset make_preset(const std::string& name) {
    if (name == "constant") {
        return Preset{name, [](double) { return 1.0; }, [](double) { return 0.0; },
                      [](double) { return 0.0; }};
    }
    if (name == "cosine-bump") {
        return Preset{name, [](double x) { return 1.0 + 0.2 * std::cos(M_PI * x); },
                      [](double) { return 0.0; }, [](double) { return 0.0; }};
    }
    if (name == "traveling-bump") {
        return Preset{name, [](double x) { return 1.0 + 0.1 * std::cos(2.0 * M_PI * x); },
                      [](double x) { return 0.2 * std::sin(M_PI * x); },
                      [](double x) { return 0.2 * (1.0 - std::cos(M_PI * x)) / M_PI; }};
    }
    throw ConfigError("unknown preset '" + name + "' (constant | cosine-bump | traveling-bump)");
}

} // namespace eklab
