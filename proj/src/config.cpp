#include "eklab/config.hpp"

#include <fstream>
#include <sstream>

#include "eklab/errors.hpp"

namespace eklab {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
} // namespace

KVConfig KVConfig::from_file(const std::string& path, const std::set<std::string>& schema) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), schema);
}

KVConfig KVConfig::from_string(const std::string& text, const std::set<std::string>& schema) {
    KVConfig cfg;
    cfg.parse(text, schema);
    return cfg;
}

void KVConfig::parse(const std::string& text, const std::set<std::string>& schema) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: empty key or value at line " + std::to_string(lineno));
        if (!schema.count(key)) throw ConfigError("config: unknown key '" + key + "'");
        if (values_.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
        values_[key] = value;
    }
}

double KVConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' is not a number: " + it->second);
    }
}

std::size_t KVConfig::get_size(const std::string& key, std::size_t fallback) const {
    const double v = get_double(key, double(fallback));
    if (v < 0 || v != double(std::size_t(v)))
        throw ConfigError("config: key '" + key + "' must be a nonnegative integer");
    return std::size_t(v);
}

bool KVConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("config: key '" + key + "' is not a boolean: " + it->second);
}

std::string KVConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::vector<double> KVConfig::get_double_list(const std::string& key,
                                              const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::istringstream in(it->second);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("config: key '" + key + "' has a non-numeric entry: " + tok);
        }
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' lists no values");
    return out;
}

double KVConfig::require_double(const std::string& key) const {
    if (!has(key)) throw ConfigError("config: missing required key '" + key + "'");
    return get_double(key, 0.0);
}

std::string KVConfig::require_string(const std::string& key) const {
    if (!has(key)) throw ConfigError("config: missing required key '" + key + "'");
    return get_string(key, "");
}

const std::set<std::string>& config_schema() {
    static const std::set<std::string> schema = {
        // physics
        "run.preset", "run.gamma", "run.alpha", "run.c_alpha", "run.epsilon", "run.tau",
        // grids
        "grid.x_min", "grid.x_max", "grid.n_cells",
        // EK integrator
        "ek.cfl", "ek.vacuum_floor", "ek.energy_drift_tol", "ek.limit_slopes",
        // Euler reference
        "euler.refine_ratio", "euler.cfl", "euler.blowup_threshold", "euler.snapshot_derivatives",
        // boundary layer
        "bl.c", "bl.s", "bl.scaling_report", "bl.scaling_deltas",
        // entropy sampling
        "entropy.samples",
        // simulate extras
        "sim.snapshots", "sim.perturb_amplitude",
        // sweep
        "sweep.epsilons", "sweep.n_base", "sweep.n_cap", "sweep.well_prepared",
        // NLS oracle comparison
        "nls.epsilon", "nls.n_cells", "nls.dt_factor", "nls.times", "nls.refine",
        // identity suite
        "identities.count",
        // GN checks
        "gn.dims", "gn.alphas", "gn.draws", "gn.n_base",
    };
    return schema;
}

} // namespace eklab
