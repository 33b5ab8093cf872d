#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace eklab {

// Flat key-value configuration: one "section.key = value" per line, '#'
// comments. Every key must belong to the registered schema; unknown keys are
// configuration errors.
class KVConfig {
  public:
    KVConfig() = default;

    static KVConfig from_file(const std::string& path, const std::set<std::string>& schema);
    static KVConfig from_string(const std::string& text, const std::set<std::string>& schema);

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    // Required variants: missing key is a ConfigError.
    double require_double(const std::string& key) const;
    std::string require_string(const std::string& key) const;

    const std::map<std::string, std::string>& raw() const { return values_; }

  private:
    std::map<std::string, std::string> values_;
    void parse(const std::string& text, const std::set<std::string>& schema);
};

// The schema shared by every CLI subcommand.
const std::set<std::string>& config_schema();

} // namespace eklab
