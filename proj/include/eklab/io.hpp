#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "eklab/errors.hpp"
#include "eklab/grid.hpp"

namespace eklab {

// Shortest round-trip decimal form, C locale ('.' decimal point) regardless of
// the environment, so serial reruns are byte-identical.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw ConfigError("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
        columns_ = header.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_) throw ConfigError("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt_double(values[i]);
        out_ << "\n";
    }

  private:
    std::ofstream out_;
    std::size_t columns_ = 0;
};

inline void field_to_csv(const Field& f, const Grid1D& g, const std::string& path) {
    CsvWriter csv(path, {"x", "value"});
    for (std::size_t i = 0; i < f.size(); ++i) csv.row({g.center(i), f[i]});
}

// Minimal log-log line plot; one polyline per series.
struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<SvgSeries>& series);

} // namespace eklab
