#include "eklab/io.hpp"

#include <algorithm>
#include <cmath>

namespace eklab {

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<SvgSeries>& series) {
    const int W = 640, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
    double lx_min = 1e300, lx_max = -1e300, ly_min = 1e300, ly_max = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
            lx_min = std::min(lx_min, std::log10(s.x[i]));
            lx_max = std::max(lx_max, std::log10(s.x[i]));
            ly_min = std::min(ly_min, std::log10(s.y[i]));
            ly_max = std::max(ly_max, std::log10(s.y[i]));
        }
    if (lx_min > lx_max) { lx_min = 0; lx_max = 1; }
    if (ly_min > ly_max) { ly_min = 0; ly_max = 1; }
    if (lx_max - lx_min < 1e-12) lx_max = lx_min + 1;
    if (ly_max - ly_min < 1e-12) ly_max = ly_min + 1;

    auto px = [&](double lx) { return ML + (lx - lx_min) / (lx_max - lx_min) * (W - ML - MR); };
    auto py = [&](double ly) { return H - MB - (ly - ly_min) / (ly_max - ly_min) * (H - MT - MB); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    std::ofstream out(path);
    if (!out) throw ConfigError("write_loglog_svg: cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
        << H - MB << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
        << "\" stroke=\"black\"/>\n";
    for (int d = int(std::ceil(lx_min)); d <= int(std::floor(lx_max)); ++d)
        out << "<text x=\"" << px(d) << "\" y=\"" << H - MB + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">1e" << d << "</text>\n";
    for (int d = int(std::ceil(ly_min)); d <= int(std::floor(ly_max)); ++d)
        out << "<text x=\"" << ML - 6 << "\" y=\"" << py(d) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 6];
        out << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (s.x[i] > 0.0 && s.y[i] > 0.0)
                out << px(std::log10(s.x[i])) << "," << py(std::log10(s.y[i])) << " ";
        out << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (s.x[i] > 0.0 && s.y[i] > 0.0)
                out << "<circle cx=\"" << px(std::log10(s.x[i])) << "\" cy=\""
                    << py(std::log10(s.y[i])) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
        out << "<text x=\"" << W - MR - 8 << "\" y=\"" << MT + 16 * (ci + 1)
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << col << "\">" << s.label
            << "</text>\n";
        ++ci;
    }
    out << "</svg>\n";
}

} // namespace eklab
