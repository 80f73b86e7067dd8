#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pademor::experiment {

struct Series {
    std::string label;
    std::vector<double> x, y;
};

// Minimal line plot, linear x and log10 y. Non-positive or NaN y values
// break the polyline.
inline std::string render_svg(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                              const std::vector<Series>& series) {
    const double W = 720, H = 440, L = 70, R = 170, T = 36, B = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!(s.y[k] > 0.0) || !std::isfinite(s.y[k])) continue;
            x0 = std::min(x0, s.x[k]);
            x1 = std::max(x1, s.x[k]);
            y0 = std::min(y0, std::log10(s.y[k]));
            y1 = std::max(y1, std::log10(s.y[k]));
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + 1;
    y0 = std::floor(y0);
    y1 = std::ceil(y1);
    if (y1 == y0) y1 = y0 + 1;
    auto px = [&](double x) { return L + (W - L - R) * (x - x0) / (x1 - x0); };
    auto py = [&](double ly) { return H - B - (H - T - B) * (ly - y0) / (y1 - y0); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int step = std::max(1, static_cast<int>((y1 - y0) / 8));
    for (int e = static_cast<int>(y0); e <= static_cast<int>(y1); e += step)
        o << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(e) << "\" y2=\"" << py(e)
          << "\" stroke=\"#ddd\"/><text x=\"" << L - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e" << e
          << "</text>\n";
    for (int k = 0; k <= 5; ++k) {
        const double x = x0 + (x1 - x0) * k / 5.0;
        o << "<text x=\"" << px(x) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << x << "</text>\n";
    }
    o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* c = colors[s % 8];
        std::string path;
        bool pen = false;
        for (std::size_t k = 0; k < series[s].x.size(); ++k) {
            const double y = series[s].y[k];
            if (!(y > 0.0) || !std::isfinite(y)) {
                pen = false;
                continue;
            }
            std::ostringstream pt;
            pt << (pen ? " L" : " M") << px(series[s].x[k]) << ' ' << py(std::log10(y));
            path += pt.str();
            pen = true;
        }
        if (!path.empty()) o << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\"/>\n";
        o << "<line x1=\"" << W - R + 12 << "\" x2=\"" << W - R + 32 << "\" y1=\"" << T + 14 + 18 * s << "\" y2=\""
          << T + 14 + 18 * s << "\" stroke=\"" << c << "\" stroke-width=\"2\"/><text x=\"" << W - R + 38 << "\" y=\""
          << T + 18 + 18 * s << "\">" << series[s].label << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

inline void write_svg(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace pademor::experiment
