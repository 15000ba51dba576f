#include "dnsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "dnsim/errors.hpp"

namespace dnsim {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

} // namespace

void write_svg_chart(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& opt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("svg: cannot open " + path.string());

    auto tx = [&](double x) { return opt.log_x ? std::log10(std::max(x, 1e-300)) : x; };
    auto ty = [&](double y) { return opt.log_y ? std::log10(std::max(y, 1e-300)) : y; };

    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, ty(s.y[i]));
            ymax = std::max(ymax, ty(s.y[i]));
        }
    if (xmin > xmax) {
        xmin = 0.0;
        xmax = 1.0;
    }
    if (ymin > ymax) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    const double left = 60, right = 20, top = 40, bottom = 40;
    const double pw = opt.width - left - right;
    const double ph = opt.height - top - bottom;
    auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };

    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << opt.width << "' height='"
        << opt.height << "'>\n";
    out << "<rect x='0' y='0' width='" << opt.width << "' height='" << opt.height
        << "' fill='white'/>\n";
    out << "<text x='" << opt.width / 2 << "' y='20' text-anchor='middle' "
        << "font-family='sans-serif' font-size='14'>" << opt.title << "</text>\n";
    out << "<rect x='" << left << "' y='" << top << "' width='" << pw << "' height='" << ph
        << "' fill='none' stroke='black'/>\n";

    int ci = 0;
    double legend_y = top + 14;
    for (const auto& s : series) {
        const char* color = kColors[ci % 8];
        out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        out << "'/>\n";
        out << "<text x='" << left + pw - 150 << "' y='" << legend_y
            << "' font-family='sans-serif' font-size='11' fill='" << color << "'>" << s.label
            << "</text>\n";
        legend_y += 14;
        ++ci;
    }
    // Axis extremes as tick labels.
    auto label = [&](double v, bool log_scale) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3g", log_scale ? std::pow(10.0, v) : v);
        return std::string(buf);
    };
    out << "<text x='" << left << "' y='" << opt.height - 12
        << "' font-family='sans-serif' font-size='10'>" << label(xmin, opt.log_x)
        << "</text>\n";
    out << "<text x='" << left + pw - 40 << "' y='" << opt.height - 12
        << "' font-family='sans-serif' font-size='10'>" << label(xmax, opt.log_x)
        << "</text>\n";
    out << "<text x='12' y='" << top << "' font-family='sans-serif' font-size='10'>"
        << label(ymax, opt.log_y) << "</text>\n";
    out << "<text x='12' y='" << top + ph << "' font-family='sans-serif' font-size='10'>"
        << label(ymin, opt.log_y) << "</text>\n";
    out << "</svg>\n";
}

} // namespace dnsim
