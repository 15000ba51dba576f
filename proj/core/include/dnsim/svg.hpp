#ifndef DNSIM_SVG_HPP
#define DNSIM_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace dnsim {

/// Minimal static line-chart writer: one polyline per series inside an axes
/// box, linear or log-log. Enough for the plot-ready CSVs to be eyeballed
/// without external tooling.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgOptions {
    std::string title;
    bool log_x = false;
    bool log_y = false;
    int width = 640;
    int height = 420;
};

void write_svg_chart(const std::filesystem::path& path, const std::vector<SvgSeries>& series,
                     const SvgOptions& options);

} // namespace dnsim

#endif
