#pragma once

// Post-run reporting: a one-page text summary (monitor extremes, final
// residuals, run status) plus deterministic SVG line plots. No timestamps,
// fixed dimensions, byte-stable output.

#include <string>
#include <vector>

namespace ape {

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

// simple log/linear line plot; writes a standalone .svg
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool logy);

// reads the CSVs in run_dir and writes summary.txt, norms.svg, ledgers.svg
void emit_report(const std::string& run_dir, const std::string& out_dir);

} // namespace ape
