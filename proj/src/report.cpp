#include "ape/report.hpp"

#include "ape/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace ape {

namespace {

std::string fmt(double v, int prec = 6) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool logy) {
    const int W = 720, H = 420;
    const int ml = 70, mr = 160, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = s.y[i];
            if (logy) {
                if (!(y > 0.0)) continue;
                y = std::log10(y);
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
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

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) {
        if (logy) y = std::log10(std::max(y, 1e-300));
        return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
    };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    std::ofstream f(path);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title
      << "</text>\n";
    // axes
    f << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
      << H - mb << "\" stroke=\"black\"/>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
      << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        f << "<text x=\"" << fmt(px(xv)) << "\" y=\"" << H - mb + 18
          << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(xv, 4) << "</text>\n";
        f << "<text x=\"" << ml - 6 << "\" y=\"" << fmt(H - mb - (H - mt - mb) * k / 4.0 + 4)
          << "\" text-anchor=\"end\" font-size=\"11\">" << (logy ? "1e" : "") << fmt(yv, 3)
          << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        f << "<polyline fill=\"none\" stroke=\"" << colors[ci % 8] << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (logy && !(s.y[i] > 0.0)) continue;
            f << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
        }
        f << "\"/>\n";
        f << "<text x=\"" << W - mr + 8 << "\" y=\"" << mt + 16 * ci + 10 << "\" fill=\""
          << colors[ci % 8] << "\" font-size=\"11\">" << s.label << "</text>\n";
        ++ci;
    }
    f << "</svg>\n";
}

void emit_report(const std::string& run_dir, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    std::ofstream sum(out_dir + "/summary.txt");
    if (!sum) throw IoError("cannot open for writing: " + out_dir + "/summary.txt");

    // run status
    {
        std::ifstream st(run_dir + "/run_status.txt");
        if (!st) throw IoError("missing run_status.txt in " + run_dir);
        sum << "run status\n----------\n" << st.rdbuf() << "\n";
    }

    // monitor extremes
    const CsvTable mon = read_csv(run_dir + "/monitors.csv");
    sum << "monitor extremes over the run\n-----------------------------\n";
    for (const std::string col :
         {"J_min", "J_max", "R_min", "R_max", "qp_min", "qp_max", "aI_H2", "kin_res", "tan_g0",
          "tan_g1"}) {
        const auto v = mon.column(col);
        const double lo = *std::min_element(v.begin(), v.end());
        const double hi = *std::max_element(v.begin(), v.end());
        sum << col << ": min " << fmt(lo) << ", max " << fmt(hi) << "\n";
    }
    sum << "\n";

    // ledgers: final residuals + plot series
    std::vector<SvgSeries> ledger_series;
    sum << "final ledger residuals\n----------------------\n";
    for (const std::string name : {"momentum", "plate", "plateW", "density"}) {
        const std::string path = run_dir + "/ledger_" + name + ".csv";
        if (!fs::exists(path)) continue;
        const CsvTable t = read_csv(path);
        if (t.rows.empty()) continue;
        const auto res = t.column("residual");
        sum << name << ": final " << fmt(res.back()) << ", max "
            << fmt(*std::max_element(res.begin(), res.end())) << "\n";
        ledger_series.push_back({name, t.column("t"), res});
    }
    sum << "\n";

    // norms plot + 10x growth check numbers
    if (fs::exists(run_dir + "/norms.csv")) {
        const CsvTable norms = read_csv(run_dir + "/norms.csv");
        if (!norms.rows.empty()) {
            std::vector<SvgSeries> series;
            sum << "norm growth (final / first sample)\n----------------------------------\n";
            for (std::size_t c = 1; c < norms.columns.size(); ++c) {
                SvgSeries s;
                s.label = norms.columns[c];
                s.x = norms.column("t");
                for (const auto& r : norms.rows) s.y.push_back(r[c]);
                const double first = s.y.front(), last = s.y.back();
                sum << s.label << ": " << fmt(first) << " -> " << fmt(last);
                if (first > 0.0) sum << "  (x" << fmt(last / first, 4) << ")";
                sum << "\n";
                series.push_back(std::move(s));
            }
            write_svg_plot(out_dir + "/norms.svg", "norm table vs time", series, false);
        }
    }
    if (!ledger_series.empty())
        write_svg_plot(out_dir + "/ledgers.svg", "ledger identity residuals", ledger_series,
                       true);

    // convergence table, when present (mms study output)
    if (fs::exists(run_dir + "/study.csv")) {
        const CsvTable t = read_csv(run_dir + "/study.csv");
        sum << "convergence study\n-----------------\n";
        sum << "h3        dt        err_l2      order\n";
        for (const auto& r : t.rows)
            sum << fmt(r[t.col("h3")], 4) << "  " << fmt(r[t.col("dt")], 4) << "  "
                << fmt(r[t.col("err_l2")], 4) << "  " << fmt(r[t.col("order_l2")], 3) << "\n";
    }
}

} // namespace ape
