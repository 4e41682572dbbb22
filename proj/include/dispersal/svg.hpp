#pragma once
// Self-contained SVG line charts for total-population curves: log-scaled
// d axis, the M(d) polyline, and a dashed horizontal reference level.
// No external assets; coordinates use fixed precision so identical inputs
// render byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dispersal {

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string svg_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

struct ChartFrame {
    double x0, y0, w, h;  // pixel box of the plot area
    double lx_lo, lx_hi;  // log10(d) range
    double y_lo, y_hi;    // padded value range, always containing the reference

    double px(double d) const { return x0 + (std::log10(d) - lx_lo) / (lx_hi - lx_lo) * w; }
    double py(double m) const { return y0 + h - (m - y_lo) / (y_hi - y_lo) * h; }
};

inline ChartFrame make_frame(double x0, double y0, double w, double h,
                             const std::vector<std::pair<double, double>>& pts,
                             double reference) {
    if (pts.empty()) throw std::invalid_argument("chart: no points");
    double d_lo = pts.front().first, d_hi = d_lo;
    double y_lo = reference, y_hi = reference;
    for (const auto& [d, m] : pts) {
        if (!(d > 0.0) || !std::isfinite(d) || !std::isfinite(m))
            throw std::invalid_argument("chart: points need positive finite d and finite values");
        d_lo = std::min(d_lo, d);
        d_hi = std::max(d_hi, d);
        y_lo = std::min(y_lo, m);
        y_hi = std::max(y_hi, m);
    }
    ChartFrame f{x0, y0, w, h, std::log10(d_lo), std::log10(d_hi), 0.0, 0.0};
    if (f.lx_hi - f.lx_lo < 1e-12) {
        f.lx_lo -= 0.5;
        f.lx_hi += 0.5;
    }
    double pad = 0.05 * (y_hi - y_lo);
    // A flat curve sitting on the reference still needs visible headroom.
    if (pad <= 0.0) pad = std::max(1e-6, 0.05 * std::abs(y_hi));
    f.y_lo = y_lo - pad;
    f.y_hi = y_hi + pad;
    return f;
}

// One plot area: frame, decade gridlines, value ticks, the curve, and the
// dashed reference level. `dense` picks the full label set; panels use the
// sparse one.
inline void chart_group(std::string& out, const ChartFrame& f,
                        const std::vector<std::pair<double, double>>& pts, double reference,
                        bool dense) {
    out += "<rect x=\"" + svg_num(f.x0) + "\" y=\"" + svg_num(f.y0) + "\" width=\"" +
           svg_num(f.w) + "\" height=\"" + svg_num(f.h) +
           "\" fill=\"white\" stroke=\"#888888\"/>\n";

    const int e_lo = static_cast<int>(std::ceil(f.lx_lo - 1e-9));
    const int e_hi = static_cast<int>(std::floor(f.lx_hi + 1e-9));
    const int label_step = dense ? 1 : std::max(1, (e_hi - e_lo + 3) / 4);
    for (int e = e_lo; e <= e_hi; ++e) {
        double x = f.x0 + (e - f.lx_lo) / (f.lx_hi - f.lx_lo) * f.w;
        out += "<line x1=\"" + svg_num(x) + "\" y1=\"" + svg_num(f.y0) + "\" x2=\"" + svg_num(x) +
               "\" y2=\"" + svg_num(f.y0 + f.h) + "\" stroke=\"#dddddd\"/>\n";
        if ((e - e_lo) % label_step == 0)
            out += "<text x=\"" + svg_num(x) + "\" y=\"" + svg_num(f.y0 + f.h + 15) +
                   "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">1e" +
                   std::to_string(e) + "</text>\n";
    }

    const int n_ticks = dense ? 5 : 2;
    for (int k = 0; k <= n_ticks; ++k) {
        double v = f.y_lo + (f.y_hi - f.y_lo) * k / n_ticks;
        double y = f.py(v);
        out += "<line x1=\"" + svg_num(f.x0) + "\" y1=\"" + svg_num(y) + "\" x2=\"" +
               svg_num(f.x0 + f.w) + "\" y2=\"" + svg_num(y) + "\" stroke=\"#dddddd\"/>\n";
        out += "<text x=\"" + svg_num(f.x0 - 6) + "\" y=\"" + svg_num(y + 4) +
               "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">" + svg_tick(v) +
               "</text>\n";
    }

    double ry = f.py(reference);
    out += "<line x1=\"" + svg_num(f.x0) + "\" y1=\"" + svg_num(ry) + "\" x2=\"" +
           svg_num(f.x0 + f.w) + "\" y2=\"" + svg_num(ry) +
           "\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";

    out += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out += ' ';
        out += svg_num(f.px(pts[i].first)) + ',' + svg_num(f.py(pts[i].second));
    }
    out += "\"/>\n";
}

}  // namespace detail

inline std::string line_chart_svg(const std::string& title,
                                  const std::vector<std::pair<double, double>>& points,
                                  double reference, const std::string& x_label = "d",
                                  const std::string& y_label = "M(d)",
                                  const std::string& reference_label = "intK") {
    const double W = 800.0, H = 500.0;
    detail::ChartFrame f = detail::make_frame(70.0, 46.0, W - 94.0, H - 102.0, points, reference);

    std::string out;
    out +=
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
        "viewBox=\"0 0 800 500\" font-family=\"sans-serif\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<text x=\"400\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" fill=\"#111111\">" +
           detail::xml_escape(title) + "</text>\n";
    detail::chart_group(out, f, points, reference, true);
    out += "<text x=\"" + detail::svg_num(f.x0 + f.w / 2) + "\" y=\"" + detail::svg_num(H - 12) +
           "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#111111\">" +
           detail::xml_escape(x_label) + "</text>\n";
    std::string ymid = detail::svg_num(f.y0 + f.h / 2);
    out += "<text x=\"18\" y=\"" + ymid +
           "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 "
           "18 " +
           ymid + ")\">" + detail::xml_escape(y_label) + "</text>\n";
    // legend for the dashed level, top right
    out += "<line x1=\"" + detail::svg_num(W - 170.0) + "\" y1=\"36\" x2=\"" +
           detail::svg_num(W - 134.0) +
           "\" y2=\"36\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
    out += "<text x=\"" + detail::svg_num(W - 128.0) +
           "\" y=\"40\" font-size=\"11\" fill=\"#333333\">" +
           detail::xml_escape(reference_label) + "</text>\n";
    out += "</svg>\n";
    return out;
}

struct ChartPanel {
    std::string subtitle;
    std::vector<std::pair<double, double>> points;
    double reference = 0.0;
};

inline std::string panel_chart_svg(const std::string& title,
                                   const std::vector<ChartPanel>& panels) {
    if (panels.empty()) throw std::invalid_argument("panel_chart_svg: no panels");
    const int n = static_cast<int>(panels.size());
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    const int rows = (n + cols - 1) / cols;

    const double pw = 320.0, ph = 230.0, gap = 18.0, left = 16.0, top = 46.0;
    const double W = left + cols * pw + (cols - 1) * gap + 16.0;
    const double H = top + rows * ph + (rows - 1) * gap + 14.0;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(W) +
           "\" height=\"" + detail::svg_num(H) + "\" viewBox=\"0 0 " + detail::svg_num(W) + " " +
           detail::svg_num(H) + "\" font-family=\"sans-serif\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + detail::svg_num(W) + "\" height=\"" +
           detail::svg_num(H) + "\" fill=\"white\"/>\n";
    out += "<text x=\"" + detail::svg_num(W / 2) +
           "\" y=\"26\" font-size=\"16\" text-anchor=\"middle\" fill=\"#111111\">" +
           detail::xml_escape(title) + "</text>\n";

    for (int i = 0; i < n; ++i) {
        const double cell_x = left + (i % cols) * (pw + gap);
        const double cell_y = top + (i / cols) * (ph + gap);
        detail::ChartFrame f = detail::make_frame(cell_x + 48.0, cell_y + 24.0, pw - 60.0,
                                                  ph - 56.0, panels[i].points,
                                                  panels[i].reference);
        out += "<text x=\"" + detail::svg_num(cell_x + pw / 2) + "\" y=\"" +
               detail::svg_num(cell_y + 14.0) +
               "\" font-size=\"13\" text-anchor=\"middle\" fill=\"#111111\">" +
               detail::xml_escape(panels[i].subtitle) + "</text>\n";
        detail::chart_group(out, f, panels[i].points, panels[i].reference, false);
    }
    out += "</svg>\n";
    return out;
}

}  // namespace dispersal
