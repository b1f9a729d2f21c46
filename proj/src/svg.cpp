#include "dgbo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dgbo {
namespace {

constexpr double W = 640, H = 420, left = 70, right = 150, top = 40, bottom = 55;
const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Axis {
    bool log = false;
    double lo = 0.0, hi = 1.0;

    double map(double v) const { return log ? std::log10(v) : v; }
    double unit(double v) const { return (map(v) - lo) / (hi - lo); }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis fit_axis(bool log, const std::vector<Series>& series, bool use_x) {
    Axis a{log, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& s : series) {
        const auto& v = use_x ? s.x : s.y;
        for (double d : v) {
            if (!a.usable(d)) continue;
            a.lo = std::min(a.lo, a.map(d));
            a.hi = std::max(a.hi, a.map(d));
        }
    }
    if (!std::isfinite(a.lo)) a.lo = 0.0, a.hi = 1.0;
    if (a.hi - a.lo < 1e-12) a.lo -= 0.5, a.hi += 0.5;
    const double pad = 0.05 * (a.hi - a.lo);
    a.lo -= pad;
    a.hi += pad;
    return a;
}

std::string tick_label(const Axis& a, double m) { return a.log ? fmt("%.3g", std::pow(10.0, m)) : fmt("%.3g", m); }

}  // namespace

std::string render_chart(const ChartSpec& spec, const std::vector<Series>& series) {
    const Axis ax = fit_axis(spec.log_x, series, true), ay = fit_axis(spec.log_y, series, false);
    const double pw = W - left - right, ph = H - top - bottom;
    auto px = [&](double x) { return left + ax.unit(x) * pw; };
    auto py = [&](double y) { return top + (1.0 - ay.unit(y)) * ph; };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%g", W) + "\" height=\"" +
                    fmt("%g", H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt("%g", left) + "\" y=\"24\" font-size=\"14\">" + esc(spec.title) + "</text>\n";
    s += "<rect x=\"" + fmt("%g", left) + "\" y=\"" + fmt("%g", top) + "\" width=\"" + fmt("%g", pw) +
         "\" height=\"" + fmt("%g", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0, fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
        const double gx = left + pw * i / 4.0, gy = top + ph * (1.0 - i / 4.0);
        s += "<line x1=\"" + fmt("%.1f", gx) + "\" y1=\"" + fmt("%.1f", top + ph) + "\" x2=\"" + fmt("%.1f", gx) +
             "\" y2=\"" + fmt("%.1f", top + ph + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt("%.1f", gx) + "\" y=\"" + fmt("%.1f", top + ph + 18) +
             "\" text-anchor=\"middle\">" + tick_label(ax, fx) + "</text>\n";
        s += "<line x1=\"" + fmt("%.1f", left - 5) + "\" y1=\"" + fmt("%.1f", gy) + "\" x2=\"" + fmt("%.1f", left) +
             "\" y2=\"" + fmt("%.1f", gy) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + fmt("%.1f", left - 8) + "\" y=\"" + fmt("%.1f", gy + 4) + "\" text-anchor=\"end\">" +
             tick_label(ay, fy) + "</text>\n";
    }
    s += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"" + fmt("%.1f", H - 12) +
         "\" text-anchor=\"middle\">" + esc(spec.x_label) + "</text>\n";
    s += "<text transform=\"translate(16," + fmt("%.1f", top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         esc(spec.y_label) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& ser = series[k];
        const std::string colour = palette[k % (sizeof palette / sizeof *palette)];
        std::string pts;
        for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
            if (!ax.usable(ser.x[i]) || !ay.usable(ser.y[i])) continue;
            const double X = px(ser.x[i]), Y = py(ser.y[i]);
            s += "<circle cx=\"" + fmt("%.2f", X) + "\" cy=\"" + fmt("%.2f", Y) + "\" r=\"2.5\" fill=\"" + colour +
                 "\"/>\n";
            pts += fmt("%.2f", X) + "," + fmt("%.2f", Y) + " ";
        }
        if (!spec.markers_only && !pts.empty())
            s += "<polyline fill=\"none\" stroke=\"" + colour + "\" points=\"" + pts + "\"/>\n";
        const double ly = top + 14.0 + 16.0 * static_cast<double>(k);
        s += "<rect x=\"" + fmt("%.1f", W - right + 10) + "\" y=\"" + fmt("%.1f", ly - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + colour + "\"/>\n";
        s += "<text x=\"" + fmt("%.1f", W - right + 26) + "\" y=\"" + fmt("%.1f", ly) + "\">" + esc(ser.label) +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace dgbo
