#include "cfq/svg.hpp"

#include "cfq/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cfq {

namespace {

constexpr double width = 760, height = 500;
constexpr double ml = 70, mr = 20, mt = 40, mb = 55;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool ok() const { return lo <= hi; }
    void pad() {
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
    }
};

std::string text(double x, double y, const std::string& s, const char* anchor,
                 const char* extra = "") {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor +
           "\" font-family=\"sans-serif\" font-size=\"13\" " + extra + ">" + s + "</text>\n";
}

} // namespace

void write_line_plot(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool log_y) {
    Range rx, ry;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            double yv = s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            if (log_y) {
                if (yv <= 0) continue;
                yv = std::log10(yv);
            }
            rx.add(s.x[i]);
            ry.add(yv);
        }
    if (!rx.ok() || !ry.ok()) {
        rx = {0, 1};
        ry = {0, 1};
    }
    rx.pad();
    ry.pad();

    auto px = [&](double v) { return ml + (v - rx.lo) / (rx.hi - rx.lo) * (width - ml - mr); };
    auto py = [&](double v) {
        return height - mb - (v - ry.lo) / (ry.hi - ry.lo) * (height - mt - mb);
    };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                      "\" height=\"" + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += text(width / 2, mt - 16, title, "middle", "font-size=\"15\"");

    for (int t = 0; t <= 4; ++t) {
        double fx = rx.lo + (rx.hi - rx.lo) * t / 4.0;
        double fy = ry.lo + (ry.hi - ry.lo) * t / 4.0;
        svg += "<line x1=\"" + num(px(fx)) + "\" y1=\"" + num(height - mb) + "\" x2=\"" +
               num(px(fx)) + "\" y2=\"" + num(mt) + "\" stroke=\"#ddd\"/>\n";
        svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(py(fy)) + "\" x2=\"" +
               num(width - mr) + "\" y2=\"" + num(py(fy)) + "\" stroke=\"#ddd\"/>\n";
        svg += text(px(fx), height - mb + 18, num(fx), "middle");
        std::string ylab = log_y ? "1e" + num(fy) : num(fy);
        svg += text(ml - 6, py(fy) + 4, ylab, "end");
    }
    svg += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(width - ml - mr) +
           "\" height=\"" + num(height - mt - mb) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg += text(width / 2, height - 12, xlabel, "middle");
    svg += text(16, height / 2, ylabel, "middle",
                ("transform=\"rotate(-90 16 " + num(height / 2) + ")\"").c_str());

    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = palette[si % 6];
        std::string pts;
        for (size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            double yv = s.y[i];
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            if (log_y) {
                if (yv <= 0) continue;
                yv = std::log10(yv);
            }
            pts += num(px(s.x[i])) + "," + num(py(yv)) + " ";
        }
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color +
               "\" stroke-width=\"1.6\"/>\n";
        double ly = mt + 18 + 18 * double(si);
        svg += "<line x1=\"" + num(width - mr - 150) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(width - mr - 120) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += text(width - mr - 114, ly + 4, s.label, "start");
    }
    svg += "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << svg;
}

void write_heat_map(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<double>& x, const std::vector<double>& y,
                    const std::vector<double>& values) {
    if (x.empty() || y.empty() || values.size() != x.size() * y.size())
        throw std::invalid_argument("write_heat_map: grid shape mismatch");

    Range rv;
    for (double v : values)
        if (std::isfinite(v) && v > 0) rv.add(std::log10(v));
    if (!rv.ok()) rv = {0, 1};
    rv.pad();

    double cw = (width - ml - mr) / double(x.size());
    double ch = (height - mt - mb) / double(y.size());

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) +
                      "\" height=\"" + num(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += text(width / 2, mt - 16, title, "middle", "font-size=\"15\"");

    for (size_t iy = 0; iy < y.size(); ++iy)
        for (size_t ix = 0; ix < x.size(); ++ix) {
            double v = values[iy * x.size() + ix];
            std::string fill = "#bbb";
            if (std::isfinite(v) && v > 0) {
                double t = (std::log10(v) - rv.lo) / (rv.hi - rv.lo);
                t = std::clamp(t, 0.0, 1.0);
                int r = int(40 + 215 * t);
                int g = int(60 + 80 * (1 - std::abs(2 * t - 1)));
                int b = int(255 - 215 * t);
                char buf[10];
                std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
                fill = buf;
            }
            double px = ml + double(ix) * cw;
            double py = height - mb - double(iy + 1) * ch;
            svg += "<rect x=\"" + num(px) + "\" y=\"" + num(py) + "\" width=\"" + num(cw + 0.5) +
                   "\" height=\"" + num(ch + 0.5) + "\" fill=\"" + fill + "\"/>\n";
        }

    svg += text(ml, height - mb + 18, num(x.front()), "middle");
    svg += text(width - mr, height - mb + 18, num(x.back()), "middle");
    svg += text(ml - 6, height - mb, num(y.front()), "end");
    svg += text(ml - 6, mt + 10, num(y.back()), "end");
    svg += text(width / 2, height - 12, xlabel, "middle");
    svg += text(16, height / 2, ylabel, "middle",
                ("transform=\"rotate(-90 16 " + num(height / 2) + ")\"").c_str());
    svg += "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << svg;
}

} // namespace cfq
