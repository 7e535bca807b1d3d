#include "bldcsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "bldcsim/errors.hpp"

namespace bldcsim {

namespace {

constexpr const char* k_palette[] = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
};
constexpr int k_palette_size = 6;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c; break;
        }
    }
    return out;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series,
                              int width, int height) {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            if (first) {
                x_min = x_max = s.x[i];
                y_min = y_max = s.y[i];
                first = false;
            } else {
                x_min = std::min(x_min, s.x[i]);
                x_max = std::max(x_max, s.x[i]);
                y_min = std::min(y_min, s.y[i]);
                y_max = std::max(y_max, s.y[i]);
            }
        }
    }
    if (x_max - x_min < 1e-12) {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min < 1e-12) {
        y_max = y_min + 1.0;
    }

    const double ml = 64.0, mr = 16.0, mt = 28.0, mb = 44.0;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt(ml) + "\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\" "
           "font-weight=\"bold\">" + escape_xml(title) + "</text>\n";

    for (int k = 0; k <= 4; ++k) {
        const double fx = x_min + (x_max - x_min) * k / 4.0;
        const double fy = y_min + (y_max - y_min) * k / 4.0;
        out += "<line x1=\"" + fmt(px(fx)) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(px(fx)) +
               "\" y2=\"" + fmt(mt + ph) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(py(fy)) + "\" x2=\"" + fmt(ml + pw) +
               "\" y2=\"" + fmt(py(fy)) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out += "<text x=\"" + fmt(px(fx)) + "\" y=\"" + fmt(mt + ph + 16.0) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" +
               fmt_tick(fx) + "</text>\n";
        out += "<text x=\"" + fmt(ml - 6.0) + "\" y=\"" + fmt(py(fy) + 3.0) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" +
               fmt_tick(fy) + "</text>\n";
    }
    out += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) +
           "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"#444444\"/>\n";

    int color = 0;
    double legend_x = ml + 8.0;
    for (const auto& s : series) {
        const char* stroke = k_palette[color % k_palette_size];
        ++color;
        out += "<polyline fill=\"none\" stroke=\"";
        out += stroke;
        out += "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                continue;
            }
            out += fmt(px(s.x[i])) + "," + fmt(py(s.y[i])) + " ";
        }
        out += "\"/>\n";
        out += "<text x=\"" + fmt(legend_x) + "\" y=\"" + fmt(mt + 14.0) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"";
        out += stroke;
        out += "\">" + escape_xml(s.label) + "</text>\n";
        legend_x += 10.0 * static_cast<double>(s.label.size()) + 18.0;
    }

    out += "<text x=\"" + fmt(ml + pw / 2.0) + "\" y=\"" + fmt(mt + ph + 34.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           escape_xml(x_label) + "</text>\n";
    out += "<text x=\"14\" y=\"" + fmt(mt + ph / 2.0) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           fmt(mt + ph / 2.0) + ")\">" + escape_xml(y_label) + "</text>\n";
    out += "</svg>\n";
    return out;
}

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, int width, int height) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoFailure("cannot open for writing: " + path.string());
    }
    out << render_line_chart(title, x_label, y_label, series, width, height);
    if (!out) {
        throw IoFailure("write failed: " + path.string());
    }
}

}  // namespace bldcsim
