#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bldcsim {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG line chart, deterministic bytes for fixed input.
std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<Series>& series,
                              int width = 960, int height = 320);

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, int width = 960, int height = 320);

}  // namespace bldcsim
