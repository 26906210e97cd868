#pragma once

// Minimal static SVG charts for the CLI.

#include <filesystem>
#include <string>
#include <vector>

#include "mfgp/grid.hpp"

namespace mfgp::plots {

struct Series {
  std::string label;
  std::vector<double> y;
  std::string color;
  bool dashed = false;
};

/// Line chart of several series over a shared x axis.
void write_line_chart(const std::filesystem::path& file, const std::string& title,
                      const std::vector<double>& x, const std::vector<Series>& series,
                      const std::string& x_label, const std::string& y_label);

/// Grid of rectangles shaded by value; rows are time levels, columns are
/// space points.
void write_heatmap(const std::filesystem::path& file, const std::string& title, const GridSpec& grid,
                   const Array2& values);

}  // namespace mfgp::plots
