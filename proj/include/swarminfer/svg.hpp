#pragma once

#include <string>
#include <vector>

#include "swarminfer/experiments.hpp"

namespace swarminfer {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), sorted by x
};

// Minimal line chart; enough to eyeball sweep trends next to the CSV.
std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label, const std::vector<Series>& series);

// One series per (solver, template) pair, y = mean metric per swept value.
std::string sweep_plot_svg(const SweepTable& table, const std::string& title);

}  // namespace swarminfer
