#include "swarminfer/svg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "format.hpp"

namespace swarminfer {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 160.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                  const std::string& y_label, const std::vector<Series>& series) {
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x_min = x_max = x;
        y_min = y_max = y;
        any = true;
      }
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  y_min = std::min(y_min, 0.0);  // anchor the axis at zero for latency-like values

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  const auto py = [&](double y) { return kMarginTop + plot_h - (y - y_min) / (y_max - y_min) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
         "font-family=\"sans-serif\">" << escape(title) << "</text>\n";

  // Axes and gridlines with 5 ticks per axis.
  out << "<g stroke=\"#222\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
      << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n"
      << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kMarginTop + plot_h << "\"/>\n</g>\n";
  for (int t = 0; t <= 5; ++t) {
    const double fx = x_min + (x_max - x_min) * t / 5.0;
    const double fy = y_min + (y_max - y_min) * t / 5.0;
    out << "<line x1=\"" << px(fx) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\"" << px(fx)
        << "\" y2=\"" << kMarginTop + plot_h + 4 << "\" stroke=\"#222\"/>\n";
    out << "<text x=\"" << px(fx) << "\" y=\"" << kMarginTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << format_double(fx) << "</text>\n";
    out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << py(fy) << "\" x2=\"" << kMarginLeft + plot_w
        << "\" y2=\"" << py(fy) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << py(fy) + 4
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << format_double(fy)
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << escape(x_label)
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::ostringstream pts;
    for (const auto& [x, y] : series[s].points) pts << px(x) << ',' << py(y) << ' ';
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << pts.str() << "\"/>\n";
    for (const auto& [x, y] : series[s].points) {
      out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    }
    const double ly = kMarginTop + 16 + 18 * static_cast<double>(s);
    out << "<rect x=\"" << kMarginLeft + plot_w + 12 << "\" y=\"" << ly - 9
        << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << kMarginLeft + plot_w + 30 << "\" y=\"" << ly + 2
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << escape(series[s].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string sweep_plot_svg(const SweepTable& table, const std::string& title) {
  // One series per (solver, template) combination present in the table.
  std::map<std::pair<std::string, std::string>, bool> combos;
  std::string kind = "sweep";
  for (const SweepRow& row : table.rows) {
    combos[{row.solver, row.tmpl}] = true;
    kind = row.kind;
  }
  std::vector<Series> series;
  for (const auto& [combo, _] : combos) {
    Series s;
    s.label = combo.first + " / " + combo.second;
    for (const auto& [x, y] : mean_by_swept(table, combo.first, combo.second)) {
      s.points.emplace_back(x, y);
    }
    if (!s.points.empty()) series.push_back(std::move(s));
  }
  std::string y_label = "mean latency (s)";
  if (kind == "rejection_threshold") y_label = "mean zero-rejection depth";
  if (kind == "shared_data") y_label = "mean shared data (bytes)";
  return render_line_chart_svg(title, kind, y_label, series);
}

}  // namespace swarminfer
