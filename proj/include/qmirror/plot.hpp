#pragma once

// Visibility-vs-kappa SVG from a sweep CSV.

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qmirror/error.hpp"

namespace qmirror::plot {

struct Curve {
  std::vector<double> kappa;
  std::vector<double> visibility;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream stream(line);
  std::string cell;
  while (std::getline(stream, cell, ',')) cells.push_back(cell);
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double x = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + cell + "' on line " + std::to_string(line_no));
  }
}

}  // namespace detail

inline Curve read_sweep_csv(std::istream& in) {
  const std::string expected = "expected header: kappa,r,visibility,purity,case,fuzziness";
  std::string header;
  if (!std::getline(in, header)) throw ConfigError("empty CSV; " + expected);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto columns = detail::split(header);
  const auto find = [&](const std::string& name) {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("missing column '" + name + "'; " + expected);
    return static_cast<std::size_t>(it - columns.begin());
  };
  const std::size_t kappa_col = find("kappa");
  const std::size_t vis_col = find("visibility");

  Curve curve;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split(line);
    if (cells.size() != columns.size()) {
      throw ConfigError("line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                        " cells, header has " + std::to_string(columns.size()));
    }
    const double kappa = detail::parse_cell(cells[kappa_col], line_no);
    if (!(kappa > 0.0)) throw ConfigError("kappa must be positive on a log axis (line " + std::to_string(line_no) + ")");
    curve.kappa.push_back(kappa);
    curve.visibility.push_back(detail::parse_cell(cells[vis_col], line_no));
  }
  if (curve.kappa.empty()) throw ConfigError("no data rows");
  return curve;
}

// Log-x plot of visibility in [0, 1] with decade ticks. Output depends only
// on the curve values.
inline std::string render_svg(const Curve& curve) {
  if (curve.kappa.empty()) throw ConfigError("no data rows");
  constexpr double width = 640.0, height = 420.0;
  constexpr double left = 70.0, right = 20.0, top = 30.0, bottom = 60.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  const auto [lo_it, hi_it] = std::minmax_element(curve.kappa.begin(), curve.kappa.end());
  double lo = std::floor(std::log10(*lo_it));
  double hi = std::ceil(std::log10(*hi_it));
  if (hi <= lo) hi = lo + 1.0;

  const auto x_of = [&](double kappa) { return left + (std::log10(kappa) - lo) / (hi - lo) * plot_w; };
  const auto y_of = [&](double v) { return top + (1.0 - std::clamp(v, 0.0, 1.0)) * plot_h; };

  std::string svg;
  svg += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      width, height, width, height);
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"black\"/>\n",
                     left, top, plot_w, plot_h);
  for (int decade = static_cast<int>(lo); decade <= static_cast<int>(hi); ++decade) {
    const double x = x_of(std::pow(10.0, decade));
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#ccc\"/>\n", x, top,
                       top + plot_h);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"middle\">1e{}</text>\n", x,
        top + plot_h + 18.0, decade);
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = 0.25 * i;
    const double y = y_of(v);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#ccc\"/>\n", left, y,
                       left + plot_w);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" text-anchor=\"end\">{:.2f}</text>\n",
                       left - 6.0, y + 4.0, v);
  }
  svg += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\">kappa = dp / k</text>\n",
      left + plot_w / 2.0, height - 15.0);
  svg += fmt::format(
      "<text x=\"18\" y=\"{:.2f}\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2f})\">"
      "visibility</text>\n",
      top + plot_h / 2.0, top + plot_h / 2.0);

  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < curve.kappa.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += fmt::format("{:.3f},{:.3f}", x_of(curve.kappa[i]), y_of(curve.visibility[i]));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

}  // namespace qmirror::plot
