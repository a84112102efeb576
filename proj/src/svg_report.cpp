/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#include "proxysel/svg_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "proxysel/errors.hpp"

namespace proxysel {

namespace {

constexpr double kWidth = 720.0;
constexpr double kLabelGutter = 200.0;
constexpr double kRightMargin = 90.0;
constexpr double kTopMargin = 44.0;
constexpr double kRowHeight = 26.0;
constexpr double kBarHeight = 16.0;

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c; break;
    }
  }
  return out;
}

std::string fmt(double value, const char* pattern) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

}  // namespace

std::string bar_chart_svg(const std::string& title, std::span<const Bar> bars,
                          const std::string& value_label) {
  if (bars.empty()) throw ValidationError("bar chart requires at least one bar");
  for (const Bar& bar : bars) {
    if (!std::isfinite(bar.value))
      throw ValidationError("bar chart value for \"" + bar.label + "\" is not finite");
  }

  double lo = 0.0;
  double hi = 0.0;
  for (const Bar& bar : bars) {
    lo = std::min(lo, bar.value);
    hi = std::max(hi, bar.value);
  }
  if (hi - lo <= 0.0) hi = lo + 1.0;  // all-zero chart still needs a scale

  const double plot_width = kWidth - kLabelGutter - kRightMargin;
  const double scale = plot_width / (hi - lo);
  const double zero_x = kLabelGutter + (0.0 - lo) * scale;
  const double height = kTopMargin + kRowHeight * static_cast<double>(bars.size()) + 16.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, "%.0f")
      << "\" height=\"" << fmt(height, "%.0f") << "\" viewBox=\"0 0 " << fmt(kWidth, "%.0f")
      << " " << fmt(height, "%.0f") << "\">\n";
  svg << "  <style>text{font-family:monospace;font-size:12px;fill:#222222;}</style>\n";
  svg << "  <text x=\"12\" y=\"20\" font-size=\"14\">" << escape_xml(title) << "</text>\n";
  if (!value_label.empty()) {
    svg << "  <text x=\"" << fmt(kWidth - 12.0, "%.0f") << "\" y=\"20\" text-anchor=\"end\">"
        << escape_xml(value_label) << "</text>\n";
  }
  svg << "  <line x1=\"" << fmt(zero_x, "%.2f") << "\" y1=\"" << fmt(kTopMargin - 8.0, "%.2f")
      << "\" x2=\"" << fmt(zero_x, "%.2f") << "\" y2=\"" << fmt(height - 10.0, "%.2f")
      << "\" stroke=\"#999999\"/>\n";

  for (std::size_t i = 0; i < bars.size(); ++i) {
    const Bar& bar = bars[i];
    const double y = kTopMargin + kRowHeight * static_cast<double>(i);
    const double extent = std::abs(bar.value) * scale;
    const double x = bar.value < 0.0 ? zero_x - extent : zero_x;
    const char* fill = bar.value < 0.0 ? "#cc6677" : "#4477aa";
    svg << "  <text x=\"" << fmt(kLabelGutter - 8.0, "%.2f") << "\" y=\""
        << fmt(y + kBarHeight - 3.0, "%.2f") << "\" text-anchor=\"end\">"
        << escape_xml(bar.label) << "</text>\n";
    svg << "  <rect x=\"" << fmt(x, "%.2f") << "\" y=\"" << fmt(y, "%.2f") << "\" width=\""
        << fmt(extent, "%.2f") << "\" height=\"" << fmt(kBarHeight, "%.0f") << "\" fill=\""
        << fill << "\"/>\n";
    const double text_x = bar.value < 0.0 ? zero_x + 6.0 : zero_x + extent + 6.0;
    svg << "  <text x=\"" << fmt(text_x, "%.2f") << "\" y=\"" << fmt(y + kBarHeight - 3.0, "%.2f")
        << "\">" << fmt(bar.value, "%.4f") << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace proxysel
