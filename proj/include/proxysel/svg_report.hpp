/*
 * proxysel - proxy task selection and early performance prediction
 * for large model evaluation.
 *
 * This code is released under the Apache License, Version 2.0.
 * http://www.apache.org/licenses/LICENSE-2.0
 */
#ifndef PROXYSEL_SVG_REPORT_HPP
#define PROXYSEL_SVG_REPORT_HPP

#include <span>
#include <string>

namespace proxysel {

// One labelled value in a horizontal bar chart.
struct Bar {
  std::string label;
  double value = 0.0;
};

// Renders a deterministic horizontal bar chart as a standalone SVG document.
// Negative values extend left of a shared zero axis; labels are XML-escaped.
std::string bar_chart_svg(const std::string& title, std::span<const Bar> bars,
                          const std::string& value_label = "");

}  // namespace proxysel

#endif  // PROXYSEL_SVG_REPORT_HPP
