#pragma once

#include <array>
#include <string>
#include <vector>

namespace fedstrat::cli {

struct Series {
  std::string name;
  std::vector<double> y;  // one value per round
};

/// Accuracy-vs-round line chart, all series overlaid, y axis fixed to [0, 1].
std::string accuracy_svg(const std::string& title, const std::vector<Series>& series);

/// Bar chart of rule-selection percentages (FedAvg, Median, Krum).
std::string selection_svg(const std::string& title, const std::array<double, 3>& pct);

}  // namespace fedstrat::cli
