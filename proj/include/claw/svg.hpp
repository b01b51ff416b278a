#ifndef CLAW_SVG_HPP_
#define CLAW_SVG_HPP_

#include <string>
#include <vector>

namespace claw::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool markers = false;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

// Self-contained SVG line plot with axes, ticks and a legend. Non-finite
// points (and non-positive ones on log axes) are dropped.
std::string render(const Plot& plot, const std::vector<Series>& series);

void write(const std::string& path, const Plot& plot, const std::vector<Series>& series);

}  // namespace claw::svg

#endif  // CLAW_SVG_HPP_
