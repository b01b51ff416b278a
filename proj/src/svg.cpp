#include "claw/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "claw/error.hpp"

namespace claw::svg {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v) const {
    const double a = log ? std::log10(v) : v;
    return (a - lo) / (hi - lo);
  }
  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis fit(const std::vector<Series>& series, bool use_x, bool log) {
  Axis ax;
  ax.log = log;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Series& s : series)
    for (double v : use_x ? s.x : s.y) {
      if (!ax.usable(v)) continue;
      const double a = log ? std::log10(v) : v;
      lo = std::min(lo, a);
      hi = std::max(hi, a);
    }
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
    const double pad = std::max(std::abs(hi) * 0.05, 0.5);
    lo -= pad;
    hi += pad;
  } else if (!log) {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  ax.lo = lo;
  ax.hi = hi;
  return ax;
}

}  // namespace

std::string render(const Plot& plot, const std::vector<Series>& series) {
  const double left = 70, right = 20, top = 36, bottom = 50;
  const double w = plot.width - left - right, h = plot.height - top - bottom;
  const Axis ax = fit(series, true, plot.log_x);
  const Axis ay = fit(series, false, plot.log_y);
  auto px = [&](double v) { return left + w * ax.map(v); };
  auto py = [&](double v) { return top + h * (1.0 - ay.map(v)); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << plot.width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(plot.title)
     << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    const double x = left + w * i / 4.0, y = top + h * (1.0 - i / 4.0);
    os << "<line x1=\"" << x << "\" y1=\"" << top + h << "\" x2=\"" << x << "\" y2=\"" << top + h + 4
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << top + h + 16 << "\" text-anchor=\"middle\">"
       << num(ax.log ? std::pow(10.0, fx) : fx) << "</text>\n";
    os << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
       << num(ay.log ? std::pow(10.0, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << left + w / 2 << "\" y=\"" << plot.height - 10 << "\" text-anchor=\"middle\">"
     << escape(plot.x_label) << "</text>\n";
  os << "<text x=\"14\" y=\"" << top + h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << top + h / 2
     << ")\">" << escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    std::ostringstream pts;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
      pts << px(s.x[i]) << "," << py(s.y[i]) << " ";
      if (s.markers)
        os << "<circle cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
       << "\"/>\n";
    const double ly = top + 14 + 14 * static_cast<double>(k);
    os << "<line x1=\"" << left + w - 110 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + w - 92 << "\" y2=\""
       << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << left + w - 88 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write(const std::string& path, const Plot& plot, const std::vector<Series>& series) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << render(plot, series);
}

}  // namespace claw::svg
