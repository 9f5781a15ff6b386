#pragma once
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace willflow::svg {

struct Series {
  std::vector<double> x, y;
};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

//! Single polyline chart with axis labels and an optional vertical marker.
inline std::string line_plot(const std::string &title, const std::string &xlabel, const std::string &ylabel,
                             const Series &s, std::optional<double> marker = {}) {
  const double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
      continue;
    if (first) {
      x0 = x1 = s.x[i];
      y0 = y1 = s.y[i];
      first = false;
    }
    x0 = std::min(x0, s.x[i]);
    x1 = std::max(x1, s.x[i]);
    y0 = std::min(y0, s.y[i]);
    y1 = std::max(y1, s.y[i]);
  }
  if (x1 <= x0)
    x1 = x0 + 1;
  if (y1 <= y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
     << H / 2 << ")\">" << ylabel << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"10\">"
       << num(xv) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << num(py(yv) + 3) << "\" text-anchor=\"end\" font-size=\"10\">"
       << num(yv) << "</text>\n";
  }
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (std::isfinite(s.x[i]) && std::isfinite(s.y[i]))
      os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
  os << "\"/>\n";
  if (marker && std::isfinite(*marker)) {
    const double m = px(*marker);
    os << "<line x1=\"" << num(m) << "\" y1=\"" << T << "\" x2=\"" << num(m) << "\" y2=\"" << H - B
       << "\" stroke=\"firebrick\" stroke-dasharray=\"4 3\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace willflow::svg
