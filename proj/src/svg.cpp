#include "tailcs/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace tailcs {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string svg_success_chart(const SweepTable& table) {
  const double width = 640, height = 480;
  const double left = 56, right = 24, top = 24, bottom = 48;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  Index s_min = 0, s_max = 1;
  bool first = true;
  std::vector<Method> methods;
  for (const SweepRow& row : table.rows) {
    if (first) {
      s_min = s_max = row.s;
      first = false;
    } else {
      s_min = std::min(s_min, row.s);
      s_max = std::max(s_max, row.s);
    }
    if (std::find(methods.begin(), methods.end(), row.method) == methods.end())
      methods.push_back(row.method);
  }
  if (s_max == s_min) s_max = s_min + 1;

  auto sx = [&](double s) { return left + (s - s_min) / double(s_max - s_min) * plot_w; };
  auto sy = [&](double rate) { return top + (1.0 - rate) * plot_h; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";

  // axes
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" +
         fmt(left + plot_w) + "\" y2=\"" + fmt(top + plot_h) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) +
         "\" y2=\"" + fmt(top + plot_h) + "\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double rate = i / 4.0;
    const double y = sy(rate);
    svg += "<line x1=\"" + fmt(left - 4) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt(rate) + "</text>\n";
  }
  std::vector<Index> ticks;
  for (const SweepRow& row : table.rows)
    if (std::find(ticks.begin(), ticks.end(), row.s) == ticks.end()) ticks.push_back(row.s);
  std::sort(ticks.begin(), ticks.end());
  for (Index s : ticks) {
    const double x = sx(double(s));
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top + plot_h) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(top + plot_h + 4) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + plot_h + 18) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + std::to_string(s) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 12) +
         "\" font-size=\"13\" text-anchor=\"middle\">sparsity s</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(top + plot_h / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(top + plot_h / 2) + ")\">success rate</text>\n";

  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    const char* color = kPalette[mi % 5];
    std::string points;
    for (const SweepRow& row : table.rows) {
      if (row.method != methods[mi]) continue;
      points += fmt(sx(double(row.s))) + "," + fmt(sy(row.success_rate)) + " ";
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double ly = top + 16 + 18 * double(mi);
    svg += "<line x1=\"" + fmt(left + plot_w - 110) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(left + plot_w - 86) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(left + plot_w - 80) + "\" y=\"" + fmt(ly) +
           "\" font-size=\"12\">" + to_string(methods[mi]) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace tailcs
