#pragma once
// Static SVG line charts. Pure text emission with fixed formatting, so the
// same input always renders byte-identical output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace planlab {

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // NaN points are skipped
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string label_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Tick step of the form {1,2,5} * 10^k near range/6.
inline double nice_step(double range) {
  if (!(range > 0.0)) return 1.0;
  double raw = range / 6.0;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double norm = raw / mag;
  double step = norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0;
  return step * mag;
}

}  // namespace detail

inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::vector<ChartSeries>& series,
                                     int width = 880, int height = 520) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  const double ml = 70, mr = 170, mt = 44, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::string out;
  out.reserve(8192);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\" font-family=\"monospace\" font-size=\"12\">\n",
                width, height, width, height);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + detail::svg_num(ml) + "\" y=\"24\" font-size=\"15\">" + title +
         "</text>\n";

  // Axes and ticks.
  double xs = detail::nice_step(xmax - xmin), ys = detail::nice_step(ymax - ymin);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-12; t += xs) {
    double X = px(t);
    out += "<line x1=\"" + detail::svg_num(X) + "\" y1=\"" + detail::svg_num(mt) +
           "\" x2=\"" + detail::svg_num(X) + "\" y2=\"" + detail::svg_num(mt + ph) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + detail::svg_num(X - 8) + "\" y=\"" +
           detail::svg_num(mt + ph + 18) + "\">" + detail::label_num(t) + "</text>\n";
  }
  for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-12; t += ys) {
    double Y = py(t);
    out += "<line x1=\"" + detail::svg_num(ml) + "\" y1=\"" + detail::svg_num(Y) +
           "\" x2=\"" + detail::svg_num(ml + pw) + "\" y2=\"" + detail::svg_num(Y) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + detail::svg_num(8) + "\" y=\"" + detail::svg_num(Y + 4) +
           "\">" + detail::label_num(t) + "</text>\n";
  }
  out += "<rect x=\"" + detail::svg_num(ml) + "\" y=\"" + detail::svg_num(mt) +
         "\" width=\"" + detail::svg_num(pw) + "\" height=\"" + detail::svg_num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  out += "<text x=\"" + detail::svg_num(ml + pw / 2 - 12) + "\" y=\"" +
         detail::svg_num(static_cast<double>(height) - 12) + "\">" + x_label + "</text>\n";

  // Series polylines and legend.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % 8];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!pts.empty()) pts += ' ';
      pts += detail::svg_num(px(s.x[i])) + "," + detail::svg_num(py(s.y[i]));
    }
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    double ly = mt + 16 + 18 * static_cast<double>(si);
    out += "<line x1=\"" + detail::svg_num(ml + pw + 12) + "\" y1=\"" +
           detail::svg_num(ly - 4) + "\" x2=\"" + detail::svg_num(ml + pw + 34) +
           "\" y2=\"" + detail::svg_num(ly - 4) + "\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + detail::svg_num(ml + pw + 40) + "\" y=\"" + detail::svg_num(ly) +
           "\">" + s.name + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace planlab
