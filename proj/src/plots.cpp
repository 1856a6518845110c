#include "picheck/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace picheck::plots {

namespace {

constexpr double kCanvas = 800.0;

struct Frame {
  double lo0 = 0.0, lo1 = 0.0;
  double scale = 1.0;
  double height = 0.0;

  double px(double c0) const { return (c0 - lo0) * scale; }
  double py(double c1) const { return height - (c1 - lo1) * scale; }
};

Frame fit_frame(const PointCloudSpace& space) {
  if (space.dim() < 2)
    throw std::invalid_argument("plots want 2D coordinates");
  double lo0 = kInf, hi0 = -kInf, lo1 = kInf, hi1 = -kInf;
  for (VertexId v = 0; v < space.vertex_count(); ++v) {
    std::span<const double> c = space.coords(v);
    lo0 = std::min(lo0, c[0]);
    hi0 = std::max(hi0, c[0]);
    lo1 = std::min(lo1, c[1]);
    hi1 = std::max(hi1, c[1]);
  }
  Frame f;
  const double pad = space.resolution();
  f.lo0 = lo0 - pad;
  f.lo1 = lo1 - pad;
  const double w = hi0 - lo0 + 2 * pad;
  const double h = hi1 - lo1 + 2 * pad;
  f.scale = kCanvas / std::max(w, 1e-12);
  f.height = h * f.scale;
  return f;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void open_svg(std::ostringstream& out, const Frame& f, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kCanvas)
      << "\" height=\"" << num(f.height) << "\">\n";
  if (!title.empty())
    out << "<title>" << title << "</title>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string shade(int gray) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", gray, gray, gray);
  return buf;
}

std::string field_svg(const PointCloudSpace& space, std::span<const double> values,
                      const std::string& title, int bands) {
  const Frame f = fit_frame(space);
  double lo = kInf, hi = -kInf;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) hi = lo + 1.0;

  std::ostringstream out;
  open_svg(out, f, title);
  const double cell = space.resolution() * f.scale;
  for (VertexId v = 0; v < space.vertex_count(); ++v) {
    std::span<const double> c = space.coords(v);
    double t = std::isfinite(values[v]) ? (values[v] - lo) / (hi - lo) : 1.0;
    if (bands > 1) t = std::floor(t * bands) / bands;
    const int gray = static_cast<int>(std::lround(235.0 * (1.0 - t)) + 10);
    out << "<rect x=\"" << num(f.px(c[0]) - cell / 2) << "\" y=\""
        << num(f.py(c[1]) - cell / 2) << "\" width=\"" << num(cell)
        << "\" height=\"" << num(cell) << "\" fill=\"" << shade(gray)
        << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string heatmap_svg(const PointCloudSpace& space,
                        std::span<const double> values, const std::string& title) {
  return field_svg(space, values, title, 0);
}

std::string contour_svg(const PointCloudSpace& space,
                        std::span<const double> values, const std::string& title) {
  return field_svg(space, values, title, 10);
}

std::string cut_svg(const PointCloudSpace& space, const NetGraph& net,
                    std::span<const NetArc> arcs, const Cut& cut) {
  const Frame f = fit_frame(space);
  std::vector<std::uint8_t> on_source(net.points.size(), 0);
  for (std::uint32_t p : cut.source_side) on_source[p] = 1;

  std::ostringstream out;
  open_svg(out, f, "min cut at delta=" + num(net.delta));
  for (const NetArc& a : arcs) {
    std::span<const double> cu = space.coords(net.points[a.tail]);
    std::span<const double> cv = space.coords(net.points[a.head]);
    const bool crossing = on_source[a.tail] && !on_source[a.head];
    out << "<line x1=\"" << num(f.px(cu[0])) << "\" y1=\"" << num(f.py(cu[1]))
        << "\" x2=\"" << num(f.px(cv[0])) << "\" y2=\"" << num(f.py(cv[1]))
        << "\" stroke=\"" << (crossing ? "#b03030" : "#c8c8c8")
        << "\" stroke-width=\"" << (crossing ? "2" : "1") << "\"/>\n";
  }
  const double r = std::max(2.0, net.delta * f.scale * 0.25);
  for (std::size_t p = 0; p < net.points.size(); ++p) {
    std::span<const double> c = space.coords(net.points[p]);
    const char* fill = on_source[p] ? "#303030" : "#f0f0f0";
    if (p == net.source) fill = "#2040c0";
    if (p == net.sink) fill = "#208040";
    out << "<circle cx=\"" << num(f.px(c[0])) << "\" cy=\"" << num(f.py(c[1]))
        << "\" r=\"" << num(r) << "\" fill=\"" << fill
        << "\" stroke=\"#404040\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& content, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace picheck::plots
