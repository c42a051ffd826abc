#include "simspace/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace simspace::svg {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// Round step for ~5 ticks over [0, top].
double tick_step(double top) {
  if (!(top > 0.0)) return 1.0;
  const double raw = top / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

Document::Document(double width, double height) : width_(width), height_(height) {}

void Document::rect(double x, double y, double w, double h, const std::string& fill, const std::string& extra) {
  body_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
        << "\" fill=\"" << fill << "\"" << (extra.empty() ? "" : " " + extra) << "/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke, double width) {
  body_ << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2) << "\" y2=\"" << num(y2)
        << "\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width) << "\"/>\n";
}

void Document::circle(double cx, double cy, double r, const std::string& fill, const std::string& title,
                      const std::string& css_class) {
  body_ << "<circle";
  if (!css_class.empty()) body_ << " class=\"" << css_class << "\"";
  body_ << " cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r) << "\" fill=\"" << fill << "\">";
  if (!title.empty()) body_ << "<title>" << escape(title) << "</title>";
  body_ << "</circle>\n";
}

void Document::text(double x, double y, const std::string& content, const std::string& anchor, double size,
                    const std::string& extra) {
  body_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" text-anchor=\"" << anchor << "\" font-size=\""
        << num(size) << "\" font-family=\"sans-serif\"" << (extra.empty() ? "" : " " + extra) << ">" << escape(content)
        << "</text>\n";
}

void Document::image(double x, double y, double w, double h, const std::string& href) {
  body_ << "<image class=\"thumbnail\" x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" href=\"" << escape(href) << "\"/>\n";
}

std::string Document::str() const {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_) << "\" height=\"" << num(height_)
      << "\" viewBox=\"0 0 " << num(width_) << " " << num(height_) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(width_) << "\" height=\"" << num(height_) << "\" fill=\"white\"/>\n"
      << body_.str() << "</svg>\n";
  return out.str();
}

std::string scatter_plot(const Embedding& embedding, const ScatterOptions& options) {
  if (embedding.dims() < 2) throw Error("scatter: embedding needs at least 2 dimensions");
  for (int axis : {options.axis_x, options.axis_y}) {
    if (axis < 0 || axis >= embedding.dims()) {
      throw Error("scatter: axis " + std::to_string(axis) + " out of range for " + std::to_string(embedding.dims()) +
                  " dimensions");
    }
  }
  if (options.axis_x == options.axis_y) throw Error("scatter: axes must differ");

  const auto xs = embedding.coords().col(options.axis_x);
  const auto ys = embedding.coords().col(options.axis_y);
  const double x_min = xs.minCoeff(), x_max = xs.maxCoeff();
  const double y_min = ys.minCoeff(), y_max = ys.maxCoeff();
  const double span = std::max({x_max - x_min, y_max - y_min, 1e-12});
  const double inner = options.size - 2.0 * options.margin;
  const double scale = inner / span;
  // Centre the data box inside the square plot area.
  const double x0 = options.margin + 0.5 * (inner - (x_max - x_min) * scale);
  const double y0 = options.margin + 0.5 * (inner - (y_max - y_min) * scale);
  auto px = [&](double x) { return x0 + (x - x_min) * scale; };
  auto py = [&](double y) { return options.size - y0 - (y - y_min) * scale; };

  Document doc(options.size, options.size);
  const double lo = options.margin, hi = options.size - options.margin;
  doc.line(lo, hi, hi, hi);
  doc.line(lo, lo, lo, hi);
  doc.text(0.5 * options.size, options.size - 0.35 * options.margin, "dim_" + std::to_string(options.axis_x), "middle",
           14.0, "class=\"axis-label\"");
  doc.text(0.35 * options.margin, 0.5 * options.size, "dim_" + std::to_string(options.axis_y), "middle", 14.0,
           "class=\"axis-label\" transform=\"rotate(-90 " + num(0.35 * options.margin) + " " + num(0.5 * options.size) +
               ")\"");

  for (Eigen::Index i = 0; i < embedding.size(); ++i) {
    const auto& id = embedding.ids()[i];
    const double cx = px(xs(i)), cy = py(ys(i));
    auto thumb = options.thumbnails.find(id);
    if (thumb != options.thumbnails.end()) {
      const double t = options.thumbnail_size;
      doc.image(cx - 0.5 * t, cy - 0.5 * t, t, t, thumb->second);
    }
    doc.circle(cx, cy, 4.0, "#c44e52", id, "marker");
    doc.text(cx + 6.0, cy - 6.0, id, "start", 10.0);
  }
  return doc.str();
}

std::string bar_chart(const std::string& title, const std::vector<Bar>& bars, const std::string& y_label) {
  const double width = 120.0 + 90.0 * static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  const double height = 420.0;
  const double left = 80.0, right = 20.0, top = 50.0, bottom = 90.0;
  double y_top = 0.0;
  for (const auto& b : bars) y_top = std::max(y_top, b.value + b.error);
  const double step = tick_step(y_top);
  y_top = std::max(step, std::ceil(y_top / step) * step);
  const double plot_h = height - top - bottom;
  auto py = [&](double v) { return height - bottom - v / y_top * plot_h; };

  Document doc(width, height);
  doc.text(0.5 * width, 28.0, title, "middle", 16.0);
  doc.line(left, top, left, height - bottom);
  doc.line(left, height - bottom, width - right, height - bottom);
  for (double v = 0.0; v <= y_top + 1e-12; v += step) {
    doc.line(left - 5.0, py(v), left, py(v));
    doc.text(left - 8.0, py(v) + 4.0, num(v), "end", 11.0);
  }
  doc.text(18.0, 0.5 * (top + height - bottom), y_label, "middle", 13.0,
           "transform=\"rotate(-90 18 " + num(0.5 * (top + height - bottom)) + ")\"");

  const double slot = (width - left - right) / static_cast<double>(std::max<std::size_t>(bars.size(), 1));
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double x = left + slot * static_cast<double>(i) + 0.15 * slot;
    const double w = 0.7 * slot;
    doc.rect(x, py(b.value), w, py(0.0) - py(b.value), b.fill,
             "class=\"bar\" data-label=\"" + escape(b.label) + "\" data-value=\"" + num(b.value) + "\"");
    if (b.error > 0.0) {
      doc.line(x + 0.5 * w, py(b.value - b.error), x + 0.5 * w, py(b.value + b.error));
    }
    doc.text(x + 0.5 * w, py(b.value) - 5.0, num(b.value), "middle", 10.0);
    doc.text(x + 0.5 * w, height - bottom + 16.0, b.label, "middle", 11.0);
  }
  return doc.str();
}

}  // namespace simspace::svg
