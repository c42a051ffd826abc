#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "simspace/core.hpp"

namespace simspace::svg {

std::string escape(const std::string& text);

/// Minimal SVG writer; coordinates are in pixels with y pointing down.
class Document {
 public:
  Document(double width, double height);

  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& extra = {});
  void line(double x1, double y1, double x2, double y2, const std::string& stroke = "black", double width = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill, const std::string& title,
              const std::string& css_class = {});
  void text(double x, double y, const std::string& content, const std::string& anchor = "start", double size = 12.0,
            const std::string& extra = {});
  void image(double x, double y, double w, double h, const std::string& href);

  std::string str() const;

 private:
  double width_;
  double height_;
  std::ostringstream body_;
};

struct ScatterOptions {
  int axis_x = 0;
  int axis_y = 1;
  double size = 800.0;
  double margin = 60.0;
  /// Optional image path per stimulus, drawn centred on its marker.
  std::map<StimulusId, std::string> thumbnails;
  double thumbnail_size = 48.0;
};

/// Scatter plot of two embedding dimensions, one marker per stimulus.
/// Both axes share one scale so distances are not distorted.
std::string scatter_plot(const Embedding& embedding, const ScatterOptions& options = {});

struct Bar {
  std::string label;
  double value = 0.0;
  double error = 0.0;  ///< half-height of an error whisker; 0 draws none
  std::string fill = "#4c72b0";
};

std::string bar_chart(const std::string& title, const std::vector<Bar>& bars, const std::string& y_label);

}  // namespace simspace::svg
