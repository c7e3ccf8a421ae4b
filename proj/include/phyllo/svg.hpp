#pragma once

#include <complex>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace phyllo::svg {

/// Minimal SVG 1.1 writer with a math-style coordinate frame (y up).
class Document {
 public:
  Document(double min_x, double min_y, double max_x, double max_y,
           double pixels_per_unit = 16.0);

  void circle(double x, double y, double r, const std::string& fill,
              const std::string& stroke = "none", double stroke_width = 0.0);
  void polygon(const std::vector<std::complex<double>>& pts, const std::string& fill,
               const std::string& stroke = "black", double stroke_width = 0.02);
  void polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke,
                double stroke_width = 0.05);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 0.05);
  void arc_circle(double cx, double cy, double r, const std::string& stroke,
                  double stroke_width = 0.03);

  void write(std::ostream& os) const;
  void save(const std::string& path) const;

 private:
  double min_x_, min_y_, max_x_, max_y_, scale_;
  std::ostringstream body_;
  [[nodiscard]] double tx(double x) const { return (x - min_x_) * scale_; }
  [[nodiscard]] double ty(double y) const { return (max_y_ - y) * scale_; }
};

}  // namespace phyllo::svg
