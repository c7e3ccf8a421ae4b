#include "phyllo/svg.hpp"

#include <fstream>

#include "phyllo/errors.hpp"

namespace phyllo::svg {

Document::Document(double min_x, double min_y, double max_x, double max_y,
                   double pixels_per_unit)
    : min_x_(min_x), min_y_(min_y), max_x_(max_x), max_y_(max_y), scale_(pixels_per_unit) {}

void Document::circle(double x, double y, double r, const std::string& fill,
                      const std::string& stroke, double stroke_width) {
  body_ << "<circle cx=\"" << tx(x) << "\" cy=\"" << ty(y) << "\" r=\"" << r * scale_
        << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << stroke_width * scale_ << "\"/>\n";
}

void Document::polygon(const std::vector<std::complex<double>>& pts, const std::string& fill,
                       const std::string& stroke, double stroke_width) {
  body_ << "<polygon points=\"";
  for (const auto& p : pts) body_ << tx(p.real()) << "," << ty(p.imag()) << " ";
  body_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << stroke_width * scale_ << "\"/>\n";
}

void Document::polyline(const std::vector<std::complex<double>>& pts, const std::string& stroke,
                        double stroke_width) {
  body_ << "<polyline points=\"";
  for (const auto& p : pts) body_ << tx(p.real()) << "," << ty(p.imag()) << " ";
  body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << stroke_width * scale_ << "\"/>\n";
}

void Document::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                    double stroke_width) {
  body_ << "<line x1=\"" << tx(x1) << "\" y1=\"" << ty(y1) << "\" x2=\"" << tx(x2)
        << "\" y2=\"" << ty(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << stroke_width * scale_ << "\"/>\n";
}

void Document::arc_circle(double cx, double cy, double r, const std::string& stroke,
                          double stroke_width) {
  body_ << "<circle cx=\"" << tx(cx) << "\" cy=\"" << ty(cy) << "\" r=\"" << r * scale_
        << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
        << stroke_width * scale_ << "\"/>\n";
}

void Document::write(std::ostream& os) const {
  double w = (max_x_ - min_x_) * scale_;
  double h = (max_y_ - min_y_) * scale_;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body_.str() << "</svg>\n";
}

void Document::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("svg: cannot open output file " + path);
  write(out);
}

}  // namespace phyllo::svg
