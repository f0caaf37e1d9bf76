#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace affinelab::cli {

// Minimal standalone SVG line/scatter plots with axes. Coordinates are in
// data units; log axes take log10 internally. Output is deterministic.
class SvgPlot {
public:
    SvgPlot(int width, int height, std::string title);

    void set_axes(double x_lo, double x_hi, double y_lo, double y_hi,
                  bool x_log, bool y_log, std::string x_label,
                  std::string y_label);
    // fit axes to the data with a small pad (linear only)
    void fit_axes(const std::vector<std::pair<double, double>>& pts,
                  std::string x_label, std::string y_label,
                  bool equal_aspect = false);

    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& color, double stroke_width = 1.2,
                  bool closed = false);
    void markers(const std::vector<std::pair<double, double>>& pts,
                 const std::string& color, double radius = 2.5);
    void caption(const std::string& text);  // extra line under the title

    void write(std::ostream& os) const;

private:
    struct Path {
        std::vector<std::pair<double, double>> pts;
        std::string color;
        double width;
        bool closed;
        bool is_markers;
        double radius;
    };
    double tx(double x) const;
    double ty(double y) const;

    int width_, height_;
    std::string title_, caption_;
    std::string x_label_, y_label_;
    double x_lo_ = 0.0, x_hi_ = 1.0, y_lo_ = 0.0, y_hi_ = 1.0;
    bool x_log_ = false, y_log_ = false;
    std::vector<Path> paths_;
};

} // namespace affinelab::cli
