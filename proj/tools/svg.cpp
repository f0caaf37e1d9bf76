#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace affinelab::cli {

namespace {

constexpr int kMarginLeft = 62, kMarginRight = 18, kMarginTop = 34,
              kMarginBottom = 46;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// round tick spacing 1/2/5 x 10^k covering roughly 5 intervals
std::vector<double> linear_ticks(double lo, double hi) {
    const double span = hi - lo;
    if (!(span > 0.0)) return {lo};
    double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (span / (step * mult) <= 6.0) {
            step *= mult;
            break;
        }
    }
    std::vector<double> ticks;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 1e-12 * span; t += step) ticks.push_back(t);
    return ticks;
}

std::vector<double> decade_ticks(double lo, double hi) {
    std::vector<double> ticks;
    for (int e = static_cast<int>(std::floor(lo)); e <= std::ceil(hi); ++e)
        if (e >= lo - 1e-9 && e <= hi + 1e-9) ticks.push_back(e);
    if (ticks.empty()) ticks = {lo, hi};
    return ticks;
}

} // namespace

SvgPlot::SvgPlot(int width, int height, std::string title)
    : width_(width), height_(height), title_(std::move(title)) {}

void SvgPlot::set_axes(double x_lo, double x_hi, double y_lo, double y_hi,
                       bool x_log, bool y_log, std::string x_label,
                       std::string y_label) {
    x_log_ = x_log;
    y_log_ = y_log;
    x_lo_ = x_log ? std::log10(x_lo) : x_lo;
    x_hi_ = x_log ? std::log10(x_hi) : x_hi;
    y_lo_ = y_log ? std::log10(y_lo) : y_lo;
    y_hi_ = y_log ? std::log10(y_hi) : y_hi;
    x_label_ = std::move(x_label);
    y_label_ = std::move(y_label);
}

void SvgPlot::fit_axes(const std::vector<std::pair<double, double>>& pts,
                       std::string x_label, std::string y_label,
                       bool equal_aspect) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& [x, y] : pts) {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
    }
    if (!(xhi > xlo)) xhi = xlo + 1.0;
    if (!(yhi > ylo)) yhi = ylo + 1.0;
    double xpad = 0.05 * (xhi - xlo), ypad = 0.05 * (yhi - ylo);
    if (equal_aspect) {
        const double span = std::max(xhi - xlo, yhi - ylo);
        const double xc = 0.5 * (xlo + xhi), yc = 0.5 * (ylo + yhi);
        xlo = xc - 0.55 * span;
        xhi = xc + 0.55 * span;
        ylo = yc - 0.55 * span;
        yhi = yc + 0.55 * span;
        xpad = ypad = 0.0;
    }
    set_axes(xlo - xpad, xhi + xpad, ylo - ypad, yhi + ypad, false, false,
             std::move(x_label), std::move(y_label));
}

double SvgPlot::tx(double x) const {
    const double v = x_log_ ? std::log10(x) : x;
    return kMarginLeft + (v - x_lo_) / (x_hi_ - x_lo_) *
                             (width_ - kMarginLeft - kMarginRight);
}

double SvgPlot::ty(double y) const {
    const double v = y_log_ ? std::log10(y) : y;
    return height_ - kMarginBottom - (v - y_lo_) / (y_hi_ - y_lo_) *
                                         (height_ - kMarginTop - kMarginBottom);
}

void SvgPlot::polyline(const std::vector<std::pair<double, double>>& pts,
                       const std::string& color, double stroke_width,
                       bool closed) {
    paths_.push_back({pts, color, stroke_width, closed, false, 0.0});
}

void SvgPlot::markers(const std::vector<std::pair<double, double>>& pts,
                      const std::string& color, double radius) {
    paths_.push_back({pts, color, 0.0, false, true, radius});
}

void SvgPlot::caption(const std::string& text) { caption_ = text; }

void SvgPlot::write(std::ostream& os) const {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
       << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << " "
       << height_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width_ / 2 << "\" y=\"16\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"13\">"
       << title_ << "</text>\n";
    if (!caption_.empty())
        os << "<text x=\"" << width_ / 2
           << "\" y=\"30\" text-anchor=\"middle\" "
              "font-family=\"sans-serif\" font-size=\"10\" fill=\"#555\">"
           << caption_ << "</text>\n";

    const double px_lo = kMarginLeft, px_hi = width_ - kMarginRight;
    const double py_lo = height_ - kMarginBottom, py_hi = kMarginTop;
    os << "<rect x=\"" << px_lo << "\" y=\"" << py_hi << "\" width=\""
       << px_hi - px_lo << "\" height=\"" << py_lo - py_hi
       << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";

    const auto xticks =
        x_log_ ? decade_ticks(x_lo_, x_hi_) : linear_ticks(x_lo_, x_hi_);
    for (double t : xticks) {
        const double x = x_log_ ? std::pow(10.0, t) : t;
        const double px = tx(x);
        os << "<line x1=\"" << fmt(px) << "\" y1=\"" << py_lo << "\" x2=\""
           << fmt(px) << "\" y2=\"" << py_lo + 4 << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << fmt(px) << "\" y=\"" << py_lo + 17
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"10\">"
           << (x_log_ ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
    }
    const auto yticks =
        y_log_ ? decade_ticks(y_lo_, y_hi_) : linear_ticks(y_lo_, y_hi_);
    for (double t : yticks) {
        const double y = y_log_ ? std::pow(10.0, t) : t;
        const double py = ty(y);
        os << "<line x1=\"" << px_lo - 4 << "\" y1=\"" << fmt(py) << "\" x2=\""
           << px_lo << "\" y2=\"" << fmt(py) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << px_lo - 7 << "\" y=\"" << fmt(py + 3)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"10\">"
           << (y_log_ ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
    }
    os << "<text x=\"" << (px_lo + px_hi) / 2 << "\" y=\"" << height_ - 8
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << x_label_ << "</text>\n";
    os << "<text x=\"14\" y=\"" << (py_lo + py_hi) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\" transform=\"rotate(-90 14 "
       << (py_lo + py_hi) / 2 << ")\">" << y_label_ << "</text>\n";

    for (const auto& p : paths_) {
        if (p.is_markers) {
            for (const auto& [x, y] : p.pts)
                os << "<circle cx=\"" << fmt(tx(x)) << "\" cy=\"" << fmt(ty(y))
                   << "\" r=\"" << p.radius << "\" fill=\"" << p.color
                   << "\"/>\n";
            continue;
        }
        os << "<" << (p.closed ? "polygon" : "polyline") << " points=\"";
        for (const auto& [x, y] : p.pts)
            os << fmt(tx(x)) << "," << fmt(ty(y)) << " ";
        os << "\" fill=\"none\" stroke=\"" << p.color << "\" stroke-width=\""
           << p.width << "\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace affinelab::cli
