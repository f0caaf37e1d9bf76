#include "affinelab/body.hpp"

#include "affinelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace affinelab {

namespace {

void symmetrize(std::vector<double>& s) {
    const int n = static_cast<int>(s.size());
    const int half = n / 2;
    for (int j = 0; j < half; ++j) {
        const double avg = 0.5 * (s[j] + s[j + half]);
        s[j] = avg;
        s[j + half] = avg;
    }
}

} // namespace

ConvexBody::ConvexBody(SupportFunction sf,
                       std::shared_ptr<const TrigSeries> series,
                       std::vector<double> radius, double body_area)
    : support_(std::move(sf)),
      series_(std::move(series)),
      radius_(std::move(radius)),
      area_(body_area) {
    auto [rmin, rmax] = std::minmax_element(radius_.begin(), radius_.end());
    min_radius_ = *rmin;
    max_radius_ = *rmax;
    auto [smin, smax] =
        std::minmax_element(support_.values.begin(), support_.values.end());
    min_support_ = *smin;
    max_support_ = *smax;
}

ConvexBody ConvexBody::from_samples(const AngularGrid& grid,
                                    std::vector<double> values,
                                    double r_tol_scale) {
    const int n = grid.size();
    if (static_cast<int>(values.size()) != n)
        throw Error("ConvexBody: expected " + std::to_string(n) +
                    " samples, got " + std::to_string(values.size()));
    symmetrize(values);

    double smax = 0.0;
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw NonPositiveSupport(
                "ConvexBody: support must be positive after symmetrization");
        smax = std::max(smax, v);
    }

    auto series = std::make_shared<const TrigSeries>(values);
    std::vector<double> radius = series->grid_derivative(2);
    double rmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        radius[j] += values[j];
        rmin = std::min(rmin, radius[j]);
    }
    if (!(rmin > r_tol_scale * smax))
        throw NotStrictlyConvex("ConvexBody: min curvature radius " +
                                std::to_string(rmin) +
                                " below tolerance; body is not strictly convex");

    double body_area = 0.0;
    for (int j = 0; j < n; ++j) body_area += values[j] * radius[j];
    body_area *= 0.5 * grid.delta();

    return ConvexBody(SupportFunction{grid, std::move(values)},
                      std::move(series), std::move(radius), body_area);
}

Vec2 ConvexBody::boundary_point(double theta) const {
    const double s = series_->eval(theta);
    const double sp = series_->eval_derivative(theta);
    const double c = std::cos(theta), sn = std::sin(theta);
    return {s * c - sp * sn, s * sn + sp * c};
}

std::vector<double> curvature_radius(const ConvexBody& body) {
    return body.radius();
}

double area(const ConvexBody& body) { return body.area(); }

double hausdorff(const ConvexBody& a, const ConvexBody& b,
                 bool allow_resample) {
    if (a.grid() == b.grid()) {
        double d = 0.0;
        for (int j = 0; j < a.samples(); ++j)
            d = std::max(d, std::abs(a.support()[j] - b.support()[j]));
        return d;
    }
    if (!allow_resample)
        throw GridMismatch("hausdorff: bodies live on different grids");
    const AngularGrid fine(std::max(a.samples(), b.samples()));
    double d = 0.0;
    for (int j = 0; j < fine.size(); ++j) {
        const double t = fine.angle(j);
        d = std::max(d, std::abs(a.support_at(t) - b.support_at(t)));
    }
    return d;
}

ConvexBody apply_linear(const ConvexBody& body, const LinearMap2& map) {
    const Mat2 tt = map.matrix().transpose();
    const int n = body.samples();
    std::vector<double> values(n);
    for (int j = 0; j < n; ++j) {
        const Vec2 v = tt * unit_vector(body.grid().angle(j));
        const double len = v.norm();
        values[j] = len * body.support_at(std::atan2(v.y, v.x));
    }
    return ConvexBody::from_samples(body.grid(), std::move(values));
}

ConvexBody scale(const ConvexBody& body, double factor) {
    if (!(factor > 0.0))
        throw Error("scale: factor must be positive");
    std::vector<double> values = body.support();
    for (double& v : values) v *= factor;
    return ConvexBody::from_samples(body.grid(), std::move(values));
}

ConvexBody resample(const ConvexBody& body, const AngularGrid& grid) {
    return ConvexBody::from_samples(grid, body.series().resample(grid.size()));
}

void write_body(std::ostream& os, const ConvexBody& body) {
    os << "n=" << body.samples() << "\n";
    char buf[40];
    for (double v : body.support()) {
        std::snprintf(buf, sizeof(buf), "%.16e\n", v);
        os << buf;
    }
}

ConvexBody read_body(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("n=", 0) != 0)
        throw Error("read_body: missing 'n=<samples>' header");
    int n = 0;
    try {
        n = std::stoi(header.substr(2));
    } catch (const std::exception&) {
        throw Error("read_body: bad sample count in header: " + header);
    }
    AngularGrid grid(n);
    std::vector<double> values;
    values.reserve(n);
    std::string line;
    while (static_cast<int>(values.size()) < n && std::getline(is, line)) {
        if (line.empty()) continue;
        try {
            values.push_back(std::stod(line));
        } catch (const std::exception&) {
            throw Error("read_body: bad support value: " + line);
        }
    }
    if (static_cast<int>(values.size()) != n)
        throw Error("read_body: expected " + std::to_string(n) + " values, got " +
                    std::to_string(values.size()));
    return ConvexBody::from_samples(grid, std::move(values));
}

} // namespace affinelab
