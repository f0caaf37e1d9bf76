#pragma once

#include "affinelab/grid.hpp"
#include "affinelab/linmap.hpp"
#include "affinelab/spectral.hpp"

#include <iosfwd>
#include <memory>
#include <vector>

namespace affinelab {

// Sampled support function of an origin-symmetric body. Symmetry
// s_{j+n/2} = s_j is enforced by antipodal averaging on construction.
struct SupportFunction {
    AngularGrid grid;
    std::vector<double> values;
};

// Origin-symmetric, strictly convex planar body represented by its support
// function. Immutable after validation; curvature radius r = s'' + s (by
// spectral differentiation), area and extrema are cached on construction.
class ConvexBody {
public:
    // Symmetrizes, validates positivity and strict convexity
    // (min r > r_tol_scale * max s), and fills the caches.
    static ConvexBody from_samples(const AngularGrid& grid,
                                   std::vector<double> values,
                                   double r_tol_scale = 1e-8);

    const AngularGrid& grid() const { return support_.grid; }
    int samples() const { return support_.grid.size(); }
    const std::vector<double>& support() const { return support_.values; }
    const std::vector<double>& radius() const { return radius_; }
    const TrigSeries& series() const { return *series_; }

    double area() const { return area_; }
    double min_radius() const { return min_radius_; }
    double max_radius() const { return max_radius_; }
    double min_support() const { return min_support_; }
    double max_support() const { return max_support_; }

    double support_at(double theta) const { return series_->eval(theta); }
    double support_derivative_at(double theta) const {
        return series_->eval_derivative(theta);
    }

    // Boundary point with outward normal (cos theta, sin theta):
    // x = s u + s' u_perp.
    Vec2 boundary_point(double theta) const;

private:
    ConvexBody(SupportFunction sf, std::shared_ptr<const TrigSeries> series,
               std::vector<double> radius, double area);

    SupportFunction support_;
    std::shared_ptr<const TrigSeries> series_;
    std::vector<double> radius_;
    double area_ = 0.0;
    double min_radius_ = 0.0, max_radius_ = 0.0;
    double min_support_ = 0.0, max_support_ = 0.0;
};

std::vector<double> curvature_radius(const ConvexBody& body);
double area(const ConvexBody& body);

// Uniform distance between support functions. Bodies on different grids are
// resampled onto the finer grid unless allow_resample is false, in which
// case GridMismatch is thrown.
double hausdorff(const ConvexBody& a, const ConvexBody& b,
                 bool allow_resample = true);

// Image body under an invertible linear map: s_TK(u) = |T^t u| s_K(T^t u / |T^t u|).
ConvexBody apply_linear(const ConvexBody& body, const LinearMap2& map);

ConvexBody scale(const ConvexBody& body, double factor);
ConvexBody resample(const ConvexBody& body, const AngularGrid& grid);

// Plain text format: header line "n=<samples>", then one support value per
// line in angle order.
void write_body(std::ostream& os, const ConvexBody& body);
ConvexBody read_body(std::istream& is);

} // namespace affinelab
