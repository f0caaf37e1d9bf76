#include "affinelab/ellipse.hpp"

#include "affinelab/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace affinelab {

Ellipse::Ellipse(const Mat2& shape) : shape_(shape) {
    const double m11 = shape.a11, m12 = 0.5 * (shape.a12 + shape.a21),
                 m22 = shape.a22;
    if (std::abs(shape.a12 - shape.a21) >
        1e-12 * (std::abs(m11) + std::abs(m22) + std::abs(m12)))
        throw Error("Ellipse: shape matrix is not symmetric");
    const double mean = 0.5 * (m11 + m22);
    const double half_diff = 0.5 * (m11 - m22);
    const double disc = std::hypot(half_diff, m12);
    const double lmax = mean + disc, lmin = mean - disc;
    if (!(lmin > 0.0))
        throw Error("Ellipse: shape matrix is not positive definite");
    major_ = std::sqrt(lmax);
    minor_ = std::sqrt(lmin);
    double psi = 0.5 * std::atan2(2.0 * m12, m11 - m22);
    // canonical major-axis direction: cos >= 0, and sin >= 0 when cos == 0
    if (std::cos(psi) < 0.0) psi += (psi > 0.0 ? -std::numbers::pi : std::numbers::pi);
    if (std::abs(std::cos(psi)) < 1e-15 && std::sin(psi) < 0.0)
        psi += std::numbers::pi;
    angle_ = psi;
}

Ellipse Ellipse::from_shape(const Mat2& shape) { return Ellipse(shape); }

Ellipse Ellipse::from_axes(double a, double b, double phi) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("Ellipse: semi-axes must be positive");
    const Mat2 r = Mat2::rotation(phi);
    return Ellipse(r * Mat2::diagonal(a * a, b * b) * r.transpose());
}

double Ellipse::area() const {
    return std::numbers::pi * minor_ * major_;
}

double Ellipse::support(double theta) const {
    const Vec2 u = unit_vector(theta);
    return std::sqrt((shape_ * u).dot(u));
}

Ellipse Ellipse::scaled(double factor) const {
    if (!(factor > 0.0)) throw Error("Ellipse::scaled: factor must be positive");
    return Ellipse(shape_ * (factor * factor));
}

Ellipse Ellipse::transformed(const LinearMap2& map) const {
    const Mat2& t = map.matrix();
    return Ellipse(t * shape_ * t.transpose());
}

LinearMap2 normalizing_transform(const Ellipse& e) {
    const double a = e.semi_minor(), b = e.semi_major();
    // disks only fix a rotation; take the identity (the axis angle of a
    // noise-level anisotropy is meaningless anyway)
    if (b - a <= 1e-10 * b) return LinearMap2::identity();
    const double root = std::sqrt(a * b);
    const Mat2 rt = Mat2::rotation(e.orientation()).transpose();
    return LinearMap2(Mat2::diagonal(root / b, root / a) * rt);
}

DiskDistance disk_distance_bound(const Ellipse& e, double R) {
    if (!(R > 0.0)) throw Error("disk_distance_bound: R must be positive");
    if (e.semi_major() > R + 1e-12)
        throw NotContained("disk_distance_bound: semi-major axis " +
                           std::to_string(e.semi_major()) + " exceeds R = " +
                           std::to_string(R));
    DiskDistance out;
    out.bound = (std::numbers::pi * R * R - e.area()) / (std::numbers::pi * R);
    out.distance = R - e.semi_minor();
    return out;
}

double sigma_of_ellipse(const Ellipse& e) {
    return std::cbrt(e.area() / std::numbers::pi) *
           std::cbrt(e.area() / std::numbers::pi);
}

ConvexBody ellipse_to_body(const Ellipse& e, const AngularGrid& grid) {
    std::vector<double> values(grid.size());
    for (int j = 0; j < grid.size(); ++j) values[j] = e.support(grid.angle(j));
    return ConvexBody::from_samples(grid, std::move(values));
}

} // namespace affinelab
