#include "affinelab/generators.hpp"

#include "affinelab/errors.hpp"

#include <cmath>
#include <string>

namespace affinelab::bodies {

ConvexBody disk(double radius, const AngularGrid& grid) {
    if (!(radius > 0.0)) throw Error("disk: radius must be positive");
    return ConvexBody::from_samples(grid,
                                    std::vector<double>(grid.size(), radius));
}

ConvexBody ellipse_body(double a, double b, double phi,
                        const AngularGrid& grid) {
    if (!(a > 0.0) || !(b > 0.0))
        throw Error("ellipse_body: semi-axes must be positive");
    std::vector<double> values(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double c = std::cos(grid.angle(j) - phi);
        const double s = std::sin(grid.angle(j) - phi);
        values[j] = std::sqrt(a * a * c * c + b * b * s * s);
    }
    return ConvexBody::from_samples(grid, std::move(values));
}

ConvexBody cosine_perturbed(double a, int k, const AngularGrid& grid) {
    if (k < 1) throw Error("cosine_perturbed: k must be >= 1");
    if (!(std::abs(a) * (4.0 * k * k - 1.0) < 1.0))
        throw NotStrictlyConvex("cosine_perturbed: |a|(4k^2-1) = " +
                                std::to_string(std::abs(a) * (4.0 * k * k - 1.0)) +
                                " >= 1");
    std::vector<double> values(grid.size());
    for (int j = 0; j < grid.size(); ++j)
        values[j] = 1.0 + a * std::cos(2.0 * k * grid.angle(j));
    return ConvexBody::from_samples(grid, std::move(values));
}

ConvexBody superellipse(double q, const AngularGrid& grid) {
    if (!(q >= 2.0)) throw Error("superellipse: q must be >= 2");
    const double qd = q / (q - 1.0);
    std::vector<double> values(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double c = std::abs(std::cos(grid.angle(j)));
        const double s = std::abs(std::sin(grid.angle(j)));
        values[j] = std::pow(std::pow(c, qd) + std::pow(s, qd), 1.0 / qd);
    }
    return ConvexBody::from_samples(grid, std::move(values));
}

} // namespace affinelab::bodies
