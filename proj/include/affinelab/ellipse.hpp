#pragma once

#include "affinelab/body.hpp"
#include "affinelab/linmap.hpp"

namespace affinelab {

// Origin-centered ellipse, stored as the symmetric positive-definite shape
// matrix M with support function s_E(u) = sqrt(u^T M u). Semi-axes are the
// square roots of the eigenvalues of M; the orientation is the major-axis
// angle, canonicalized to the eigenvector with nonnegative first component
// (nonnegative second on ties).
class Ellipse {
public:
    static Ellipse from_shape(const Mat2& shape);
    // Semi-axis a along direction phi, semi-axis b perpendicular to it.
    static Ellipse from_axes(double a, double b, double phi = 0.0);

    const Mat2& shape() const { return shape_; }
    double semi_minor() const { return minor_; }
    double semi_major() const { return major_; }
    double orientation() const { return angle_; }
    double area() const;
    double support(double theta) const;

    Ellipse scaled(double factor) const;
    Ellipse transformed(const LinearMap2& map) const;  // shape -> T M T^t

private:
    explicit Ellipse(const Mat2& shape);
    Mat2 shape_;
    double minor_ = 0.0, major_ = 0.0, angle_ = 0.0;
};

struct FitOptions {
    double gap_tol = 1e-10;
    long max_iterations = 100000;
};

// Maximal-area origin-centered ellipse with s_E <= s_K at every grid angle.
Ellipse john_ellipse(const ConvexBody& body, const FitOptions& opts = {});

// Minimal-area origin-centered ellipse containing every sampled boundary
// point (Khachiyan-style multiplicative updates on the half grid).
Ellipse lowner_ellipse(const ConvexBody& body, const FitOptions& opts = {});

// T in SL(2) mapping the ellipse to the disk of radius sqrt(a b).
LinearMap2 normalizing_transform(const Ellipse& e);

struct DiskDistance {
    double bound = 0.0;     // (A(B_R) - A(E)) / (pi sqrt(A(B_R)/pi))
    double distance = 0.0;  // exact d_H(E, B_R) = R - semi_minor
};

// Requires E inside B_R (semi_major <= R + 1e-12), else NotContained.
DiskDistance disk_distance_bound(const Ellipse& e, double R);

// Constant affine support function of the ellipse: (area/pi)^{2/3}.
double sigma_of_ellipse(const Ellipse& e);

ConvexBody ellipse_to_body(const Ellipse& e, const AngularGrid& grid);

} // namespace affinelab
