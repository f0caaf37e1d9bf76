#pragma once

#include "affinelab/body.hpp"

namespace affinelab::bodies {

ConvexBody disk(double radius, const AngularGrid& grid);

// Origin-centered ellipse with semi-axes a (along phi) and b.
ConvexBody ellipse_body(double a, double b, double phi, const AngularGrid& grid);

// s(theta) = 1 + a cos(2 k theta). Valid iff |a| (4k^2 - 1) < 1.
ConvexBody cosine_perturbed(double a, int k, const AngularGrid& grid);

// Boundary |x|^q + |y|^q = 1 with q >= 2; the support function is the dual
// norm, s(theta) = (|cos|^q' + |sin|^q')^{1/q'} with 1/q + 1/q' = 1.
ConvexBody superellipse(double q, const AngularGrid& grid);

} // namespace affinelab::bodies
