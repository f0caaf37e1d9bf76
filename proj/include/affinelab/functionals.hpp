#pragma once

#include "affinelab/body.hpp"

#include <utility>
#include <vector>

namespace affinelab {

// Shared relative tolerance for the inequality assertions backed by
// quadrature (isoperimetric deficit sign, sigma window straddle, ...).
inline constexpr double kQuadratureTol = 1e-8;

// Affine support function sigma = s r^{1/3} and the affine arc-length
// element d(frak s)/d(theta) = r^{2/3}, sampled on the body's grid.
struct AffineProfile {
    std::vector<double> sigma;
    std::vector<double> arc_element;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
};

AffineProfile affine_support(const ConvexBody& body);

// p-affine surface area, p >= 1:
//   Omega_p = Int r^{2/(2+p)} s^{-2(p-1)/(2+p)} dtheta.
double omega_p(const ConvexBody& body, double p);

struct IsoperimetricSummary {
    double p = 0.0;
    double omega_p = 0.0;
    double area = 0.0;
    double ratio = 0.0;             // (Omega_p^{2+p} / (2^{2+p} A^{2-p}))^{1/p}
    double deficit_epsilon = 0.0;   // 1 - ratio/pi^2
};

// Throws DegenerateDeficit if the computed deficit is below -kQuadratureTol.
IsoperimetricSummary iso_ratio(const ConvexBody& body, double p);

struct EntropyIntegral {
    double value = 0.0;        // Int sigma^{-1-3p/(p+2)} (sigma_s)^2 ds
    double power_form = 0.0;   // Int ((sigma^a)_s)^2 ds,  a = (1-p)/(p+2)
    double exponent_a = 0.0;   // power_form = a^2 * value
};

EntropyIntegral entropy_integral(const ConvexBody& body, double p);

// For a body of area pi (|A - pi| <= 1e-8): returns (min sigma, max sigma),
// which must straddle 1 up to kQuadratureTol.
std::pair<double, double> sigma_window(const ConvexBody& body);

} // namespace affinelab
