#include "affinelab/functionals.hpp"

#include "affinelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace affinelab {

namespace {

void require_p(double p) {
    if (!(p >= 1.0))
        throw InvalidP("p must be >= 1, got " + std::to_string(p));
}

} // namespace

AffineProfile affine_support(const ConvexBody& body) {
    const auto& s = body.support();
    const auto& r = body.radius();
    const int n = body.samples();
    AffineProfile out;
    out.sigma.resize(n);
    out.arc_element.resize(n);
    for (int j = 0; j < n; ++j) {
        out.sigma[j] = s[j] * std::cbrt(r[j]);
        out.arc_element[j] = std::cbrt(r[j] * r[j]);
    }
    auto [lo, hi] = std::minmax_element(out.sigma.begin(), out.sigma.end());
    out.sigma_min = *lo;
    out.sigma_max = *hi;
    return out;
}

double omega_p(const ConvexBody& body, double p) {
    require_p(p);
    const auto& s = body.support();
    const auto& r = body.radius();
    const double er = 2.0 / (2.0 + p);
    const double es = -2.0 * (p - 1.0) / (2.0 + p);
    double acc = 0.0;
    for (int j = 0; j < body.samples(); ++j)
        acc += std::pow(r[j], er) * std::pow(s[j], es);
    return acc * body.grid().delta();
}

IsoperimetricSummary iso_ratio(const ConvexBody& body, double p) {
    require_p(p);
    IsoperimetricSummary out;
    out.p = p;
    out.omega_p = omega_p(body, p);
    out.area = body.area();
    out.ratio = std::pow(
        std::pow(out.omega_p, 2.0 + p) /
            (std::pow(2.0, 2.0 + p) * std::pow(out.area, 2.0 - p)),
        1.0 / p);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    out.deficit_epsilon = 1.0 - out.ratio / pi2;
    if (out.deficit_epsilon < -kQuadratureTol)
        throw DegenerateDeficit("iso_ratio: deficit " +
                                std::to_string(out.deficit_epsilon) +
                                " below -quadrature_tol");
    return out;
}

EntropyIntegral entropy_integral(const ConvexBody& body, double p) {
    require_p(p);
    const auto prof = affine_support(body);
    const TrigSeries sigma_series(prof.sigma);
    const auto sigma_prime = sigma_series.grid_derivative(1);

    const double exponent = -1.0 - 3.0 * p / (p + 2.0);
    EntropyIntegral out;
    out.exponent_a = (1.0 - p) / (p + 2.0);
    double acc = 0.0;
    for (int j = 0; j < body.samples(); ++j) {
        // sigma_s = sigma'/r^{2/3}, ds = r^{2/3} dtheta
        acc += std::pow(prof.sigma[j], exponent) * sigma_prime[j] *
               sigma_prime[j] / prof.arc_element[j];
    }
    out.value = acc * body.grid().delta();
    out.power_form = out.exponent_a * out.exponent_a * out.value;
    return out;
}

std::pair<double, double> sigma_window(const ConvexBody& body) {
    if (std::abs(body.area() - std::numbers::pi) > 1e-8)
        throw NotNormalized("sigma_window: body area " +
                            std::to_string(body.area()) + " is not pi");
    const auto prof = affine_support(body);
    if (prof.sigma_min > 1.0 + kQuadratureTol ||
        prof.sigma_max < 1.0 - kQuadratureTol)
        throw Error("sigma_window: window [" + std::to_string(prof.sigma_min) +
                    ", " + std::to_string(prof.sigma_max) +
                    "] fails to straddle 1");
    return {prof.sigma_min, prof.sigma_max};
}

} // namespace affinelab
