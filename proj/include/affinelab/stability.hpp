#pragma once

#include "affinelab/body.hpp"
#include "affinelab/ellipse.hpp"
#include "affinelab/flow.hpp"

#include <iosfwd>
#include <optional>

namespace affinelab {

// Constants of the stability estimate, beta = 4/3 throughout:
//   d_p   = 2(4p^2+3p+2)/(p(p-1))   for 1 < p <= 2,
//         = 6(p+2)/(p-1)^2          for p >= 2           (both 24 at p = 2)
//   d'_p  = 2 sqrt(2) pi / sqrt(d_p)
//   C_p   = 3 (1 + (4/3)^{3/4} 2 c2/c1^2 + (3(p+2)/(2(p-1))) d'_p)
//   eps_max = min{ (1/4)^{(1+beta)/beta}, (1/d'_p)^{2+beta},
//                  ((3/4) c1^{4/3} (1 - (1/2)^{4/3}))^{(2+beta)/beta} }
struct StabilityConstants {
    double p = 0.0;
    double beta = 4.0 / 3.0;
    double c1 = 0.0, c2 = 0.0;
    double d_p = 0.0;
    double d_prime_p = 0.0;
    double C_p = 0.0;
    double eps_max = 0.0;
    int eps_binding_term = 0;  // 1-based index of the binding minimum term
    double delta_exponent = 0.4;    // beta/(2+beta)
    double hd_exponent = 0.3;       // 3 beta / (4(2+beta)) = 1/(2+beta)
    double eta = 0.0;               // shrink time of B_{c1} to B_{c1/2}
    double andrews_coefficient = 0.0;  // (4/3)^{3/4} 2 c2 / c1^2
};

inline constexpr double kJohnPositionC1 = 0.70710678118654752;  // 2^{-1/2}
inline constexpr double kJohnPositionC2 = 1.41421356237309505;  // sqrt(2)

StabilityConstants stability_constants(double p, double c1 = kJohnPositionC1,
                                       double c2 = kJohnPositionC2);

// eps_max together with the 1-based index of the binding term.
std::pair<double, int> epsilon_admissibility(double p,
                                             double c1 = kJohnPositionC1,
                                             double c2 = kJohnPositionC2);

// Area-pi body mapped by the SL(2) transform that turns its maximal
// inscribed ellipse into a disk; guarantees 2^{-1/2} <= s <= sqrt(2) up to
// grid tolerance. Returns the repositioned body and the map.
std::pair<ConvexBody, LinearMap2> john_position(const ConvexBody& body);

struct VerifyConfig {
    StepController controller;
    int snapshots = 64;
    double trivial_eps = 1e-14;
    double sandwich_tol = 1e-8;
    FitOptions fit;
};

struct StabilityReport {
    double p = 0.0;
    bool reduced_from_p1 = false;
    StabilityConstants constants;

    double epsilon = 0.0;
    bool in_theorem_range = false;
    bool trivial_pass = false;

    double delta = 0.0;
    bool delta_clamped = false;
    double t_star = 0.0;
    double t_star_objective = 0.0;
    double lambda = 1.0;

    double sigma_min_tstar = 0.0;  // of the rescaled area-pi body
    double sigma_max_tstar = 0.0;
    bool sigma_bounds_ok = true;   // window inside the proof's (1 -+ x) bounds
    bool omega_product_ok = true;  // Omega_1 Omega_p <= 4 pi^2 along the trace

    std::optional<Ellipse> ellipse_in;   // inscribed in K_{t*}
    std::optional<Ellipse> ellipse_out;  // circumscribing K_{t*}
    bool area_relation_in_ok = true;
    bool area_relation_out_ok = true;

    std::optional<LinearMap2> map;  // normalizing transform o John position
    double disk_radius = 0.0;
    bool sandwich_ok = false;

    double d_H_measured = 0.0;
    double bound_value = 0.0;
    bool pass = false;
};

// Full pipeline for p > 1: normalize area, John-position, measure the
// deficit, flow to delta = eps^{2/5}, locate t*, rescale, fit the ellipse
// pair, build the normalizing map and compare d_H(TK, E) with C_p eps^{3/10}.
StabilityReport verify(const ConvexBody& body, double p,
                       const VerifyConfig& config = {});

// p = 1 route: measures the p = 1 deficit, checks ratio monotonicity
// against p = 2, and runs the p = 2 pipeline with the p = 1 deficit.
StabilityReport reduce_p1(const ConvexBody& body,
                          const VerifyConfig& config = {});

// Flat key=value block.
void write_report(std::ostream& os, const StabilityReport& report);

} // namespace affinelab
