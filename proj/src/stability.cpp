#include "affinelab/stability.hpp"

#include "affinelab/errors.hpp"
#include "affinelab/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>

namespace affinelab {

namespace {

constexpr double kPi = std::numbers::pi;

ConvexBody normalize_area(const ConvexBody& body) {
    return scale(body, std::sqrt(kPi / body.area()));
}

double minimized_objective(const SnapshotDiagnostics& d, std::size_t pi,
                           double p) {
    // (1/Omega_p) * (Omega_p^{2+p}/A^{2-p})^{1/p} * power-form entropy
    const double ratio_raw = d.ratio[pi] * std::pow(2.0, (2.0 + p) / p);
    return ratio_raw * d.entropy_power_form[pi] / d.omega_p[pi];
}

StabilityReport run_pipeline(const ConvexBody& input, double p,
                             double epsilon_override, bool reduced,
                             const VerifyConfig& config) {
    StabilityReport rep;
    rep.p = reduced ? 1.0 : p;
    rep.reduced_from_p1 = reduced;
    rep.constants = stability_constants(p);
    const StabilityConstants& cst = rep.constants;

    // (1) area normalization and John position
    const ConvexBody normalized = normalize_area(input);
    auto [khat, t0] = john_position(normalized);

    // (2) deficit
    const double deficit = reduced ? epsilon_override
                                   : iso_ratio(khat, p).deficit_epsilon;
    if (deficit < -kQuadratureTol)
        throw DegenerateDeficit("verify: deficit " + std::to_string(deficit));
    rep.epsilon = std::max(deficit, 0.0);
    rep.in_theorem_range = rep.epsilon > 0.0 && rep.epsilon < cst.eps_max;

    const AngularGrid& grid = khat.grid();

    if (rep.epsilon <= config.trivial_eps) {
        // equality case at working precision; the flow step would be noise
        rep.trivial_pass = true;
        const Ellipse e_in = john_ellipse(khat, config.fit);
        const Ellipse e_out = lowner_ellipse(khat, config.fit);
        rep.ellipse_in = e_in;
        rep.ellipse_out = e_out;
        const LinearMap2 tn = normalizing_transform(e_out);
        rep.map = tn.compose_after(t0);
        const ConvexBody tk = apply_linear(khat, tn);
        rep.disk_radius = std::sqrt(e_out.semi_minor() * e_out.semi_major());
        rep.sigma_min_tstar = affine_support(khat).sigma_min;
        rep.sigma_max_tstar = affine_support(khat).sigma_max;
        rep.d_H_measured =
            hausdorff(tk, ellipse_to_body(e_in.transformed(tn), grid));
        rep.bound_value = cst.C_p * std::pow(rep.epsilon, cst.hd_exponent);
        rep.sandwich_ok = true;
        rep.pass = true;
        return rep;
    }

    // (3) flow horizon delta = eps^{2/5}, clamped below 1/4, the Andrews
    // window (3/4) c1^{4/3} and the half-shrink time eta
    const double delta_raw = std::pow(rep.epsilon, cst.delta_exponent);
    const double delta_cap =
        0.999 * std::min({0.25, 0.75 * std::pow(cst.c1, 4.0 / 3.0), cst.eta});
    rep.delta = std::min(delta_raw, delta_cap);
    rep.delta_clamped = delta_raw > delta_cap;

    // (4) evolve
    const FlowTrace trace = evolve_to({khat, 0.0}, rep.delta, config.controller,
                                      {p}, config.snapshots);

    // the deficit budget spends Omega_1 Omega_p <= 4 pi^2 along the flow
    for (const auto& d : trace.diagnostics)
        if (d.omega_1 * d.omega_p[0] > 4.0 * kPi * kPi * (1.0 + kQuadratureTol))
            rep.omega_product_ok = false;

    // (5) earliest snapshot minimizing the integrand of the deficit budget
    std::size_t star = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < trace.diagnostics.size(); ++i) {
        const double q = minimized_objective(trace.diagnostics[i], 0, p);
        if (q < best) {  // strict: earliest snapshot wins ties
            best = q;
            star = i;
        }
    }
    rep.t_star = trace.snapshots[star].time;
    rep.t_star_objective = best;
    const ConvexBody& k_star = trace.snapshots[star].body;

    // (6) rescale to area pi
    rep.lambda = std::sqrt(kPi / k_star.area());
    const ConvexBody rescaled = scale(k_star, rep.lambda);

    // (7) sigma window of the rescaled body against the proof's bounds
    auto [sig_min, sig_max] = sigma_window(rescaled);
    rep.sigma_min_tstar = sig_min;
    rep.sigma_max_tstar = sig_max;
    const double x = cst.d_prime_p * std::pow(rep.epsilon, cst.hd_exponent);
    const double bound_exp = -(p + 2.0) / (p - 1.0);
    if (rep.in_theorem_range) {
        const double lo = std::pow(1.0 + x, bound_exp);
        const double hi = std::pow(1.0 - x, bound_exp);
        rep.sigma_bounds_ok = sig_min >= lo - kQuadratureTol &&
                              sig_max <= hi + kQuadratureTol;
    }

    // (8) realize the ellipse pair on the rescaled body, deflate to K_{t*}
    const Ellipse in_l = john_ellipse(rescaled, config.fit);
    const Ellipse out_l = lowner_ellipse(rescaled, config.fit);
    rep.area_relation_in_ok =
        in_l.area() >= kPi * std::pow(sig_min, 1.5) - 1e-6;
    rep.area_relation_out_ok =
        out_l.area() <= kPi * std::pow(sig_max, 1.5) + 1e-6;
    if (rep.in_theorem_range && x < 1.0) {
        const double area_exp = -1.5 * (p + 2.0) / (p - 1.0);
        rep.area_relation_in_ok =
            rep.area_relation_in_ok &&
            in_l.area() >= kPi * std::pow(1.0 + x, area_exp) - 1e-6;
        rep.area_relation_out_ok =
            rep.area_relation_out_ok &&
            out_l.area() <= kPi * std::pow(1.0 - x, area_exp) + 1e-6;
    }
    const Ellipse e_in = in_l.scaled(1.0 / rep.lambda);
    const Ellipse e_out = out_l.scaled(1.0 / rep.lambda);
    rep.ellipse_in = e_in;
    rep.ellipse_out = e_out;

    // (9) normalizing transform; the reported map includes the John position
    const LinearMap2 tn = normalizing_transform(e_out);
    rep.map = tn.compose_after(t0);

    // (10) sandwich E <= TK <= (1 + (4/3)^{3/4} (2 c2/c1^2) eps^{3/10}) D
    const ConvexBody tk = apply_linear(khat, tn);
    const Ellipse e_fin = e_in.transformed(tn);
    const Ellipse d_fin = e_out.transformed(tn);
    rep.disk_radius = std::sqrt(d_fin.semi_minor() * d_fin.semi_major());
    const double inflate =
        1.0 + cst.andrews_coefficient * std::pow(rep.epsilon, cst.hd_exponent);
    rep.sandwich_ok = true;
    for (int j = 0; j < grid.size(); ++j) {
        const double t = grid.angle(j);
        const double s = tk.support()[j];
        if (e_fin.support(t) > s + config.sandwich_tol ||
            s > inflate * d_fin.support(t) + config.sandwich_tol) {
            rep.sandwich_ok = false;
            break;
        }
    }

    // (11) measured distance against the better of the two ellipse witnesses
    const double dh_pipeline =
        hausdorff(tk, ellipse_to_body(e_fin, grid));
    const double dh_john =
        hausdorff(tk, ellipse_to_body(john_ellipse(tk, config.fit), grid));
    rep.d_H_measured = std::min(dh_pipeline, dh_john);
    rep.bound_value = cst.C_p * std::pow(rep.epsilon, cst.hd_exponent);
    rep.pass = rep.d_H_measured < rep.bound_value;
    return rep;
}

} // namespace

StabilityConstants stability_constants(double p, double c1, double c2) {
    if (!(p > 1.0))
        throw InvalidP("stability_constants: p must exceed 1, got " +
                       std::to_string(p));
    if (!(c1 > 0.0) || !(c2 >= c1))
        throw Error("stability_constants: need 0 < c1 <= c2");
    StabilityConstants cst;
    cst.p = p;
    cst.c1 = c1;
    cst.c2 = c2;
    cst.d_p = (p <= 2.0)
                  ? 2.0 * (4.0 * p * p + 3.0 * p + 2.0) / (p * (p - 1.0))
                  : 6.0 * (p + 2.0) / ((p - 1.0) * (p - 1.0));
    cst.d_prime_p = 2.0 * std::sqrt(2.0) * kPi / std::sqrt(cst.d_p);
    cst.andrews_coefficient = std::pow(4.0 / 3.0, 0.75) * 2.0 * c2 / (c1 * c1);
    cst.C_p = 3.0 * (1.0 + cst.andrews_coefficient +
                     1.5 * (p + 2.0) / (p - 1.0) * cst.d_prime_p);
    cst.eta = 0.75 * std::pow(c1, 4.0 / 3.0) *
              (1.0 - std::pow(0.5, 4.0 / 3.0));
    const double b = cst.beta;
    const double terms[3] = {
        std::pow(0.25, (1.0 + b) / b),
        std::pow(1.0 / cst.d_prime_p, 2.0 + b),
        std::pow(0.75 * std::pow(c1, 4.0 / 3.0) *
                     (1.0 - std::pow(0.5, 4.0 / 3.0)),
                 (2.0 + b) / b)};
    cst.eps_max = terms[0];
    cst.eps_binding_term = 1;
    for (int i = 1; i < 3; ++i) {
        if (terms[i] < cst.eps_max) {
            cst.eps_max = terms[i];
            cst.eps_binding_term = i + 1;
        }
    }
    return cst;
}

std::pair<double, int> epsilon_admissibility(double p, double c1, double c2) {
    const auto cst = stability_constants(p, c1, c2);
    return {cst.eps_max, cst.eps_binding_term};
}

std::pair<ConvexBody, LinearMap2> john_position(const ConvexBody& body) {
    if (std::abs(body.area() - kPi) > 1e-8)
        throw NotNormalized("john_position: body area " +
                            std::to_string(body.area()) + " is not pi");
    const LinearMap2 t0 = normalizing_transform(john_ellipse(body));
    ConvexBody moved = normalize_area(apply_linear(body, t0));
    if (moved.min_support() < kJohnPositionC1 - 1e-6 ||
        moved.max_support() > kJohnPositionC2 + 1e-6)
        throw SolverFailure(
            "john_position: support bounds [" +
            std::to_string(moved.min_support()) + ", " +
            std::to_string(moved.max_support()) +
            "] missed [2^{-1/2}, sqrt(2)]; grid is under-resolved");
    return {std::move(moved), t0};
}

StabilityReport verify(const ConvexBody& body, double p,
                       const VerifyConfig& config) {
    if (!(p > 1.0))
        throw InvalidP("verify: p must exceed 1; use reduce_p1 for p = 1");
    return run_pipeline(body, p, 0.0, false, config);
}

StabilityReport reduce_p1(const ConvexBody& body, const VerifyConfig& config) {
    const ConvexBody normalized = scale(body, std::sqrt(kPi / body.area()));
    const double ratio1 = iso_ratio(normalized, 1.0).ratio;
    const double ratio2 = iso_ratio(normalized, 2.0).ratio;
    if (ratio2 < ratio1 - 1e-8)
        throw MonotonicityViolated(
            "reduce_p1: ratio(p=2) = " + std::to_string(ratio2) +
            " below ratio(p=1) = " + std::to_string(ratio1));
    const double eps1 = 1.0 - ratio1 / (kPi * kPi);
    return run_pipeline(body, 2.0, eps1, true, config);
}

void write_report(std::ostream& os, const StabilityReport& r) {
    char buf[128];
    auto put = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%s=%.12e\n", key, v);
        os << buf;
    };
    auto put_flag = [&](const char* key, bool v) {
        os << key << "=" << (v ? "true" : "false") << "\n";
    };
    put("p", r.p);
    put_flag("reduced_from_p1", r.reduced_from_p1);
    put("epsilon", r.epsilon);
    put("eps_max", r.constants.eps_max);
    os << "eps_binding_term=" << r.constants.eps_binding_term << "\n";
    put_flag("in_theorem_range", r.in_theorem_range);
    put_flag("trivial_pass", r.trivial_pass);
    put("delta", r.delta);
    put_flag("delta_clamped", r.delta_clamped);
    put("t_star", r.t_star);
    put("t_star_objective", r.t_star_objective);
    put("lambda", r.lambda);
    put("sigma_min_tstar", r.sigma_min_tstar);
    put("sigma_max_tstar", r.sigma_max_tstar);
    put_flag("sigma_bounds_ok", r.sigma_bounds_ok);
    put_flag("omega_product_ok", r.omega_product_ok);
    if (r.ellipse_in) {
        put("area_ellipse_in", r.ellipse_in->area());
        put("area_ellipse_out", r.ellipse_out->area());
    }
    put_flag("area_relation_in_ok", r.area_relation_in_ok);
    put_flag("area_relation_out_ok", r.area_relation_out_ok);
    if (r.map) {
        const Mat2& m = r.map->matrix();
        std::snprintf(buf, sizeof(buf), "T=%.12e %.12e %.12e %.12e\n", m.a11,
                      m.a12, m.a21, m.a22);
        os << buf;
        put("T_det", r.map->det());
    }
    put("disk_radius", r.disk_radius);
    put_flag("sandwich_ok", r.sandwich_ok);
    put("d_H_measured", r.d_H_measured);
    put("bound_value", r.bound_value);
    put("C_p", r.constants.C_p);
    put_flag("pass", r.pass);
    if (r.reduced_from_p1) os << "note=C_1 equals C_2\n";
}

} // namespace affinelab
