#include "commands.hpp"

#include "affinelab/errors.hpp"
#include "affinelab/flow.hpp"
#include "affinelab/functionals.hpp"
#include "affinelab/generators.hpp"
#include "affinelab/stability.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

namespace affinelab::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct CheckRunner {
    int failures = 0;

    void run(const std::string& name, const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[ok]   " : "[FAIL] ") << name
                  << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
        if (!ok) ++failures;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

ConvexBody mixed_body(std::mt19937& rng, const AngularGrid& grid) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int pick = static_cast<int>(u(rng) * 3.0);
    if (pick == 0) {
        const int k = 1 + static_cast<int>(u(rng) * 3.0);
        return bodies::cosine_perturbed(0.8 * u(rng) / (4.0 * k * k - 1.0), k,
                                        grid);
    }
    if (pick == 1) return bodies::superellipse(2.1 + 2.0 * u(rng), grid);
    const double r = 0.8 + 0.8 * u(rng);
    return bodies::ellipse_body(r, 1.0 / r, u(rng), grid);
}

ConvexBody to_area_pi(const ConvexBody& body) {
    return scale(body, std::sqrt(kPi / body.area()));
}

} // namespace

int cmd_selftest(const GlobalOptions&, const std::string& fault) {
    const AngularGrid grid(256);
    const double quadrature_fault = (fault == "quadrature") ? 1.001 : 1.0;
    if (!fault.empty() && fault != "quadrature")
        throw ConfigError("unknown fault name: '" + fault + "'");
    CheckRunner checks;
    std::mt19937 rng(12345);

    checks.run("symmetry: s_{j+n/2} == s_j exactly", [&](std::string&) {
        for (int rep = 0; rep < 8; ++rep) {
            const auto body = mixed_body(rng, grid);
            for (int j = 0; j < 128; ++j)
                if (body.support()[j] != body.support()[j + 128]) return false;
        }
        return true;
    });

    checks.run("convexity certificate: min r > 0 on validated bodies",
               [&](std::string& detail) {
                   double worst = 1e300;
                   for (int rep = 0; rep < 8; ++rep)
                       worst = std::min(worst, mixed_body(rng, grid).min_radius());
                   detail = "min r = " + num(worst);
                   return worst > 0.0;
               });

    checks.run("spectral second derivative vs finite differences", [&](std::string& detail) {
        const auto body = bodies::cosine_perturbed(0.02, 3, grid);
        const auto d2 = body.series().grid_derivative(2);
        const double h = grid.delta();
        double worst = 0.0;
        const auto& s = body.support();
        for (int j = 0; j < 256; ++j) {
            const double fd = (s[(j + 1) % 256] - 2.0 * s[j] + s[(j + 255) % 256]) / (h * h);
            worst = std::max(worst, std::abs(d2[j] - fd));
        }
        detail = "max diff = " + num(worst);
        return worst <= 0.02 * 1296.0 * h * h / 12.0 * 1.5 + 1e-10;
    });

    checks.run("area homogeneity under scaling", [&](std::string& detail) {
        const auto body = mixed_body(rng, grid);
        const double err = std::abs(scale(body, 2.3).area() - 2.3 * 2.3 * body.area()) /
                           (2.3 * 2.3 * body.area());
        detail = "rel err = " + num(err);
        return err <= 1e-10;
    });

    checks.run("hausdorff is a metric on sampled bodies", [&](std::string&) {
        for (int rep = 0; rep < 6; ++rep) {
            const auto a = mixed_body(rng, grid);
            const auto b = mixed_body(rng, grid);
            const auto c = mixed_body(rng, grid);
            if (hausdorff(a, a) != 0.0) return false;
            if (hausdorff(a, b) != hausdorff(b, a)) return false;
            if (hausdorff(a, c) > hausdorff(a, b) + hausdorff(b, c) + 1e-13)
                return false;
        }
        return true;
    });

    checks.run("apply_linear composition", [&](std::string& detail) {
        const auto body = mixed_body(rng, grid);
        const LinearMap2 t1(Mat2::rotation(0.6) * Mat2::diagonal(1.2, 0.9));
        const LinearMap2 t2(Mat2::rotation(-0.3) * Mat2::diagonal(0.8, 1.1));
        const double d = hausdorff(apply_linear(apply_linear(body, t1), t2),
                                   apply_linear(body, t2.compose_after(t1)));
        detail = "distance = " + num(d);
        return d <= 1e-8;
    });

    checks.run("p-affine isoperimetric inequality", [&](std::string&) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto body = mixed_body(rng, grid);
            for (double p : {1.0, 1.5, 2.0, 3.0, 5.0})
                if (iso_ratio(body, p).ratio > kPi * kPi * (1.0 + 1e-8))
                    return false;
        }
        return true;
    });

    checks.run("equality only for ellipses", [&](std::string& detail) {
        const double e1 = iso_ratio(bodies::ellipse_body(1.4, 0.7, 0.2, grid), 1.0)
                              .deficit_epsilon;
        const double e2 = iso_ratio(bodies::cosine_perturbed(0.02, 2, grid), 1.0)
                              .deficit_epsilon;
        detail = "ellipse deficit = " + num(e1) + ", perturbed = " + num(e2);
        return std::abs(e1) <= 1e-8 && e2 > 1e-3;
    });

    checks.run("ratio is nondecreasing in p", [&](std::string&) {
        for (int rep = 0; rep < 6; ++rep) {
            const auto body = mixed_body(rng, grid);
            double prev = 0.0;
            for (double p : {1.0, 1.5, 2.0, 3.0, 5.0, 10.0}) {
                const double r = iso_ratio(body, p).ratio;
                if (r < prev - 1e-9) return false;
                prev = r;
            }
        }
        return true;
    });

    checks.run("affine length equals Omega_1", [&](std::string& detail) {
        const auto body = mixed_body(rng, grid);
        const auto prof = affine_support(body);
        double len = 0.0;
        for (double e : prof.arc_element) len += e;
        len *= grid.delta();
        const double rel = std::abs(len - omega_p(body, 1.0)) / len;
        detail = "rel err = " + num(rel);
        return rel <= 1e-12;
    });

    checks.run("SL(2) invariance of omega_p", [&](std::string& detail) {
        const auto body = bodies::cosine_perturbed(0.04, 2, grid);
        const LinearMap2 map(Mat2::rotation(0.3) * Mat2::diagonal(1.4, 1.0 / 1.4) *
                             Mat2::rotation(1.1));
        double worst = 0.0;
        for (double p : {1.0, 2.0, 3.0}) {
            const double base = omega_p(body, p);
            worst = std::max(worst,
                             std::abs(omega_p(apply_linear(body, map), p) - base) / base);
        }
        detail = "rel err = " + num(worst);
        return worst <= 1e-7;
    });

    checks.run("grid convergence of omega_p", [&](std::string& detail) {
        const auto coarse = bodies::ellipse_body(1.5, 1.0 / 1.5, 0.4, AngularGrid(256));
        const auto fine = bodies::ellipse_body(1.5, 1.0 / 1.5, 0.4, AngularGrid(512));
        const double rel = std::abs(omega_p(coarse, 2.0) - omega_p(fine, 2.0)) /
                           omega_p(fine, 2.0);
        detail = "rel diff = " + num(rel);
        return rel <= 1e-10;
    });

    checks.run("john/lowner sandwich and duality", [&](std::string&) {
        for (int rep = 0; rep < 4; ++rep) {
            const auto body = to_area_pi(mixed_body(rng, grid));
            const auto inner = john_ellipse(body);
            const auto outer = lowner_ellipse(body);
            if (inner.area() > body.area() + 1e-8) return false;
            if (outer.area() < body.area() - 1e-8) return false;
            const auto [lo, hi] = sigma_window(body);
            if (inner.area() < kPi * std::pow(lo, 1.5) - 1e-6) return false;
            if (outer.area() > kPi * std::pow(hi, 1.5) + 1e-6) return false;
            for (int j = 0; j < grid.size(); ++j) {
                const double t = grid.angle(j);
                if (inner.support(t) > body.support()[j] + 1e-9) return false;
                if (body.support()[j] > std::sqrt(2.0) * inner.support(t) + 1e-8)
                    return false;
            }
        }
        return true;
    });

    checks.run("ellipse fit determinism", [&](std::string&) {
        const auto body = to_area_pi(bodies::cosine_perturbed(0.05, 2, grid));
        const auto a = john_ellipse(body), b = john_ellipse(body);
        return a.shape().a11 == b.shape().a11 && a.shape().a12 == b.shape().a12 &&
               a.shape().a22 == b.shape().a22;
    });

    const StepController ctrl;

    checks.run("area ODE dA/dt = -Omega_1", [&](std::string& detail) {
        const auto body = bodies::cosine_perturbed(0.03, 2, grid);
        auto trace = evolve_to({body, 0.0}, 0.1, ctrl, {}, 64);
        if (quadrature_fault != 1.0)
            for (auto& d : trace.diagnostics) d.omega_1 *= quadrature_fault;
        const double residual = check_area_ode(trace);
        detail = "max rel residual = " + num(residual);
        return residual <= 1e-4;
    });

    checks.run("circle law", [&](std::string& detail) {
        const auto trace =
            evolve_to({bodies::disk(1.0, grid), 0.0}, 0.4, ctrl, {}, 16);
        double worst = 0.0;
        for (const auto& st : trace.snapshots) {
            const double expect = std::pow(1.0 - 4.0 / 3.0 * st.time, 0.75);
            for (double s : st.body.support())
                worst = std::max(worst, std::abs(s - expect));
        }
        detail = "max err = " + num(worst);
        return worst <= 1e-8;
    });

    checks.run("isoperimetric ratio monotone along the flow", [&](std::string&) {
        const auto trace = evolve_to({bodies::cosine_perturbed(0.05, 2, grid), 0.0},
                                     0.15, ctrl, {1.0, 2.0, 3.0}, 24);
        for (std::size_t pi = 0; pi < trace.p_list.size(); ++pi)
            for (std::size_t i = 1; i < trace.diagnostics.size(); ++i)
                if (trace.diagnostics[i].ratio[pi] <
                    trace.diagnostics[i - 1].ratio[pi] - 1e-6)
                    return false;
        return true;
    });

    checks.run("symmetry preserved along the flow", [&](std::string&) {
        const auto trace = evolve_to({bodies::cosine_perturbed(0.02, 3, grid), 0.0},
                                     0.1, ctrl, {}, 8);
        for (const auto& st : trace.snapshots)
            for (int j = 0; j < 128; ++j)
                if (st.body.support()[j] != st.body.support()[j + 128])
                    return false;
        return true;
    });

    checks.run("containment principle", [&](std::string&) {
        const auto inner =
            evolve_to({bodies::cosine_perturbed(0.04, 2, grid), 0.0}, 0.15, ctrl, {}, 17);
        const auto outer =
            evolve_to({bodies::disk(1.2, grid), 0.0}, 0.15, ctrl, {}, 17);
        return check_containment(inner, outer);
    });

    checks.run("lower bound on the support drop", [&](std::string& detail) {
        const auto body = to_area_pi(bodies::cosine_perturbed(0.05, 2, grid));
        auto [moved, map] = john_position(body);
        const auto trace = evolve_to({moved, 0.0}, 0.2, ctrl, {}, 33);
        const double worst =
            check_lower_bound(trace, kJohnPositionC1, kJohnPositionC2);
        detail = "max violation = " + num(worst);
        return worst <= 1e-8;
    });

    checks.run("omega_p differential inequality", [&](std::string& detail) {
        const auto trace = evolve_to({bodies::cosine_perturbed(0.04, 2, grid), 0.0},
                                     0.1, ctrl, {1.5, 2.0, 3.0}, 64);
        double worst = 0.0;
        for (double p : {1.5, 2.0, 3.0})
            worst = std::min(worst, check_lemma61(trace, p));
        detail = "min rel slack = " + num(worst);
        return worst >= -1e-4;
    });

    checks.run("step controller is 4th order", [&](std::string& detail) {
        const AngularGrid tiny(16);
        double prev = 0.0, ratio = 1e9;
        for (double tol : {0.1, 0.05}) {
            StepController c;
            c.max_rel_change = tol;
            c.safety = 1.0;
            const auto trace = evolve_to({bodies::disk(1.0, tiny), 0.0}, 0.4, c, {}, 2);
            const double err = std::abs(trace.snapshots.back().body.support()[0] -
                                        std::pow(1.0 - 4.0 / 3.0 * 0.4, 0.75));
            if (prev > 0.0) ratio = prev / err;
            prev = err;
        }
        detail = "error ratio per halving = " + num(ratio);
        return ratio >= 8.0;
    });

    checks.run("stability constants", [&](std::string&) {
        const auto cst = stability_constants(2.0);
        if (std::abs(cst.d_p - 24.0) > 1e-12) return false;
        if (std::abs(cst.d_prime_p - kPi / std::sqrt(3.0)) > 1e-12) return false;
        if (cst.eps_binding_term != 3) return false;
        const auto lo = stability_constants(2.0 - 1e-9);
        const auto hi = stability_constants(2.0 + 1e-9);
        return std::abs(lo.d_p - hi.d_p) < 1e-6;
    });

    checks.run("theorem property at small deficit", [&](std::string& detail) {
        const auto rep = verify(bodies::cosine_perturbed(0.01, 2, grid), 2.0);
        detail = "eps = " + num(rep.epsilon) + ", d_H = " + num(rep.d_H_measured) +
                 ", bound = " + num(rep.bound_value);
        return rep.in_theorem_range && rep.pass && rep.sandwich_ok;
    });

    std::cout << (checks.failures == 0 ? "selftest: all checks passed\n"
                                       : "selftest: FAILURES: " +
                                             std::to_string(checks.failures) + "\n");
    return checks.failures == 0 ? 0 : 1;
}

} // namespace affinelab::cli
