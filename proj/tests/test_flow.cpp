#include "affinelab/flow.hpp"

#include "affinelab/errors.hpp"
#include "affinelab/generators.hpp"
#include "doctest.h"
#include "oracle_values.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace affinelab;

namespace {

constexpr double kPi = std::numbers::pi;

double circle_radius(double r0, double t) {
    return std::pow(std::pow(r0, 4.0 / 3.0) - 4.0 / 3.0 * t, 0.75);
}

} // namespace

TEST_CASE("single flow step") {
    const AngularGrid grid(128);
    SUBCASE("disk moves by the exact ODE up to O(dt^5)") {
        const auto before = bodies::disk(1.0, grid);
        const double dt = 1e-4;
        const auto after = flow_step({before, 0.0}, dt);
        const double expect = circle_radius(1.0, dt);
        for (double s : after.body.support())
            CHECK(std::abs(s - expect) < 1e-16 + std::pow(dt, 5));
    }
    SUBCASE("support decreases pointwise") {
        const auto before = bodies::cosine_perturbed(0.05, 2, grid);
        const auto after = flow_step({before, 0.0}, 1e-4);
        for (int j = 0; j < grid.size(); ++j)
            CHECK(after.body.support()[j] < before.support()[j]);
    }
    SUBCASE("rotational symmetry is preserved") {
        const auto after = flow_step({bodies::disk(2.0, grid), 0.0}, 1e-3);
        const double s0 = after.body.support()[0];
        for (double s : after.body.support()) CHECK(s == s0);
    }
    SUBCASE("too-large steps are rejected") {
        const auto body = bodies::cosine_perturbed(0.05, 2, grid);
        CHECK_THROWS_AS(flow_step({body, 0.0}, 0.5), StepRejected);
    }
}

TEST_CASE("circle law along evolve_to") {
    const StepController ctrl;
    SUBCASE("r0 = 1 to t = 0.3") {
        const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(128)), 0.0},
                                     0.3, ctrl, {}, 16);
        const double end = trace.snapshots.back().body.support()[0];
        CHECK(std::abs(end - oracle::kCircleRadiusT0p3) < 1e-10);
    }
    SUBCASE("max error below 1e-8 for several radii up to 90% extinction") {
        for (double r0 : {0.5, 1.0, 2.0}) {
            const double extinction = 0.75 * std::pow(r0, 4.0 / 3.0);
            const auto trace =
                evolve_to({bodies::disk(r0, AngularGrid(128)), 0.0},
                          0.9 * extinction, ctrl, {}, 32);
            double err = 0.0;
            for (const auto& st : trace.snapshots) {
                const double expect = circle_radius(r0, st.time);
                for (double s : st.body.support())
                    err = std::max(err, std::abs(s - expect));
            }
            CHECK(err < 1e-8);
        }
    }
    SUBCASE("B_{c1} shrinks to B_{c1/2} at eta") {
        const double c1 = std::pow(2.0, -0.5);
        const auto trace = evolve_to({bodies::disk(c1, AngularGrid(128)), 0.0},
                                     oracle::kEtaC1, ctrl, {}, 16);
        CHECK(std::abs(trace.snapshots.back().body.support()[0] - 0.5 * c1) <
              1e-6);
    }
    SUBCASE("symmetry stays exact along the flow") {
        const auto trace =
            evolve_to({bodies::cosine_perturbed(0.04, 1, AngularGrid(128)), 0.0},
                      0.2, ctrl, {}, 8);
        for (const auto& st : trace.snapshots)
            for (int j = 0; j < 64; ++j)
                CHECK(st.body.support()[j] == st.body.support()[j + 64]);
    }
}

TEST_CASE("horizon and extinction guards") {
    const StepController ctrl;
    const auto body = bodies::disk(1.0, AngularGrid(64));
    CHECK_THROWS_AS(evolve_to({body, 0.0}, 0.75, ctrl, {}, 8), HorizonExceeded);
    CHECK_THROWS_AS(evolve_to({body, 0.0}, 0.9, ctrl, {}, 8), HorizonExceeded);
}

TEST_CASE("area ODE check") {
    const StepController ctrl;
    SUBCASE("circle residual is tiny") {
        const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(128)), 0.0},
                                     0.1, ctrl, {}, 64);
        CHECK(check_area_ode(trace) < 1e-6);
    }
    SUBCASE("eccentric ellipse within the coarse budget") {
        const auto body = bodies::ellipse_body(1.4, 1.0 / 1.4, 0.3, AngularGrid(256));
        const auto trace = evolve_to({body, 0.0}, 0.1, ctrl, {}, 64);
        CHECK(check_area_ode(trace) < 1e-4);
    }
    SUBCASE("too few snapshots is an error") {
        const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(64)), 0.0},
                                     0.05, ctrl, {}, 2);
        CHECK_THROWS_AS(check_area_ode(trace), Error);
    }
}

TEST_CASE("containment principle") {
    const StepController ctrl;
    const AngularGrid grid(128);
    SUBCASE("nested disks, gap matches the closed form") {
        const auto inner =
            evolve_to({bodies::disk(0.8, grid), 0.0}, 0.2, ctrl, {}, 17);
        const auto outer =
            evolve_to({bodies::disk(1.0, grid), 0.0}, 0.2, ctrl, {}, 17);
        CHECK(check_containment(inner, outer));
        for (std::size_t i = 0; i < inner.snapshots.size(); ++i) {
            const double t = inner.snapshots[i].time;
            const double gap = circle_radius(1.0, t) - circle_radius(0.8, t);
            CHECK(inner.snapshots[i].body.support()[0] +gap ==
                  doctest::Approx(outer.snapshots[i].body.support()[0])
                      .epsilon(1e-9));
        }
    }
    SUBCASE("identical bodies remain nested with equality") {
        const auto a =
            evolve_to({bodies::cosine_perturbed(0.05, 2, grid), 0.0}, 0.1, ctrl,
                      {}, 9);
        const auto b =
            evolve_to({bodies::cosine_perturbed(0.05, 2, grid), 0.0}, 0.1, ctrl,
                      {}, 9);
        CHECK(check_containment(a, b));
    }
    SUBCASE("non-nested initial data is rejected") {
        const auto a =
            evolve_to({bodies::disk(1.0, grid), 0.0}, 0.05, ctrl, {}, 5);
        const auto b =
            evolve_to({bodies::disk(0.9, grid), 0.0}, 0.05, ctrl, {}, 5);
        CHECK_THROWS_AS(check_containment(a, b), NotNested);
    }
}

TEST_CASE("lower bound of the support drop") {
    const StepController ctrl;
    SUBCASE("circle against its closed form") {
        const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(128)), 0.0},
                                     0.2, ctrl, {}, 33);
        CHECK(check_lower_bound(trace, 1.0, 1.0) <= 1e-8);
    }
    SUBCASE("sandwich precondition is enforced") {
        const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(64)), 0.0},
                                     0.1, ctrl, {}, 5);
        CHECK_THROWS_AS(check_lower_bound(trace, 1.05, 1.1), BadSandwich);
    }
}

TEST_CASE("omega_p differential inequality") {
    const StepController ctrl;
    SUBCASE("both coefficient branches agree at p = 2") {
        CHECK(lemma61_coefficient(2.0) == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(2.0 * (2.0 - 1.0) * (4.0 * 4.0 + 3.0 * 2.0 + 2.0) / 64.0 == 0.75);
        CHECK(6.0 * 2.0 / 16.0 == 0.75);
        // continuity across the branch point
        CHECK(lemma61_coefficient(2.0 - 1e-9) ==
              doctest::Approx(lemma61_coefficient(2.0 + 1e-9)).epsilon(1e-7));
    }
    SUBCASE("circle: equality up to finite differencing") {
        const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(128)), 0.0},
                                     0.1, ctrl, {1.5, 2.0, 3.0}, 64);
        for (double p : {1.5, 2.0, 3.0})
            CHECK(std::abs(check_lemma61(trace, p)) < 1e-4);
    }
    SUBCASE("perturbed body keeps positive slack") {
        const auto body = bodies::cosine_perturbed(0.03, 2, AngularGrid(256));
        const auto trace = evolve_to({body, 0.0}, 0.1, ctrl, {3.0}, 64);
        CHECK(check_lemma61(trace, 3.0) > 0.0);
    }
}

TEST_CASE("monotone diagnostics along traces") {
    const StepController ctrl;
    const auto body = bodies::cosine_perturbed(0.05, 2, AngularGrid(256));
    const auto trace = evolve_to({body, 0.0}, 0.15, ctrl, {1.0, 2.0, 3.0}, 32);
    SUBCASE("area strictly decreases") {
        for (std::size_t i = 1; i < trace.diagnostics.size(); ++i)
            CHECK(trace.diagnostics[i].area < trace.diagnostics[i - 1].area);
    }
    SUBCASE("isoperimetric ratio is nondecreasing for p in {1, 2, 3}") {
        for (std::size_t pi = 0; pi < trace.p_list.size(); ++pi)
            for (std::size_t i = 1; i < trace.diagnostics.size(); ++i)
                CHECK(trace.diagnostics[i].ratio[pi] >=
                      trace.diagnostics[i - 1].ratio[pi] - 1e-6);
    }
}

TEST_CASE("step controller convergence order") {
    const AngularGrid grid(16);
    double prev_err = 0.0;
    for (double tol : {0.1, 0.05, 0.025}) {
        StepController ctrl;
        ctrl.max_rel_change = tol;
        ctrl.safety = 1.0;
        const auto trace =
            evolve_to({bodies::disk(1.0, grid), 0.0}, 0.4, ctrl, {}, 2);
        const double err = std::abs(trace.snapshots.back().body.support()[0] -
                                    circle_radius(1.0, 0.4));
        if (prev_err > 0.0) CHECK(prev_err / err >= 8.0);
        prev_err = err;
    }
}

TEST_CASE("trace export format") {
    const StepController ctrl;
    const auto trace = evolve_to({bodies::disk(1.0, AngularGrid(64)), 0.0}, 0.1,
                                 ctrl, {1.5, 2.0}, 4);
    std::stringstream ss;
    write_trace(ss, trace);
    std::string header;
    std::getline(ss, header);
    CHECK(header == "t,A,Omega_1,Omega_p_1.5,Omega_p_2,sigma_min,sigma_max,min_r");
    int rows = 0;
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);
}
