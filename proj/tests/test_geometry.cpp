#include "affinelab/body.hpp"

#include "affinelab/errors.hpp"
#include "affinelab/generators.hpp"
#include "doctest.h"
#include "oracle.hpp"
#include "oracle_values.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace affinelab;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexBody random_smooth_body(std::mt19937& rng, const AngularGrid& grid) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<double> s(grid.size());
    const double a2 = 0.08 * amp(rng), a4 = 0.02 * amp(rng),
                 a6 = 0.008 * amp(rng);
    for (int j = 0; j < grid.size(); ++j) {
        const double t = grid.angle(j);
        s[j] = 1.0 + a2 * std::cos(2 * t) + a4 * std::cos(4 * t) +
               a6 * std::sin(6 * t);
    }
    return ConvexBody::from_samples(grid, std::move(s));
}

} // namespace

TEST_CASE("constant support gives the disk") {
    const AngularGrid grid(256);
    const auto body = bodies::disk(1.0, grid);
    CHECK(body.area() == doctest::Approx(kPi).epsilon(1e-12));
    for (double r : body.radius()) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("antipodal averaging kills odd harmonics") {
    const AngularGrid grid(128);
    std::vector<double> s(grid.size());
    for (int j = 0; j < grid.size(); ++j)
        s[j] = 1.0 + 0.5 * std::cos(grid.angle(j));
    const auto body = ConvexBody::from_samples(grid, std::move(s));
    for (double v : body.support()) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("strong cos(2 theta) perturbation is rejected") {
    const AngularGrid grid(128);
    std::vector<double> s(grid.size());
    for (int j = 0; j < grid.size(); ++j)
        s[j] = 1.0 + 0.9 * std::cos(2.0 * grid.angle(j));  // r(0) = 1.9 - 3.6 < 0
    CHECK_THROWS_AS(ConvexBody::from_samples(grid, std::move(s)),
                    NotStrictlyConvex);
}

TEST_CASE("nonpositive support is rejected") {
    const AngularGrid grid(64);
    std::vector<double> s(grid.size(), 1.0);
    s[3] = -3.0;
    s[3 + 32] = -3.0;
    CHECK_THROWS_AS(ConvexBody::from_samples(grid, std::move(s)),
                    NonPositiveSupport);
}

TEST_CASE("origin symmetry is exact after construction") {
    std::mt19937 rng(11);
    const AngularGrid grid(256);
    for (int rep = 0; rep < 5; ++rep) {
        const auto body = random_smooth_body(rng, grid);
        for (int j = 0; j < 128; ++j)
            CHECK(body.support()[j] == body.support()[j + 128]);
        CHECK(body.min_radius() > 0.0);
    }
}

TEST_CASE("curvature radius of analytic families") {
    const AngularGrid grid(256);

    SUBCASE("disk of radius R") {
        const auto body = bodies::disk(2.5, grid);
        for (double r : body.radius()) CHECK(r == doctest::Approx(2.5).epsilon(1e-13));
    }
    SUBCASE("cosine perturbation r = 1 - 3a cos 2theta") {
        const auto body = bodies::cosine_perturbed(0.1, 1, grid);
        for (int j = 0; j < grid.size(); ++j) {
            const double expect = 1.0 - 0.3 * std::cos(2.0 * grid.angle(j));
            CHECK(body.radius()[j] == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    SUBCASE("ellipse vertex r = b^2/a") {
        const auto body = bodies::ellipse_body(2.0, 0.5, 0.0, grid);
        CHECK(body.radius()[0] == doctest::Approx(0.125).epsilon(1e-10));
    }
}

TEST_CASE("area of analytic families") {
    const AngularGrid grid(512);
    CHECK(bodies::disk(2.0, grid).area() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(bodies::ellipse_body(2.0, 0.5, 0.3, grid).area() ==
          doctest::Approx(kPi).epsilon(1e-10));

    // frozen value and runtime oracle for s = 1 + 0.1 cos 2theta
    const auto body = bodies::cosine_perturbed(0.1, 1, grid);
    CHECK(body.area() == doctest::Approx(oracle::kAreaCos_a0p1_k1).epsilon(1e-12));
    CHECK(body.area() ==
          doctest::Approx(oracle::area(oracle::cosine_body(0.1, 1))).epsilon(1e-12));
}

TEST_CASE("area scales quadratically") {
    std::mt19937 rng(3);
    const AngularGrid grid(256);
    const auto body = random_smooth_body(rng, grid);
    const auto bigger = scale(body, 3.7);
    CHECK(bigger.area() == doctest::Approx(3.7 * 3.7 * body.area()).epsilon(1e-10));
}

TEST_CASE("boundary points") {
    const AngularGrid grid(256);
    SUBCASE("disk") {
        const auto body = bodies::disk(1.0, grid);
        const Vec2 p = body.boundary_point(0.0);
        CHECK(p.x == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(p.y == doctest::Approx(0.0).epsilon(1e-13));
    }
    SUBCASE("ellipse major vertex") {
        const auto body = bodies::ellipse_body(2.0, 0.5, 0.0, grid);
        const Vec2 p = body.boundary_point(0.0);
        CHECK(p.x == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(p.y == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("defining identity <x(theta), u(theta)> = s(theta)") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
        const auto body = random_smooth_body(rng, grid);
        for (int rep = 0; rep < 50; ++rep) {
            const double t = ang(rng);
            const Vec2 p = body.boundary_point(t);
            CHECK(p.dot(unit_vector(t)) ==
                  doctest::Approx(body.support_at(t)).epsilon(1e-10));
        }
    }
}

TEST_CASE("hausdorff distance") {
    const AngularGrid grid(256);
    const auto d1 = bodies::disk(1.0, grid);
    const auto d2 = bodies::disk(2.0, grid);
    CHECK(hausdorff(d1, d2) == doctest::Approx(1.0));
    CHECK(hausdorff(d1, d1) == 0.0);

    const auto e = bodies::ellipse_body(1.0, 0.5, 0.0, grid);
    CHECK(hausdorff(e, d1) == doctest::Approx(0.5).epsilon(1e-12));

    SUBCASE("resampling between grids") {
        const auto coarse = bodies::disk(1.0, AngularGrid(128));
        CHECK(hausdorff(coarse, d2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_THROWS_AS(hausdorff(coarse, d2, false), GridMismatch);
    }
    SUBCASE("metric properties on random bodies") {
        std::mt19937 rng(17);
        for (int rep = 0; rep < 10; ++rep) {
            const auto a = random_smooth_body(rng, grid);
            const auto b = random_smooth_body(rng, grid);
            const auto c = random_smooth_body(rng, grid);
            CHECK(hausdorff(a, b) == hausdorff(b, a));
            CHECK(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-13);
        }
    }
}

TEST_CASE("apply_linear") {
    const AngularGrid grid(512);
    SUBCASE("rotation fixes the disk") {
        const auto body = bodies::disk(1.0, grid);
        const auto turned = apply_linear(body, LinearMap2::rotation(0.7));
        CHECK(hausdorff(body, turned) < 1e-12);
    }
    SUBCASE("diagonal map sends the disk to the ellipse") {
        const auto body = bodies::disk(1.0, grid);
        const auto image = apply_linear(body, LinearMap2::diagonal(2.0, 0.5));
        const auto expect = bodies::ellipse_body(2.0, 0.5, 0.0, grid);
        CHECK(hausdorff(image, expect) < 1e-10);
    }
    SUBCASE("area scales with |det T|") {
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const auto body = random_smooth_body(rng, grid);
        for (int rep = 0; rep < 5; ++rep) {
            const Mat2 m = Mat2::rotation(u(rng)) *
                           Mat2::diagonal(1.0 + 0.5 * u(rng), 1.0 + 0.5 * u(rng)) *
                           Mat2::rotation(u(rng));
            const LinearMap2 map(m);
            const auto image = apply_linear(body, map);
            CHECK(image.area() ==
                  doctest::Approx(std::abs(map.det()) * body.area()).epsilon(1e-9));
        }
    }
    SUBCASE("composition") {
        std::mt19937 rng(29);
        const auto body = random_smooth_body(rng, grid);
        const LinearMap2 t1(Mat2::rotation(0.4) * Mat2::diagonal(1.3, 0.8));
        const LinearMap2 t2(Mat2::rotation(-1.1) * Mat2::diagonal(0.9, 1.2));
        const auto two_steps = apply_linear(apply_linear(body, t1), t2);
        const auto one_step = apply_linear(body, t2.compose_after(t1));
        CHECK(hausdorff(two_steps, one_step) < 1e-8);
    }
}

TEST_CASE("generators") {
    const AngularGrid grid(256);
    SUBCASE("cosine_perturbed validity window") {
        const auto body = bodies::cosine_perturbed(0.05, 1, grid);
        CHECK(body.min_radius() == doctest::Approx(0.85).epsilon(1e-12));
        CHECK(body.max_radius() == doctest::Approx(1.15).epsilon(1e-12));
        CHECK_THROWS_AS(bodies::cosine_perturbed(0.4, 1, grid), NotStrictlyConvex);
    }
    SUBCASE("superellipse(2) is the disk") {
        CHECK(hausdorff(bodies::superellipse(2.0, grid), bodies::disk(1.0, grid)) < 1e-9);
    }
    SUBCASE("rotated circle is the disk") {
        CHECK(hausdorff(bodies::ellipse_body(1.0, 1.0, 1.2, grid),
                        bodies::disk(1.0, grid)) < 1e-12);
    }
    SUBCASE("superellipse support matches the boundary search oracle") {
        for (double q : {2.5, 3.0, 4.0}) {
            const auto body = bodies::superellipse(q, grid);
            for (int j = 0; j < grid.size(); j += 37) {
                const double t = grid.angle(j);
                CHECK(body.support_at(t) ==
                      doctest::Approx(oracle::superellipse_support_search(q, t))
                          .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("serialization round trip") {
    std::mt19937 rng(31);
    const auto body = random_smooth_body(rng, AngularGrid(128));
    std::stringstream ss;
    write_body(ss, body);
    const auto copy = read_body(ss);
    CHECK(copy.samples() == body.samples());
    CHECK(hausdorff(body, copy) < 1e-15);

    std::stringstream bad("m=12\n");
    CHECK_THROWS_AS(read_body(bad), Error);
}

TEST_CASE("grid refinement converges for the area") {
    double prev = 0.0;
    for (int n : {128, 256, 512, 1024}) {
        const auto body = bodies::ellipse_body(1.6, 0.7, 0.5, AngularGrid(n));
        const double a = body.area();
        CHECK(a == doctest::Approx(1.6 * 0.7 * kPi).epsilon(1e-8));
        if (prev != 0.0)
            CHECK(std::abs(a - 1.6 * 0.7 * kPi) <=
                  std::abs(prev - 1.6 * 0.7 * kPi) + 1e-12);
        prev = a;
    }
}
