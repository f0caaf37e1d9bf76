#include "affinelab/ellipse.hpp"

#include "affinelab/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace affinelab {

namespace {

// Both fits are instances of one 3-variable convex program over the
// symmetric matrix Q = [[q0, q1], [q1, q2]]:
//
//   maximize log det Q   subject to   v_i . q <= 1,
//
// where the v_i encode x_i^T Q x_i for the constraint points. Solved by a
// log-barrier path-following method with damped Newton steps; the problem
// is strictly convex in q, so the degenerate-dual cases (all constraints
// active, e.g. exact ellipse data) cause no trouble. The interior start is
// a shrunk multiple of the identity; every iterate is strictly feasible,
// which keeps the containment side of the contract exact.
struct Objective {
    const std::vector<std::array<double, 3>>& v;
    double t;  // barrier parameter

    double eval(const std::array<double, 3>& q) const {
        const double det = q[0] * q[2] - q[1] * q[1];
        if (!(det > 0.0) || !(q[0] > 0.0)) return std::numeric_limits<double>::infinity();
        double f = -t * std::log(det);
        for (const auto& vi : v) {
            const double r = 1.0 - vi[0] * q[0] - vi[1] * q[1] - vi[2] * q[2];
            if (!(r > 0.0)) return std::numeric_limits<double>::infinity();
            f -= std::log(r);
        }
        return f;
    }

    void derivatives(const std::array<double, 3>& q, std::array<double, 3>& grad,
                     std::array<std::array<double, 3>, 3>& hess) const {
        const double det = q[0] * q[2] - q[1] * q[1];
        const double g0 = q[2], g1 = -2.0 * q[1], g2 = q[0];  // grad of det
        grad = {-t * g0 / det, -t * g1 / det, -t * g2 / det};
        const double d2 = det * det;
        hess = {{{t * g0 * g0 / d2, t * g0 * g1 / d2, t * g0 * g2 / d2 - t / det},
                 {t * g1 * g0 / d2, t * g1 * g1 / d2 + 2.0 * t / det, t * g1 * g2 / d2},
                 {t * g2 * g0 / d2 - t / det, t * g2 * g1 / d2, t * g2 * g2 / d2}}};
        for (const auto& vi : v) {
            const double r = 1.0 - vi[0] * q[0] - vi[1] * q[1] - vi[2] * q[2];
            for (int i = 0; i < 3; ++i) {
                grad[i] += vi[i] / r;
                for (int j = 0; j < 3; ++j) hess[i][j] += vi[i] * vi[j] / (r * r);
            }
        }
    }
};

std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a,
                             std::array<double, 3> b) {
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int row = col + 1; row < 3; ++row)
            if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0) throw SolverFailure("ellipse fit: singular Newton system");
        for (int row = col + 1; row < 3; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < 3; ++k) a[row][k] -= f * a[col][k];
            b[row] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int row = 2; row >= 0; --row) {
        double acc = b[row];
        for (int k = row + 1; k < 3; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

Mat2 max_logdet_shape(const std::vector<Vec2>& pts, double start_scale,
                      const FitOptions& opts, const char* who) {
    const std::size_t m = pts.size();
    std::vector<std::array<double, 3>> v(m);
    for (std::size_t i = 0; i < m; ++i)
        v[i] = {pts[i].x * pts[i].x, 2.0 * pts[i].x * pts[i].y,
                pts[i].y * pts[i].y};

    std::array<double, 3> q = {0.999 * start_scale, 0.0, 0.999 * start_scale};
    long used = 0;
    double t = 1.0;
    const double t_final = static_cast<double>(m) / opts.gap_tol;
    for (;;) {
        Objective obj{v, t};
        for (int inner = 0; inner < 50; ++inner) {
            if (++used > opts.max_iterations)
                throw SolverFailure(std::string(who) +
                                    ": Newton budget exhausted at t = " +
                                    std::to_string(t));
            std::array<double, 3> grad;
            std::array<std::array<double, 3>, 3> hess;
            obj.derivatives(q, grad, hess);
            const auto step = solve3(hess, {-grad[0], -grad[1], -grad[2]});
            const double decrement2 =
                -(grad[0] * step[0] + grad[1] * step[1] + grad[2] * step[2]);
            if (decrement2 <= 1e-13 * (1.0 + std::abs(t))) break;
            const double f0 = obj.eval(q);
            double alpha = 1.0;
            std::array<double, 3> trial;
            for (;;) {
                trial = {q[0] + alpha * step[0], q[1] + alpha * step[1],
                         q[2] + alpha * step[2]};
                if (obj.eval(trial) <= f0 - 0.25 * alpha * decrement2) break;
                alpha *= 0.5;
                if (alpha < 1e-18)
                    throw SolverFailure(std::string(who) +
                                        ": line search failed");
            }
            q = trial;
        }
        if (t >= t_final) break;
        t = std::min(t * 20.0, t_final);
    }
    return Mat2{q[0], q[1], q[1], q[2]};
}

} // namespace

Ellipse john_ellipse(const ConvexBody& body, const FitOptions& opts) {
    // Support dominance u^T M u <= s(theta)^2 at the grid angles, i.e. the
    // same program on the scaled normals u/s; the optimizer is the shape
    // matrix directly. Antipodal samples give identical constraints, so the
    // half grid suffices.
    const int half = body.samples() / 2;
    std::vector<Vec2> pts(half);
    double smin = body.min_support();
    for (int j = 0; j < half; ++j)
        pts[j] = unit_vector(body.grid().angle(j)) * (1.0 / body.support()[j]);
    const Mat2 shape =
        max_logdet_shape(pts, smin * smin, opts, "john_ellipse");
    return Ellipse::from_shape(shape);
}

Ellipse lowner_ellipse(const ConvexBody& body, const FitOptions& opts) {
    const int half = body.samples() / 2;
    std::vector<Vec2> pts(half);
    double rmax = 0.0;
    for (int j = 0; j < half; ++j) {
        pts[j] = body.boundary_point(body.grid().angle(j));
        rmax = std::max(rmax, pts[j].dot(pts[j]));
    }
    const Mat2 q = max_logdet_shape(pts, 1.0 / rmax, opts, "lowner_ellipse");
    return Ellipse::from_shape(q.inverse());
}

} // namespace affinelab
