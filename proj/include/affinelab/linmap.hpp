#pragma once

#include "affinelab/errors.hpp"

#include <cmath>

namespace affinelab {

struct Vec2 {
    double x = 0.0, y = 0.0;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
};

inline Vec2 unit_vector(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Row-major 2x2 matrix.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

    static Mat2 identity() { return {}; }
    static Mat2 diagonal(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
    static Mat2 rotation(double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        return {c, -s, s, c};
    }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    Mat2 inverse() const {
        const double d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
};

// Invertible linear map of the plane. The SL(2) flag uses |det - 1| <= 1e-12.
class LinearMap2 {
public:
    explicit LinearMap2(const Mat2& m) : m_(m), det_(m.det()) {
        if (det_ == 0.0 || !std::isfinite(det_))
            throw Error("LinearMap2: matrix is singular");
    }

    static LinearMap2 identity() { return LinearMap2(Mat2::identity()); }
    static LinearMap2 rotation(double phi) { return LinearMap2(Mat2::rotation(phi)); }
    static LinearMap2 diagonal(double d1, double d2) {
        return LinearMap2(Mat2::diagonal(d1, d2));
    }

    const Mat2& matrix() const { return m_; }
    double det() const { return det_; }
    bool is_special_linear() const { return std::abs(det_ - 1.0) <= 1e-12; }

    LinearMap2 inverse() const { return LinearMap2(m_.inverse()); }
    LinearMap2 compose_after(const LinearMap2& first) const {
        return LinearMap2(m_ * first.m_);  // this'(first(x))
    }
    Vec2 operator()(const Vec2& v) const { return m_ * v; }

private:
    Mat2 m_;
    double det_;
};

} // namespace affinelab
