#pragma once

#include <cmath>

#include "hilbert16/errors.hpp"

namespace hilbert16 {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Axis-aligned window in the plane.
struct Box2 {
    double x_lo, x_hi;
    double y_lo, y_hi;

    Box2(double xl, double xh, double yl, double yh) : x_lo(xl), x_hi(xh), y_lo(yl), y_hi(yh) {
        if (!(x_lo < x_hi) || !(y_lo < y_hi))
            throw Error(errc::usage, "Box2 requires x_lo < x_hi and y_lo < y_hi");
    }
    static Box2 square(double lo, double hi) { return Box2(lo, hi, lo, hi); }

    double width() const { return x_hi - x_lo; }
    double height() const { return y_hi - y_lo; }
    Vec2 mid() const { return {0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi)}; }
    bool contains(Vec2 p) const {
        return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
    }
};

}  // namespace hilbert16
