#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace hilbert16 {

// Closed interval [lo, hi]. Every arithmetic result is widened outward by a
// relative epsilon plus smallest-normal padding, a portable substitute for
// directed rounding modes.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double v) : lo(v), hi(v) {}
    Interval(double l, double h) : lo(l), hi(h) {}

    static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    double rad() const { return 0.5 * (hi - lo); }
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
    // strict inclusion in the interior of o
    bool inside(const Interval& o) const { return o.lo < lo && hi < o.hi; }
};

inline double pad_down(double x, double scale = 2.0) {
    return x - (std::abs(x) * (scale * DBL_EPSILON) + DBL_MIN);
}
inline double pad_up(double x, double scale = 2.0) {
    return x + (std::abs(x) * (scale * DBL_EPSILON) + DBL_MIN);
}
inline Interval inflate(Interval r, double scale = 2.0) {
    return {pad_down(r.lo, scale), pad_up(r.hi, scale)};
}

inline Interval operator+(Interval a, Interval b) { return inflate({a.lo + b.lo, a.hi + b.hi}); }
inline Interval operator-(Interval a, Interval b) { return inflate({a.lo - b.hi, a.hi - b.lo}); }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return inflate({std::min(std::min(p1, p2), std::min(p3, p4)),
                    std::max(std::max(p1, p2), std::max(p3, p4))});
}

inline Interval operator*(double s, Interval a) {
    return s >= 0.0 ? inflate({s * a.lo, s * a.hi}) : inflate({s * a.hi, s * a.lo});
}

// Division; caller must ensure 0 is not in b.
inline Interval operator/(Interval a, Interval b) {
    const double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    return inflate({std::min(std::min(p1, p2), std::min(p3, p4)),
                    std::max(std::max(p1, p2), std::max(p3, p4))});
}

inline Interval intersect(Interval a, Interval b) {
    return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};  // may be empty (lo > hi)
}
inline bool empty(Interval a) { return a.lo > a.hi; }

// x^n over an interval, n >= 0, using monotonicity / evenness.
inline Interval pow_int(Interval a, int n) {
    if (n == 0) return Interval(1.0);
    if (n == 1) return a;
    auto endpoint = [n](double v) { return std::pow(v, n); };
    const double widen = 2.0 * n;
    if (n % 2 == 1 || a.lo >= 0.0)
        return inflate({endpoint(a.lo), endpoint(a.hi)}, widen);
    if (a.hi <= 0.0)
        return inflate({endpoint(a.hi), endpoint(a.lo)}, widen);
    return inflate({0.0, endpoint(a.mag())}, widen);
}

}  // namespace hilbert16
