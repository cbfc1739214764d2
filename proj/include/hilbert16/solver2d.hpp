#pragma once

#include <vector>

#include "hilbert16/poly.hpp"

namespace hilbert16 {

// A certified simple-or-not root of a 2x2 polynomial system.
struct Root2 {
    Vec2 point;
    double radius;        // the true root lies within this distance of point
    bool simple;          // |jacobian det| above the scale-normalized threshold
    double jacobian_det;  // det of [[p_x, p_y], [q_x, q_y]] at point
};

struct Solve2dOptions {
    double min_width = 1e-10;       // boxes below this without certificate -> undecided
    double simplicity_tol = 1e-8;   // on det(J) / (|grad p| * |grad q|)
    double target_radius = 1e-9;    // keep contracting certified boxes to this
    int jobs = 1;                   // worker threads for box waves
    long long max_boxes = 4000000;  // safety valve on total processed boxes
    // Extra polynomials that must also vanish: boxes whose interval value
    // excludes zero for any of them are pruned, and accepted roots must
    // satisfy |r(point)| <= accept_tol for each r.
    std::vector<BivariatePoly> constraints;
    double constraint_accept_tol = 1e-8;
};

struct Solve2dResult {
    std::vector<Root2> roots;      // sorted by (x, y)
    std::vector<Box2> undecided;   // empty <=> census certified in the window
};

// Breadth-first interval subdivision with interval-Newton certification and
// point-Newton refinement to residual <= tol.
Solve2dResult solve_system_2d(const BivariatePoly& p, const BivariatePoly& q,
                              const Box2& window, double tol,
                              const Solve2dOptions& opts = {});

struct ContactReport {
    std::vector<Root2> points;
    int N;  // number of *simple* roots
    std::vector<Box2> undecided;
};

// Contact points of the field (P,Q) with the divergence curve: the simple
// solutions of { P(P_xx+Q_yx)+Q(P_xy+Q_yy) = 0, Div = 0 } inside the window.
ContactReport contact_points(const PlanarSystem& sys, const Box2& window, double tol,
                             const Solve2dOptions& opts = {});

}  // namespace hilbert16
