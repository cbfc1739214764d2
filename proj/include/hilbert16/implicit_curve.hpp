#pragma once

#include <string>
#include <vector>

#include "hilbert16/poly.hpp"

namespace hilbert16 {

enum class ComponentKind { Oval, LineType };

// One connected component of the zero set inside the window. Oval components
// carry a closed polyline (first point repeated at the end); line-type ones
// run from boundary to boundary.
struct CurveComponent {
    ComponentKind kind;
    std::vector<Vec2> polyline;
    bool touches_boundary;
};

struct DivCurveReport {
    std::vector<CurveComponent> components;
    int M;
    std::vector<Vec2> singular_points;
    bool generic;
    Box2 window;
    int grid;
    std::vector<std::string> warnings;
};

// Marching squares on a (grid+1)^2 lattice; saddle cells are disambiguated by
// one level of subdivision, then by center-value signs.
std::vector<CurveComponent> trace_zero_set(const BivariatePoly& p, const Box2& window, int grid);

// Points of the window where p = p_x = p_y = 0 (certified by the 2x2 solver).
// An empty result certifies the curve has no singular points in the window.
std::vector<Vec2> singular_points(const BivariatePoly& p, const Box2& window, double tol);

DivCurveReport div_curve_report(const PlanarSystem& sys, const Box2& window, int grid);

}  // namespace hilbert16
