#include "hilbert16/implicit_curve.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>

#include "hilbert16/solver2d.hpp"

namespace hilbert16 {

namespace {

// Lattice edge ids: horizontal edge from (r,c) to (r,c+1) and vertical edge
// from (r,c) to (r+1,c).
std::int64_t h_edge(int r, int c, int g1) { return (std::int64_t(r) * g1 + c) * 2; }
std::int64_t v_edge(int r, int c, int g1) { return (std::int64_t(r) * g1 + c) * 2 + 1; }

bool sgn(double v) { return v >= 0.0; }  // zero counts as positive

double interp(double a, double b) { return a / (a - b); }  // crossing parameter on [0,1]

struct Segment {
    std::int64_t ea, eb;
};

// Local marching squares on one square given its corner values; still-
// ambiguous squares are resolved by the sign of `center`. Edges are labeled
// 0 = bottom, 1 = right, 2 = top, 3 = left.
std::vector<std::array<int, 2>> square_segments(double bl, double br, double tr, double tl,
                                                double center) {
    const bool s_bl = sgn(bl), s_br = sgn(br), s_tr = sgn(tr), s_tl = sgn(tl);
    std::vector<int> crossings;
    if (s_bl != s_br) crossings.push_back(0);
    if (s_br != s_tr) crossings.push_back(1);
    if (s_tl != s_tr) crossings.push_back(2);
    if (s_bl != s_tl) crossings.push_back(3);
    std::vector<std::array<int, 2>> segs;
    if (crossings.size() == 2) {
        segs.push_back({crossings[0], crossings[1]});
    } else if (crossings.size() == 4) {
        // saddle: all four edges cross; pair so that the corners matching the
        // center sign stay connected
        if (sgn(center) == s_bl)
            segs = {{0, 1}, {2, 3}};  // isolate br and tl
        else
            segs = {{3, 0}, {1, 2}};  // isolate bl and tr
    }
    return segs;
}

// Resolves a saddle cell by one level of subdivision: returns the pairing of
// the four full edges as two pairs, or falls back to the center-sign rule.
std::vector<std::array<int, 2>> resolve_saddle(const BivariatePoly& p, double x0, double x1,
                                               double y0, double y1,
                                               const std::array<double, 4>& corner) {
    const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
    // 3x3 value lattice of the subdivided cell
    const double v00 = corner[0], v02 = corner[1], v22 = corner[2], v20 = corner[3];
    const double v01 = p.eval(xm, y0);   // bottom mid
    const double v12 = p.eval(x1, ym);   // right mid
    const double v21 = p.eval(xm, y1);   // top mid
    const double v10 = p.eval(x0, ym);   // left mid
    const double v11 = p.eval(xm, ym);   // center
    const double val[3][3] = {{v00, v01, v02}, {v10, v11, v12}, {v20, v21, v22}};

    // sub-edge id: 24 possible (horizontal (r,c): r in 0..2, c in 0..1;
    // vertical (r,c): r in 0..1, c in 0..2)
    auto hid = [](int r, int c) { return (r * 3 + c) * 2; };
    auto vid = [](int r, int c) { return (r * 3 + c) * 2 + 1; };

    std::map<int, std::vector<int>> adj;  // sub-edge -> other sub-edges joined in a subcell
    for (int sr = 0; sr < 2; ++sr) {
        for (int sc = 0; sc < 2; ++sc) {
            const double bl = val[sr][sc], br = val[sr][sc + 1];
            const double tr = val[sr + 1][sc + 1], tl = val[sr + 1][sc];
            const double cx = x0 + (sc + 0.5) * 0.5 * (x1 - x0);
            const double cy = y0 + (sr + 0.5) * 0.5 * (y1 - y0);
            auto segs = square_segments(bl, br, tr, tl, p.eval(cx, cy));
            const int ids[4] = {hid(sr, sc), vid(sr, sc + 1), hid(sr + 1, sc), vid(sr, sc)};
            for (auto& sgm : segs) {
                adj[ids[sgm[0]]].push_back(ids[sgm[1]]);
                adj[ids[sgm[1]]].push_back(ids[sgm[0]]);
            }
        }
    }

    // the full-edge crossing sits on the half-edge with the sign change
    auto outer_sub_edge = [&](int full_edge) -> int {
        switch (full_edge) {
            case 0: return sgn(v00) != sgn(v01) ? hid(0, 0) : hid(0, 1);
            case 1: return sgn(v02) != sgn(v12) ? vid(0, 2) : vid(1, 2);
            case 2: return sgn(v20) != sgn(v21) ? hid(2, 0) : hid(2, 1);
            default: return sgn(v00) != sgn(v10) ? vid(0, 0) : vid(1, 0);
        }
    };

    std::array<int, 4> entry{};
    for (int e = 0; e < 4; ++e) entry[e] = outer_sub_edge(e);

    auto walk = [&](int start) -> int {
        int prev = -1, cur = start;
        for (int steps = 0; steps < 64; ++steps) {
            auto it = adj.find(cur);
            if (it == adj.end()) return -1;
            int next = -1;
            for (int cand : it->second)
                if (cand != prev) {
                    next = cand;
                    break;
                }
            if (next == -1) return -1;
            for (int e = 0; e < 4; ++e)
                if (entry[e] == next && next != start) return e;
            prev = cur;
            cur = next;
        }
        return -1;
    };

    const int mate0 = walk(entry[0]);
    if (mate0 == 1 || mate0 == 3) {
        const int a = mate0, b = a == 1 ? 3 : 1;
        const int check = walk(entry[b]);
        if (check == 2) return {{0, a}, {b, 2}};
    } else if (mate0 == 2) {
        // bottom connects straight to top: not a valid 2-pairing of a saddle;
        // fall through to the center rule
    }
    return square_segments(corner[0], corner[1], corner[2], corner[3], v11);
}

}  // namespace

std::vector<CurveComponent> trace_zero_set(const BivariatePoly& p, const Box2& window, int grid) {
    if (p.is_zero()) throw Error(errc::identically_zero, "cannot trace the zero polynomial");
    if (grid < 16) throw Error(errc::usage, "trace_zero_set requires grid >= 16");

    const int g1 = grid + 1;
    const double dx = window.width() / grid, dy = window.height() / grid;
    std::vector<double> val(std::size_t(g1) * g1);
    for (int r = 0; r < g1; ++r) {
        const double y = window.y_lo + r * dy;
        for (int c = 0; c < g1; ++c) val[std::size_t(r) * g1 + c] = p.eval(window.x_lo + c * dx, y);
    }
    auto v = [&](int r, int c) -> double { return val[std::size_t(r) * g1 + c]; };

    // crossing coordinates per lattice edge
    std::unordered_map<std::int64_t, Vec2> crossing;
    auto cross_h = [&](int r, int c) {
        const double a = v(r, c), b = v(r, c + 1);
        crossing.try_emplace(h_edge(r, c, g1),
                             Vec2{window.x_lo + (c + interp(a, b)) * dx, window.y_lo + r * dy});
    };
    auto cross_v = [&](int r, int c) {
        const double a = v(r, c), b = v(r + 1, c);
        crossing.try_emplace(v_edge(r, c, g1),
                             Vec2{window.x_lo + c * dx, window.y_lo + (r + interp(a, b)) * dy});
    };

    std::vector<Segment> segments;
    for (int r = 0; r < grid; ++r) {
        for (int c = 0; c < grid; ++c) {
            const double bl = v(r, c), br = v(r, c + 1), tr = v(r + 1, c + 1), tl = v(r + 1, c);
            const bool s_bl = sgn(bl), s_br = sgn(br), s_tr = sgn(tr), s_tl = sgn(tl);
            if (s_bl == s_br && s_br == s_tr && s_tr == s_tl) continue;

            const std::int64_t ids[4] = {h_edge(r, c, g1), v_edge(r, c + 1, g1),
                                         h_edge(r + 1, c, g1), v_edge(r, c, g1)};
            std::vector<std::array<int, 2>> local;
            const bool ambiguous = s_bl == s_tr && s_br == s_tl && s_bl != s_br;
            if (ambiguous) {
                local = resolve_saddle(p, window.x_lo + c * dx, window.x_lo + (c + 1) * dx,
                                       window.y_lo + r * dy, window.y_lo + (r + 1) * dy,
                                       {bl, br, tr, tl});
            } else {
                local = square_segments(bl, br, tr, tl, 0.0);
            }
            for (auto& sgm : local) {
                for (int side : sgm) {
                    switch (side) {
                        case 0: cross_h(r, c); break;
                        case 1: cross_v(r, c + 1); break;
                        case 2: cross_h(r + 1, c); break;
                        case 3: cross_v(r, c); break;
                    }
                }
                segments.push_back(Segment{ids[sgm[0]], ids[sgm[1]]});
            }
        }
    }
    if (segments.empty()) return {};

    // adjacency: edge -> incident segment indices (each edge carries at most
    // one crossing, so degree <= 2)
    std::unordered_map<std::int64_t, std::vector<int>> incident;
    for (int i = 0; i < (int)segments.size(); ++i) {
        incident[segments[i].ea].push_back(i);
        incident[segments[i].eb].push_back(i);
    }

    auto is_boundary_edge = [&](std::int64_t id) {
        const bool horizontal = (id % 2) == 0;
        const std::int64_t cell = id / 2;
        const int r = int(cell / g1), c = int(cell % g1);
        return horizontal ? (r == 0 || r == grid) : (c == 0 || c == grid);
    };

    std::vector<bool> used(segments.size(), false);
    std::vector<CurveComponent> out;

    for (int seed = 0; seed < (int)segments.size(); ++seed) {
        if (used[seed]) continue;
        // collect the whole component
        std::vector<int> comp{seed};
        used[seed] = true;
        for (std::size_t qi = 0; qi < comp.size(); ++qi) {
            const Segment& s = segments[comp[qi]];
            for (std::int64_t e : {s.ea, s.eb})
                for (int nb : incident[e])
                    if (!used[nb]) {
                        used[nb] = true;
                        comp.push_back(nb);
                    }
        }
        // endpoints: edges of degree 1 within the component
        std::map<std::int64_t, int> deg;
        for (int i : comp) {
            deg[segments[i].ea]++;
            deg[segments[i].eb]++;
        }
        std::vector<std::int64_t> ends;
        for (auto& [e, d] : deg)
            if (d == 1) ends.push_back(e);

        const bool closed = ends.empty();
        std::int64_t start = closed ? deg.begin()->first : *std::min_element(ends.begin(), ends.end());

        // walk the chain
        std::vector<std::int64_t> chain{start};
        std::map<std::int64_t, std::vector<int>> local_inc;
        for (int i : comp) {
            local_inc[segments[i].ea].push_back(i);
            local_inc[segments[i].eb].push_back(i);
        }
        std::vector<bool> seg_done(segments.size(), false);
        std::int64_t cur = start;
        for (;;) {
            int next_seg = -1;
            for (int i : local_inc[cur])
                if (!seg_done[i]) {
                    if (next_seg == -1 || i < next_seg) next_seg = i;
                }
            if (next_seg == -1) break;
            seg_done[next_seg] = true;
            cur = segments[next_seg].ea == cur ? segments[next_seg].eb : segments[next_seg].ea;
            chain.push_back(cur);
        }

        CurveComponent cc;
        cc.touches_boundary = !closed && is_boundary_edge(chain.front()) &&
                              is_boundary_edge(chain.back());
        if (!closed) cc.touches_boundary = true;  // open chains end on the boundary
        cc.kind = closed ? ComponentKind::Oval : ComponentKind::LineType;
        cc.polyline.reserve(chain.size() + (closed ? 1 : 0));
        for (std::int64_t e : chain) cc.polyline.push_back(crossing.at(e));
        if (closed) cc.polyline.push_back(cc.polyline.front());
        out.push_back(std::move(cc));
    }

    return out;
}

std::vector<Vec2> singular_points(const BivariatePoly& p, const Box2& window, double tol) {
    if (tol <= 0.0) throw Error(errc::usage, "singular_points requires tol > 0");
    if (p.is_zero())
        throw Error(errc::identically_zero, "every point of the zero polynomial is singular");
    if (p.is_constant()) return {};

    const BivariatePoly px = p.derivative(Var::X);
    const BivariatePoly py = p.derivative(Var::Y);

    Solve2dOptions opts;
    opts.constraint_accept_tol = tol;
    Solve2dResult res = [&] {
        if (py.is_zero()) return solve_system_2d(p, px, window, tol, opts);
        if (px.is_zero()) return solve_system_2d(p, py, window, tol, opts);
        opts.constraints = {p};
        return solve_system_2d(px, py, window, tol, opts);
    }();

    if (!res.undecided.empty()) {
        std::string msg = "subdivision depth limit left " +
                          std::to_string(res.undecided.size()) + " undecided box(es);";
        for (std::size_t i = 0; i < res.undecided.size() && i < 3; ++i) {
            const Box2& b = res.undecided[i];
            msg += " [" + std::to_string(b.x_lo) + "," + std::to_string(b.x_hi) + "]x[" +
                   std::to_string(b.y_lo) + "," + std::to_string(b.y_hi) + "]";
        }
        throw Error(errc::solver_inconclusive, msg);
    }

    std::vector<Vec2> pts;
    for (const auto& r : res.roots)
        if (std::abs(p.eval(r.point.x, r.point.y)) <= tol) pts.push_back(r.point);
    return pts;
}

DivCurveReport div_curve_report(const PlanarSystem& sys, const Box2& window, int grid) {
    const BivariatePoly div = divergence(sys);
    if (div.is_zero())
        throw Error(errc::degenerate_divergence,
                    "Div is identically zero (Hamiltonian): no limit cycles");
    if (div.is_constant())
        throw Error(errc::degenerate_divergence,
                    "Div is a nonzero constant (Bendixson): no limit cycles");

    DivCurveReport rep{{}, 0, {}, false, window, grid, {}};
    rep.components = trace_zero_set(div, window, grid);
    rep.M = (int)rep.components.size();
    rep.singular_points = singular_points(div, window, 1e-8);
    rep.generic = rep.singular_points.empty();
    for (int i = 0; i < rep.M; ++i)
        if (rep.components[i].touches_boundary)
            rep.warnings.push_back("component " + std::to_string(i) +
                                   " touches the window boundary; widen the window to confirm "
                                   "the census is stable");
    return rep;
}

}  // namespace hilbert16
