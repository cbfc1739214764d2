#include "hilbert16/solver2d.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <future>
#include <optional>

namespace hilbert16 {

namespace {

struct Candidate {
    Box2 box{0, 1, 0, 1};
    Vec2 point;
    double radius = 0.0;
};

struct Partials {
    BivariatePoly px, py, qx, qy;
};

Interval eval_point(const BivariatePoly& p, Vec2 v) {
    // enclosure of the exact value at a point (degenerate box)
    const double ex = std::abs(v.x) * 4 * DBL_EPSILON + DBL_MIN;
    const double ey = std::abs(v.y) * 4 * DBL_EPSILON + DBL_MIN;
    return p.eval(Box2(v.x - ex, v.x + ex, v.y - ey, v.y + ey));
}

// One interval-Newton step. Returns: contracted box if progress was made,
// nullopt plus "gone" if the box provably contains no root.
struct NewtonOutcome {
    bool gone = false;       // no root in the box
    bool certified = false;  // unique root certified inside
    std::optional<Box2> contracted;
};

NewtonOutcome newton_step(const BivariatePoly& p, const BivariatePoly& q, const Partials& d,
                          const Box2& box) {
    NewtonOutcome out;
    const Vec2 m = box.mid();
    const Interval fp = eval_point(p, m);
    const Interval fq = eval_point(q, m);

    const Interval j00 = d.px.eval(box), j01 = d.py.eval(box);
    const Interval j10 = d.qx.eval(box), j11 = d.qy.eval(box);
    const Interval det = j00 * j11 - j01 * j10;
    if (det.contains_zero()) return out;  // no conclusion

    // delta = J^{-1} F(m), via the adjugate
    const Interval dx = (j11 * fp - j01 * fq) / det;
    const Interval dy = (j00 * fq - j10 * fp) / det;
    const Interval nx = Interval(m.x) - dx;
    const Interval ny = Interval(m.y) - dy;

    const Interval bx{box.x_lo, box.x_hi}, by{box.y_lo, box.y_hi};
    if (!nx.intersects(bx) || !ny.intersects(by)) {
        out.gone = true;
        return out;
    }
    if (nx.inside(bx) && ny.inside(by)) out.certified = true;

    const Interval cx = intersect(nx, bx), cy = intersect(ny, by);
    if (empty(cx) || empty(cy)) {
        out.gone = true;
        return out;
    }
    // guard against zero-width boxes
    const double wx = std::max(cx.width(), DBL_MIN * 4);
    const double wy = std::max(cy.width(), DBL_MIN * 4);
    out.contracted = Box2(cx.lo, cx.lo + wx, cy.lo, cy.lo + wy);
    return out;
}

// Classification of one work box.
struct BoxOutcome {
    enum Kind { Discard, Split, Accept, Undecided } kind = Discard;
    Box2 box{0, 1, 0, 1};
    Candidate cand{};
};

// Roots lying exactly on subdivision lines can never be interior to a work
// box, so the Newton test runs on a slightly inflated copy; a certificate on
// the inflated box is a valid existence/uniqueness certificate and duplicated
// finds from neighboring boxes merge during deduplication.
Box2 inflate_box(const Box2& b, double ratio) {
    const double wx = b.width() * ratio, wy = b.height() * ratio;
    return Box2(b.x_lo - wx, b.x_hi + wx, b.y_lo - wy, b.y_hi + wy);
}

BoxOutcome process_box(const BivariatePoly& p, const BivariatePoly& q, const Partials& d,
                       const Solve2dOptions& opts, Box2 box) {
    BoxOutcome out;
    if (!p.eval(box).contains_zero() || !q.eval(box).contains_zero()) return out;
    for (const auto& r : opts.constraints)
        if (!r.eval(box).contains_zero()) return out;

    NewtonOutcome nw = newton_step(p, q, d, inflate_box(box, 0.25));
    if (nw.gone) return out;
    if (nw.certified) {
        // keep contracting toward the target radius
        Box2 cur = nw.contracted.value_or(box);
        for (int it = 0; it < 60; ++it) {
            const double rad = 0.5 * std::hypot(cur.width(), cur.height());
            if (rad <= opts.target_radius) break;
            NewtonOutcome step = newton_step(p, q, d, cur);
            if (step.gone || !step.contracted) break;
            const Box2& nb = *step.contracted;
            if (nb.width() >= cur.width() && nb.height() >= cur.height()) break;
            cur = nb;
        }
        out.kind = BoxOutcome::Accept;
        out.cand = Candidate{cur, cur.mid(), 0.5 * std::hypot(cur.width(), cur.height())};
        return out;
    }

    // clip the inflated-box contraction back to this box; an empty overlap
    // proves the box root-free
    Box2 next = box;
    if (nw.contracted) {
        const Interval cx = intersect({nw.contracted->x_lo, nw.contracted->x_hi},
                                      {box.x_lo, box.x_hi});
        const Interval cy = intersect({nw.contracted->y_lo, nw.contracted->y_hi},
                                      {box.y_lo, box.y_hi});
        if (empty(cx) || empty(cy)) return out;
        next = Box2(cx.lo, cx.lo + std::max(cx.width(), DBL_MIN * 4), cy.lo,
                    cy.lo + std::max(cy.width(), DBL_MIN * 4));
    }
    if (std::max(next.width(), next.height()) <= opts.min_width) {
        out.kind = BoxOutcome::Undecided;
        out.box = next;
        return out;
    }
    out.kind = BoxOutcome::Split;
    out.box = next;
    return out;
}

}  // namespace

Solve2dResult solve_system_2d(const BivariatePoly& p, const BivariatePoly& q, const Box2& window,
                              double tol, const Solve2dOptions& opts) {
    if (tol <= 0.0) throw Error(errc::usage, "solve_system_2d requires tol > 0");
    if (p.is_zero() || q.is_zero())
        throw Error(errc::degenerate_system, "system polynomial identically zero");

    const Partials d{p.derivative(Var::X), p.derivative(Var::Y), q.derivative(Var::X),
                     q.derivative(Var::Y)};

    std::deque<Box2> work{window};
    std::vector<Candidate> accepted;
    std::vector<Box2> undecided;
    long long processed = 0;

    while (!work.empty()) {
        // one wave, processed in deterministic order
        std::vector<Box2> wave(work.begin(), work.end());
        work.clear();
        processed += static_cast<long long>(wave.size());
        if (processed > opts.max_boxes)
            throw Error(errc::solver_inconclusive,
                        "box budget exhausted (" + std::to_string(processed) + " boxes)");

        std::vector<BoxOutcome> outcomes(wave.size());
        const int jobs = std::max(1, opts.jobs);
        if (jobs == 1 || wave.size() < 16) {
            for (std::size_t i = 0; i < wave.size(); ++i)
                outcomes[i] = process_box(p, q, d, opts, wave[i]);
        } else {
            std::vector<std::future<void>> futs;
            const std::size_t chunk = (wave.size() + jobs - 1) / jobs;
            for (int w = 0; w < jobs; ++w) {
                const std::size_t lo = w * chunk, hi = std::min(wave.size(), lo + chunk);
                if (lo >= hi) break;
                futs.push_back(std::async(std::launch::async, [&, lo, hi] {
                    for (std::size_t i = lo; i < hi; ++i)
                        outcomes[i] = process_box(p, q, d, opts, wave[i]);
                }));
            }
            for (auto& f : futs) f.get();
        }

        for (auto& oc : outcomes) {
            switch (oc.kind) {
                case BoxOutcome::Discard:
                    break;
                case BoxOutcome::Accept:
                    accepted.push_back(oc.cand);
                    break;
                case BoxOutcome::Undecided:
                    undecided.push_back(oc.box);
                    break;
                case BoxOutcome::Split: {
                    const Box2& b = oc.box;
                    if (b.width() >= b.height()) {
                        const double xm = 0.5 * (b.x_lo + b.x_hi);
                        work.emplace_back(b.x_lo, xm, b.y_lo, b.y_hi);
                        work.emplace_back(xm, b.x_hi, b.y_lo, b.y_hi);
                    } else {
                        const double ym = 0.5 * (b.y_lo + b.y_hi);
                        work.emplace_back(b.x_lo, b.x_hi, b.y_lo, ym);
                        work.emplace_back(b.x_lo, b.x_hi, ym, b.y_hi);
                    }
                    break;
                }
            }
        }
    }

    // point-Newton refinement to residual <= tol
    std::vector<Root2> roots;
    for (auto& c : accepted) {
        Vec2 z = c.point;
        for (int it = 0; it < 60; ++it) {
            const double fp = p.eval(z.x, z.y), fq = q.eval(z.x, z.y);
            if (std::max(std::abs(fp), std::abs(fq)) <= tol * 1e-3) break;
            const double a = d.px.eval(z.x, z.y), b = d.py.eval(z.x, z.y);
            const double cc = d.qx.eval(z.x, z.y), dd = d.qy.eval(z.x, z.y);
            const double det = a * dd - b * cc;
            if (det == 0.0) break;
            const Vec2 step{(dd * fp - b * fq) / det, (a * fq - cc * fp) / det};
            const Vec2 nz = z - step;
            // do not leave the certified enclosure by more than its radius
            if (std::abs(nz.x - c.point.x) > 4 * c.radius + 1e-12 ||
                std::abs(nz.y - c.point.y) > 4 * c.radius + 1e-12)
                break;
            z = nz;
        }
        if (!window.contains(z)) continue;  // inflated certificates can leak past the edge
        bool ok = std::abs(p.eval(z.x, z.y)) <= tol && std::abs(q.eval(z.x, z.y)) <= tol;
        for (const auto& r : opts.constraints)
            ok = ok && std::abs(r.eval(z.x, z.y)) <= opts.constraint_accept_tol;
        if (!ok) continue;

        const double a = d.px.eval(z.x, z.y), b = d.py.eval(z.x, z.y);
        const double cc = d.qx.eval(z.x, z.y), dd = d.qy.eval(z.x, z.y);
        const double det = a * dd - b * cc;
        const double scale = std::hypot(a, b) * std::hypot(cc, dd) + DBL_MIN;
        roots.push_back(Root2{z, c.radius, std::abs(det) / scale > opts.simplicity_tol, det});
    }

    // deduplicate: overlapping enclosures merge, keeping the smaller radius
    std::sort(roots.begin(), roots.end(), [](const Root2& a, const Root2& b) {
        return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
    });
    std::vector<Root2> unique;
    for (const auto& r : roots) {
        bool merged = false;
        for (auto& u : unique) {
            const double gap = std::hypot(r.point.x - u.point.x, r.point.y - u.point.y);
            if (gap <= r.radius + u.radius) {
                if (r.radius < u.radius) u = r;
                merged = true;
                break;
            }
        }
        if (!merged) unique.push_back(r);
    }

    return Solve2dResult{std::move(unique), std::move(undecided)};
}

ContactReport contact_points(const PlanarSystem& sys, const Box2& window, double tol,
                             const Solve2dOptions& opts) {
    const BivariatePoly div = divergence(sys);
    if (div.is_zero())
        throw Error(errc::degenerate_divergence, "Div is identically zero (Hamiltonian)");
    if (div.is_constant())
        throw Error(errc::degenerate_divergence, "Div is a nonzero constant (Bendixson)");
    auto [first, second] = contact_system(sys);
    if (first.is_zero())
        throw Error(errc::degenerate_system, "contact polynomial identically zero");
    Solve2dResult res = solve_system_2d(first, second, window, tol, opts);
    int n = 0;
    for (const auto& r : res.roots)
        if (r.simple) ++n;
    return ContactReport{std::move(res.roots), n, std::move(res.undecided)};
}

}  // namespace hilbert16
