#include "hilbert16/ode_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace hilbert16 {

namespace {

constexpr double kBlowupNorm = 1e12;

struct Field {
    const PlanarSystem& sys;
    Vec2 operator()(Vec2 u) const { return {sys.P.eval(u.x, u.y), sys.Q.eval(u.x, u.y)}; }
};

Vec2 rk4_step(const Field& f, Vec2 u, double h) {
    const Vec2 k1 = f(u);
    const Vec2 k2 = f(u + (0.5 * h) * k1);
    const Vec2 k3 = f(u + (0.5 * h) * k2);
    const Vec2 k4 = f(u + h * k3);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// cubic Hermite interpolation of the state inside one step
Vec2 hermite(Vec2 u0, Vec2 f0, Vec2 u1, Vec2 f1, double h, double s) {
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * u0 + (h * h10) * f0 + h01 * u1 + (h * h11) * f1;
}

void check_blowup(Vec2 u) {
    if (!(std::isfinite(u.x) && std::isfinite(u.y)) || norm(u) > kBlowupNorm)
        throw Error(errc::blowup, "trajectory norm exceeded 1e12");
}

struct CrossingResult {
    Vec2 state;
    double time;
};

// Integrates from `start` until the first directed crossing of the section
// (negative to non-negative side), optionally recording the dense trajectory.
CrossingResult integrate_until_crossing(const Field& f, Vec2 start, const Section& sec,
                                        double h, double time_cap, std::vector<Vec2>* pts,
                                        std::vector<double>* times) {
    auto side = [&sec](Vec2 u) { return dot(sec.normal, u - sec.point); };
    Vec2 u = start;
    double t = 0.0;
    bool armed = side(u) < -1e-12;
    if (pts) {
        pts->push_back(u);
        times->push_back(t);
    }
    while (t < time_cap) {
        const Vec2 f0 = f(u);
        const Vec2 u1 = rk4_step(f, u, h);
        check_blowup(u1);
        const double s0 = side(u), s1 = side(u1);
        if (armed && s0 < 0.0 && s1 >= 0.0) {
            // refine the crossing on the Hermite interpolant
            const Vec2 f1 = f(u1);
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 80; ++it) {
                const double midp = 0.5 * (lo + hi);
                (side(hermite(u, f0, u1, f1, h, midp)) < 0.0 ? lo : hi) = midp;
            }
            const double s = 0.5 * (lo + hi);
            const Vec2 uc = hermite(u, f0, u1, f1, h, s);
            if (pts) {
                pts->push_back(uc);
                times->push_back(t + s * h);
            }
            return {uc, t + s * h};
        }
        if (!armed && s1 < -1e-12) armed = true;
        u = u1;
        t += h;
        if (pts) {
            pts->push_back(u);
            times->push_back(t);
        }
    }
    throw Error(errc::no_return, "no section crossing within the time cap");
}

}  // namespace

Orbit integrate(const PlanarSystem& sys, Vec2 x0, double t_end, double h) {
    if (h <= 0.0 || t_end <= 0.0) throw Error(errc::usage, "integrate requires h > 0, t_end > 0");
    const Field f{sys};
    Orbit orbit;
    Vec2 u = x0;
    double t = 0.0;
    orbit.points.push_back(u);
    orbit.times.push_back(t);
    while (t < t_end - 1e-15) {
        const double step = std::min(h, t_end - t);
        u = rk4_step(f, u, step);
        check_blowup(u);
        t += step;
        orbit.points.push_back(u);
        orbit.times.push_back(t);
    }
    return orbit;
}

Orbit find_limit_cycle(const PlanarSystem& sys, const Section& section, Vec2 x0, double tol,
                       const CycleOptions& opts) {
    if (tol <= 0.0) throw Error(errc::usage, "find_limit_cycle requires tol > 0");
    const double nn = norm(section.normal);
    if (nn == 0.0) throw Error(errc::usage, "section normal must be nonzero");
    Section sec{section.point, (1.0 / nn) * section.normal};
    const Vec2 tangent{-sec.normal.y, sec.normal.x};
    const Field f{sys};

    auto return_map = [&](double c) {
        const Vec2 start = sec.point + c * tangent;
        const CrossingResult cr =
            integrate_until_crossing(f, start, sec, opts.h, opts.time_cap, nullptr, nullptr);
        return std::pair<double, double>{dot(tangent, cr.state - sec.point), cr.time};
    };

    // land on the section first
    const CrossingResult first =
        integrate_until_crossing(f, x0, sec, opts.h, opts.time_cap, nullptr, nullptr);
    double c0 = dot(tangent, first.state - sec.point);

    // probe the return-map slope to reject center-like families
    const double g0 = return_map(c0).first - c0;
    const double delta = std::max(1e-4, std::abs(c0) * 1e-3);
    const double g1 = return_map(c0 + delta).first - (c0 + delta);
    const double slope = (g1 - g0) / delta + 1.0;  // ~ R'(c0)
    if (std::abs(slope - 1.0) < 1e-3)
        throw Error(errc::non_isolated,
                    "return-map derivative within 1e-3 of 1: center-like family, no isolated "
                    "cycle");

    double ca = c0, ga = g0;
    double cb = c0 + delta, gb = g1;
    double c_fixed = cb;
    bool converged = std::abs(gb) <= tol;
    for (int it = 0; it < opts.max_returns && !converged; ++it) {
        if (gb == ga) break;
        const double cn = cb - gb * (cb - ca) / (gb - ga);
        ca = cb;
        ga = gb;
        cb = cn;
        gb = return_map(cb).first - cb;
        c_fixed = cb;
        converged = std::abs(gb) <= tol;
    }
    if (!converged)
        throw Error(errc::not_converged, "return map fixed point not reached within " +
                                             std::to_string(opts.max_returns) + " returns");

    // one full loop from the fixed point, densely recorded
    std::vector<Vec2> pts;
    std::vector<double> times;
    const Vec2 start = sec.point + c_fixed * tangent;
    const CrossingResult loop =
        integrate_until_crossing(f, start, sec, opts.h, opts.time_cap, &pts, &times);

    Orbit orbit;
    orbit.period = loop.time;
    orbit.return_map_derivative = slope;
    // uniform time fractions, endpoint included
    orbit.points.reserve(opts.K_out + 1);
    orbit.times.reserve(opts.K_out + 1);
    std::size_t seg = 0;
    for (int j = 0; j <= opts.K_out; ++j) {
        const double tj = loop.time * j / opts.K_out;
        while (seg + 2 < times.size() && times[seg + 1] <= tj) ++seg;
        const double h_seg = times[seg + 1] - times[seg];
        const double s = std::clamp((tj - times[seg]) / h_seg, 0.0, 1.0);
        const Vec2 u = hermite(pts[seg], f(pts[seg]), pts[seg + 1], f(pts[seg + 1]), h_seg, s);
        orbit.points.push_back(u);
        orbit.times.push_back(tj);
    }
    return orbit;
}

DiscretizedPath orbit_to_path(const Orbit& orbit, int K) {
    if (!orbit.period) throw Error(errc::usage, "orbit has no period");
    if (orbit.points.size() < 3) throw Error(errc::usage, "orbit too short to resample");
    const double T = *orbit.period;
    std::vector<double> xs(K), ys(K);
    std::size_t seg = 0;
    const auto& ts = orbit.times;
    for (int j = 0; j < K; ++j) {
        const double tj = T * j / K;
        while (seg + 2 < ts.size() && ts[seg + 1] <= tj) ++seg;
        const double h_seg = ts[seg + 1] - ts[seg];
        const double s = std::clamp((tj - ts[seg]) / h_seg, 0.0, 1.0);
        // derivative-free fallback is linear; with points this dense the
        // cubic from neighboring slopes is unnecessary
        const Vec2 u = (1.0 - s) * orbit.points[seg] + s * orbit.points[seg + 1];
        xs[j] = u.x;
        ys[j] = u.y;
    }
    return DiscretizedPath(std::move(xs), std::move(ys));
}

double cycle_energy_check(const PlanarSystem& sys, const Orbit& orbit, int K) {
    if (!orbit.period) throw Error(errc::usage, "orbit has no period");
    const double T = *orbit.period;
    const Field f{sys};
    const auto& ts = orbit.times;
    std::vector<double> xs(K), ys(K);
    std::size_t seg = 0;
    for (int j = 0; j < K; ++j) {
        const double tj = T * j / K;
        while (seg + 2 < ts.size() && ts[seg + 1] <= tj) ++seg;
        const double h_seg = ts[seg + 1] - ts[seg];
        const double s = std::clamp((tj - ts[seg]) / h_seg, 0.0, 1.0);
        const Vec2 u = hermite(orbit.points[seg], f(orbit.points[seg]), orbit.points[seg + 1],
                               f(orbit.points[seg + 1]), h_seg, s);
        xs[j] = u.x;
        ys[j] = u.y;
    }
    return energy_E0(DiscretizedPath(std::move(xs), std::move(ys)), sys);
}

}  // namespace hilbert16
