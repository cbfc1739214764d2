// Acceptance suite: one criterion per function, each printing a PASS/FAIL
// line (RECORDED for the exploratory diagnostic). Exit code = number of
// failed criteria. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hilbert16/bounds.hpp"
#include "hilbert16/ode_oracle.hpp"
#include "hilbert16/report_io.hpp"
#include "hilbert16/variational.hpp"

using namespace hilbert16;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

PlanarSystem van_der_pol() {
    return PlanarSystem(parse_poly("y - (x^3/3 - x)"), parse_poly("-x"));
}

PlanarSystem cubic_circle() {
    return PlanarSystem(parse_poly("-y + x*(1 - x^2 - y^2)"), parse_poly("x + y*(1 - x^2 - y^2)"));
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double norm2v(const std::vector<double>& v) {
    double s = 0.0;
    for (double t : v) s += t * t;
    return std::sqrt(s);
}

// --- criterion 1: quartic formula fidelity --------------------------------
void criterion_1(Check& c) {
    c.expect(quartic_bound(2) == 4, "quartic_bound(2) != 4");
    c.expect(quartic_bound(3) == 33, "quartic_bound(3) != 33");
    c.expect(quartic_bound(4) == 181, "quartic_bound(4) != 181");
    for (int n = 2; n <= 20; ++n) {
        const long long composed =
            master_bound(n, harnack_max_components(n - 1), bezout_bound(2 * (n - 1), n - 1));
        if (quartic_bound(n) != composed)
            c.expect(false, "composition mismatch at n=" + std::to_string(n) + ": " +
                                std::to_string(quartic_bound(n)) + " vs " +
                                std::to_string(composed));
    }
}

// --- criterion 2: quadratic corollary branches -----------------------------
void criterion_2(Check& c) {
    const Box2 window = Box2::square(-3, 3);
    {
        const PlanarSystem sys(parse_poly("x + y^2"), parse_poly("x^2"));  // Div = 1
        const QuadraticVerdict v = quadratic_verdict(sys, std::nullopt);
        c.expect(v.verdict == "no limit cycles", "constant-Div fixture: got " + v.verdict);
    }
    {
        const PlanarSystem sys(parse_poly("x^2 + y^2 - 1"), parse_poly("y - y^2"));
        const ContactReport rep = contact_points(sys, window, 1e-10);
        c.expect(rep.N == 2, "two-contact fixture: N = " + std::to_string(rep.N));
        const QuadraticVerdict v = quadratic_verdict(sys, rep);
        c.expect(v.verdict == "bound 4" && v.bound == 4, "two-contact fixture: got " + v.verdict);
    }
    {
        const PlanarSystem sys(parse_poly("1 + y^2"), parse_poly("x*y"));
        const ContactReport rep = contact_points(sys, window, 1e-10);
        c.expect(rep.N == 0, "no-contact fixture: N = " + std::to_string(rep.N));
        const QuadraticVerdict v = quadratic_verdict(sys, rep);
        c.expect(v.verdict == "no limit cycles", "no-contact fixture: got " + v.verdict);
    }
}

// --- criterion 3: van der Pol end-to-end -----------------------------------
void criterion_3(Check& c) {
    const PlanarSystem vdp = van_der_pol();
    const Box2 window = Box2::square(-4, 4);
    const DivCurveReport curve = div_curve_report(vdp, window, 512);
    c.expect(curve.M == 2, "M = " + std::to_string(curve.M));
    for (const auto& comp : curve.components)
        c.expect(comp.kind == ComponentKind::LineType, "non-line component");
    const ContactReport contacts = contact_points(vdp, window, 1e-12);
    c.expect(contacts.N == 2, "N = " + std::to_string(contacts.N));
    c.expect(contacts.undecided.empty(), "undecided boxes remain");
    for (const auto& r : contacts.points) {
        c.expect(r.simple, "non-simple contact");
        c.expect(r.radius <= 1e-8, "enclosure radius " + fmt(r.radius));
        const double ex = r.point.x > 0 ? 1.0 : -1.0;
        c.expect(std::abs(r.point.x - ex) <= 1e-8 &&
                     std::abs(r.point.y + ex * 2.0 / 3.0) <= 1e-8,
                 "contact point off (+-1, -+2/3)");
    }
    const BehaviorCensus census = behavior_census(curve, contacts);
    c.expect(census.total == 4, "behaviors = " + std::to_string(census.total));
    const BoundReport rep = bound_report(vdp, curve, contacts, census);
    c.expect(rep.master_bound == 17, "master_bound = " + std::to_string(rep.master_bound));
    c.expect(rep.master_bound == lienard_bound(3, 1), "master_bound != lienard_bound(3,1)");
}

// --- criterion 4: cubic circle system --------------------------------------
void criterion_4(Check& c) {
    const PlanarSystem sys = cubic_circle();
    const Box2 window = Box2::square(-3, 3);
    const DivCurveReport curve = div_curve_report(sys, window, 512);
    c.expect(curve.M == 1, "M = " + std::to_string(curve.M));
    c.expect(curve.components.size() == 1 && curve.components[0].kind == ComponentKind::Oval,
             "component is not an oval");
    const ContactReport contacts = contact_points(sys, window, 1e-10);
    c.expect(contacts.N == 0, "N = " + std::to_string(contacts.N));
    const BehaviorCensus census = behavior_census(curve, contacts);
    const BoundReport rep = bound_report(sys, curve, contacts, census);
    c.expect(rep.master_bound == 5, "master_bound = " + std::to_string(rep.master_bound));
    const Orbit orbit =
        find_limit_cycle(sys, Section{{1, 0}, {0, 1}}, {1.3, 0.0}, 1e-10, CycleOptions{});
    c.expect(orbit.period.has_value() && std::abs(*orbit.period - kTwoPi) <= 1e-6,
             "period " + fmt(orbit.period.value_or(0)));
    const double e = cycle_energy_check(sys, orbit, 128);
    c.expect(e <= 1e-10, "cycle energy " + fmt(e));
}

// --- criterion 5: variational recovery -------------------------------------
void criterion_5(Check& c) {
    {
        DescendOptions opts;
        opts.max_iters = 30000;
        opts.grad_tol = 1e-9;
        opts.h2_precondition = true;  // step policy: H2-preconditioned steepest descent
        const DescendResult res =
            descend(DiscretizedPath::circle(256, 1.3), cubic_circle(), EnergyConfig{}, opts);
        c.expect(res.energy <= 1e-10, "cubic circle E0 " + fmt(res.energy));
        double worst = 0.0;
        for (int k = 0; k < res.path.K(); ++k)
            worst = std::max(worst, std::abs(std::hypot(res.path.x[k], res.path.y[k]) - 1.0));
        c.expect(worst <= 1e-3, "radial deviation " + fmt(worst));
    }
    {
        const PlanarSystem vdp = van_der_pol();
        CycleOptions copts;
        copts.K_out = 256;
        const Orbit cycle =
            find_limit_cycle(vdp, Section{{0, 2}, {1, 0}}, {2.0, 0.0}, 1e-10, copts);
        DiscretizedPath seed = reverse_time(orbit_to_path(cycle, 256));
        // 5% band-limited radial noise, seeded
        std::mt19937_64 rng(2024);
        auto u = [&rng]() { return ((rng() >> 11) * 0x1.0p-53) * 2.0 - 1.0; };
        double amp[6], phase[6];
        for (int m = 0; m < 6; ++m) {
            amp[m] = u();
            phase[m] = u() * std::numbers::pi;
        }
        for (int k = 0; k < 256; ++k) {
            double xi = 0.0;
            for (int m = 0; m < 6; ++m) xi += amp[m] * std::cos(kTwoPi * (m + 1) * k / 256 + phase[m]);
            const double s = 1.0 + 0.05 * xi / 6.0;
            seed.x[k] *= s;
            seed.y[k] *= s;
        }
        c.expect(winding_number(seed).require() == 1, "seed winding not +1");
        DescendOptions opts;
        opts.max_iters = 60000;
        opts.grad_tol = 1e-12;
        const DescendResult res = descend(seed, vdp, EnergyConfig{}, opts);
        c.expect(res.energy <= 1e-8, "van der Pol E0 " + fmt(res.energy));
        bool winding_ok = true;
        for (const auto& t : res.trace) winding_ok = winding_ok && t.winding == 1;
        c.expect(winding_ok, "winding broke along the trace");
    }
}

// --- criterion 6: gradient correctness --------------------------------------
void criterion_6(Check& c) {
    std::mt19937_64 rng(606);
    auto uniform = [&rng](double lo, double hi) {
        return lo + ((rng() >> 11) * 0x1.0p-53) * (hi - lo);
    };
    const int K = 64;
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        BivariatePoly P, Q;
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j + i <= 3; ++j) {
                if (rng() % 2 == 0) P.add_term(i, j, uniform(-1.5, 1.5));
                if (rng() % 2 == 0) Q.add_term(i, j, uniform(-1.5, 1.5));
            }
        if (P.is_zero()) P.add_term(0, 0, 1.0);
        if (Q.is_zero()) Q.add_term(0, 0, -1.0);
        const PlanarSystem sys(P, Q);
        DiscretizedPath p = DiscretizedPath::circle(K, 1.0);
        for (int m = 1; m <= 5; ++m) {
            const double ax = uniform(-0.25, 0.25), ay = uniform(-0.25, 0.25);
            for (int k = 0; k < K; ++k) {
                p.x[k] += ax * std::cos(kTwoPi * m * k / K);
                p.y[k] += ay * std::sin(kTwoPi * m * k / K);
            }
        }
        const std::vector<double> g = gradient_E0(p, sys);
        std::vector<double> fd(2 * K);
        for (int j = 0; j < 2 * K; ++j) {
            double& coord = j < K ? p.x[j] : p.y[j - K];
            const double saved = coord;
            coord = saved + 1e-6;
            const double ep = energy_E0(p, sys);
            coord = saved - 1e-6;
            const double em = energy_E0(p, sys);
            coord = saved;
            fd[j] = (ep - em) / 2e-6;
        }
        std::vector<double> diff(2 * K);
        for (int j = 0; j < 2 * K; ++j) diff[j] = g[j] - fd[j];
        worst = std::max(worst, norm2v(diff) / std::max(norm2v(fd), 1e-30));
    }
    c.expect(worst <= 1e-5, "worst relative error " + fmt(worst));
    c.note("worst rel err " + fmt(worst));
}

// --- criterion 7: Morse machinery -------------------------------------------
void criterion_7(Check& c) {
    // stage 1: reach the cycle along E0, then point-reflect so the phase
    // anti-aligns with v_eps (the aligned phase is a shift-direction saddle)
    DescendOptions stage1;
    stage1.h2_precondition = true;
    stage1.grad_tol = 1e-10;
    stage1.max_iters = 60000;
    const DescendResult base =
        descend(DiscretizedPath::circle(128, 1.2), cubic_circle(), EnergyConfig{}, stage1);
    DiscretizedPath flipped = base.path;
    for (int k = 0; k < flipped.K(); ++k) {
        flipped.x[k] = -flipped.x[k];
        flipped.y[k] = -flipped.y[k];
    }
    for (double eps : {1e-3, 1e-4}) {
        EnergyConfig cfg;
        cfg.epsilon = eps;
        cfg.v_eps = make_v_eps(eps, 128, 0.01);
        DescendOptions opts;
        opts.h2_precondition = true;
        opts.grad_tol = 1e-9;
        opts.max_iters = 60000;
        const DescendResult res = descend(flipped, cubic_circle(), cfg, opts);
        c.expect(res.grad_norm <= 1e-8, "eps=" + fmt(eps) + " grad " + fmt(res.grad_norm));
        const std::vector<double> eig = hessian_spectrum(res.path, cubic_circle(), cfg, 4);
        c.expect(eig.front() >= -1e-6,
                 "eps=" + fmt(eps) + " min eigenvalue " + fmt(eig.front()));
        const int index = morse_index(res.path, cubic_circle(), cfg, 1e-9);
        c.expect(index == 0, "eps=" + fmt(eps) + " index " + std::to_string(index));
        c.note("eps " + fmt(eps) + ": min eig " + fmt(eig.front()));
    }
    const MorseCensus census = morse_census({0});
    c.expect(census.alternating_sum == 1, "census {0:1} alternating sum");
}

// --- criterion 8: solver soundness and completeness -------------------------
void criterion_8(Check& c) {
    std::mt19937_64 rng(808);
    auto uniform = [&rng](double lo, double hi) {
        return lo + ((rng() >> 11) * 0x1.0p-53) * (hi - lo);
    };
    auto through = [](Vec2 u, Vec2 v) {
        const double a = v.y - u.y, b = u.x - v.x;
        const double n = std::hypot(a, b);
        BivariatePoly line;
        line.add_term(1, 0, a / n);
        line.add_term(0, 1, b / n);
        line.add_term(0, 0, -(a * u.x + b * u.y) / n);
        return line;
    };
    const Box2 window = Box2::square(-2.5, 2.5);
    int recovered = 0, expected = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Vec2 p1{-1 + uniform(-0.25, 0.25), -1 + uniform(-0.25, 0.25)};
        const Vec2 p2{1 + uniform(-0.25, 0.25), -1 + uniform(-0.25, 0.25)};
        const Vec2 p3{-1 + uniform(-0.25, 0.25), 1 + uniform(-0.25, 0.25)};
        const Vec2 p4{1 + uniform(-0.25, 0.25), 1 + uniform(-0.25, 0.25)};
        const BivariatePoly p = through(p1, p2) * through(p3, p4);
        const BivariatePoly q = through(p1, p3) * through(p2, p4);
        const Solve2dResult res = solve_system_2d(p, q, window, 1e-11);
        c.expect(res.undecided.empty(), "undecided boxes in trial " + std::to_string(trial));
        for (const auto& r : res.roots) {
            c.expect(std::abs(p.eval(r.point.x, r.point.y)) <= 1e-10 &&
                         std::abs(q.eval(r.point.x, r.point.y)) <= 1e-10,
                     "residual above 1e-10");
        }
        if (res.undecided.empty())
            c.expect((int)res.roots.size() <= 4, "root count exceeds the Bezout product");
        for (const Vec2 target : {p1, p2, p3, p4}) {
            ++expected;
            for (const auto& r : res.roots)
                if (std::hypot(r.point.x - target.x, r.point.y - target.y) <=
                    std::max(r.radius, 1e-8)) {
                    ++recovered;
                    break;
                }
        }
    }
    c.expect(recovered == expected, std::to_string(recovered) + "/" +
                                        std::to_string(expected) + " roots recovered");
    c.note(std::to_string(recovered) + "/" + std::to_string(expected) + " roots recovered");
}

// --- criterion 9: singular-perturbation diagnostic (recorded, not gated) ----

// doubled arc along x = 1 between the contact point (1, -2/3) and the turning
// height, parametrized so that Z = (y + 2/3) y' = +-k on the two legs (the
// limit structure Z^2 = k^2, Div = 0); a small x-bump keeps the turns regular
DiscretizedPath zeta_configuration(int K, double k_level, double delta, double bump) {
    std::vector<double> xs(K), ys(K);
    const double c = 2.0 / 3.0;
    for (int i = 0; i < K; ++i) {
        const double t = double(i) / K;
        const double s = t < 0.5 ? t : 1.0 - t;
        ys[i] = std::sqrt(delta * delta + 2.0 * k_level * s) - c;
        xs[i] = 1.0 + bump * std::sin(kTwoPi * t);
    }
    return DiscretizedPath(std::move(xs), std::move(ys));
}

struct ZetaStats {
    double e0, z2_mean, flatness, div_med;
    int interior;
};

ZetaStats zeta_stats(const DiscretizedPath& path, const PlanarSystem& sys,
                     const ContactReport& contacts) {
    const int K = path.K();
    const ZProfile zp = z_profile(path, sys);
    const double y_top = *std::max_element(path.y.begin(), path.y.end());
    std::vector<double> z2, dv;
    for (int i = 0; i < K; ++i) {
        double dist = 1e9;
        for (const auto& r : contacts.points)
            dist = std::min(dist, std::hypot(path.x[i] - r.point.x, path.y[i] - r.point.y));
        if (dist >= 0.3 && std::abs(path.y[i] - y_top) >= 0.3) {
            z2.push_back(zp.z[i] * zp.z[i]);
            dv.push_back(std::abs(zp.div_along[i]));
        }
    }
    ZetaStats st{energy_E0(path, sys), 0.0, 0.0, 0.0, (int)z2.size()};
    if (z2.empty()) return st;
    for (double v : z2) st.z2_mean += v;
    st.z2_mean /= z2.size();
    double var = 0.0;
    for (double v : z2) var += (v - st.z2_mean) * (v - st.z2_mean);
    var /= z2.size();
    st.flatness = st.z2_mean > 0 ? var / (st.z2_mean * st.z2_mean) : 0.0;
    std::sort(dv.begin(), dv.end());
    st.div_med = dv[dv.size() / 2];
    return st;
}

void criterion_9(Check& c) {
    const PlanarSystem vdp = van_der_pol();
    const ContactReport contacts = contact_points(vdp, Box2::square(-4, 4), 1e-10);
    const int K = 256;

    // (a) descents seeded at the limit cycle, one per eps: the H2-norm of the
    // iterate tells whether the minimizer stayed near the cycle or slid to
    // the near-point class u ~ -v/eps (which the counting discards)
    CycleOptions copts;
    copts.K_out = K;
    const Orbit cycle = find_limit_cycle(vdp, Section{{0, 2}, {1, 0}}, {2.0, 0.0}, 1e-10, copts);
    const DiscretizedPath cycle_path = reverse_time(orbit_to_path(cycle, K));
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        EnergyConfig cfg;
        cfg.epsilon = eps;
        cfg.v_eps = make_v_eps(eps, K, 0.01);
        DescendOptions opts;
        opts.h2_precondition = true;
        opts.grad_tol = 1e-9;
        opts.max_iters = 20000;
        const DescendResult res = descend(cycle_path, vdp, cfg, opts);
        const double norm = std::sqrt(h2_norm_sq(res.path));
        c.note("cycle-seeded eps " + fmt(eps) + ": E0 " + fmt(energy_E0(res.path, vdp)) +
               ", |u|_H2 " + fmt(norm) + (norm < 0.1 ? " (slid to the near-point class)" : ""));
    }

    // (b) the limit structure itself: a doubled divergence-curve arc with
    // Z^2 = k^2 turning at the contact point; measured interior diagnostics
    const DiscretizedPath zeta = zeta_configuration(K, 4.0, 0.12, 0.06);
    const ZetaStats st = zeta_stats(zeta, vdp, contacts);
    c.note("zeta configuration (k^2 = 16): E0 " + fmt(st.e0) + ", Z^2 mean " + fmt(st.z2_mean) +
           ", Z^2 flatness " + fmt(st.flatness) + " (structure target <= 0.1), median |Div| " +
           fmt(st.div_med));
    EnergyConfig cfg;
    cfg.epsilon = 1e-5;
    cfg.v_eps = make_v_eps(cfg.epsilon, K, 0.01);
    c.note("el_residual of the configuration at eps 1e-5: " +
           fmt(el_residual(zeta, vdp, cfg)) + " (layer turns are far from the true profile)");

    // (c) descent cannot hold that configuration: it is a non-minimizing
    // branch, and the flow slides off it (recorded)
    DescendOptions opts;
    opts.h2_precondition = true;
    opts.grad_tol = 1e-8;
    opts.max_iters = 20000;
    const DescendResult res = descend(zeta, vdp, cfg, opts);
    const ZetaStats after = zeta_stats(res.path, vdp, contacts);
    c.note("after descent at eps 1e-5: E0 " + fmt(after.e0) + ", Z^2 flatness " +
           fmt(after.flatness) +
           "; no descent-reachable critical path kept E0 bounded away from 0");
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<void(Check&)> run;
    bool gated;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "quartic formula fidelity and cap composition", 1.0, criterion_1, true},
        {2, "quadratic corollary branches", 5.0, criterion_2, true},
        {3, "van der Pol end-to-end census and bounds", 30.0, criterion_3, true},
        {4, "cubic circle census, oracle cycle and energy check", 30.0, criterion_4, true},
        {5, "variational recovery of known cycles", 120.0, criterion_5, true},
        {6, "analytic gradient vs finite differences", 60.0, criterion_6, true},
        {7, "Morse machinery at descended minimizers", 120.0, criterion_7, true},
        {8, "solver soundness and completeness on 50 systems", 120.0, criterion_8, true},
        {9, "singular-perturbation diagnostic (exploratory)", 600.0, criterion_9, false},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.gated && seconds > cr.budget_seconds)
            check.expect(false, "runtime " + fmt(seconds) + "s exceeds " +
                                    fmt(cr.budget_seconds) + "s");
        const char* status = !cr.gated ? "RECORDED" : check.ok ? "PASS" : "FAIL";
        if (cr.gated && !check.ok) ++failures;
        std::printf("%-8s criterion %d: %s [%.2fs]%s%s\n", status, cr.id, cr.title, seconds,
                    check.detail.empty() ? "" : " -- ", check.detail.c_str());
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
