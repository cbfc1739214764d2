#include "hilbert16/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace hilbert16 {

long long harnack_max_components(int k) {
    if (k < 0) throw Error(errc::usage, "curve degree must be >= 0");
    if (k == 0) return 0;
    const long long kk = k;
    const long long base = (kk - 1) * (kk - 2) / 2;  // (k-1)(k-2) is always even
    return k % 2 == 1 ? base + 1 : base;
}

long long bezout_bound(long long d1, long long d2) {
    if (d1 < 0 || d2 < 0) throw Error(errc::usage, "degrees must be >= 0");
    return d1 * d2;
}

long long master_bound(int n, long long M, long long N) {
    if (n < 2) throw Error(errc::invalid_degree, "master bound requires degree n > 1");
    if (M < 0 || N < 0) throw Error(errc::usage, "M and N must be >= 0");
    const long long m = n - 1;
    return 1 + m * m * (M + N);
}

long long quartic_bound(int n) {
    if (n < 2) throw Error(errc::invalid_degree, "quartic bound requires degree n > 1");
    const long long x = n;
    // coefficients are halves of integers; evaluate the doubled polynomial
    const long long doubled = n % 2 == 0
                                  ? 5 * x * x * x * x - 23 * x * x * x + 43 * x * x - 37 * x + 14
                                  : 5 * x * x * x * x - 23 * x * x * x + 41 * x * x - 33 * x + 12;
    if (doubled % 2 != 0)
        throw Error(errc::non_integer, "quartic bound did not evaluate to an integer");
    return doubled / 2;
}

long long lienard_bound(int p, int q) {
    if (p < 1 || q < 1) throw Error(errc::usage, "lienard bound requires p, q >= 1");
    const long long m = std::max(p, q) - 1;
    return 1 + 2 * m * m * (p - 1);
}

QuadraticVerdict quadratic_verdict(const PlanarSystem& sys,
                                   const std::optional<ContactReport>& contacts) {
    if (sys.degree != 2)
        throw Error(errc::wrong_degree, "quadratic corollary requires a degree-2 system");
    QuadraticVerdict v;
    const BivariatePoly div = divergence(sys);
    if (div.is_zero()) {
        v.verdict = "no limit cycles";
        v.branch = "Div identically zero (Hamiltonian)";
        return v;
    }
    if (div.is_constant()) {
        v.verdict = "no limit cycles";
        v.branch = "Div a nonzero constant (Bendixson)";
        return v;
    }
    // Div has degree exactly 1: a straight line
    if (!contacts)
        throw Error(errc::usage, "quadratic_verdict needs a contact report when Div is a line");
    const int n_contacts = contacts->N;
    if (n_contacts == 0) {
        v.verdict = "no limit cycles";
        v.branch = "Div a line with no contact points";
        return v;
    }
    v.verdict = "bound 4";
    v.branch = "Div a line with " + std::to_string(n_contacts) + " contact point(s)";
    v.bound = 4;
    return v;
}

namespace {

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

double point_polyline_distance(Vec2 p, const std::vector<Vec2>& line) {
    double best = norm(p - line.front());
    for (std::size_t i = 0; i + 1 < line.size(); ++i)
        best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
    return best;
}

}  // namespace

BehaviorCensus behavior_census(const DivCurveReport& report, const ContactReport& contacts) {
    if (!report.generic)
        throw Error(errc::not_generic,
                    "behavior census requires a divergence curve without singular points");

    const double cell_diag =
        std::hypot(report.window.width() / report.grid, report.window.height() / report.grid);
    const double tol = 2.0 * cell_diag;

    std::vector<int> per_component(report.components.size(), 0);
    for (const auto& root : contacts.points) {
        if (!root.simple) continue;
        int best = -1;
        double best_dist = tol;
        for (std::size_t i = 0; i < report.components.size(); ++i) {
            const double d = point_polyline_distance(root.point, report.components[i].polyline);
            if (d <= best_dist) {
                best_dist = d;
                best = (int)i;
            }
        }
        if (best < 0)
            throw Error(errc::unassigned_contact,
                        "contact point (" + std::to_string(root.point.x) + ", " +
                            std::to_string(root.point.y) + ") lies farther than " +
                            std::to_string(tol) + " from every traced component");
        per_component[best]++;
    }

    BehaviorCensus census{0, {}};
    for (std::size_t i = 0; i < report.components.size(); ++i) {
        const auto& comp = report.components[i];
        const int x = per_component[i];
        int behaviors;
        if (comp.kind == ComponentKind::LineType)
            behaviors = x + 1;
        else
            behaviors = x >= 1 ? x : 1;
        census.per_component.push_back(BehaviorBreakdown{
            (int)i, comp.kind, x, behaviors, comp.kind == ComponentKind::LineType});
        census.total += behaviors;
    }
    return census;
}

BoundReport bound_report(const PlanarSystem& sys, const DivCurveReport& curve,
                         const ContactReport& contacts, const BehaviorCensus& census) {
    BoundReport rep;
    rep.n = sys.degree;
    rep.M = curve.M;
    rep.N = contacts.N;
    rep.master_bound = master_bound(rep.n, rep.M, rep.N);
    rep.quartic_bound = quartic_bound(rep.n);
    rep.harnack_cap_on_M = harnack_max_components(rep.n - 1);
    rep.bezout_cap_on_N = bezout_bound(2 * (rep.n - 1), rep.n - 1);
    rep.behaviors = census.total;
    rep.notes = curve.warnings;
    if (rep.n - 1 == 1)
        rep.notes.push_back("Harnack cap for a degree-1 divergence curve set to 1 (a line has "
                            "one component)");
    if (rep.M > rep.harnack_cap_on_M)
        rep.notes.push_back(
            "window census M exceeds the composition cap on M; the cap follows the bound "
            "arithmetic's parity convention and is reported side by side, never substituted");
    if (!contacts.undecided.empty())
        rep.notes.push_back("contact census not certified: " +
                            std::to_string(contacts.undecided.size()) + " undecided box(es)");
    for (const auto& bd : census.per_component)
        if (bd.kind == ComponentKind::LineType)
            rep.notes.push_back("component " + std::to_string(bd.component_id) +
                                ": boundary-terminated arcs counted without asserting whether "
                                "they reach infinity");
    return rep;
}

}  // namespace hilbert16
