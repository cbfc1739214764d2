#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hilbert16/implicit_curve.hpp"
#include "hilbert16/solver2d.hpp"

namespace hilbert16 {

// Component cap for a degree-k real algebraic curve as applied in the
// quartic-bound composition: k odd -> 1+(k-1)(k-2)/2, k even -> (k-1)(k-2)/2,
// k=0 -> 0. In particular k=1 gives 1 (a line has one component).
long long harnack_max_components(int k);

// d1 * d2, the cap on isolated common zeros.
long long bezout_bound(long long d1, long long d2);

// 1 + (n-1)^2 (M+N); requires degree n >= 2.
long long master_bound(int n, long long M, long long N);

// The explicit degree-four bound on the Hilbert number, exact in integer
// arithmetic (throws NonInteger if the half-integer expression fails to be
// integral, which would indicate an internal inconsistency).
long long quartic_bound(int n);

// 1 + 2(max(p,q)-1)^2 (p-1) for Lienard systems x' = y - f(x), y' = g(x)
// with deg f = p, deg g = q.
long long lienard_bound(int p, int q);

struct QuadraticVerdict {
    std::string verdict;        // "no limit cycles" or "bound 4"
    std::string branch;         // which corollary branch fired
    std::optional<int> bound;   // set on the bound branch
    int hilbert_h2 = 4;         // class-level value, always reported
};

// The quadratic-system corollary: Div constant/zero -> no limit cycles;
// Div a line with contact points -> at most 4; no contact points -> none.
// `contacts` may be absent only when Div is constant.
QuadraticVerdict quadratic_verdict(const PlanarSystem& sys,
                                   const std::optional<ContactReport>& contacts);

struct BehaviorBreakdown {
    int component_id;
    ComponentKind kind;
    int contacts;
    int behaviors;
    bool boundary_terminated;  // line-type arcs truncated by the window
};

struct BehaviorCensus {
    int total;
    std::vector<BehaviorBreakdown> per_component;
};

// Counts admissible asymptotic behaviors: a line-type component with x
// contacts contributes x+1, an oval with y >= 1 contacts contributes y, an
// oval without contacts contributes 1. Total never exceeds M + N.
BehaviorCensus behavior_census(const DivCurveReport& report, const ContactReport& contacts);

struct BoundReport {
    int n;
    int M;
    int N;
    long long master_bound;
    long long quartic_bound;
    long long harnack_cap_on_M;
    long long bezout_cap_on_N;
    int behaviors;
    std::vector<std::string> notes;
};

BoundReport bound_report(const PlanarSystem& sys, const DivCurveReport& curve,
                         const ContactReport& contacts, const BehaviorCensus& census);

}  // namespace hilbert16
