#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "hilbert16/geom.hpp"
#include "hilbert16/interval.hpp"

namespace hilbert16 {

enum class Var { X, Y };

// Sparse bivariate real polynomial in canonical form: no stored coefficient
// is exactly zero. Immutable by convention once built; all operations return
// new values.
class BivariatePoly {
public:
    using Key = std::pair<int, int>;  // (i, j) for x^i y^j
    using TermMap = std::map<Key, double>;

    BivariatePoly() = default;

    static BivariatePoly constant(double c);
    static BivariatePoly monomial(int i, int j, double c);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    // Degree of the zero polynomial is "minus infinity", encoded as nullopt.
    std::optional<int> degree() const;

    double coeff(int i, int j) const;
    void add_term(int i, int j, double c);  // accumulates; erases exact zeros

    double eval(double x, double y) const;
    Interval eval(const Box2& box) const;

    BivariatePoly derivative(Var v) const;

    BivariatePoly operator+(const BivariatePoly& o) const;
    BivariatePoly operator-(const BivariatePoly& o) const;
    BivariatePoly operator*(const BivariatePoly& o) const;
    BivariatePoly scaled(double s) const;

    bool operator==(const BivariatePoly& o) const { return terms_ == o.terms_; }

    // Canonical text form; parse(to_string(p)) == p bit-exactly.
    std::string to_string() const;

private:
    TermMap terms_;
};

// Parser for the expression grammar documented in the README (x, y, decimal
// and rational literals, + - * / ^, parentheses; no implicit multiplication).
BivariatePoly parse_poly(const std::string& text);

// The planar system x' = P(x,y), y' = Q(x,y) of degree n = max(deg P, deg Q).
struct PlanarSystem {
    BivariatePoly P;
    BivariatePoly Q;
    int degree;

    PlanarSystem(BivariatePoly p, BivariatePoly q);
};

// Div = P_x + Q_y.
BivariatePoly divergence(const PlanarSystem& sys);

// The contact-point system: first polynomial P(P_xx+Q_yx) + Q(P_xy+Q_yy)
// (equivalently F.grad(Div)), second polynomial Div itself.
std::pair<BivariatePoly, BivariatePoly> contact_system(const PlanarSystem& sys);

// Adds an independent uniform draw from [-delta, delta] to every coefficient
// (i, j) with i + j <= n of both P and Q; deterministic in seed. delta = 0
// returns the system unchanged.
PlanarSystem perturb(const PlanarSystem& sys, double delta, std::uint64_t seed);

}  // namespace hilbert16
