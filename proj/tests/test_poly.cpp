#include <doctest.h>

#include <cmath>
#include <random>

#include "hilbert16/poly.hpp"

using namespace hilbert16;

namespace {

// shared fixtures
PlanarSystem van_der_pol() {
    return PlanarSystem(parse_poly("y - (x^3/3 - x)"), parse_poly("-x"));
}

PlanarSystem cubic_circle() {
    return PlanarSystem(parse_poly("-y + x*(1 - x^2 - y^2)"), parse_poly("x + y*(1 - x^2 - y^2)"));
}

double rnd(std::mt19937_64& rng, double lo, double hi) {
    const double u = (rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

BivariatePoly random_poly(std::mt19937_64& rng, int max_deg, int max_terms) {
    BivariatePoly p;
    const int terms = 1 + int(rng() % max_terms);
    for (int t = 0; t < terms; ++t) {
        const int i = int(rng() % (max_deg + 1));
        const int j = int(rng() % (max_deg + 1 - i));
        p.add_term(i, j, rnd(rng, -10.0, 10.0));
    }
    return p;
}

}  // namespace

TEST_CASE("parse: van der Pol P") {
    const BivariatePoly p = parse_poly("y - (x^3/3 - x)");
    CHECK(p.terms().size() == 3);
    CHECK(p.coeff(0, 1) == 1.0);
    CHECK(p.coeff(3, 0) == -(1.0 / 3.0));
    CHECK(p.coeff(1, 0) == 1.0);
}

TEST_CASE("parse: zero polynomial and degree marker") {
    const BivariatePoly p = parse_poly("0");
    CHECK(p.is_zero());
    CHECK(!p.degree().has_value());  // "minus infinity"
    CHECK(p.to_string() == "0");
}

TEST_CASE("parse: direct grammar reading") {
    const BivariatePoly p = parse_poly("2*x*y^2 + x");
    CHECK(p.coeff(1, 2) == 2.0);
    CHECK(p.coeff(1, 0) == 1.0);
    CHECK(p.degree() == 3);
}

TEST_CASE("parse: rational literals and whitespace") {
    CHECK(parse_poly("1/3").coeff(0, 0) == 1.0 / 3.0);
    CHECK(parse_poly(" 2 * x ^ 2 ").coeff(2, 0) == 2.0);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse_poly("2x"), ParseError);          // implicit multiplication
    CHECK_THROWS_AS(parse_poly("x + z"), ParseError);       // unknown identifier
    CHECK_THROWS_AS(parse_poly("x^999999999"), ParseError); // exponent overflow
    CHECK_THROWS_AS(parse_poly("x/(y)"), ParseError);       // non-constant divisor
    CHECK_THROWS_AS(parse_poly("x/0"), ParseError);
    CHECK_THROWS_AS(parse_poly("(x"), ParseError);
    try {
        parse_poly("x + z");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
        CHECK(e.code() == errc::unknown_identifier);
    }
    try {
        parse_poly("x^999999999");
    } catch (const ParseError& e) {
        CHECK(e.code() == errc::exponent_overflow);
    }
}

TEST_CASE("differentiate: power rule and constants") {
    const BivariatePoly p = parse_poly("x^3/3 - x");
    const BivariatePoly dx = p.derivative(Var::X);
    CHECK(dx.coeff(2, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dx.coeff(0, 0) == -1.0);
    CHECK(parse_poly("5").derivative(Var::Y).is_zero());
}

TEST_CASE("differentiate: mixed partials commute") {
    const BivariatePoly p = parse_poly("x^2*y");
    const BivariatePoly dxy = p.derivative(Var::X).derivative(Var::Y);
    const BivariatePoly dyx = p.derivative(Var::Y).derivative(Var::X);
    CHECK(dxy == dyx);
    CHECK(dxy.coeff(1, 0) == 2.0);
}

TEST_CASE("differentiate: linearity, exact coefficient-wise") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const BivariatePoly p = random_poly(rng, 6, 8);
        const BivariatePoly q = random_poly(rng, 6, 8);
        const double a = rnd(rng, -3, 3), b = rnd(rng, -3, 3);
        const BivariatePoly lhs = (p.scaled(a) + q.scaled(b)).derivative(Var::X);
        const BivariatePoly rhs = p.derivative(Var::X).scaled(a) + q.derivative(Var::X).scaled(b);
        for (const auto& [key, c] : lhs.terms())
            CHECK(c == doctest::Approx(rhs.coeff(key.first, key.second)).epsilon(1e-14));
        CHECK(lhs.terms().size() == rhs.terms().size());
    }
}

TEST_CASE("divergence: van der Pol gives 1 - x^2") {
    const BivariatePoly div = divergence(van_der_pol());
    CHECK(div.coeff(0, 0) == 1.0);
    CHECK(div.coeff(2, 0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(div.terms().size() == 2);
}

TEST_CASE("divergence: Hamiltonian field vanishes") {
    const PlanarSystem sys(parse_poly("-y"), parse_poly("x"));
    CHECK(divergence(sys).is_zero());
}

TEST_CASE("divergence: cubic circle system") {
    const BivariatePoly div = divergence(cubic_circle());
    CHECK(div.coeff(0, 0) == 2.0);
    CHECK(div.coeff(2, 0) == -4.0);
    CHECK(div.coeff(0, 2) == -4.0);
    CHECK(div.terms().size() == 3);
}

TEST_CASE("divergence is linear in the system") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const BivariatePoly p1 = random_poly(rng, 5, 6), p2 = random_poly(rng, 5, 6);
        const BivariatePoly q1 = random_poly(rng, 5, 6), q2 = random_poly(rng, 5, 6);
        const BivariatePoly lhs = divergence(PlanarSystem(p1 + p2, q1 + q2));
        const BivariatePoly rhs =
            divergence(PlanarSystem(p1, q1)) + divergence(PlanarSystem(p2, q2));
        for (const auto& [key, c] : lhs.terms())
            CHECK(c == doctest::Approx(rhs.coeff(key.first, key.second)).epsilon(1e-13));
    }
}

TEST_CASE("contact system: van der Pol") {
    auto [first, second] = contact_system(van_der_pol());
    // first = (y - x^3/3 + x) * (-2x)
    CHECK(first.coeff(1, 1) == -2.0);
    CHECK(first.coeff(4, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(first.coeff(2, 0) == -2.0);
    CHECK(second.coeff(0, 0) == 1.0);
    CHECK(second.coeff(2, 0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("contact system: Hamiltonian is degenerate downstream") {
    const PlanarSystem sys(parse_poly("-y"), parse_poly("x"));
    auto [first, second] = contact_system(sys);
    CHECK(second.is_zero());  // Div identically zero, flagged downstream
}

TEST_CASE("contact system: cubic circle") {
    auto [first, second] = contact_system(cubic_circle());
    // first = -8(x^2+y^2)(1-x^2-y^2)
    const BivariatePoly expect =
        parse_poly("0 - 8*(x^2 + y^2)*(1 - x^2 - y^2)");
    for (const auto& [key, c] : expect.terms())
        CHECK(first.coeff(key.first, key.second) == doctest::Approx(c).epsilon(1e-14));
    CHECK(first.terms().size() == expect.terms().size());
    CHECK(second.coeff(0, 0) == 2.0);
}

TEST_CASE("contact system first polynomial equals F.grad(Div) pointwise") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 4; ++rep) {
        const PlanarSystem sys(random_poly(rng, 4, 8), random_poly(rng, 4, 8));
        auto [first, second] = contact_system(sys);
        const BivariatePoly div = divergence(sys);
        const BivariatePoly div_x = div.derivative(Var::X);
        const BivariatePoly div_y = div.derivative(Var::Y);
        for (int k = 0; k < 25; ++k) {
            const double x = rnd(rng, -2, 2), y = rnd(rng, -2, 2);
            const double route_a = first.eval(x, y);
            const double route_b =
                sys.P.eval(x, y) * div_x.eval(x, y) + sys.Q.eval(x, y) * div_y.eval(x, y);
            const double scale = std::max({1e-30, std::abs(route_a), std::abs(route_b)});
            CHECK(std::abs(route_a - route_b) / scale <= 1e-12);
        }
    }
}

TEST_CASE("eval examples") {
    const BivariatePoly p = parse_poly("1 - x^2");
    CHECK(p.eval(1.0, 7.0) == 0.0);
    const Interval enc = p.eval(Box2(0, 2, 0, 1));
    CHECK(enc.lo <= -3.0);
    CHECK(enc.hi >= 1.0);
    CHECK(enc.lo >= -3.1);  // not absurdly loose
    CHECK(enc.hi <= 1.1);
}

TEST_CASE("eval_interval encloses point values on degenerate boxes") {
    std::mt19937_64 rng(14);
    for (int rep = 0; rep < 100; ++rep) {
        const BivariatePoly p = random_poly(rng, 6, 10);
        const double x = rnd(rng, -4, 4), y = rnd(rng, -4, 4);
        const double w = 1e-13;
        const Interval enc = p.eval(Box2(x - w, x + w, y - w, y + w));
        CHECK(enc.contains(p.eval(x, y)));
    }
}

TEST_CASE("interval soundness: 1000 random (poly, box, point) triples") {
    std::mt19937_64 rng(15);
    for (int rep = 0; rep < 1000; ++rep) {
        const BivariatePoly p = random_poly(rng, 8, 12);
        const double x0 = rnd(rng, -5, 4), y0 = rnd(rng, -5, 4);
        const double wx = rnd(rng, 1e-6, 1.5), wy = rnd(rng, 1e-6, 1.5);
        const Box2 box(x0, x0 + wx, y0, y0 + wy);
        const double px = rnd(rng, box.x_lo, box.x_hi);
        const double py = rnd(rng, box.y_lo, box.y_hi);
        const Interval enc = p.eval(box);
        CHECK(enc.contains(p.eval(px, py)));
    }
}

TEST_CASE("parser round-trip is a fixed point on 1000 random polynomials") {
    std::mt19937_64 rng(16);
    for (int rep = 0; rep < 1000; ++rep) {
        const BivariatePoly p = random_poly(rng, 8, 14);
        const BivariatePoly q = parse_poly(p.to_string());
        CHECK(q == p);  // bit-identical coefficients
    }
}

TEST_CASE("perturb: delta 0 is the identity, same seed repeats") {
    const PlanarSystem sys = van_der_pol();
    const PlanarSystem same = perturb(sys, 0.0, 42);
    CHECK(same.P == sys.P);
    CHECK(same.Q == sys.Q);
    const PlanarSystem a = perturb(sys, 1e-3, 7);
    const PlanarSystem b = perturb(sys, 1e-3, 7);
    CHECK(a.P == b.P);
    CHECK(a.Q == b.Q);
    const PlanarSystem c = perturb(sys, 1e-3, 8);
    CHECK(!(a.P == c.P));
}

TEST_CASE("perturb: restores genericity of a Hamiltonian system") {
    const PlanarSystem ham(parse_poly("-y"), parse_poly("x"));
    CHECK(divergence(ham).is_zero());
    const PlanarSystem wiggled = perturb(ham, 1e-3, 1);
    CHECK(!divergence(wiggled).is_zero());
    CHECK(wiggled.degree == ham.degree);  // degree not increased
}

TEST_CASE("system degree convention and not-both-zero invariant") {
    CHECK(PlanarSystem(parse_poly("x^3"), parse_poly("y")).degree == 3);
    CHECK(PlanarSystem(parse_poly("y"), parse_poly("x^5")).degree == 5);
    CHECK_THROWS_AS(PlanarSystem(parse_poly("0"), parse_poly("0")), Error);
}
