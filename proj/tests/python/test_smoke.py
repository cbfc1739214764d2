"""Smoke tests for the _hilbert16 extension module."""

import math

import pytest

import _hilbert16 as h16


def vdp():
    return h16.PlanarSystem("y - (x^3/3 - x)", "-x")


def cubic_circle():
    return h16.PlanarSystem("-y + x*(1 - x^2 - y^2)", "x + y*(1 - x^2 - y^2)")


def test_parse_and_eval():
    p = h16.BivariatePoly.parse("2*x*y^2 + x")
    assert p.degree == 3
    assert p.eval(2.0, 3.0) == pytest.approx(38.0)
    assert p.terms[(1, 2)] == 2.0
    with pytest.raises(h16.Hilbert16Error):
        h16.BivariatePoly.parse("2x")


def test_divergence_and_contacts():
    sys = vdp()
    div = h16.divergence(sys)
    assert div.eval(0.0, 0.0) == pytest.approx(1.0)
    assert div.eval(1.0, 5.0) == pytest.approx(0.0)
    rep = h16.contact_points(sys, h16.Box2.square(-3, 3))
    assert rep.N == 2
    assert rep.certified
    pts = sorted(r.point for r in rep.points)
    assert pts[0][0] == pytest.approx(-1.0, abs=1e-9)
    assert pts[0][1] == pytest.approx(2.0 / 3.0, abs=1e-9)


def test_divergence_curve_census():
    rep = h16.div_curve_report(vdp(), h16.Box2.square(-4, 4), grid=128)
    assert rep.M == 2
    assert rep.generic
    kinds = {c.kind for c in rep.components}
    assert kinds == {"line"}


def test_bound_formulas():
    assert h16.quartic_bound(2) == 4
    assert h16.quartic_bound(3) == 33
    assert h16.quartic_bound(4) == 181
    assert h16.master_bound(3, 2, 2) == 17
    assert h16.lienard_bound(3, 1) == 17
    for n in range(2, 21):
        composed = h16.master_bound(
            n, h16.harnack_max_components(n - 1), h16.bezout_bound(2 * (n - 1), n - 1)
        )
        assert h16.quartic_bound(n) == composed


def test_energy_and_descent():
    sys = cubic_circle()
    circle = h16.DiscretizedPath.circle(128, 1.0)
    assert h16.energy_E0(circle, sys) <= 1e-20
    regular, winding = h16.winding_number(circle)
    assert regular and winding == 1

    out = h16.descend(
        h16.DiscretizedPath.circle(128, 1.3),
        sys,
        grad_tol=1e-9,
        h2_precondition=True,
        max_iters=30000,
    )
    assert out["energy"] <= 1e-10
    radii = [math.hypot(x, y) for x, y in zip(out["path"].x, out["path"].y)]
    assert max(abs(r - 1.0) for r in radii) <= 1e-3


def test_oracle_cycle():
    orbit = h16.find_limit_cycle(cubic_circle(), (1.0, 0.0), (0.0, 1.0), (1.3, 0.0))
    assert orbit.period == pytest.approx(2.0 * math.pi, abs=1e-6)
    assert h16.cycle_energy_check(cubic_circle(), orbit, 128) <= 1e-10


def test_perturb_restores_genericity():
    ham = h16.PlanarSystem("-y", "x")
    assert h16.divergence(ham).degree is None  # identically zero
    wiggled = h16.perturb(ham, 1e-3, seed=1)
    assert h16.divergence(wiggled).degree is not None
