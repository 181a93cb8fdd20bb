import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from oracles import A, B, C, LAM, MU, U, Z, bb3_sym, chart_sym, count_real_roots_numpy, phi_sign_changes, poly_coeffs
from phase_sentinel.bipoly import BiPoly
from phase_sentinel.core import CubicParams
from phase_sentinel.compactify import (
    MAX_BLOWUP_DEPTH,
    ChartSystem,
    DirectionTable,
    boundary_pair,
    briot_bouquet,
    chart_transform,
    classify_infinity,
    disc_project,
    infinity_equilibria,
    infinity_inventory,
    phi_analysis,
    phi_critical,
    polar_directions,
    polynomial_boundary,
    tsign,
    verify_chart_consistency,
)
from phase_sentinel.errors import DomainError, UnhandledCase


def s61(lam, mu, a, b, c):
    return CubicParams("sys61", lam, mu, a, b, c)


def s71(mu, a, b, c):
    return CubicParams("sys71", mu=mu, a=a, b=b, c=c)


def labels(p):
    return sorted(e.label for e in infinity_equilibria(p))


def equilibrium(p, label):
    return next(e for e in infinity_equilibria(p) if e.label == label)


# ---------------------------------------------------------------------------
# charts
# ---------------------------------------------------------------------------


def test_chart_values():
    assert chart_transform(s61(2, 1, 1, 1, 1), "U")(0.0, 1.0) == (-3.0, 0.0)
    assert chart_transform(s61(2, 1, 1, 1, 1), "V")(0.0, 1.0)[0] == 1.0
    assert chart_transform(s71(1, 1, 1, 1), "U")(0.0, 1.0)[0] == -1.0


def test_chart_time_exponent():
    assert chart_transform(s61(1, 1, 1, 1, 1), "U").time_exponent == 2


def test_chart_unknown():
    with pytest.raises(DomainError):
        chart_transform(s61(1, 1, 1, 1, 1), "W")


@pytest.mark.parametrize("family", ["sys61", "sys71"])
@pytest.mark.parametrize("chart", ["U", "V"])
@pytest.mark.parametrize("vals", [(1.0, 0.5, 2.0, -3.0, 0.25), (0.0, 0.0, 0.0, 1.0, 0.0), (3.0, 2.0, 1.5, 0.5, 4.0)])
def test_chart_matches_symbolic_chain_rule(family, chart, vals):
    lam, mu, a, b, c = vals
    p = s61(lam, mu, a, b, c) if family == "sys61" else s71(mu, a, b, c)
    cs = chart_transform(p, chart)
    s, P, Q = chart_sym(family, chart)
    sub = {LAM: lam, MU: mu, A: a, B: b, C: c}
    for got, ref in ((cs.P, P), (cs.Q, Q)):
        want = {k: float(v) for k, v in poly_coeffs(ref.subs(sub), s, Z).items() if float(v) != 0.0}
        have = {k: v for k, v in got.c.items() if v != 0.0}
        assert have.keys() == want.keys()
        for k in want:
            assert have[k] == pytest.approx(want[k], abs=1e-14)


@pytest.mark.parametrize("p", [s61(1, 1, 1, 1, 1), s61(0.3, 2.0, 0.0, -4.0, 1.2), s71(1, 2, -1, 3), s71(0, 0, 1, 0)])
def test_chart_consistency(p):
    assert verify_chart_consistency(p, 100) < 1e-10


def test_chart_consistency_negative_control():
    p = s61(1, 1, 1, 1, 1)
    cs = chart_transform(p, "U")
    bad = dict(cs.P.c)
    bad[(1, 0)] = bad.get((1, 0), 0.0) + 1e-3
    corrupted = ChartSystem("U", BiPoly(bad), cs.Q, time_exponent=cs.time_exponent)
    assert verify_chart_consistency(p, 100, chart_sys=corrupted) > 1e-6


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 5), st.floats(0.1, 5), st.floats(0, 5), st.sampled_from([1, -1]))
def test_chart_consistency_property(lam, mu, a, bm, c, sg):
    assert verify_chart_consistency(s61(lam, mu, a, sg * bm, c), 20) < 1e-10
    assert verify_chart_consistency(s71(mu, a, sg * bm, c), 20) < 1e-10


# ---------------------------------------------------------------------------
# Phi
# ---------------------------------------------------------------------------


def test_phi_unique_root():
    pd = phi_analysis(1, 1, 1)
    assert pd.roots == pytest.approx((-1.0,), abs=1e-14)


def test_phi_one_root_with_critical_points():
    pd = phi_analysis(1, 3, 1)
    assert pd.rho1 == pytest.approx((-3 - math.sqrt(6)) / 3, abs=1e-14)
    assert pd.rho2 == pytest.approx((-3 + math.sqrt(6)) / 3, abs=1e-14)
    assert pd.phi_rho1 > 0 and pd.phi_rho2 > 0
    assert pd.phi_rho1 == pytest.approx(3.09, abs=0.01) and pd.phi_rho2 == pytest.approx(0.91, abs=0.01)
    (r,) = pd.roots
    real = [z.real for z in np.roots([1, 3, 1, 1]) if abs(z.imag) < 1e-9]
    assert r == pytest.approx(real[0], abs=1e-12) and r == pytest.approx(-2.77, abs=0.01)


def test_phi_three_roots():
    # (u + 2)(u + 1)(u + 1/2) = u^3 + 3.5 u^2 + 3.5 u + 1
    assert np.allclose(np.polymul(np.polymul([1, 2], [1, 1]), [1, 0.5]), [1, 3.5, 3.5, 1])
    assert phi_analysis(3.5, 3.5, 1).roots == pytest.approx((-2.0, -1.0, -0.5), abs=1e-12)


def test_phi_double_root():
    # 2 (u + 1)^2 (u + 1/2)
    pd = phi_analysis(4, 5, 2)
    assert pd.roots == pytest.approx((-1.0, -0.5), abs=1e-12) and pd.multiplicities == (2, 1)
    assert pd.signs["phi(rho1)"] == 0


def test_phi_quadratic():
    assert phi_analysis(3, 1, 0).roots == pytest.approx(sorted([(-3 - math.sqrt(5)) / 2, (-3 + math.sqrt(5)) / 2]))
    assert phi_analysis(1, 1, 0).roots == ()


def test_phi_negative_c():
    with pytest.raises(DomainError):
        phi_analysis(1, 1, -1)


@settings(max_examples=200, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.01, 10))
def test_phi_root_count_oracle(a, b, c):
    pd = phi_analysis(a, b, c)
    if any(m > 1 for m in pd.multiplicities):
        return
    assert len(pd.roots) == phi_sign_changes(a, b, c)
    for r in pd.roots:
        assert abs(pd.phi(r)) <= 1e-9 * (abs(c * r**3) + abs(b * r * r) + abs(a * r) + 1)


@settings(max_examples=200, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(0.01, 10))
def test_phi_critical_points(a, b, c):
    crit = phi_critical(a, b, c)
    if crit["rho1"] is None:
        assert b * b - 3 * a * c <= 1e-12 * max(1.0, b * b + 3 * a * c)
        return
    r1, r2 = crit["rho1"], crit["rho2"]
    assert r1 < r2
    for r in (r1, r2):
        assert abs(3 * c * r * r + 2 * b * r + a) <= 1e-10 * max(1.0, 3 * c * r * r + 2 * abs(b * r) + abs(a))


def test_numpy_root_counter_agrees_on_examples():
    assert count_real_roots_numpy([1, 1, 1, 1]) == 1
    assert count_real_roots_numpy([1, 3.5, 3.5, 1]) == 3


# ---------------------------------------------------------------------------
# equilibria at infinity
# ---------------------------------------------------------------------------


def test_equilibria_examples():
    assert labels(s61(1, 1, 3, 1, 0)) == ["A", "B", "D"]
    assert labels(s71(1, 0, 1, 0)) == ["D", "G"]
    eqs = infinity_equilibria(s61(1, 1, 1, 1, 1))
    assert [e.label for e in eqs] == ["E", "D"]
    assert eqs[0].position[0] == pytest.approx(-1.0, abs=1e-14)


def test_equilibria_sys71_cases():
    assert labels(s71(1, 1, 1, 0)) == ["D", "G", "R"]
    assert labels(s71(1, 0, 1, 1)) == ["D", "G", "S"]
    assert labels(s71(1, 1, 2, 1)) == ["D", "G", "T"]
    assert labels(s71(1, 1, 3, 1)) == ["D", "G", "P1", "P2"]
    assert labels(s71(1, 1, 1, 1)) == ["D", "G"]


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 5), st.floats(0.05, 5), st.floats(0.05, 5), st.sampled_from([1, -1]))
def test_equilibria_lie_on_phi(lam, mu, a, bm, c, sg):
    p = s61(lam, mu, a, sg * bm, c)
    pd = phi_analysis(p.a, p.b, p.c)
    for e in infinity_equilibria(p):
        assert e.position[1] == 0.0
        if e.chart == "U":
            u = e.position[0]
            assert abs(pd.phi(u)) <= 1e-8 * (abs(c * u**3) + abs(p.b * u * u) + abs(a * u) + 1)


def test_classify_examples():
    assert classify_infinity(equilibrium(s61(1, 1, 1, 1, 1), "D"), s61(1, 1, 1, 1, 1)).kind == "unstable-node"
    p = s61(1, 1, 3, 1, 0)
    assert classify_infinity(equilibrium(p, "A"), p).kind == "unstable-node"
    assert classify_infinity(equilibrium(p, "B"), p).kind == "saddle"
    q = s61(1, 1, 3, -1, 0)
    assert classify_infinity(equilibrium(q, "A"), q).kind == "saddle"
    assert classify_infinity(equilibrium(q, "B"), q).kind == "saddle"


def test_classify_c1_table():
    p = s61(1, 1, 2, 1, 0)  # b = a^2/4, u0 = -1, gamma = 1
    t = classify_infinity(equilibrium(p, "C"), p)
    assert isinstance(t, DirectionTable) and t.name == "C1"
    assert [(r.theta, r.count, r.sense) for r in t.rows] == [(0.0, 1, "+"), (math.pi, 1, "-")]


def test_classify_three_root_kinds():
    p = s61(1, 1, 3.5, 3.5, 1)
    kinds = [getattr(e.kind, "kind", None) for e in infinity_inventory(p)]
    assert kinds == ["saddle", "unstable-node", "saddle", "unstable-node"]


def test_unhandled_depth():
    cs = ChartSystem("U", BiPoly({(1, 0): 1.0}), BiPoly({(0, 1): -1.0}), depth=MAX_BLOWUP_DEPTH)
    with pytest.raises(UnhandledCase):
        briot_bouquet(cs, "z=zu")
    with pytest.raises(DomainError):
        briot_bouquet(cs, "diagonal")


DIRECTION_CASES = {
    "C1": (s61(1, 1, 2, 1, 0), "C"),
    "K1": (s61(1, 3, 4, 5, 2), "K"),  # Phi = 2 (u + 1)^2 (u + 1/2), rho1 = -1, gamma = -1
    "T1": (s71(1, 1, -2, 1), "T"),
    "D1": (s61(1, 1, 2, 1, 0), "D"),
    "G3": (s71(1, 0, 1, 0), "G"),
}


def _chart_run(cs, q0, sense, t_max, stop_r):
    sg = 1.0 if sense == "+" else -1.0

    def fun(t, q):
        return [sg * v for v in cs(q[0], q[1])]

    def out(t, q):
        return math.hypot(q[0], q[1]) - stop_r

    out.terminal = True
    sol = solve_ivp(fun, (0.0, t_max), q0, method="LSODA", rtol=1e-10, atol=1e-14, events=out)
    return np.hypot(sol.y[0], sol.y[1]), sol.status


@pytest.mark.parametrize("name", sorted(DIRECTION_CASES))
def test_direction_table_senses(name):
    """Seeds 1e-3 out along each tabulated direction reach 1e-5 in the stated
    time sense and leave a 0.1 ball in the opposite one."""
    p, lab = DIRECTION_CASES[name]
    eq = equilibrium(p, lab)
    table = classify_infinity(eq, p)
    assert table.name == name
    cs = chart_transform(p, eq.chart).shifted(eq.position[0], 0.0)
    for row in table.rows:
        q0 = [1e-3 * math.cos(row.theta), 1e-3 * math.sin(row.theta)]
        d, _ = _chart_run(cs, q0, row.sense, 1e6, 0.1)
        assert d[-1] < 1e-5
        flip = "-" if row.sense == "+" else "+"
        d, status = _chart_run(cs, q0, flip, 1e4, 0.1)
        assert status == 1


def _node_or_saddle(cs, n=16, r0=1e-3):
    """'node' when every seed on a small circle converges in one time sense."""
    for sg in ("+", "-"):
        ok = True
        for k in range(n):
            th = 2 * math.pi * (k + 0.5) / n
            d, status = _chart_run(cs, [r0 * math.cos(th), r0 * math.sin(th)], sg, 1e6, 20 * r0)
            if status == 1 or d[-1] > 1.01 * d.min():
                ok = False
                break
        if ok:
            return "node", sg
    return "saddle", None


@pytest.mark.parametrize("b", [3.0, -3.0])
def test_p1_p2_by_integration(b):
    """The shifted chart has z' = -(u + u8) z^3, so the centre-manifold term is
    -u8 z^3; integration settles which of P1, P2 is the node."""
    p = s71(1, 1, b, 1)
    got = {}
    for lab in ("P1", "P2"):
        eq = equilibrium(p, lab)
        cs = chart_transform(p, "U").shifted(eq.position[0], 0.0)
        u8 = eq.position[0]
        assert cs.Q.coeff(0, 3) == pytest.approx(-u8, abs=1e-12) and cs.Q.coeff(1, 3) == -1.0
        got[lab] = (classify_infinity(eq, p).kind, _node_or_saddle(cs))
    node_sense = "-" if b > 0 else "+"
    assert got["P1"] == ("unstable-node" if b > 0 else "stable-node", ("node", node_sense))
    assert got["P2"] == ("saddle", ("saddle", None))


# ---------------------------------------------------------------------------
# blow-ups
# ---------------------------------------------------------------------------


def _y1_at_c():
    # c = 0, b = a^2/4 -> single equilibrium C at u0 = -a/(2b); a = 2, b = 1, mu = 3, lambda = 1
    p = s61(1, 3, 2, 1, 0)
    return chart_transform(p, "U").shifted(equilibrium(p, "C").position[0], 0.0)


def test_bb3_coefficients_exact():
    y1 = _y1_at_c()
    u0, gam, Pn, Qn = bb3_sym()
    sub = {u0: -1, MU: 3, LAM: 1, B: 1}
    assert gam.subs(sub) == -1
    bb = briot_bouquet(y1, "z=zu")
    for got, ref in ((bb.P, Pn), (bb.Q, Qn)):
        want = {k: float(v) for k, v in poly_coeffs(sp.expand(ref.subs(sub)), U, sp.Symbol("w", real=True)).items()}
        assert {k: v for k, v in got.c.items() if v} == want
    assert bb.quadrant_map == {1: 1, 2: 3, 3: 2, 4: 4}
    assert bb.time_factor == "s^1" and bb.depth == 1


def test_bb3_symbolic_form():
    """The symbolic z = w u blow-up of (y1) is the displayed (bb3) system."""
    u0, gam, Pn, Qn = bb3_sym()
    w = sp.Symbol("w", real=True)
    bb3_P = -(w**2) * U * (U**2 + (MU + 2 * u0) * U + gam) - B * U
    bb3_Q = (MU + u0) * w**3 * U + gam * w**3 + B * w
    assert sp.expand(Pn - bb3_P) == 0
    assert sp.expand(Qn - bb3_Q) == 0


def test_bb3_axis_equilibria():
    bb = briot_bouquet(_y1_at_c(), "z=zu")
    ws = [-1.0, 0.0, 1.0]  # 0 and +-sqrt(-b / gamma)
    for w in ws:
        assert bb(0.0, w) == (0.0, 0.0)
    axis = [bb.Q.coeff(0, j) for j in range(4)][::-1]
    assert sorted(np.roots(axis).real) == pytest.approx(ws, abs=1e-12)


def test_bb3_orbit_correspondence():
    """Orbits of (y1) off u = 0, mapped by w = z/u, follow the blown-up field
    in the time d delta = u d tau."""
    y1 = _y1_at_c()
    bb = briot_bouquet(y1, "z=zu")
    for q0 in ((0.2, 0.1), (-0.15, 0.05), (0.3, -0.2)):
        ts = np.linspace(0.0, 2.0, 41)
        a = solve_ivp(lambda t, q: list(y1(*q)), (0, 2.0), q0, t_eval=ts, rtol=1e-12, atol=1e-14, method="DOP853")
        w0 = q0[1] / q0[0]
        b = solve_ivp(
            lambda t, q: [q[0] * v for v in bb(*q)], (0, 2.0), (q0[0], w0), t_eval=ts, rtol=1e-12, atol=1e-14, method="DOP853"
        )
        assert np.all(np.abs(a.y[0]) > 1e-3)
        assert np.max(np.abs(a.y[0] - b.y[0])) < 1e-6
        assert np.max(np.abs(a.y[1] / a.y[0] - b.y[1])) < 1e-6


def test_blowup_linear_saddle():
    cs = ChartSystem("U", BiPoly({(1, 0): 1.0}), BiPoly({(0, 1): -1.0}))
    for direction in ("z=zu", "u=uz"):
        bb = briot_bouquet(cs, direction)
        J = bb.jacobian()
        assert np.linalg.det(J) < 0
    assert briot_bouquet(cs, "z=zu").Q.c == {(0, 1): -2.0}


def test_polar_directions_linear_saddle():
    cs = ChartSystem("U", BiPoly({(1, 0): 1.0}), BiPoly({(0, 1): -1.0}))
    dirs = polar_directions(cs)
    assert [round(t, 9) for t, _ in dirs] == pytest.approx([0.0, math.pi / 2, math.pi, 3 * math.pi / 2], abs=1e-9)
    assert all(gh != 0 for _, gh in dirs)


# ---------------------------------------------------------------------------
# disc
# ---------------------------------------------------------------------------


def test_disc_examples():
    assert np.allclose(disc_project((0.0, 0.0)), (0.0, 0.0))
    assert np.allclose(disc_project((1.0, 0.0)), (0.5, 0.0))


def test_disc_boundary_pair():
    eq = equilibrium(s61(1, 1, 1, 1, 1), "E")
    plus, minus = boundary_pair(eq)
    assert np.allclose(plus, np.array([1.0, -1.0]) / math.sqrt(2))
    assert np.allclose(minus, -plus)
    d_plus, d_minus = boundary_pair(equilibrium(s61(1, 1, 1, 1, 1), "D"))
    assert np.allclose(d_plus, (0.0, 1.0)) and np.allclose(d_minus, (0.0, -1.0))


def test_disc_chart_point_matches_plane_point():
    x, y = 3.0, -1.5
    assert np.allclose(disc_project((y / x, 1 / x), chart="U"), disc_project((x, y)))
    assert np.allclose(disc_project((x / y, 1 / y), chart="V"), disc_project((x, y)))


pts = st.tuples(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))


@settings(max_examples=200, deadline=None)
@given(pts)
def test_disc_injective(p):
    q = disc_project(p)
    n = float(np.linalg.norm(q))
    assert n < 1.0
    back = q / (1.0 - n)
    assert np.allclose(back, p, rtol=1e-6, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(pts, st.floats(1.001, 100))
def test_disc_radially_monotone(p, k):
    if math.hypot(*p) < 1e-6:
        return
    assert np.linalg.norm(disc_project(np.multiply(p, k))) > np.linalg.norm(disc_project(p))


# ---------------------------------------------------------------------------
# general polynomial boundary
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p", [s61(1, 0, 0, -1, 0), s61(1, 1, 3.5, 3.5, 1), s61(1, 1, 1, 1, 1), s61(1, 1, 1, 1, 0)])
def test_polynomial_boundary_matches_cubic(p):
    ref = infinity_equilibria(p)
    got = polynomial_boundary(p.to_system())
    ru = sorted(e.position[0] for e in ref if e.chart == "U")
    gu = sorted(e.position[0] for e in got if e.chart == "U")
    assert gu == pytest.approx(ru, abs=1e-9)
    assert sum(e.chart == "V" for e in got) == 1


def test_polynomial_boundary_linear_rotation():
    from phase_sentinel import systems

    assert polynomial_boundary(systems.harmonic()) == []


def test_tsign():
    assert tsign(1e-13) == 0 and tsign(-1e-3) == -1 and tsign(2.0) == 1
    assert tsign(1e-9, scale=1e4) == 0 and tsign(1e-7, scale=1e4) == 1
