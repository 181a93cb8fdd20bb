import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phase_sentinel import systems
from phase_sentinel.core import (
    CubicParams,
    PiecewiseLinearField1D,
    PlanarSystem,
    PolynomialField1D,
    PolynomialField2D,
    eval_field,
    parse_system,
    serialize_system,
    series_at_origin,
)
from phase_sentinel.errors import DomainError, NotAnEquilibrium, OrderExhausted, ParseError


def test_eval_field_harmonic():
    assert eval_field(systems.harmonic(), (1.0, 0.0)) == (0.0, -1.0)


def test_eval_field_eg3():
    assert eval_field(systems.eg3(), (1.0, 1.0)) == (1.0, -3.0)


@pytest.mark.parametrize("make", [systems.harmonic, systems.eg1, systems.eg2, systems.eg3, systems.van_der_pol, systems.mm])
def test_origin_is_equilibrium(make):
    assert eval_field(make(), (0.0, 0.0)) == (0.0, 0.0)


def test_eval_field_outside_strip():
    s = PlanarSystem(PolynomialField1D((0.0, 1.0)), PolynomialField2D({}), -1.0, 1.0)
    with pytest.raises(DomainError):
        eval_field(s, (2.0, 0.0))


def test_strip_must_contain_origin():
    with pytest.raises(DomainError):
        PlanarSystem(PolynomialField1D((0.0, 1.0)), PolynomialField2D({}), 0.5, 1.0)


def test_series_eg3():
    s = series_at_origin(systems.eg3())
    assert (s.a, s.b, s.a_k, s.k, s.b_n, s.n) == (0.0, 0.0, 2.0, 5, 1.0, 1)


def test_series_simple():
    sys = PlanarSystem(PolynomialField1D((0.0, 1.0, 0.0, 1.0)), PolynomialField2D({(0, 0): 1.0}))
    s = series_at_origin(sys)
    assert (s.a, s.b) == (1.0, 1.0)


def test_series_ding():
    s = series_at_origin(systems.ding(0.1))
    assert (s.a, s.b, s.a_k, s.k, s.b_n, s.n) == (0.0, 0.0, 0.1, 3, -1.0, 1)


def test_series_refuses_opaque_f():
    with pytest.raises(OrderExhausted):
        series_at_origin(systems.eg1(0.1))


def test_series_not_equilibrium():
    sys = PlanarSystem(PolynomialField1D((1.0, 1.0)), PolynomialField2D({}))
    with pytest.raises(NotAnEquilibrium):
        series_at_origin(sys)


def test_series_zero_g():
    sys = PlanarSystem(PolynomialField1D((0.0,)), PolynomialField2D({}))
    with pytest.raises(OrderExhausted):
        series_at_origin(sys)


def test_parse_cubic_doc():
    p = parse_system({"family": "sys61", "lambda": 1, "mu": 1, "a": 1, "b": 1, "c": 1})
    assert isinstance(p, CubicParams)
    assert (p.lambda_, p.mu, p.a, p.b, p.c, p.kappa) == (1, 1, 1, 1, 1, 1)


def test_parse_greek_aliases():
    p = parse_system({"family": "sys61", "λ": 2, "μ": 0, "a": 0, "b": -1, "c": 0})
    assert p.lambda_ == 2.0


def test_parse_eg3_doc():
    s = parse_system({"g": {"poly": [0, 0, 0, 0, 2]}, "f": {"poly2d": {"1,0": 1}}})
    assert isinstance(s, PlanarSystem)
    x = np.linspace(-1, 1, 7)
    assert np.allclose(s.g(x), 2 * x**5)
    assert np.allclose(s.f(x, x), x)


@pytest.mark.parametrize(
    "doc",
    [
        {"family": "sys61", "lambda": 1, "mu": 1, "a": 1, "b": 1, "c": -1},
        {"family": "sys61", "lambda": 1, "mu": 1, "a": 1, "b": 0, "c": 1},
        {"family": "sys61", "lambda": 1, "mu": 1, "a": 1, "b": 1},
        {"family": "sys99", "mu": 1, "a": 1, "b": 1, "c": 1},
        {"family": "sys71", "mu": 1, "a": 1, "b": 1, "c": 1, "zzz": 3},
        {"g": {"poly": []}, "f": {"poly2d": {}}},
        {"g": {"poly": [1]}, "f": {"poly2d": {"1;0": 1}}},
        {"g": {"poly": [1]}, "f": {"poly2d": {}}, "alpha": 1},
        {"f": {"poly2d": {}}},
    ],
)
def test_parse_errors(doc):
    with pytest.raises(ParseError):
        parse_system(doc)


def test_parse_bad_json_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_system('{\n "g": ')
    assert exc.value.line is not None


def test_parse_piecewise():
    s = parse_system(
        {"g": {"piecewise": [[None, 0, 1, 0], [0, "inf", 2, 0]]}, "f": {"poly2d": {}}, "alpha": -1, "beta": "inf"}
    )
    assert isinstance(s.g, PiecewiseLinearField1D)
    assert s.g(0.5) == 1.0 and s.g(-0.5) == -0.5
    assert s.alpha == -1 and math.isinf(s.beta)


def test_mm_g_matches_zigzag():
    g = systems.mm().g
    xs = np.array([-1.0, -0.4, -0.1, 0.0, 0.1, 0.4, 1.0])
    expected = [0.0, 0.2, -0.1, 0.0, 0.1, -0.2, 0.0]
    assert np.allclose(g(xs), expected)
    # odd
    assert g.odd_defect(3.0) < 1e-14


def test_piecewise_integral_continuous():
    g = systems.mm().g
    xs = np.linspace(-2, 2, 4001)
    G = g.integral(xs)
    num = np.concatenate(([0.0], np.cumsum(0.5 * (g(xs[1:]) + g(xs[:-1])) * np.diff(xs))))
    num -= num[2000]
    assert np.max(np.abs(G - num)) < 1e-6


def test_cubic_to_system():
    p = CubicParams("sys71", mu=1, a=2, b=3, c=4)
    s = p.to_system()
    assert p.lambda_ == 1.0 and p.kappa == 0.0
    x, y = 0.3, -0.7
    _, vy = s.rhs(x, y)
    assert vy == pytest.approx(-x - 1 * y - 2 * x * x * y - 3 * x * y * y - 4 * y**3)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=6),
    st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), st.floats(-5, 5, allow_nan=False), max_size=5),
)
def test_serialize_roundtrip(gc, fc):
    sys = PlanarSystem(PolynomialField1D(tuple([0.0] + gc)), PolynomialField2D(fc), -2.0, 3.0, name="r")
    back = parse_system(json.dumps(serialize_system(sys)))
    x = np.linspace(-1.9, 2.9, 11)
    assert np.allclose(back.g(x), sys.g(x))
    assert np.allclose(back.f(x, x[::-1]), sys.f(x, x[::-1]))
    assert (back.alpha, back.beta, back.name) == (-2.0, 3.0, "r")


@settings(max_examples=60, deadline=None)
@given(st.floats(0, 5), st.floats(0, 5), st.floats(0, 5), st.floats(-5, 5).filter(lambda b: b != 0), st.floats(0, 5))
def test_cubic_roundtrip(lam, mu, a, b, c):
    p = CubicParams("sys61", lam, mu, a, b, c)
    assert parse_system(json.dumps(serialize_system(p))) == p


@settings(max_examples=100, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_energy_derivative_identity(x, y):
    """dE/dt = -f y^2 along the field, checked pointwise by finite differences."""
    s = systems.eg2()
    vx, vy = s.rhs(x, y)
    h = 1e-6
    dE = (s.energy(x + h * vx, y + h * vy) - s.energy(x - h * vx, y - h * vy)) / (2 * h)
    assert dE == pytest.approx(-s.f(x, y) * y * y, abs=1e-5 * (1 + abs(dE)))
