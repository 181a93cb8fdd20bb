"""Equilibria at infinity of the cubic families.

Chart U is x = 1/z, y = u/z and chart V is x = v/z, y = 1/z, both with the
time rescale dtau = dt / z^(d-1) (d = 3 here). Equilibria on z = 0 are listed
from the roots of the chart polynomial; semi-hyperbolic ones are classified
through their centre manifold, degenerate ones through published direction
tables keyed by sign conditions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Sequence

import numpy as np

from .bipoly import BiPoly
from .core import CubicParams, PlanarSystem, PolynomialField1D, PolynomialField2D
from .equilibrium import EquilibriumClass, jet_solve_phi, semi_hyperbolic_classify
from .errors import DomainError, UnhandledCase
from .polyroots import horner, real_roots

__all__ = [
    "ChartSystem",
    "PhiData",
    "DirectionRow",
    "DirectionTable",
    "InfinityEquilibrium",
    "tsign",
    "plane_field",
    "chart_transform",
    "phi_analysis",
    "phi_critical",
    "infinity_equilibria",
    "classify_infinity",
    "infinity_inventory",
    "polynomial_boundary",
    "briot_bouquet",
    "polar_directions",
    "disc_project",
    "boundary_pair",
    "verify_chart_consistency",
    "MAX_BLOWUP_DEPTH",
    "TIE_TOL",
]

TIE_TOL = 1e-12
MAX_BLOWUP_DEPTH = 3
TWO_PI = 2.0 * math.pi


def tsign(value: float, scale: float = 1.0, tol: float = TIE_TOL) -> int:
    """Sign of value with ties |value| <= tol * max(1, scale) reported as 0."""
    if abs(value) <= tol * max(1.0, abs(scale)):
        return 0
    return 1 if value > 0 else -1


# ----------------------------------------------------------------------------
# charts
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ChartSystem:
    """s' = P(s, t), t' = Q(s, t) in chart variables (s, t).

    For chart U, (s, t) = (u, z); for chart V, (s, t) = (v, z). Blow-ups
    keep the same slots with the new variables and record how they were
    obtained in ``history``.
    """

    chart: str
    P: BiPoly
    Q: BiPoly
    family: str = ""
    params: Mapping[str, float] = field(default_factory=dict)
    time_exponent: int = 2
    depth: int = 0
    history: tuple[str, ...] = ()
    quadrant_map: Mapping[int, int] | None = None
    time_factor: str | None = None

    def __call__(self, s, t):
        return self.P(s, t), self.Q(s, t)

    def shifted(self, s0: float = 0.0, t0: float = 0.0) -> "ChartSystem":
        """Move (s0, t0) to the origin. Residual constants at an equilibrium
        are rounding noise and are dropped."""
        P, Q = self.P.shift(s0, t0), self.Q.shift(s0, t0)
        scale = max(1.0, P.max_abs(), Q.max_abs())
        for poly in (P, Q):
            v = poly.coeff(0, 0)
            if v and abs(v) <= 1e-9 * scale:
                poly.c.pop((0, 0))
        return replace(self, P=P.clean(), Q=Q.clean(), history=self.history + (f"shift({s0:g},{t0:g})",))

    def jacobian(self) -> np.ndarray:
        return np.array(
            [[self.P.coeff(1, 0), self.P.coeff(0, 1)], [self.Q.coeff(1, 0), self.Q.coeff(0, 1)]]
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "chart": self.chart,
            "family": self.family,
            "P": self.P.as_dict(),
            "Q": self.Q.as_dict(),
            "time_exponent": self.time_exponent,
            "depth": self.depth,
            "history": list(self.history),
            "quadrant_map": dict(self.quadrant_map) if self.quadrant_map else None,
            "time_factor": self.time_factor,
        }


def _params(params: CubicParams) -> CubicParams:
    if not isinstance(params, CubicParams):
        raise DomainError("expected CubicParams")
    return params


def plane_field(params: CubicParams) -> tuple[BiPoly, BiPoly]:
    """(x', y') as polynomials in (x, y)."""
    p = _params(params)
    X = BiPoly({(0, 1): 1.0})
    Y = BiPoly(
        {
            (1, 0): -p.lambda_,
            (0, 1): -p.mu,
            (3, 0): -p.kappa,
            (2, 1): -p.a,
            (1, 2): -p.b,
            (0, 3): -p.c,
        }
    )
    return X, Y


def _homogenize(poly: BiPoly, d: int, chart: str) -> BiPoly:
    """z^d * poly evaluated at the chart point, as a polynomial in (s, z)."""
    out = {}
    for (i, j), v in poly.c.items():
        if i + j > d:
            raise DomainError("degree exceeds chart degree")
        key = (j, d - i - j) if chart == "U" else (i, d - i - j)
        out[key] = out.get(key, 0.0) + v
    return BiPoly(out)


def chart_transform(params: CubicParams, chart: str) -> ChartSystem:
    """Chart U: u' = Yt - u Xt, z' = -z Xt; chart V: v' = Xt - v Yt, z' = -z Yt,
    where Xt = z^d X and Yt = z^d Y in chart variables; time dtau = dt/z^(d-1)."""
    if chart not in ("U", "V"):
        raise DomainError(f"unknown chart {chart!r}")
    p = _params(params)
    X, Y = plane_field(p)
    d = max(X.degree, Y.degree)
    Xt, Yt = _homogenize(X, d, chart), _homogenize(Y, d, chart)
    s, z = BiPoly.s(), BiPoly.t()
    if chart == "U":
        P, Q = Yt - s * Xt, -(z * Xt)
    else:
        P, Q = Xt - s * Yt, -(z * Yt)
    return ChartSystem(chart, P, Q, family=p.family, params=p.as_dict(), time_exponent=d - 1)


def verify_chart_consistency(
    params: CubicParams,
    n_points: int = 100,
    chart: str | None = None,
    chart_sys: ChartSystem | None = None,
    seed: int = 0,
) -> float:
    """Max relative defect between the chart formula and the plane field pushed
    through the chart map, over random points with moderate |x|, |y|."""
    charts = [chart_sys.chart] if chart_sys is not None else ([chart] if chart else ["U", "V"])
    X, Y = plane_field(params)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for ch in charts:
        cs = chart_sys if chart_sys is not None else chart_transform(params, ch)
        k = cs.time_exponent
        n = 0
        while n < n_points:
            x, y = rng.uniform(-3.0, 3.0, size=2)
            if (ch == "U" and abs(x) < 0.2) or (ch == "V" and abs(y) < 0.2):
                continue
            n += 1
            xd, yd = X(x, y), Y(x, y)
            if ch == "U":
                s, z = y / x, 1.0 / x
                sd = (yd * x - y * xd) / x**2
                zd = -xd / x**2
            else:
                s, z = x / y, 1.0 / y
                sd = (xd * y - x * yd) / y**2
                zd = -yd / y**2
            # d/dtau = z^k d/dt
            ref = np.array([sd, zd]) * z**k
            got = np.array(cs(s, z), dtype=float)
            worst = max(worst, float(np.max(np.abs(got - ref)) / max(1.0, float(np.max(np.abs(ref))))))
    return worst


# ----------------------------------------------------------------------------
# Phi(u) = c u^3 + b u^2 + a u + 1
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PhiData:
    a: float
    b: float
    c: float
    rho1: float | None = None
    rho2: float | None = None
    phi_rho1: float | None = None
    phi_rho2: float | None = None
    roots: tuple[float, ...] = ()
    multiplicities: tuple[int, ...] = ()
    signs: Mapping[str, int] = field(default_factory=dict)

    def phi(self, u: float) -> float:
        return horner((1.0, self.a, self.b, self.c), u)

    def to_dict(self) -> dict[str, Any]:
        return {
            "a": self.a,
            "b": self.b,
            "c": self.c,
            "rho1": self.rho1,
            "rho2": self.rho2,
            "phi_rho1": self.phi_rho1,
            "phi_rho2": self.phi_rho2,
            "roots": list(self.roots),
            "multiplicities": list(self.multiplicities),
            "signs": dict(self.signs),
        }


def _phi_scale(a, b, c, u):
    return abs(c * u**3) + abs(b * u * u) + abs(a * u) + 1.0


def _bisect_phi(a, b, c, lo, hi):
    f = lambda u: ((c * u + b) * u + a) * u + 1.0  # noqa: E731
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def phi_critical(a: float, b: float, c: float) -> dict[str, Any]:
    """Critical points rho1 < rho2 of Phi (c > 0) and the signs of Phi there,
    without locating the roots."""
    d = b * b - 3.0 * a * c
    sd = tsign(d, b * b + 3.0 * a * c)
    out: dict[str, Any] = {"rho1": None, "rho2": None, "phi_rho1": None, "phi_rho2": None, "signs": {"b^2-3ac": sd}}
    if sd <= 0:
        return out
    r = math.sqrt(d)
    # rho1 * rho2 = a / (3c); use it for the root prone to cancellation
    if b >= 0:
        rho1 = (-b - r) / (3.0 * c)
        rho2 = a / (3.0 * c * rho1)
    else:
        rho2 = (-b + r) / (3.0 * c)
        rho1 = a / (3.0 * c * rho2)
    p1 = ((c * rho1 + b) * rho1 + a) * rho1 + 1.0
    p2 = ((c * rho2 + b) * rho2 + a) * rho2 + 1.0
    out.update(rho1=rho1, rho2=rho2, phi_rho1=p1, phi_rho2=p2)
    out["signs"]["phi(rho1)"] = tsign(p1, _phi_scale(a, b, c, rho1))
    out["signs"]["phi(rho2)"] = tsign(p2, _phi_scale(a, b, c, rho2))
    return out


def phi_analysis(a: float, b: float, c: float) -> PhiData:
    """Critical points in closed form, roots by bisection on the monotone pieces."""
    a, b, c = float(a), float(b), float(c)
    if c < 0:
        raise DomainError("phi_analysis needs c >= 0")
    signs: dict[str, int] = {}
    if tsign(c) == 0:
        if b == 0.0:
            return PhiData(a, b, 0.0, roots=(-1.0 / a,) if a else (), multiplicities=(1,) if a else (), signs=signs)
        disc = a * a - 4.0 * b
        sd = tsign(disc, a * a + 4.0 * abs(b))
        signs["a^2-4b"] = sd
        if sd < 0:
            return PhiData(a, b, 0.0, signs=signs)
        if sd == 0:
            return PhiData(a, b, 0.0, roots=(-a / (2.0 * b),), multiplicities=(2,), signs=signs)
        r = math.sqrt(disc)
        # stable quadratic formula
        q = -0.5 * (a + math.copysign(r, a if a else 1.0))
        roots = sorted((q / b, 1.0 / q))
        return PhiData(a, b, 0.0, roots=tuple(roots), multiplicities=(1, 1), signs=signs)

    bound = 1.0 + max(abs(b), abs(a), 1.0) / c
    crit = phi_critical(a, b, c)
    signs.update(crit["signs"])
    if crit["rho1"] is None:
        u = _bisect_phi(a, b, c, -bound, bound)
        return PhiData(a, b, c, roots=(u,), multiplicities=(1,), signs=signs)
    rho1, rho2, p1, p2 = crit["rho1"], crit["rho2"], crit["phi_rho1"], crit["phi_rho2"]
    s1, s2 = signs["phi(rho1)"], signs["phi(rho2)"]
    roots: list[float] = []
    mult: list[int] = []
    # Phi rises on (-inf, rho1), falls on (rho1, rho2), rises on (rho2, inf)
    if s1 < 0:
        roots.append(_bisect_phi(a, b, c, rho2, bound))
        mult.append(1)
    elif s1 == 0:
        roots += [rho1, _bisect_phi(a, b, c, rho2, bound)]
        mult += [2, 1]
    else:
        roots.append(_bisect_phi(a, b, c, -bound, rho1))
        mult.append(1)
        if s2 < 0:
            roots += [_bisect_phi(a, b, c, rho1, rho2), _bisect_phi(a, b, c, rho2, bound)]
            mult += [1, 1]
        elif s2 == 0:
            roots.append(rho2)
            mult.append(2)
    order = sorted(range(len(roots)), key=lambda i: roots[i])
    return PhiData(
        a,
        b,
        c,
        rho1=rho1,
        rho2=rho2,
        phi_rho1=p1,
        phi_rho2=p2,
        roots=tuple(roots[i] for i in order),
        multiplicities=tuple(mult[i] for i in order),
        signs=signs,
    )


# ----------------------------------------------------------------------------
# equilibria on z = 0
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class DirectionRow:
    theta: float
    count: float  # 1 or math.inf
    sense: str  # "+" approaches as tau -> +inf, "-" as tau -> -inf

    def to_dict(self) -> dict[str, Any]:
        return {"theta": self.theta, "count": "inf" if math.isinf(self.count) else int(self.count), "sense": self.sense}


@dataclass(frozen=True)
class DirectionTable:
    name: str
    rows: tuple[DirectionRow, ...]
    condition: str = ""
    kind: str = "degenerate"

    @property
    def directions(self) -> tuple[float, ...]:
        return tuple(r.theta for r in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "table": self.name, "condition": self.condition, "rows": [r.to_dict() for r in self.rows]}


def _table(name: str, condition: str, rows: Sequence[tuple[float, float, str]]) -> DirectionTable:
    out = tuple(DirectionRow(float(t) % TWO_PI, n, s) for t, n, s in rows)
    return DirectionTable(name, tuple(sorted(out, key=lambda r: r.theta)), condition)


INF = math.inf
PI = math.pi


def _six(w: float, senses: tuple[str, str, str, str, str, str], counts: tuple[float, ...]) -> list:
    at = math.atan(w)
    thetas = (0.0, at, PI - at, PI, PI + at, TWO_PI - at)
    return list(zip(thetas, counts, senses))


@dataclass(frozen=True)
class InfinityEquilibrium:
    chart: str
    position: tuple[float, float]
    label: str
    kind: Any = None
    multiplicity: int = 1

    def to_dict(self) -> dict[str, Any]:
        k = self.kind.to_dict() if hasattr(self.kind, "to_dict") else self.kind
        return {"chart": self.chart, "position": list(self.position), "label": self.label, "multiplicity": self.multiplicity, "kind": k}


def infinity_equilibria(params: CubicParams) -> list[InfinityEquilibrium]:
    """Equilibria of chart U on z = 0 followed by the origin D of chart V."""
    p = _params(params)
    out: list[InfinityEquilibrium] = []
    if p.family == "sys61":
        pd = phi_analysis(p.a, p.b, p.c)
        rs, ms = pd.roots, pd.multiplicities
        if tsign(p.c) == 0:
            if len(rs) == 2:
                A = (-p.a - math.sqrt(p.a * p.a - 4 * p.b)) / (2 * p.b)
                # labels follow the closed forms, not the sort order
                ia = 0 if abs(rs[0] - A) <= abs(rs[1] - A) else 1
                out.append(InfinityEquilibrium("U", (rs[ia], 0.0), "A"))
                out.append(InfinityEquilibrium("U", (rs[1 - ia], 0.0), "B"))
            elif len(rs) == 1:
                out.append(InfinityEquilibrium("U", (rs[0], 0.0), "C", multiplicity=2))
        else:
            if len(rs) == 1:
                out.append(InfinityEquilibrium("U", (rs[0], 0.0), "E", multiplicity=ms[0]))
            elif len(rs) == 3:
                for lab, r in zip(("F1", "F2", "F3"), rs):
                    out.append(InfinityEquilibrium("U", (r, 0.0), lab))
            elif len(rs) == 2:
                for r, m in zip(rs, ms):
                    if m == 1:
                        out.append(InfinityEquilibrium("U", (r, 0.0), "F"))
                    elif pd.signs.get("phi(rho1)") == 0:
                        out.append(InfinityEquilibrium("U", (r, 0.0), "K", multiplicity=2))
                    else:
                        out.append(InfinityEquilibrium("U", (r, 0.0), "Q", multiplicity=2))
    elif p.family == "sys71":
        a0, c0 = tsign(p.a), tsign(p.c)
        out.append(InfinityEquilibrium("U", (0.0, 0.0), "G", multiplicity=1 if a0 else 2))
        if c0 == 0:
            if a0:
                out.append(InfinityEquilibrium("U", (-p.a / p.b, 0.0), "R"))
        elif a0 == 0:
            out.append(InfinityEquilibrium("U", (-p.b / p.c, 0.0), "S"))
        else:
            disc = p.b * p.b - 4 * p.a * p.c
            sd = tsign(disc, p.b * p.b + 4 * p.a * p.c)
            if sd == 0:
                out.append(InfinityEquilibrium("U", (-p.b / (2 * p.c), 0.0), "T", multiplicity=2))
            elif sd > 0:
                r = math.sqrt(disc)
                out.append(InfinityEquilibrium("U", ((-p.b + r) / (2 * p.c), 0.0), "P1"))
                out.append(InfinityEquilibrium("U", ((-p.b - r) / (2 * p.c), 0.0), "P2"))
    else:
        raise DomainError("infinity_equilibria supports sys61 and sys71")
    out.append(InfinityEquilibrium("V", (0.0, 0.0), "D", multiplicity=1 if tsign(p.c) else 2))
    return out


def polynomial_boundary(sys: PlanarSystem) -> list[InfinityEquilibrium]:
    """Unclassified boundary equilibria of a polynomial planar system.

    Chart U points are the real roots of Yd(1, u) - u Xd(1, u) with Xd, Yd the
    top-degree parts; the origin of chart V is added when Xd(0, 1) = 0.
    A line at infinity made of equilibria gives an empty list.
    """
    if not isinstance(sys.g, PolynomialField1D) or not isinstance(sys.f, PolynomialField2D):
        return []
    X = BiPoly({(0, 1): 1.0})
    Y = -BiPoly({(i, 0): c for i, c in enumerate(sys.g.coeffs)}) - BiPoly({(i, j + 1): v for (i, j), v in sys.f.coeffs.items()})
    d = max(X.degree, Y.degree)
    top = lambda p: {(i, j): v for (i, j), v in p.c.items() if i + j == d}
    Xd, Yd = top(X), top(Y)
    F = [0.0] * (d + 2)
    for (i, j), v in Yd.items():
        F[j] += v
    for (i, j), v in Xd.items():
        F[j + 1] -= v
    if not any(F):
        return []
    out = [InfinityEquilibrium("U", (r, 0.0), f"U{k}") for k, r in enumerate(real_roots(F), 1)]
    if Xd.get((0, d), 0.0) == 0.0:
        out.append(InfinityEquilibrium("V", (0.0, 0.0), "V"))
    return out


def _semi_hyperbolic(cs: ChartSystem) -> EquilibriumClass:
    """Origin of cs with eigenvalues (l, 0) and the s-axis hyperbolic."""
    J = cs.jacobian()
    lam = J[0, 0]
    if abs(J[0, 1]) > 1e-12 or abs(J[1, 0]) > 1e-12 or abs(J[1, 1]) > 1e-12 or lam == 0:
        raise UnhandledCase("not in semi-hyperbolic normal position")
    # centre variable x = t, hyperbolic y = s, time divided by lam
    swap = lambda poly: BiPoly({(j, i): v for (i, j), v in poly.c.items()})  # noqa: E731
    P2 = swap(cs.Q) * (1.0 / lam)
    rest = dict(cs.P.c)
    rest.pop((1, 0), None)
    Q2 = swap(BiPoly(rest)) * (1.0 / lam)
    _, lead = jet_solve_phi(P2, Q2)
    kind = semi_hyperbolic_classify(lead)
    if lam < 0 and kind == "unstable-node":
        kind = "stable-node"
    return EquilibriumClass(kind, assumptions=(f"hyperbolic eigenvalue {lam:.6g}", f"centre manifold term {lead[0]:.6g} z^{lead[1]}"))


def _gamma(p: CubicParams, u: float) -> float:
    return u * u + p.mu * u + p.lambda_


def classify_infinity(eq: InfinityEquilibrium, params: CubicParams) -> EquilibriumClass | DirectionTable:
    p = _params(params)
    if eq.chart == "V":
        if tsign(p.c) > 0:
            return EquilibriumClass("unstable-node", sectors={"parabolic": 1}, assumptions=("star node",))
        sb = tsign(p.b)
        if sb > 0:
            return _table("D1", "c=0, b>0", [(0, 1, "-"), (PI, 1, "+")])
        if sb < 0:
            return _table("D2", "c=0, b<0", [(0, INF, "+"), (PI, INF, "-")])
        raise UnhandledCase("D with b = 0")

    cs = chart_transform(p, "U").shifted(eq.position[0], 0.0)
    lab = eq.label
    if lab in ("A", "B", "F", "F1", "F2", "F3", "R", "S", "P1", "P2"):
        return _semi_hyperbolic(cs)
    if lab == "E":
        if abs(cs.jacobian()[0, 0]) > 1e-9:
            return _semi_hyperbolic(cs)
        return EquilibriumClass("saddle", sectors={"hyperbolic": 4}, assumptions=("degenerate saddle",))
    if lab == "G":
        if tsign(p.a) > 0:
            return _semi_hyperbolic(cs)
        sb = tsign(p.b)
        if sb > 0:
            return _table("G3", "a=0, b>0", [(0, 1, "+"), (PI, 1, "-")])
        w = math.sqrt(-p.b)
        return _table("G2", "a=0, b<0", _six(w, ("-", "+", "-", "+", "-", "+"), (1, 1, 1, 1, 1, 1)))
    if lab == "C":
        u0 = -p.a / (2 * p.b)
        g = _gamma(p, u0)
        sg = tsign(g, u0 * u0 + p.mu * abs(u0) + p.lambda_)
        if sg > 0:
            return _table("C1", "gamma>0", [(0, 1, "+"), (PI, 1, "-")])
        if sg == 0:
            return _table("C2", "gamma=0", [(0, 1, "+"), (PI / 2, INF, "-"), (PI, 1, "-"), (3 * PI / 2, INF, "-")])
        w = math.sqrt(-p.b / g)
        return _table("C3", "gamma<0", _six(w, ("+", "-", "-", "-", "-", "-"), (1, 1, INF, 1, INF, 1)))
    if lab in ("K", "Q"):
        pd = phi_analysis(p.a, p.b, p.c)
        rho = pd.rho1 if lab == "K" else pd.rho2
        g = _gamma(p, rho)
        sg = tsign(g, rho * rho + p.mu * abs(rho) + p.lambda_)
        root_d = math.sqrt(max(p.b * p.b - 3 * p.a * p.c, 0.0))
        if lab == "K":
            if sg < 0:
                return _table("K1", "rho1^2+mu rho1+lambda<0", [(0, 1, "-"), (PI, 1, "+")])
            if sg == 0:
                return _table("K2", "rho1^2+mu rho1+lambda=0", [(0, 1, "-"), (PI / 2, INF, "-"), (PI, 1, "+"), (3 * PI / 2, INF, "-")])
            w = math.sqrt(root_d / g)
            return _table("K3", "rho1^2+mu rho1+lambda>0", _six(w, ("-", "+", "+", "+", "+", "+"), (1, 1, INF, 1, INF, 1)))
        if sg > 0:
            return _table("Q", "rho2^2+mu rho2+lambda>0", [(0, 1, "+"), (PI, 1, "-")])
        if sg == 0:
            return _table("Q2", "rho2^2+mu rho2+lambda=0", [(0, 1, "+"), (PI / 2, INF, "-"), (PI, 1, "-"), (3 * PI / 2, INF, "-")])
        w = math.sqrt(-root_d / g)
        return _table("Q3", "rho2^2+mu rho2+lambda<0", _six(w, ("+", "-", "-", "-", "-", "-"), (1, 1, INF, 1, INF, 1)))
    if lab == "T":
        rac = math.sqrt(p.a * p.c)
        if p.b < 0:
            return _table("T1", "b=-2sqrt(ac)", [(0, 1, "+"), (PI, 1, "-")])
        e = p.a - p.mu * rac + p.c
        se = tsign(e, p.a + p.mu * rac + p.c)
        if se < 0:
            return _table("T1", "b=2sqrt(ac), a-mu sqrt(ac)+c<0", [(0, 1, "-"), (PI, 1, "+")])
        if se == 0:
            return _table("T2", "b=2sqrt(ac), a-mu sqrt(ac)+c=0", [(0, 1, "-"), (PI / 2, INF, "-"), (PI, 1, "+"), (3 * PI / 2, INF, "-")])
        w = math.sqrt(p.c * rac / e)
        return _table("T3", "b=2sqrt(ac), a-mu sqrt(ac)+c>0", _six(w, ("-", "-", "-", "+", "-", "-"), (1, INF, 1, 1, 1, INF)))
    raise UnhandledCase(f"no rule for equilibrium {lab}")


def infinity_inventory(params: CubicParams) -> list[InfinityEquilibrium]:
    return [replace(e, kind=classify_infinity(e, params)) for e in infinity_equilibria(params)]


# ----------------------------------------------------------------------------
# Briot-Bouquet blow-up
# ----------------------------------------------------------------------------

# quadrant of the blown-up plane -> quadrant of the original plane
_QMAP = {"z=zu": {1: 1, 2: 3, 3: 2, 4: 4}, "u=uz": {1: 1, 2: 2, 3: 4, 4: 3}}


def briot_bouquet(chart_sys: ChartSystem, direction: str, shift: tuple[float, float] | None = None) -> ChartSystem:
    """Blow up the origin.

    direction "z=zu" substitutes t = t~ s and divides by s^k; "u=uz"
    substitutes s = s~ t and divides by t^k, k being the largest common power.
    The rescaled time is d delta = s^k d tau (resp. t^k d tau), so orbits in
    the half-plane where that factor is negative run backwards.
    """
    if direction not in _QMAP:
        raise DomainError(f"unknown blow-up direction {direction!r}")
    cs = chart_sys.shifted(*shift) if shift else chart_sys
    if cs.depth >= MAX_BLOWUP_DEPTH:
        raise UnhandledCase(f"blow-up depth limited to {MAX_BLOWUP_DEPTH}")
    s, t = BiPoly.s(), BiPoly.t()
    if direction == "z=zu":
        Ps = cs.P.compose(s, t * s)
        Qs = cs.Q.compose(s, t * s)
        Qh = (Qs - t * Ps).divide_power(0, 1)
        k = min(Ps.min_power(0) if not Ps.is_zero() else 99, Qh.min_power(0) if not Qh.is_zero() else 99)
        P2, Q2 = Ps.divide_power(0, k), Qh.divide_power(0, k)
        factor = f"s^{k}"
    else:
        Ps = cs.P.compose(s * t, t)
        Qs = cs.Q.compose(s * t, t)
        Ph = (Ps - s * Qs).divide_power(1, 1)
        k = min(Ph.min_power(1) if not Ph.is_zero() else 99, Qs.min_power(1) if not Qs.is_zero() else 99)
        P2, Q2 = Ph.divide_power(1, k), Qs.divide_power(1, k)
        factor = f"t^{k}"
    return replace(
        cs,
        P=P2.clean(),
        Q=Q2.clean(),
        depth=cs.depth + 1,
        history=cs.history + (f"blowup({direction})",),
        quadrant_map=dict(_QMAP[direction]),
        time_factor=factor,
    )


def polar_directions(cs: ChartSystem, n: int = 7200) -> list[tuple[float, float]]:
    """Zeros of G(theta) = cos Q_m - sin P_m for the lowest-degree homogeneous
    part of the field at the origin, each with G'(theta) H(theta)."""
    m = min(min((i + j for i, j in cs.P.c), default=99), min((i + j for i, j in cs.Q.c), default=99))
    Pm = BiPoly({k: v for k, v in cs.P.c.items() if sum(k) == m})
    Qm = BiPoly({k: v for k, v in cs.Q.c.items() if sum(k) == m})
    G = lambda th: math.cos(th) * Qm(math.cos(th), math.sin(th)) - math.sin(th) * Pm(math.cos(th), math.sin(th))  # noqa: E731
    H = lambda th: math.cos(th) * Pm(math.cos(th), math.sin(th)) + math.sin(th) * Qm(math.cos(th), math.sin(th))  # noqa: E731
    ths = np.linspace(0.0, TWO_PI, n, endpoint=False)
    vals = np.array([G(t) for t in ths])
    scale = max(1e-300, float(np.max(np.abs(vals))))
    zeros: list[float] = []
    for i in range(n):
        t0, t1 = ths[i], ths[i] + TWO_PI / n
        g0, g1 = vals[i], vals[(i + 1) % n]
        if abs(g0) <= 1e-12 * scale:
            zeros.append(t0)
        elif g0 * g1 < 0:
            lo, hi, flo = t0, t1, g0
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                gm = G(mid)
                if (gm > 0) == (flo > 0):
                    lo, flo = mid, gm
                else:
                    hi = mid
            zeros.append(0.5 * (lo + hi))
    out = []
    h = 1e-6
    for z in zeros:
        dG = (G(z + h) - G(z - h)) / (2 * h)
        out.append((z % TWO_PI, dG * H(z)))
    return out


# ----------------------------------------------------------------------------
# Poincare disc
# ----------------------------------------------------------------------------


def disc_project(p, chart: str | None = None) -> np.ndarray:
    """Plane point(s) p -> p / (1 + |p|). With a chart, p is (s, z); a point
    with z = 0 lands on the boundary at the z -> 0+ end (x > 0 for chart U,
    y > 0 for chart V)."""
    arr = np.asarray(p, dtype=float)
    if chart is not None:
        s, z = arr[..., 0], arr[..., 1]
        base = np.stack([np.ones_like(s), s], axis=-1) if chart == "U" else np.stack([s, np.ones_like(s)], axis=-1)
        norm = np.linalg.norm(base, axis=-1, keepdims=True)
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(z == 0, np.inf, 1.0 / np.abs(np.where(z == 0, 1.0, z)))[..., None]
            sgn = np.where(z < 0, -1.0, 1.0)[..., None]
            plane_norm = r * norm
            rad = np.where(np.isinf(plane_norm), 1.0, plane_norm / (1.0 + plane_norm))
        return sgn * base / norm * rad
    r = np.linalg.norm(arr, axis=-1, keepdims=True)
    return arr / (1.0 + r)


def boundary_pair(eq: InfinityEquilibrium) -> tuple[np.ndarray, np.ndarray]:
    """Disc positions of the antipodal pair I+ and I- for a boundary equilibrium."""
    plus = disc_project(np.array([eq.position[0], 0.0]), chart=eq.chart)
    return plus, -plus
