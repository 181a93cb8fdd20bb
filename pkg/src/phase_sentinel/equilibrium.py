"""Local type of the origin.

The jet (a, b) = (g'(0), f(0, 0)) places the origin in one of the regions
G1..G5; when a = b = 0 the leading terms a_k x^k of g and b_n x^n of f(x, 0)
split G6 further into G61, G62, G63. Each region maps to a fixed local type.
G63 points are nilpotent with one elliptic and one hyperbolic sector; the
number of parabolic sectors depends on symmetry and on whether the elliptic
sector is bounded.

Also here: the semi-hyperbolic (one zero eigenvalue) and nilpotent
classification tables for systems in normal form, and the series solver
they need.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

import numpy as np

from .bipoly import BiPoly
from .core import PlanarSystem, PolynomialField1D, PolynomialField2D, SeriesData, series_at_origin
from .errors import DomainError, NeedsSeries, OrderExhausted, WrongRegion

__all__ = [
    "EquilibriumClass",
    "GRegion",
    "linearize_origin",
    "region_of",
    "classify_origin",
    "exceptional_directions",
    "semi_hyperbolic_classify",
    "andreev_classify",
    "to_andreev",
    "jet_solve_phi",
    "symmetry_of",
    "classify_system",
    "KINDS",
]

KINDS = (
    "stable-node",
    "stable-focus",
    "stable-improper-node",
    "center",
    "center-or-focus",
    "saddle",
    "saddle-node",
    "unstable-node",
    "unstable-focus",
    "unstable-improper-node",
    "degenerate",
)

DISC_TOL = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GRegion:
    label: str
    discriminants: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class EquilibriumClass:
    kind: str
    sectors: Mapping[str, int] | None = None
    directions: tuple[float, ...] = ()
    parabolic_candidates: frozenset[int] | None = None
    region: str | None = None
    assumptions: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind}")
        d = tuple(sorted(float(t) % TWO_PI for t in self.directions))
        object.__setattr__(self, "directions", d)
        if self.parabolic_candidates is not None:
            object.__setattr__(self, "parabolic_candidates", frozenset(self.parabolic_candidates))

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "region": self.region,
            "sectors": dict(self.sectors) if self.sectors else None,
            "parabolic_candidates": sorted(self.parabolic_candidates) if self.parabolic_candidates is not None else None,
            "directions": list(self.directions),
            "assumptions": list(self.assumptions),
        }


def linearize_origin(series: SeriesData) -> tuple[complex | float, complex | float]:
    """Eigenvalues of [[0, 1], [-a, -b]]."""
    a, b = series.a, series.b
    disc = b * b - 4 * a
    if abs(disc) <= DISC_TOL * max(1.0, b * b):
        return (-b / 2, -b / 2)
    if disc > 0:
        r = math.sqrt(disc)
        return ((-b + r) / 2, (-b - r) / 2)
    r = cmath.sqrt(disc)
    return ((-b + r) / 2, (-b - r) / 2)


def _normalized(series: SeriesData) -> tuple[SeriesData, bool]:
    """Apply (x, y, t) -> (x, -y, -t) when it makes b (or b_n) nonnegative."""
    if series.b < 0:
        return series.reflected(), True
    if series.a == 0 and series.b == 0 and series.b_n is not None and series.b_n < 0:
        return series.reflected(), True
    return series, False


def region_of(series: SeriesData) -> GRegion:
    s, flipped = _normalized(series)
    a, b = s.a, s.b
    if a < 0:
        raise DomainError(f"a = g'(0) = {a} < 0: x g(x) > 0 fails near 0")
    disc = b * b - 4 * a
    info: dict[str, Any] = {"a": a, "b": b, "b^2-4a": disc, "reflected": flipped}
    if a > 0 and b > 0:
        if abs(disc) <= DISC_TOL * max(1.0, b * b):
            info["tie"] = "b^2-4a treated as 0"
            return GRegion("G3", info)
        return GRegion("G1" if disc > 0 else "G2", info)
    if a > 0:
        return GRegion("G4", info)
    if b > 0:
        return GRegion("G5", info)
    # a = b = 0
    if s.k <= 1 or s.a_k == 0:
        raise NeedsSeries("a = b = 0 but no leading term of g is available")
    k, ak = s.k, s.a_k
    info.update({"k": k, "a_k": ak, "n": s.n, "b_n": s.b_n})
    if s.b_n is None or s.b_n == 0:
        return GRegion("G61", info)
    n, bn = s.n, s.b_n
    d6 = bn * bn - 2 * (k + 1) * ak
    info["b_n^2-2(k+1)a_k"] = d6
    if 2 * n > k - 1:
        return GRegion("G61", info)
    if 2 * n == k - 1:
        if d6 < 0 and abs(d6) > DISC_TOL * max(1.0, bn * bn):
            return GRegion("G61", info)
        if abs(d6) <= DISC_TOL * max(1.0, bn * bn):
            info["tie"] = "b_n^2-2(k+1)a_k treated as 0"
    return GRegion("G62" if n % 2 == 0 else "G63", info)


def _thetas(a: float, b: float) -> dict[str, float]:
    r = math.sqrt(max(b * b - 4 * a, 0.0))
    lo, hi = (b - r) / 2, (b + r) / 2
    return {
        "theta1": math.pi - math.atan(lo),
        "theta2": math.pi - math.atan(hi),
        "theta3": TWO_PI - math.atan(lo),
        "theta4": TWO_PI - math.atan(hi),
        "theta5": math.pi - math.atan(b / 2),
        "theta6": TWO_PI - math.atan(b / 2),
    }


def exceptional_directions(series: SeriesData, labelled: bool = False):
    """Directions along which orbits reach a node-type origin.

    Four for G1 and G5, two for G3 and G62. With ``labelled`` the result is a
    dict keyed theta1..theta6; otherwise a sorted list in [0, 2 pi).
    """
    reg = region_of(series)
    s, _ = _normalized(series)
    th = _thetas(s.a, s.b)
    if reg.label in ("G1", "G5"):
        keys = ("theta1", "theta2", "theta3", "theta4")
    elif reg.label in ("G3", "G62"):
        keys = ("theta5", "theta6")
    else:
        raise WrongRegion(f"region {reg.label} has no exceptional directions")
    if labelled:
        return {k: th[k] % TWO_PI for k in keys}
    return sorted(th[k] % TWO_PI for k in keys)


_PARABOLIC = {
    ("symmetric", "bounded"): {0},
    ("symmetric", "unbounded"): {0, 2},
    ("symmetric", "unknown"): {0, 2},
    ("asymmetric", "bounded"): {1},
    ("asymmetric", "unbounded"): {0, 1, 2},
    ("asymmetric", "unknown"): {0, 1, 2},
}


def classify_origin(series: SeriesData, symmetry: str = "asymmetric", elliptic_bounded: str = "unknown") -> EquilibriumClass:
    cls = _classify_normalized(series, symmetry, elliptic_bounded)
    if _normalized(series)[1] and cls.kind.startswith("stable-"):
        return replace(cls, kind="un" + cls.kind)
    return cls


def _classify_normalized(series: SeriesData, symmetry: str, elliptic_bounded: str) -> EquilibriumClass:
    if symmetry not in ("symmetric", "asymmetric"):
        raise ValueError("symmetry must be 'symmetric' or 'asymmetric'")
    if elliptic_bounded not in ("bounded", "unbounded", "unknown"):
        raise ValueError("elliptic_bounded must be bounded, unbounded or unknown")
    reg = region_of(series)
    label = reg.label
    hyp = ("no closed orbits", f"{symmetry} field")
    if reg.discriminants.get("reflected"):
        hyp += ("classified after (x, y, t) -> (x, -y, -t); stability reverses",)
    if label in ("G1", "G5"):
        return EquilibriumClass("stable-node", directions=tuple(exceptional_directions(series)), region=label, assumptions=hyp)
    if label in ("G3", "G62"):
        return EquilibriumClass(
            "stable-improper-node", directions=tuple(exceptional_directions(series)), region=label, assumptions=hyp
        )
    if label == "G2":
        return EquilibriumClass("stable-focus", region=label, assumptions=hyp)
    if label in ("G4", "G61"):
        kind = "center" if symmetry == "symmetric" else "stable-focus"
        return EquilibriumClass(kind, region=label, assumptions=hyp)
    # G63
    cands = frozenset(_PARABOLIC[(symmetry, elliptic_bounded)])
    return EquilibriumClass(
        "degenerate",
        sectors={"elliptic": 1, "hyperbolic": 1},
        directions=(0.0, math.pi),
        parabolic_candidates=cands,
        region=label,
        assumptions=hyp + (f"elliptic sector {elliptic_bounded}",),
    )


# ----------------------------------------------------------------------------
# normal-form tables
# ----------------------------------------------------------------------------


def semi_hyperbolic_classify(psi_leading: tuple[float, int]) -> str:
    """x' = P2(x, y), y' = y + Q2(x, y) with psi(x) = P2(x, phi(x)) = a_m x^m + ..."""
    a_m, m = psi_leading
    if a_m == 0 or m < 2:
        raise ValueError("need a_m != 0 and m >= 2")
    if m % 2 == 0:
        return "saddle-node"
    return "unstable-node" if a_m > 0 else "saddle"


def andreev_classify(a_2m1: float, m: int, b_n: float | None, n: int | None) -> EquilibriumClass:
    """x' = y, y' = a_(2m+1) x^(2m+1) (1 + ...) + b_n x^n y (1 + ...) + y^2 p."""
    if m < 1:
        raise ValueError("need m >= 1")
    if a_2m1 == 0:
        raise ValueError("a_(2m+1) must be nonzero")
    if a_2m1 > 0:
        return EquilibriumClass("saddle", sectors={"hyperbolic": 4})
    if not b_n:
        return EquilibriumClass("center-or-focus")
    lam = b_n * b_n + 4 * (m + 1) * a_2m1
    lam_ok = lam >= 0 or abs(lam) <= DISC_TOL * max(1.0, b_n * b_n)
    if n > m or (n == m and not lam_ok):
        return EquilibriumClass("center-or-focus")
    if n % 2 == 0:
        # b_n < 0 damps every orbit through x^n >= 0
        return EquilibriumClass("stable-improper-node" if b_n < 0 else "unstable-node")
    return EquilibriumClass(
        "degenerate",
        sectors={"elliptic": 1, "hyperbolic": 1},
        directions=(0.0, math.pi),
        parabolic_candidates=frozenset({0, 1, 2}),
    )


def to_andreev(series: SeriesData) -> tuple[float, int, float | None, int | None]:
    """Arguments of ``andreev_classify`` for x' = y, y' = -g - f y with a = b = 0."""
    if series.a != 0 or series.b != 0:
        raise WrongRegion("origin is not nilpotent")
    if series.k % 2 == 0:
        raise WrongRegion("k must be odd")
    m = (series.k - 1) // 2
    bn = None if series.b_n is None else -series.b_n
    return -series.a_k, m, bn, series.n


def _as_bipoly(p) -> BiPoly:
    if isinstance(p, BiPoly):
        return p
    if isinstance(p, PolynomialField2D):
        return BiPoly(p.coeffs)
    return BiPoly(dict(p))


def jet_solve_phi(P2, Q2, order: int = 16) -> tuple[list[float], tuple[float, int]]:
    """Solve y + Q2(x, phi(x)) = 0 as a power series, return phi and the
    leading term (a_m, m) of psi(x) = P2(x, phi(x))."""
    P, Q = _as_bipoly(P2), _as_bipoly(Q2)
    for name, poly in (("P2", P), ("Q2", Q)):
        if any(i + j < 2 for i, j in poly.c):
            raise ValueError(f"{name} must have no constant or linear terms")
    N = order + 1

    def compose(poly: BiPoly, phi: np.ndarray) -> np.ndarray:
        out = np.zeros(N)
        powers = [np.zeros(N)]
        powers[0][0] = 1.0
        maxj = max((j for _, j in poly.c), default=0)
        for _ in range(maxj):
            powers.append(np.convolve(powers[-1], phi)[:N])
        for (i, j), v in poly.c.items():
            if i < N:
                out[i:] += v * powers[j][: N - i]
        return out

    phi = np.zeros(N)
    # each pass fixes at least one more coefficient
    for _ in range(N + 1):
        new = -compose(Q, phi)
        if np.array_equal(new, phi):
            break
        phi = new
    psi = compose(P, phi)
    scale = max(1.0, P.max_abs())
    for m in range(2, N):
        if abs(psi[m]) > 1e-13 * scale:
            return phi.tolist(), (float(psi[m]), m)
    raise OrderExhausted(f"psi vanishes to order {order}")


# ----------------------------------------------------------------------------
# convenience for whole systems
# ----------------------------------------------------------------------------


def symmetry_of(sys: PlanarSystem, n: int = 201) -> str:
    """'symmetric' when g is odd and f(x, y) + f(-x, y) = 0 on the core."""
    g, f = sys.g, sys.f
    if isinstance(g, PolynomialField1D):
        odd = g.is_odd()
    else:
        r = min(sys.core_radius, 10.0) * (1 - 1e-9)
        xs = np.linspace(0.0, r, n)
        odd = float(np.max(np.abs(g(xs) + g(-xs)))) <= 1e-12 * max(1.0, float(np.max(np.abs(g(xs)))))
    if not odd:
        return "asymmetric"
    if isinstance(f, PolynomialField2D):
        return "symmetric" if not f.x_even_part().coeffs else "asymmetric"
    r = min(sys.core_radius, 10.0) * (1 - 1e-9)
    X, Y = np.meshgrid(np.linspace(0.0, r, n), np.linspace(-10.0, 10.0, n), indexing="ij")
    return "symmetric" if float(np.max(np.abs(f(X, Y) + f(-X, Y)))) <= 1e-12 else "asymmetric"


def classify_system(sys: PlanarSystem, elliptic_bounded: str | None = None) -> EquilibriumClass:
    """Series, symmetry and (for Liénard-reducible G63) the boundedness test."""
    series = series_at_origin(sys)
    symmetry = symmetry_of(sys)
    if elliptic_bounded is None:
        elliptic_bounded = "unknown"
        if region_of(series).label == "G63" and sys.f.is_x_only():
            from .flow import bounded_elliptic_test, to_lienard

            F, g = to_lienard(sys)
            res = bounded_elliptic_test(F, g)
            if res.status == "bounded":
                elliptic_bounded = "bounded"
    return classify_origin(series, symmetry, elliptic_bounded)
