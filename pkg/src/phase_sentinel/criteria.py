"""Nonexistence of closed orbits for x' = y, y' = -g(x) - f(x, y) y.

Four criteria work on reflections of f:

* ``check_thm1``: g odd, f(x, y) + f(-x, y) one-signed and not identically 0
  near the y-axis.
* ``check_thm1b``: f(x, y) + f(x, -y) one-signed instead.
* ``check_thm2``: g not necessarily odd; x is paired with its conjugate x^
  (same potential G) and f/g is compared at the two points.
* ``check_thm3``: as thm1 without the sign condition on g, so only orbits
  around the origin are excluded.

Baselines for comparison: Dulac on the cubic family, the odd-part test for
classical Liénard systems and Sugie's H(w) test.

Polynomial inputs are decided exactly where a single sign test suffices;
everything else is sampled on a grid biased toward the origin, and the
report says which route was taken.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .core import (
    CubicParams,
    OpaqueField2D,
    PiecewiseLinearField1D,
    PlanarSystem,
    PolynomialField1D,
    PolynomialField2D,
    ScalarField1D,
    as_planar,
    series_at_origin,
    signed_power,
)
from .errors import PhaseSentinelError, BadExponent, BranchError, NoConjugate, NotOddG
from .polyroots import real_roots

__all__ = [
    "HOLDS",
    "EQUAL",
    "VIOLATED",
    "UNDECIDED",
    "Condition",
    "CriterionReport",
    "GridSpec",
    "ConjugateMap",
    "conjugate_point",
    "default_zeta",
    "check_thm1",
    "check_thm1b",
    "check_thm2",
    "check_thm3",
    "normalize_g",
    "normal_coordinate",
    "dulac_baseline",
    "lmp_odd_part_check",
    "sugie_check",
    "check_all",
    "best_verdict",
    "SignedPowerField1D",
]

HOLDS = "holds"
EQUAL = "holds-with-equality-everywhere"
VIOLATED = "violated"
UNDECIDED = "undecided"

NO_CLOSED = "NoClosedOrbits"
NO_CLOSED_AROUND = "NoClosedOrbitsAroundOrigin"
INCONCLUSIVE = "Inconclusive"

STRICT_TOL = 1e-9
ODD_TOL = 1e-9


@dataclass(frozen=True)
class Condition:
    id: str
    status: str
    witness: tuple[tuple[float, float], ...] = ()
    method: str = "exact"
    note: str = ""

    def __post_init__(self):
        if self.status == VIOLATED and not self.witness:
            raise ValueError(f"violated condition {self.id} needs a witness")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "status": self.status,
            "witness": [list(map(float, w)) for w in self.witness],
            "method": self.method,
            "note": self.note,
        }


@dataclass(frozen=True)
class CriterionReport:
    theorem: str
    conditions: tuple[Condition, ...]
    verdict: str
    scope: str
    grid: dict[str, Any] = field(default_factory=dict)

    def condition(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)

    @property
    def method(self) -> str:
        return "sampled" if any(c.method == "sampled" for c in self.conditions) else "exact"

    @property
    def conclusive(self) -> bool:
        return self.verdict != INCONCLUSIVE

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "verdict": self.verdict,
            "scope": self.scope,
            "method": self.method,
            "conditions": [c.to_dict() for c in self.conditions],
            "grid": dict(self.grid),
        }


@dataclass(frozen=True)
class GridSpec:
    """nx x ny samples; x log-biased toward 0, y symmetric and log-biased.

    Infinite bounds are truncated at ``x_max``; y covers [-y_max, y_max].
    """

    nx: int = 201
    ny: int = 201
    x_max: float = 10.0
    y_max: float = 10.0
    x_min_ratio: float = 1e-6

    def xs(self, hi: float) -> np.ndarray:
        hi = min(hi, self.x_max)
        return np.concatenate(([0.0], np.geomspace(hi * self.x_min_ratio, hi, self.nx - 1)))

    def ys(self, y_max: float | None = None) -> np.ndarray:
        y_max = self.y_max if y_max is None else y_max
        half = (self.ny - 1) // 2
        pos = np.geomspace(y_max * self.x_min_ratio, y_max, half)
        return np.concatenate((-pos[::-1], [0.0], pos))

    def meta(self) -> dict[str, Any]:
        return {"nx": self.nx, "ny": self.ny, "x_max": self.x_max, "y_max": self.y_max, "bias": "log"}


DEFAULT_GRID = GridSpec()


def default_zeta(sys: PlanarSystem) -> float:
    return 1e-2 * min(-sys.alpha, sys.beta, 1.0)


def _inner(v: float) -> float:
    """Largest sample point strictly inside an open bound."""
    return v * (1.0 - 1e-9) if math.isfinite(v) else v


# ----------------------------------------------------------------------------
# shared condition checks
# ----------------------------------------------------------------------------


def _cond_i(sys: PlanarSystem, grid: GridSpec) -> Condition:
    g = sys.g
    right = grid.xs(_inner(sys.beta))[1:]
    left = -grid.xs(_inner(-sys.alpha))[1:]
    xs = np.concatenate((left, right))
    vals = xs * np.asarray(g(xs), dtype=float)
    bad = np.nonzero(~(vals > 0.0))[0]
    if bad.size:
        x = float(xs[bad[np.argmin(np.abs(xs[bad]))]])
        return Condition("i", VIOLATED, ((x, 0.0),), "sampled", "x g(x) > 0 fails")
    return Condition("i", HOLDS, (), "sampled")


def _cond_ii(sys: PlanarSystem, grid: GridSpec) -> Condition:
    lo = max(sys.alpha, -grid.x_max)
    hi = min(sys.beta, grid.x_max)
    L = sys.g.lipschitz(lo, hi)
    if L is None or isinstance(sys.f, OpaqueField2D):
        return Condition("ii", HOLDS, (), "assumed", "Lipschitz continuity taken on trust for opaque fields")
    if not math.isfinite(L):
        return Condition("ii", UNDECIDED, (), "sampled", "no finite slope bound for g")
    return Condition("ii", HOLDS, (), "exact", f"slope bound {L:.6g} on the sample box")


def _sign_condition(
    cid: str,
    values: np.ndarray,
    scale: np.ndarray,
    points: tuple[np.ndarray, np.ndarray],
) -> tuple[Condition, int]:
    """One-sign test on sampled values; returns (condition, sign)."""
    tol = STRICT_TOL * (1.0 + scale)
    pos = values > tol
    neg = values < -tol
    X, Y = points
    if pos.any() and neg.any():
        ip = np.argmax(np.where(pos, 1.0, 0.0) / (1.0 + np.hypot(X, Y)))
        ineg = np.argmax(np.where(neg, 1.0, 0.0) / (1.0 + np.hypot(X, Y)))
        w = ((float(X.flat[ineg]), float(Y.flat[ineg])), (float(X.flat[ip]), float(Y.flat[ip])))
        return Condition(cid, VIOLATED, w, "sampled", "changes sign"), 0
    if not pos.any() and not neg.any():
        return Condition(cid, EQUAL, (), "sampled"), 0
    sign = 1 if pos.any() else -1
    return Condition(cid, HOLDS, (), "sampled", ">= 0" if sign > 0 else "<= 0"), sign


def _poly_sign(p: PolynomialField2D) -> int | None:
    """Exact sign for sums of c x^(2i) y^(2j) with one sign of c; else None.

    Returns 0 for the zero polynomial. Coefficients at or below the witness
    tolerance count as zero.
    """
    coeffs = {k: c for k, c in p.coeffs.items() if abs(c) > STRICT_TOL}
    if not coeffs:
        return 0
    if any(i % 2 or j % 2 for i, j in coeffs):
        return None
    signs = {1 if c > 0 else -1 for c in coeffs.values()}
    return signs.pop() if len(signs) == 1 else None


def _reflection_sum(sys: PlanarSystem, kind: str):
    f = sys.f
    if kind == "x":
        return lambda x, y: f(x, y) + f(-x, y), (lambda x, y: np.abs(f(x, y)) + np.abs(f(-x, y)))
    return lambda x, y: f(x, y) + f(x, -y), (lambda x, y: np.abs(f(x, y)) + np.abs(f(x, -y)))


def _strict_witness(fun, scale, zeta: float, grid: GridSpec) -> tuple[float, float] | None:
    xs = np.geomspace(zeta * 1e-6, zeta * (1 - 1e-9), 64)
    ys = grid.ys()
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    v = np.abs(fun(X, Y))
    ok = v > STRICT_TOL
    if not ok.any():
        return None
    # prefer the point closest to the y-axis with the largest value
    i = np.argmax(np.where(ok, v, -1.0))
    return float(X.flat[i]), float(Y.flat[i])


def _cond_iii(sys: PlanarSystem, kind: str, grid: GridSpec, cid: str) -> tuple[Condition, Any]:
    """(iii) for kind 'x' on 0 <= x < core, (iii') for kind 'y' on the strip."""
    fun, scale = _reflection_sum(sys, kind)
    if isinstance(sys.f, PolynomialField2D):
        part = sys.f.x_even_part() if kind == "x" else sys.f.y_even_part()
        s = _poly_sign(part)
        if s == 0:
            return Condition(cid, EQUAL, (), "exact", "reflection sum is identically 0"), part
        if s is not None:
            return Condition(cid, HOLDS, (), "exact", ">= 0" if s > 0 else "<= 0"), part
    if kind == "x":
        xs = grid.xs(_inner(sys.core_radius))
    else:
        xs = np.concatenate((-grid.xs(_inner(-sys.alpha))[:0:-1], grid.xs(_inner(sys.beta))))
    X, Y = np.meshgrid(xs, grid.ys(), indexing="ij")
    cond, _ = _sign_condition(cid, fun(X, Y), scale(X, Y), (X, Y))
    return cond, None


def _nonzero_poly(part: Any) -> bool:
    """A nonzero polynomial cannot vanish on an open set. Coefficients below
    the witness tolerance count as zero, as they do for sampled witnesses."""
    return isinstance(part, PolynomialField2D) and any(abs(c) > STRICT_TOL for c in part.coeffs.values())


def _cond_iv(sys: PlanarSystem, zeta: float, grid: GridSpec, cid: str = "iv") -> Condition:
    fun, scale = _reflection_sum(sys, "x")
    w = _strict_witness(fun, scale, zeta, grid)
    note = f"f(x,y) + f(-x,y) vanishes on (0, {zeta:.3g}) x [-Y, Y]"
    if isinstance(sys.f, PolynomialField2D):
        if _nonzero_poly(sys.f.x_even_part()):
            return Condition(cid, HOLDS, (w,) if w else (), "exact", f"zeta={zeta:.3g}")
        return Condition(cid, VIOLATED, ((0.5 * zeta, 0.0),), "exact", note)
    if w is not None:
        return Condition(cid, HOLDS, (w,), "sampled", f"zeta={zeta:.3g}")
    return Condition(cid, VIOLATED, ((0.5 * zeta, 0.0),), "sampled", note)


def _require_odd_g(sys: PlanarSystem, grid: GridSpec) -> None:
    g = sys.g
    if isinstance(g, PolynomialField1D):
        if not g.is_odd():
            raise NotOddG(f"g has even coefficients: {g.coeffs}")
        return
    r = min(sys.core_radius, grid.x_max) * (1 - 1e-9)
    xs = grid.xs(r)
    scale = max(1.0, float(np.max(np.abs(g(xs)))))
    defect = g.odd_defect(r) if isinstance(g, PiecewiseLinearField1D) else float(np.max(np.abs(g(xs) + g(-xs))))
    if defect > ODD_TOL * scale:
        raise NotOddG(f"max |g(x) + g(-x)| = {defect:.3g} on the core")


def _verdict(conds: Sequence[Condition], strict: Sequence[str], success: str) -> str:
    for c in conds:
        if c.status == HOLDS:
            continue
        if c.status == EQUAL and c.id not in strict:
            continue
        return INCONCLUSIVE
    return success


# ----------------------------------------------------------------------------
# criteria
# ----------------------------------------------------------------------------


def check_thm1(sys: PlanarSystem, zeta: float | None = None, grid: GridSpec = DEFAULT_GRID) -> CriterionReport:
    _require_odd_g(sys, grid)
    zeta = default_zeta(sys) if zeta is None else zeta
    iii, _ = _cond_iii(sys, "x", grid, "iii")
    conds = (_cond_i(sys, grid), _cond_ii(sys, grid), iii, _cond_iv(sys, zeta, grid))
    verdict = _verdict(conds, ("iv",), NO_CLOSED)
    return CriterionReport("T1", conds, verdict, f"strip ({sys.alpha}, {sys.beta})", {**grid.meta(), "zeta": zeta})


def check_thm1b(sys: PlanarSystem, zeta: float | None = None, grid: GridSpec = DEFAULT_GRID) -> CriterionReport:
    zeta = default_zeta(sys) if zeta is None else zeta
    iii, _ = _cond_iii(sys, "y", grid, "iii'")
    iv = _cond_iv(sys, zeta, grid)
    if iii.status == HOLDS and iv.status != HOLDS:
        iv = Condition(iv.id, iv.status, iv.witness, iv.method, iv.note + "; (iii') holds but the x-reflection condition fails")
    conds = (_cond_i(sys, grid), _cond_ii(sys, grid), iii, iv)
    verdict = _verdict(conds, ("iii'", "iv"), NO_CLOSED)
    return CriterionReport("T1b", conds, verdict, f"strip ({sys.alpha}, {sys.beta})", {**grid.meta(), "zeta": zeta})


def check_thm3(sys: PlanarSystem, zeta: float | None = None, grid: GridSpec = DEFAULT_GRID) -> CriterionReport:
    _require_odd_g(sys, grid)
    zeta = default_zeta(sys) if zeta is None else zeta
    iii, _ = _cond_iii(sys, "x", grid, "iii")
    conds = (_cond_ii(sys, grid), iii, _cond_iv(sys, zeta, grid))
    verdict = _verdict(conds, ("iv",), NO_CLOSED_AROUND)
    return CriterionReport("T3", conds, verdict, "around O", {**grid.meta(), "zeta": zeta})


# ----------------------------------------------------------------------------
# conjugate points and the two-sided criterion
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugateMap:
    """x -> x^ < 0 with G(x^) = G(x) for a g defined on (alpha, beta)."""

    g: ScalarField1D
    tolerance: float = 1e-12
    alpha: float | None = None

    @property
    def lower(self) -> float:
        return self.g.alpha if self.alpha is None else self.alpha


def _is_odd_poly(g: ScalarField1D) -> bool:
    return isinstance(g, PolynomialField1D) and g.is_odd()


def conjugate_point(cm: ConjugateMap, x: float) -> float:
    if not x > 0:
        raise ValueError("conjugate_point needs x > 0")
    g, alpha = cm.g, cm.lower
    if _is_odd_poly(g) and -x > alpha:
        return -float(x)
    target = float(g.integral(x))
    G = lambda s: float(g.integral(s)) - target  # noqa: E731
    # walk left until G(s) >= target
    slack = cm.tolerance * max(1.0, abs(target))
    hi, lo = 0.0, max(-min(float(x), 1.0), alpha)
    while G(lo) < 0.0:
        if lo == alpha:
            if G(lo) < -slack:
                raise NoConjugate(f"G reaches only {G(lo) + target:.6g} < G({x}) = {target:.6g} on ({alpha}, 0)")
            return lo
        if lo < -1e12:
            raise NoConjugate(f"G never reaches {target:.6g} on (-inf, 0)")
        hi, lo = lo, max(2.0 * lo, alpha)
    flo = G(lo)
    if flo == 0.0:
        return lo
    # bisection to the last representable bit
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = G(mid)
        if fm == 0.0:
            return mid
        if fm > 0.0:
            lo = mid
        else:
            hi = mid
    return lo if abs(G(lo)) <= abs(G(hi)) else hi


def _parse_exponent(m) -> Fraction:
    m = Fraction(m).limit_denominator(10**6)
    if m.numerator % 2 == 0 or m.denominator % 2 == 0:
        raise BadExponent(f"m = {m}: numerator and denominator must be odd")
    if m < 1:
        raise BadExponent(f"m = {m} < 1")
    return m


def check_thm2(
    sys: PlanarSystem,
    m: Fraction | int | str = 1,
    zeta: float | None = None,
    grid: GridSpec = DEFAULT_GRID,
) -> CriterionReport:
    m = _parse_exponent(m)
    zeta = default_zeta(sys) if zeta is None else zeta
    cm = ConjugateMap(sys.g, alpha=sys.alpha)
    f, g = sys.f, sys.g
    xs = grid.xs(_inner(sys.core_radius))[1:]
    hats = np.array([conjugate_point(cm, float(x)) for x in xs])
    ys = grid.ys()
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    XH = np.broadcast_to(hats[:, None], X.shape)
    gx, gh = g(X), g(XH)
    D = f(X, Y) / gx - f(XH, Y) / gh
    scale = np.abs(f(X, Y) / gx) + np.abs(f(XH, Y) / gh)
    v, sign = _sign_condition("v", D, scale, (X, Y))
    if _is_odd_poly(g) and isinstance(f, PolynomialField2D):
        # x^ = -x exactly, D = (f(x,y) + f(-x,y)) / g(x) with g(x) > 0
        s = _poly_sign(f.x_even_part())
        if s == 0:
            v = Condition("v", EQUAL, (), "exact", "ratio difference is identically 0")
        elif s is not None:
            v = Condition("v", HOLDS, (), "exact", ">= 0" if s > 0 else "<= 0")
    # (vi): strict somewhere in (0, zeta)
    near = X < zeta
    tol = STRICT_TOL * (1.0 + scale)
    strict = near & (np.abs(D) > tol)
    w = (float(X.flat[np.argmax(strict)]), float(Y.flat[np.argmax(strict)])) if strict.any() else None
    if _is_odd_poly(g) and isinstance(f, PolynomialField2D):
        if _nonzero_poly(f.x_even_part()):
            vi = Condition("vi", HOLDS, (w,) if w else (), "exact", f"zeta={zeta:.3g}")
        else:
            vi = Condition("vi", VIOLATED, ((0.5 * zeta, 0.0),), "exact", "ratio difference vanishes near the y-axis")
    elif w is not None:
        vi = Condition("vi", HOLDS, (w,), "sampled", f"zeta={zeta:.3g}")
    else:
        vi = Condition("vi", VIOLATED, ((0.5 * zeta, 0.0),), "sampled", "ratio difference vanishes near the y-axis")
    conds = (_cond_i(sys, grid), _cond_ii(sys, grid), v, vi)
    verdict = _verdict(conds, ("vi",), NO_CLOSED)
    return CriterionReport(
        "T2", conds, verdict, f"strip ({sys.alpha}, {sys.beta})", {**grid.meta(), "zeta": zeta, "m": str(m)}
    )


# ----------------------------------------------------------------------------
# normalizing transform u = ((m+1) G(x))^(1/(m+1)) sgn x
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class SignedPowerField1D(ScalarField1D):
    """g(u) = sgn(u) |u|^m."""

    m: Fraction = Fraction(1)
    alpha: float = -math.inf
    beta: float = math.inf
    kind: str = field(default="signed-power", init=False)

    def __call__(self, x):
        return signed_power(x, self.m)

    def integral(self, x):
        return np.abs(x) ** (float(self.m) + 1.0) / (float(self.m) + 1.0)

    def lipschitz(self, lo: float, hi: float) -> float | None:
        r = max(abs(lo), abs(hi))
        return float(self.m) * r ** (float(self.m) - 1.0) if math.isfinite(r) else math.inf

    def odd_defect(self, radius: float, n: int = 401) -> float:
        return 0.0


def normal_coordinate(g: ScalarField1D, m, x):
    """u(x) = ((m+1) G(x))^(1/(m+1)) sgn x."""
    m = Fraction(m)
    G = np.asarray(g.integral(x), dtype=float)
    u = np.sign(x) * np.maximum((float(m) + 1.0) * G, 0.0) ** (1.0 / (float(m) + 1.0))
    return float(u) if np.ndim(u) == 0 else u


def _leading_h0(g: ScalarField1D, m: Fraction) -> float:
    if isinstance(g, PolynomialField1D) and m.denominator == 1 and m.numerator < len(g.coeffs):
        if all(c == 0.0 for c in g.coeffs[: m.numerator]):
            return float(g.coeffs[m.numerator])
    eps = 1e-6
    return 0.5 * (g(eps) / eps ** float(m) + g(-eps) / signed_power(-eps, m))


def normalize_g(sys: PlanarSystem, m: Fraction | int | str = 1) -> PlanarSystem:
    """System in (u, y) with g replaced by u^m (signed)."""
    m = _parse_exponent(m)
    g, f = sys.g, sys.f
    mf = float(m)
    h0 = _leading_h0(g, m)
    if not h0 > 0:
        raise NoConjugate(f"g(x) / x^m does not tend to a positive limit (h(0) = {h0:.3g})")
    ua = normal_coordinate(g, m, sys.alpha) if math.isfinite(sys.alpha) else -math.inf
    ub = normal_coordinate(g, m, sys.beta) if math.isfinite(sys.beta) else math.inf

    def x_of_u(u: float) -> float:
        if u == 0.0:
            return 0.0
        target = abs(u) ** (mf + 1.0) / (mf + 1.0)
        s = 1.0 if u > 0 else -1.0
        bound = sys.beta if u > 0 else -sys.alpha
        lo, hi = 0.0, min(1.0, bound * (1 - 1e-12))
        while g.integral(s * hi) < target:
            lo = hi
            hi = min(2.0 * hi, bound * (1 - 1e-12))
            if hi == lo or hi > 1e12:
                raise NoConjugate(f"G cannot be inverted at u = {u}")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if g.integral(s * mid) < target:
                lo = mid
            else:
                hi = mid
        return s * 0.5 * (lo + hi)

    lim = h0 ** (-1.0 / (mf + 1.0))

    def F(u, y):
        u_arr, y_arr = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(y, dtype=float))
        out = np.empty(u_arr.shape)
        for idx in np.ndindex(u_arr.shape):
            uu, yy = float(u_arr[idx]), float(y_arr[idx])
            if abs(uu) < 1e-9:
                out[idx] = float(f(0.0, yy)) * lim
            else:
                xx = x_of_u(uu)
                out[idx] = float(f(xx, yy)) * float(signed_power(uu, m)) / float(g(xx))
        return float(out) if out.ndim == 0 else out

    new_g = SignedPowerField1D(m, ua, ub)
    return PlanarSystem(new_g, OpaqueField2D(F, smooth=False), ua, ub, name=f"normalized({sys.name}, m={m})")


# ----------------------------------------------------------------------------
# baselines
# ----------------------------------------------------------------------------


def dulac_baseline(params: CubicParams) -> CriterionReport:
    """Bendixson-Dulac with B = 1: div = -mu - a x^2 - 2b xy - 3c y^2."""
    mu, a, b, c = params.mu, params.a, params.b, params.c
    nonzero = mu != 0 or a != 0 or b != 0 or c != 0
    conds = []
    if not nonzero:
        conds.append(Condition("div-not-identically-zero", VIOLATED, ((0.0, 0.0),), "exact", "divergence is 0"))
    else:
        conds.append(Condition("div-not-identically-zero", HOLDS))
    same = (mu >= 0 and a >= 0 and c >= 0) or (mu <= 0 and a <= 0 and c <= 0)
    conds.append(Condition("same-sign", HOLDS if same else VIOLATED, () if same else ((0.0, 0.0),)))
    disc = b * b - 3 * a * c
    if disc <= 0:
        conds.append(Condition("b^2-3ac<=0", HOLDS, (), "exact", f"b^2-3ac={disc:.6g}"))
    else:
        conds.append(Condition("b^2-3ac<=0", VIOLATED, (_div_witness(mu, a, b, c),), "exact", f"b^2-3ac={disc:.6g}"))
    verdict = NO_CLOSED if all(c.status == HOLDS for c in conds) else INCONCLUSIVE
    return CriterionReport("DulacB1", tuple(conds), verdict, "plane")


def _div_witness(mu, a, b, c) -> tuple[float, float]:
    """A point where the divergence is positive (possible when b^2 > 3ac)."""
    if a > 0:
        x, y = -b / a, 1.0
    else:
        x, y = -(3 * c + 1.0) / (2 * b), 1.0
    q = a * x * x + 2 * b * x * y + 3 * c * y * y
    t = math.sqrt(2.0 * (abs(mu) + 1.0) / abs(q)) if q < 0 else 1.0
    return (t * x, t * y)


def lmp_odd_part_check(F: PolynomialField1D) -> CriterionReport:
    """Liénard x' = y - F(x), y' = -x: no closed orbits when the odd part of F
    vanishes only at 0."""
    coeffs = list(F.coeffs)
    if abs(coeffs[0]) > 0:
        raise ValueError("F(0) must be 0")
    odd = [c if i % 2 else 0.0 for i, c in enumerate(coeffs)]
    if not any(odd):
        cond = Condition("odd-part-unique-zero", VIOLATED, ((1.0, 0.0),), "exact", "odd part is identically 0")
    else:
        roots = [r for r in real_roots(odd) if r != 0.0]
        if roots:
            r = min(roots, key=abs)
            cond = Condition("odd-part-unique-zero", VIOLATED, ((r, 0.0),), "exact", f"extra zeros {roots}")
        else:
            cond = Condition("odd-part-unique-zero", HOLDS, (), "exact")
    verdict = NO_CLOSED_AROUND if cond.status == HOLDS else INCONCLUSIVE
    return CriterionReport("LMP", (cond,), verdict, "around O")


def _branch(g: ScalarField1D, w: float, side: float, bound: float) -> float:
    """x on one side of 0 with int_0^x |g| = w."""
    Gabs = lambda x: abs(float(g.integral(side * x)))  # noqa: E731
    lo, hi = 0.0, min(1.0, bound)
    while Gabs(hi) < w:
        lo = hi
        if hi >= bound:
            raise BranchError(f"w = {w:.6g} exceeds the range of G on side {side:+.0f}")
        hi = min(2.0 * hi, bound)
        if hi > 1e12:
            raise BranchError(f"G^-1({w:.6g}) not found")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if Gabs(mid) < w:
            lo = mid
        else:
            hi = mid
    return side * 0.5 * (lo + hi)


def sugie_check(
    F: ScalarField1D,
    g: ScalarField1D,
    w_max: float = 10.0,
    grid: GridSpec = DEFAULT_GRID,
    alpha: float | None = None,
    beta: float | None = None,
) -> CriterionReport:
    """H(w) = F(G^-1(-w)) - F(G^-1(w)) on (0, min(w_max, M))."""
    alpha = g.alpha if alpha is None else alpha
    beta = g.beta if beta is None else beta
    far = 1e6
    ends = [abs(float(g.integral(b))) for b in (max(alpha, -far), min(beta, far))]
    M = min(ends)
    top = min(w_max, M) * (1 - 1e-9)
    if not top > 0:
        raise BranchError("empty w-range")
    ws = np.geomspace(top * 1e-12, top, grid.nx)
    right = [_branch(g, w, 1.0, min(beta, far)) for w in ws]
    left = [_branch(g, w, -1.0, min(-alpha, far)) for w in ws]
    Fp = np.array([float(F(x)) for x in right])
    Fm = np.array([float(F(x)) for x in left])
    H = Fm - Fp
    tol = STRICT_TOL * (np.abs(Fp) + np.abs(Fm)) + 1e-300
    nz = np.abs(H) > tol
    pts = tuple((float(w), float(h)) for w, h in zip(ws, H))
    if nz.all():
        a = Condition("sugie-a", HOLDS, (), "sampled")
    else:
        i = int(np.argmax(~nz))
        a = Condition("sugie-a", VIOLATED, (pts[i],), "sampled", "H(w) = 0 at a sampled w (witness is (w, H))")
    pos, neg = H > tol, H < -tol
    if pos.any() and neg.any():
        b1 = Condition("sugie-b-sign", VIOLATED, (pts[int(np.argmax(pos))], pts[int(np.argmax(neg))]), "sampled")
    elif not (pos.any() or neg.any()):
        b1 = Condition("sugie-b-sign", EQUAL, (), "sampled")
    else:
        b1 = Condition("sugie-b-sign", HOLDS, (), "sampled", ">= 0" if pos.any() else "<= 0")
    head = nz[: max(10, grid.nx // 10)]
    if head.sum() >= min(5, head.size):
        b2 = Condition("sugie-b-strict", HOLDS, (pts[int(np.argmax(head))],), "sampled")
    else:
        b2 = Condition("sugie-b-strict", VIOLATED, (pts[0],), "sampled", "H vanishes near w = 0")
    conds = (a, b1, b2)
    if b1.status == HOLDS and b2.status == HOLDS:
        tag, verdict = "SugieB", NO_CLOSED
    elif a.status == HOLDS:
        tag, verdict = "SugieA", NO_CLOSED
    else:
        tag, verdict = "SugieB", INCONCLUSIVE
    return CriterionReport(tag, conds, verdict, "plane", {"nw": grid.nx, "w_top": float(top), "M": float(M)})


# ----------------------------------------------------------------------------


def check_all(obj, zeta: float | None = None, grid: GridSpec = DEFAULT_GRID) -> list[CriterionReport]:
    """Every applicable criterion; NotOddG and friends become skipped entries."""
    sys = as_planar(obj)
    out: list[CriterionReport] = []
    for fn in (check_thm1, check_thm1b, check_thm3):
        try:
            out.append(fn(sys, zeta, grid))
        except NotOddG:
            continue
    if not (isinstance(sys.g, PolynomialField1D) and sys.g.is_odd()):
        try:
            m = series_at_origin(sys).k
        except PhaseSentinelError:
            m = 1
        try:
            out.append(check_thm2(sys, m, zeta, grid))
        except (NoConjugate, BadExponent):
            pass
    if isinstance(obj, CubicParams):
        out.append(dulac_baseline(obj))
    return out


def best_verdict(reports: Sequence[CriterionReport]) -> str:
    vs = {r.verdict for r in reports}
    if NO_CLOSED in vs:
        return NO_CLOSED
    if NO_CLOSED_AROUND in vs:
        return NO_CLOSED_AROUND
    return INCONCLUSIVE
