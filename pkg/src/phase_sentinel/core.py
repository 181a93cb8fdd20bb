"""Planar systems of the form x' = y, y' = -g(x) - f(x, y) y.

The module holds the field representations (polynomial, piecewise-linear,
opaque callables), the origin jet extraction and the JSON document format.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import DomainError, NotAnEquilibrium, OrderExhausted, ParseError

__all__ = [
    "ScalarField1D",
    "PolynomialField1D",
    "PiecewiseLinearField1D",
    "OpaqueField1D",
    "ScalarField2D",
    "PolynomialField2D",
    "OpaqueField2D",
    "PlanarSystem",
    "SeriesData",
    "CubicParams",
    "eval_field",
    "series_at_origin",
    "parse_system",
    "serialize_system",
    "load_system",
    "as_planar",
    "signed_power",
    "DEFAULT_MAX_ORDER",
]

DEFAULT_MAX_ORDER = 16
_INF = math.inf


def _horner(coeffs: Sequence[float], x):
    acc = 0.0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    out = [float(c) for c in coeffs]
    while len(out) > 1 and out[-1] == 0.0:
        out.pop()
    return tuple(out) if out else (0.0,)


# ----------------------------------------------------------------------------
# one-variable fields
# ----------------------------------------------------------------------------


class ScalarField1D:
    """Common interface for g(x)."""

    alpha: float = -_INF
    beta: float = _INF
    kind: str = "abstract"

    def __call__(self, x):  # pragma: no cover - interface
        raise NotImplementedError

    def integral(self, x):
        """G(x) = int_0^x g(s) ds."""
        raise NotImplementedError

    def lipschitz(self, lo: float, hi: float) -> float | None:
        """Bound on |g'| over [lo, hi]; None when it cannot be verified."""
        return None

    def odd_defect(self, radius: float, n: int = 401) -> float:
        """max |g(x) + g(-x)| over a grid of [0, radius]."""
        xs = np.linspace(0.0, radius, n)
        return float(np.max(np.abs(self(xs) + self(-xs))))

    def in_domain(self, x: float) -> bool:
        return self.alpha < x < self.beta


@dataclass(frozen=True)
class PolynomialField1D(ScalarField1D):
    """g(x) = sum_i coeffs[i] x^i."""

    coeffs: tuple[float, ...]
    alpha: float = -_INF
    beta: float = _INF
    kind: str = field(default="polynomial", init=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    def __call__(self, x):
        return _horner(self.coeffs, x)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def derivative(self) -> "PolynomialField1D":
        d = [i * c for i, c in enumerate(self.coeffs)][1:] or [0.0]
        return PolynomialField1D(tuple(d), self.alpha, self.beta)

    def antiderivative(self) -> "PolynomialField1D":
        a = [0.0] + [c / (i + 1) for i, c in enumerate(self.coeffs)]
        return PolynomialField1D(tuple(a), self.alpha, self.beta)

    def integral(self, x):
        return self.antiderivative()(x)

    def lipschitz(self, lo: float, hi: float) -> float | None:
        d = self.derivative()
        xs = np.linspace(lo, hi, 2001)
        # sample plus a margin for the curvature between nodes
        dd = d.derivative()
        h = (hi - lo) / 2000.0
        return float(np.max(np.abs(d(xs))) + h * np.max(np.abs(dd(xs))))

    def odd_defect(self, radius: float, n: int = 401) -> float:
        # exact: the even coefficients must vanish
        ev = [abs(c) * radius ** i for i, c in enumerate(self.coeffs) if i % 2 == 0]
        return float(sum(ev))

    def is_odd(self) -> bool:
        return all(c == 0.0 for i, c in enumerate(self.coeffs) if i % 2 == 0)

    def with_domain(self, alpha: float, beta: float) -> "PolynomialField1D":
        return PolynomialField1D(self.coeffs, alpha, beta)


@dataclass(frozen=True)
class PiecewiseLinearField1D(ScalarField1D):
    """Continuous piecewise-linear g; each segment is (lo, hi, slope, intercept)."""

    segments: tuple[tuple[float, float, float, float], ...]
    alpha: float = -_INF
    beta: float = _INF
    kind: str = field(default="piecewise", init=False)

    def __post_init__(self):
        segs = tuple(tuple(float(v) for v in s) for s in self.segments)
        if not segs:
            raise ValueError("piecewise field needs at least one segment")
        for s in segs:
            if len(s) != 4 or not s[0] < s[1]:
                raise ValueError(f"bad segment {s}")
        for s0, s1 in zip(segs, segs[1:]):
            if s0[1] != s1[0]:
                raise ValueError("segments must be contiguous and ordered")
            xb = s0[1]
            left, right = s0[2] * xb + s0[3], s1[2] * xb + s1[3]
            if abs(left - right) > 1e-12 * max(1.0, abs(left)):
                raise ValueError(f"piecewise field is discontinuous at x={xb}")
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "_breaks", np.array([s[1] for s in segs[:-1]]))
        object.__setattr__(self, "_slopes", np.array([s[2] for s in segs]))
        object.__setattr__(self, "_icepts", np.array([s[3] for s in segs]))

    @property
    def lo(self) -> float:
        return self.segments[0][0]

    @property
    def hi(self) -> float:
        return self.segments[-1][1]

    def __call__(self, x):
        idx = np.searchsorted(self._breaks, x, side="right")
        out = self._slopes[idx] * x + self._icepts[idx]
        if np.ndim(out) == 0:
            return float(out)
        return out

    def _segment_integral(self, s, a: float, b: float) -> float:
        _, _, k, c = s
        return 0.5 * k * (b * b - a * a) + c * (b - a)

    def integral(self, x):
        if np.ndim(x):
            return np.array([self.integral(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
        x = float(x)
        lo, hi = (0.0, x) if x >= 0 else (x, 0.0)
        total = 0.0
        for s in self.segments:
            a, b = max(lo, s[0]), min(hi, s[1])
            if a < b:
                total += self._segment_integral(s, a, b)
        return total if x >= 0 else -total

    def lipschitz(self, lo: float, hi: float) -> float | None:
        ks = [abs(s[2]) for s in self.segments if s[1] > lo and s[0] < hi]
        return float(max(ks)) if ks else 0.0

    def odd_defect(self, radius: float, n: int = 401) -> float:
        # linear between nodes, so breakpoints and their mirrors are enough
        pts = {0.0, radius}
        for s in self.segments:
            for v in (s[0], s[1]):
                if math.isfinite(v) and abs(v) <= radius:
                    pts.add(abs(v))
        xs = np.array(sorted(pts))
        return float(np.max(np.abs(self(xs) + self(-xs))))


@dataclass(frozen=True)
class OpaqueField1D(ScalarField1D):
    """g given by a callable; jets are never extracted from it."""

    func: Callable[[Any], Any]
    smooth: bool = True
    alpha: float = -_INF
    beta: float = _INF
    kind: str = field(default="opaque", init=False)

    def __call__(self, x):
        return self.func(x)

    def integral(self, x):
        from scipy.integrate import quad

        if np.ndim(x):
            return np.array([self.integral(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
        val, _ = quad(lambda s: float(self.func(s)), 0.0, float(x), limit=200, epsabs=1e-14, epsrel=1e-13)
        return val


# ----------------------------------------------------------------------------
# two-variable fields
# ----------------------------------------------------------------------------


class ScalarField2D:
    kind: str = "abstract"

    def __call__(self, x, y):  # pragma: no cover - interface
        raise NotImplementedError

    def is_x_only(self) -> bool:
        return False


@dataclass(frozen=True)
class PolynomialField2D(ScalarField2D):
    """f(x, y) = sum coeffs[(i, j)] x^i y^j."""

    coeffs: Mapping[tuple[int, int], float]
    kind: str = field(default="polynomial", init=False)

    def __post_init__(self):
        clean = {}
        for (i, j), c in dict(self.coeffs).items():
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise ValueError("negative exponent")
            if c != 0.0:
                clean[(i, j)] = clean.get((i, j), 0.0) + float(c)
        clean = {k: v for k, v in sorted(clean.items()) if v != 0.0}
        object.__setattr__(self, "coeffs", clean)
        # rows: y-power -> x coefficient list, for Horner evaluation
        rows: dict[int, list[float]] = {}
        for (i, j), c in clean.items():
            row = rows.setdefault(j, [])
            row.extend([0.0] * (i + 1 - len(row)))
            row[i] += c
        object.__setattr__(self, "_rows", tuple(sorted((j, tuple(r)) for j, r in rows.items())))

    def __call__(self, x, y):
        acc = 0.0 * x * y
        for j, row in self._rows:
            term = _horner(row, x)
            acc = acc + (term * y ** j if j else term)
        return acc

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __eq__(self, other):
        return isinstance(other, PolynomialField2D) and self.coeffs == other.coeffs

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.coeffs), default=0)

    def is_x_only(self) -> bool:
        return all(j == 0 for _, j in self.coeffs)

    def x_polynomial(self) -> tuple[float, ...]:
        """Coefficients of f(x, 0)."""
        deg = max((i for i, j in self.coeffs if j == 0), default=0)
        out = [0.0] * (deg + 1)
        for (i, j), c in self.coeffs.items():
            if j == 0:
                out[i] = c
        return tuple(out)

    def x_even_part(self) -> "PolynomialField2D":
        """f(x, y) + f(-x, y), computed on coefficients."""
        return PolynomialField2D({(i, j): 2.0 * c for (i, j), c in self.coeffs.items() if i % 2 == 0})

    def y_even_part(self) -> "PolynomialField2D":
        """f(x, y) + f(x, -y)."""
        return PolynomialField2D({(i, j): 2.0 * c for (i, j), c in self.coeffs.items() if j % 2 == 0})


@dataclass(frozen=True)
class OpaqueField2D(ScalarField2D):
    func: Callable[[Any, Any], Any]
    smooth: bool = True
    x_only: bool = False
    kind: str = field(default="opaque", init=False)

    def __call__(self, x, y):
        return self.func(x, y)

    def is_x_only(self) -> bool:
        return self.x_only


# ----------------------------------------------------------------------------
# systems
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PlanarSystem:
    """x' = y, y' = -g(x) - f(x, y) y on the strip alpha < x < beta."""

    g: ScalarField1D
    f: ScalarField2D
    alpha: float = -_INF
    beta: float = _INF
    name: str | None = None

    def __post_init__(self):
        if not (self.alpha < 0.0 < self.beta):
            raise DomainError(f"need alpha < 0 < beta, got ({self.alpha}, {self.beta})")

    def rhs(self, x, y):
        """Unchecked vector field; works on floats and arrays."""
        return y, -self.g(x) - self.f(x, y) * y

    def in_strip(self, x: float) -> bool:
        return self.alpha < x < self.beta

    def energy(self, x, y):
        """E = y^2/2 + G(x)."""
        return 0.5 * y * y + self.g.integral(x)

    @property
    def core_radius(self) -> float:
        return min(-self.alpha, self.beta)


def eval_field(sys: PlanarSystem, p: Sequence[float]) -> tuple[float, float]:
    x, y = float(p[0]), float(p[1])
    if not sys.in_strip(x):
        raise DomainError(f"x={x} outside ({sys.alpha}, {sys.beta})")
    vx, vy = sys.rhs(x, y)
    return float(vx), float(vy)


@dataclass(frozen=True)
class SeriesData:
    """Jet of (g, f) at the origin.

    ``a = g'(0)``, ``b = f(0, 0)``; ``a_k x^k`` is the leading term of g and
    ``b_n x^n`` the leading term of f(x, 0) - b. For a != 0 we store k = 1.
    """

    a: float
    b: float
    a_k: float
    k: int
    b_n: float | None
    n: int | None
    y_remainder_present: bool

    def reflected(self) -> "SeriesData":
        """Effect of (x, y, t) -> (x, -y, -t): f changes sign."""
        return SeriesData(
            self.a,
            0.0 - self.b,
            self.a_k,
            self.k,
            None if self.b_n is None else 0.0 - self.b_n,
            self.n,
            self.y_remainder_present,
        )


def _g_coeffs(g: ScalarField1D, max_order: int) -> list[float]:
    if isinstance(g, PolynomialField1D):
        c = list(g.coeffs)
    elif isinstance(g, PiecewiseLinearField1D):
        idx = int(np.searchsorted(g._breaks, 0.0, side="right"))
        lo, hi, k, c0 = g.segments[idx]
        if not lo < 0.0 < hi:
            raise OrderExhausted("origin sits on a breakpoint of g")
        c = [c0, k]
    else:
        raise OrderExhausted("series extraction refuses opaque g")
    return (c + [0.0] * (max_order + 1))[: max_order + 1]


def series_at_origin(sys: PlanarSystem, max_order: int = DEFAULT_MAX_ORDER) -> SeriesData:
    gc = _g_coeffs(sys.g, max_order)
    if gc[0] != 0.0:
        raise NotAnEquilibrium(f"g(0) = {gc[0]} != 0")
    if not isinstance(sys.f, PolynomialField2D):
        raise OrderExhausted("series extraction refuses opaque f")
    nz = [i for i in range(1, max_order + 1) if gc[i] != 0.0]
    if not nz:
        raise OrderExhausted(f"g vanishes to order {max_order}")
    k = nz[0]
    fc = sys.f.coeffs
    b = fc.get((0, 0), 0.0)
    pure = sorted(i for (i, j), c in fc.items() if j == 0 and i >= 1 and i <= max_order)
    b_n, n = (fc[(pure[0], 0)], pure[0]) if pure else (None, None)
    y_rem = any(j >= 1 for (_, j) in fc)
    return SeriesData(a=gc[1], b=b, a_k=gc[k], k=k, b_n=b_n, n=n, y_remainder_present=y_rem)


# ----------------------------------------------------------------------------
# cubic family
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CubicParams:
    """y' = -lambda x - mu y - kappa x^3 - a x^2 y - b x y^2 - c y^3.

    ``sys61`` fixes kappa = 1, ``sys71`` fixes lambda = 1 and kappa = 0.
    """

    family: str
    lambda_: float = 0.0
    mu: float = 0.0
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        if self.family not in ("sys61", "sys71", "general"):
            raise ParseError(f"unknown family {self.family!r}", field="family")
        vals = dict(lambda_=self.lambda_, mu=self.mu, a=self.a, b=self.b, c=self.c, kappa=self.kappa)
        for k, v in vals.items():
            if not math.isfinite(float(v)):
                raise ParseError("parameter must be finite", field=k.rstrip("_"))
            object.__setattr__(self, k, float(v))
        if self.family == "sys61":
            object.__setattr__(self, "kappa", 1.0)
        elif self.family == "sys71":
            object.__setattr__(self, "lambda_", 1.0)
            object.__setattr__(self, "kappa", 0.0)
        if self.family != "general":
            for name in ("lambda_", "mu", "a", "c"):
                if getattr(self, name) < 0.0:
                    raise ParseError(f"{self.family} requires {name.rstrip('_')} >= 0", field=name.rstrip("_"))
            if self.b == 0.0:
                raise ParseError(f"{self.family} requires b != 0", field="b")

    def to_system(self) -> PlanarSystem:
        g = PolynomialField1D((0.0, self.lambda_, 0.0, self.kappa))
        f = PolynomialField2D({(0, 0): self.mu, (2, 0): self.a, (1, 1): self.b, (0, 2): self.c})
        return PlanarSystem(g, f, name=self.family)

    def as_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"family": self.family}
        if self.family == "sys61":
            d.update(**{"lambda": self.lambda_, "mu": self.mu, "a": self.a, "b": self.b, "c": self.c})
        elif self.family == "sys71":
            d.update(mu=self.mu, a=self.a, b=self.b, c=self.c)
        else:
            d.update(**{"lambda": self.lambda_, "mu": self.mu, "kappa": self.kappa, "a": self.a, "b": self.b, "c": self.c})
        return d


# ----------------------------------------------------------------------------
# document format
# ----------------------------------------------------------------------------

_ALIASES = {"λ": "lambda", "μ": "mu", "κ": "kappa"}


def _bound(v: Any, default: float, name: str) -> float:
    if v is None:
        return default
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("-inf", "-infinity"):
            return -_INF
        if s in ("inf", "+inf", "infinity"):
            return _INF
        raise ParseError(f"cannot read {v!r} as a bound", field=name)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError("bound must be a number, null or '+-inf'", field=name)
    return float(v)


def _number(v: Any, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"expected a number, got {v!r}", field=name)
    if not math.isfinite(float(v)):
        raise ParseError("expected a finite number", field=name)
    return float(v)


def _parse_cubic(doc: Mapping[str, Any]) -> CubicParams:
    fam = doc["family"]
    allowed = {"family", "lambda", "mu", "a", "b", "c", "kappa", "name"}
    norm = {_ALIASES.get(k, k): v for k, v in doc.items()}
    for k in norm:
        if k not in allowed:
            raise ParseError(f"unexpected key {k!r}", field=k)
    needed = ["mu", "a", "b", "c"] + (["lambda"] if fam == "sys61" else [])
    if fam == "general":
        needed += ["lambda", "kappa"]
    for k in needed:
        if k not in norm:
            raise ParseError("missing parameter", field=k)
    vals = {k: _number(norm[k], k) for k in needed}
    return CubicParams(
        family=fam,
        lambda_=vals.get("lambda", 0.0),
        mu=vals["mu"],
        a=vals["a"],
        b=vals["b"],
        c=vals["c"],
        kappa=vals.get("kappa", 0.0),
    )


def _parse_g(spec: Any, alpha: float, beta: float) -> ScalarField1D:
    if not isinstance(spec, Mapping) or len(spec) != 1:
        raise ParseError("g must be {'poly': [...]} or {'piecewise': [...]}", field="g")
    if "poly" in spec:
        cs = spec["poly"]
        if not isinstance(cs, list) or not cs:
            raise ParseError("poly must be a non-empty list [c1, c2, ...]", field="g.poly")
        vals = [_number(c, f"g.poly[{i}]") for i, c in enumerate(cs)]
        # listed coefficients start at x^1 since g(0) = 0
        return PolynomialField1D(tuple([0.0] + vals), alpha, beta)
    if "piecewise" in spec:
        rows = spec["piecewise"]
        if not isinstance(rows, list) or not rows:
            raise ParseError("piecewise must be a non-empty list", field="g.piecewise")
        segs = []
        for i, r in enumerate(rows):
            if not isinstance(r, list) or len(r) != 4:
                raise ParseError("segment must be [x_lo, x_hi, slope, intercept]", field=f"g.piecewise[{i}]")
            segs.append(
                (
                    _bound(r[0], -_INF, f"g.piecewise[{i}][0]"),
                    _bound(r[1], _INF, f"g.piecewise[{i}][1]"),
                    _number(r[2], f"g.piecewise[{i}][2]"),
                    _number(r[3], f"g.piecewise[{i}][3]"),
                )
            )
        try:
            return PiecewiseLinearField1D(tuple(segs), alpha, beta)
        except ValueError as exc:
            raise ParseError(str(exc), field="g.piecewise") from None
    raise ParseError(f"unknown g representation {list(spec)}", field="g")


def _parse_f(spec: Any) -> PolynomialField2D:
    if not isinstance(spec, Mapping) or set(spec) != {"poly2d"}:
        raise ParseError("f must be {'poly2d': {'i,j': coeff}}", field="f")
    table = spec["poly2d"]
    if not isinstance(table, Mapping):
        raise ParseError("poly2d must be an object", field="f.poly2d")
    coeffs = {}
    for key, c in table.items():
        parts = str(key).split(",")
        try:
            i, j = (int(p.strip()) for p in parts)
        except ValueError:
            raise ParseError(f"bad monomial key {key!r}", field=f"f.poly2d.{key}") from None
        if i < 0 or j < 0:
            raise ParseError("exponents must be >= 0", field=f"f.poly2d.{key}")
        coeffs[(i, j)] = coeffs.get((i, j), 0.0) + _number(c, f"f.poly2d.{key}")
    return PolynomialField2D(coeffs)


def parse_system(doc: Mapping[str, Any] | str) -> PlanarSystem | CubicParams:
    """Read a system document (dict or JSON text)."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, line=exc.lineno) from None
    if not isinstance(doc, Mapping):
        raise ParseError("document must be a JSON object")
    if "family" in doc:
        return _parse_cubic(doc)
    allowed = {"g", "f", "alpha", "beta", "name"}
    for k in doc:
        if k not in allowed:
            raise ParseError(f"unexpected key {k!r}", field=k)
    for k in ("g", "f"):
        if k not in doc:
            raise ParseError("missing field", field=k)
    alpha = _bound(doc.get("alpha"), -_INF, "alpha")
    beta = _bound(doc.get("beta"), _INF, "beta")
    if not alpha < 0.0 < beta:
        raise ParseError("need alpha < 0 < beta", field="alpha")
    g = _parse_g(doc["g"], alpha, beta)
    f = _parse_f(doc["f"])
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise ParseError("name must be a string", field="name")
    return PlanarSystem(g, f, alpha, beta, name=name)


def _dump_bound(v: float):
    if math.isinf(v):
        return None
    return v


def serialize_system(obj: PlanarSystem | CubicParams) -> dict[str, Any]:
    """Inverse of :func:`parse_system` for non-opaque inputs."""
    if isinstance(obj, CubicParams):
        return obj.as_dict()
    g, f = obj.g, obj.f
    out: dict[str, Any] = {}
    if obj.name is not None:
        out["name"] = obj.name
    if isinstance(g, PolynomialField1D):
        cs = list(g.coeffs) + [0.0]
        if cs[0] != 0.0:
            raise ValueError("document format needs g(0) = 0")
        tail = list(g.coeffs[1:]) or [0.0]
        out["g"] = {"poly": tail}
    elif isinstance(g, PiecewiseLinearField1D):
        out["g"] = {"piecewise": [[_dump_bound(s[0]), _dump_bound(s[1]), s[2], s[3]] for s in g.segments]}
    else:
        raise ValueError("opaque g has no document form")
    if not isinstance(f, PolynomialField2D):
        raise ValueError("opaque f has no document form")
    out["f"] = {"poly2d": {f"{i},{j}": c for (i, j), c in f.coeffs.items()}}
    out["alpha"] = _dump_bound(obj.alpha)
    out["beta"] = _dump_bound(obj.beta)
    return out


def load_system(path: str) -> PlanarSystem | CubicParams:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_system(text)


def as_planar(obj: PlanarSystem | CubicParams) -> PlanarSystem:
    return obj.to_system() if isinstance(obj, CubicParams) else obj


def signed_power(x, m: Fraction | float):
    """sgn(x) |x|^m, the odd extension of a rational power."""
    return np.sign(x) * np.abs(x) ** float(m)
