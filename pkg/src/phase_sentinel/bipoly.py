"""Sparse bivariate polynomials with float coefficients.

Variables are generic (s, t); callers decide what they mean (x, y in the
plane, u, z in a chart, ...).
"""
from __future__ import annotations

from math import comb
from typing import Iterable, Mapping

import numpy as np

__all__ = ["BiPoly"]


class BiPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Mapping[tuple[int, int], float] | None = None):
        out: dict[tuple[int, int], float] = {}
        for (i, j), v in (coeffs or {}).items():
            if v != 0:
                key = (int(i), int(j))
                out[key] = out.get(key, 0.0) + float(v)
        self.c = {k: v for k, v in out.items() if v != 0.0}

    # construction ---------------------------------------------------------

    @classmethod
    def const(cls, v: float) -> "BiPoly":
        return cls({(0, 0): v})

    @classmethod
    def s(cls) -> "BiPoly":
        return cls({(1, 0): 1.0})

    @classmethod
    def t(cls) -> "BiPoly":
        return cls({(0, 1): 1.0})

    @classmethod
    def univariate(cls, coeffs: Iterable[float], var: int = 0) -> "BiPoly":
        return cls({((i, 0) if var == 0 else (0, i)): c for i, c in enumerate(coeffs)})

    # arithmetic -----------------------------------------------------------

    def __add__(self, o) -> "BiPoly":
        o = _lift(o)
        d = dict(self.c)
        for k, v in o.c.items():
            d[k] = d.get(k, 0.0) + v
        return BiPoly(d)

    __radd__ = __add__

    def __neg__(self) -> "BiPoly":
        return BiPoly({k: -v for k, v in self.c.items()})

    def __sub__(self, o) -> "BiPoly":
        return self + (-_lift(o))

    def __rsub__(self, o) -> "BiPoly":
        return _lift(o) - self

    def __mul__(self, o) -> "BiPoly":
        o = _lift(o)
        d: dict[tuple[int, int], float] = {}
        for (i1, j1), v1 in self.c.items():
            for (i2, j2), v2 in o.c.items():
                k = (i1 + i2, j1 + j2)
                d[k] = d.get(k, 0.0) + v1 * v2
        return BiPoly(d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        out, base = BiPoly.const(1.0), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, o) -> bool:
        return isinstance(o, BiPoly) and self.c == o.c

    def __hash__(self):
        return hash(tuple(sorted(self.c.items())))

    def __repr__(self) -> str:
        if not self.c:
            return "BiPoly(0)"
        terms = [f"{v:+g}*s^{i}t^{j}" for (i, j), v in sorted(self.c.items())]
        return "BiPoly(" + " ".join(terms) + ")"

    # queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.c

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self.c), default=0)

    def coeff(self, i: int, j: int) -> float:
        return self.c.get((i, j), 0.0)

    def min_power(self, var: int) -> int:
        """Largest k with var^k dividing the polynomial (0 for the zero poly)."""
        if not self.c:
            return 0
        return min(k[var] for k in self.c)

    def __call__(self, s, t):
        acc = 0.0 * s * t
        for (i, j), v in self.c.items():
            acc = acc + v * s**i * t**j
        return acc

    def close_to(self, o: "BiPoly", tol: float = 1e-12) -> bool:
        keys = set(self.c) | set(o.c)
        return all(abs(self.coeff(*k) - o.coeff(*k)) <= tol * max(1.0, abs(o.coeff(*k))) for k in keys)

    def max_abs(self) -> float:
        return max((abs(v) for v in self.c.values()), default=0.0)

    # transformations ------------------------------------------------------

    def d(self, var: int) -> "BiPoly":
        out = {}
        for (i, j), v in self.c.items():
            p = (i, j)[var]
            if p:
                out[(i - 1, j) if var == 0 else (i, j - 1)] = v * p
        return BiPoly(out)

    def divide_power(self, var: int, k: int) -> "BiPoly":
        """Exact division by var^k."""
        if k == 0:
            return self
        if self.c and self.min_power(var) < k:
            raise ValueError(f"not divisible by variable {var} to power {k}")
        return BiPoly({((i - k, j) if var == 0 else (i, j - k)): v for (i, j), v in self.c.items()})

    def compose(self, s_sub: "BiPoly", t_sub: "BiPoly") -> "BiPoly":
        """p(s_sub(s, t), t_sub(s, t))."""
        out = BiPoly()
        spow: dict[int, BiPoly] = {}
        tpow: dict[int, BiPoly] = {}
        for (i, j), v in self.c.items():
            if i not in spow:
                spow[i] = s_sub**i
            if j not in tpow:
                tpow[j] = t_sub**j
            out = out + v * spow[i] * tpow[j]
        return out

    def shift(self, s0: float = 0.0, t0: float = 0.0) -> "BiPoly":
        """p(s + s0, t + t0), expanded with binomials (exact)."""
        out: dict[tuple[int, int], float] = {}
        for (i, j), v in self.c.items():
            for a in range(i + 1):
                ca = comb(i, a) * (s0 ** (i - a) if i - a else 1.0)
                if ca == 0:
                    continue
                for b in range(j + 1):
                    cb = comb(j, b) * (t0 ** (j - b) if j - b else 1.0)
                    if cb == 0:
                        continue
                    out[(a, b)] = out.get((a, b), 0.0) + v * ca * cb
        return BiPoly(out)

    def truncate(self, order: int) -> "BiPoly":
        return BiPoly({k: v for k, v in self.c.items() if k[0] + k[1] <= order})

    def clean(self, tol: float = 1e-14) -> "BiPoly":
        scale = max(1.0, self.max_abs())
        return BiPoly({k: v for k, v in self.c.items() if abs(v) > tol * scale})

    def univariate_in(self, var: int) -> list[float]:
        """Coefficient list when the polynomial depends on one variable only."""
        other = 1 - var
        if any(k[other] for k in self.c):
            raise ValueError("polynomial depends on both variables")
        n = max((k[var] for k in self.c), default=0)
        out = [0.0] * (n + 1)
        for k, v in self.c.items():
            out[k[var]] = v
        return out

    def restrict(self, var: int, value: float) -> list[float]:
        """Univariate coefficients in the other variable after fixing var."""
        other = 1 - var
        n = max((k[other] for k in self.c), default=0)
        out = [0.0] * (n + 1)
        for k, v in self.c.items():
            out[k[other]] += v * value ** k[var]
        return out

    def as_dict(self) -> dict[str, float]:
        return {f"{i},{j}": v for (i, j), v in sorted(self.c.items())}


def _lift(o) -> BiPoly:
    if isinstance(o, BiPoly):
        return o
    if isinstance(o, (int, float, np.floating, np.integer)):
        return BiPoly.const(float(o))
    raise TypeError(f"cannot combine BiPoly with {type(o).__name__}")
