"""Real roots of univariate polynomials.

Roots are isolated recursively: the real roots of p' split the line into
intervals on which p is monotone, so each interval holds at most one simple
root, found by bisection. Critical points where |p| is negligible are
reported as (even-multiplicity) roots.
"""
from __future__ import annotations

from typing import Sequence

__all__ = ["horner", "derivative", "cauchy_bound", "real_roots", "count_real_roots"]


def horner(coeffs: Sequence[float], x: float) -> float:
    """coeffs[i] is the coefficient of x^i."""
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _abs_horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    ax = abs(x)
    for c in reversed(coeffs):
        acc = acc * ax + abs(c)
    return acc


def derivative(coeffs: Sequence[float]) -> list[float]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _trim(coeffs: Sequence[float]) -> list[float]:
    out = [float(c) for c in coeffs]
    while out and out[-1] == 0.0:
        out.pop()
    return out


def cauchy_bound(coeffs: Sequence[float]) -> float:
    c = _trim(coeffs)
    lead = abs(c[-1])
    return 1.0 + max((abs(v) / lead for v in c[:-1]), default=0.0)


def _bisect(coeffs, lo, hi, flo):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = horner(coeffs, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def real_roots(coeffs: Sequence[float], rtol: float = 1e-10) -> list[float]:
    """Sorted distinct real roots.

    A critical point c counts as a root when |p(c)| <= rtol * sum |c_i||c|^i,
    which catches roots of even multiplicity that produce no sign change.
    """
    c = _trim(coeffs)
    if len(c) <= 1:
        return []
    if len(c) == 2:
        return [-c[0] / c[1]]
    # factor out x^j so that 0 is handled exactly
    j = 0
    while c[j] == 0.0:
        j += 1
    if j:
        rest = real_roots(c[j:], rtol)
        return sorted(set(rest) | {0.0})
    crit = real_roots(derivative(c), rtol)
    bound = cauchy_bound(c)
    knots = [-bound] + [x for x in crit if -bound < x < bound] + [bound]
    roots: list[float] = []
    for x in crit:
        if abs(horner(c, x)) <= rtol * _abs_horner(c, x):
            roots.append(x)
    for lo, hi in zip(knots, knots[1:]):
        flo, fhi = horner(c, lo), horner(c, hi)
        if flo == 0.0 or fhi == 0.0:
            continue
        if (flo > 0) != (fhi > 0):
            roots.append(_bisect(c, lo, hi, flo))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= 1e-12 * max(1.0, abs(r)):
            continue
        merged.append(r)
    return merged


def count_real_roots(coeffs: Sequence[float]) -> int:
    return len(real_roots(coeffs))

