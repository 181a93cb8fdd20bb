"""Ready-made systems used by the docs, the tests and the CLI."""
from __future__ import annotations

import numpy as np

from .core import (
    OpaqueField2D,
    PiecewiseLinearField1D,
    PlanarSystem,
    PolynomialField1D,
    PolynomialField2D,
)

__all__ = [
    "harmonic",
    "linear_damped",
    "van_der_pol",
    "eg1",
    "eg2",
    "eg3",
    "ding",
    "mm",
    "bump",
]


def harmonic() -> PlanarSystem:
    return PlanarSystem(PolynomialField1D((0.0, 1.0)), PolynomialField2D({}), name="harmonic")


def linear_damped(mu: float = 1.0) -> PlanarSystem:
    return PlanarSystem(PolynomialField1D((0.0, 1.0)), PolynomialField2D({(0, 0): mu}), name="damped")


def van_der_pol() -> PlanarSystem:
    """g = x, f = x^2 - 1."""
    return PlanarSystem(
        PolynomialField1D((0.0, 1.0)),
        PolynomialField2D({(0, 0): -1.0, (2, 0): 1.0}),
        name="van-der-pol",
    )


def bump(r):
    """C^2 cutoff: 1 on [0, 1], 0 on [2, inf), quintic smoothstep between."""
    s = np.clip(np.asarray(r, dtype=float) - 1.0, 0.0, 1.0)
    out = 1.0 - s**3 * (10.0 - 15.0 * s + 6.0 * s * s)
    return float(out) if np.ndim(out) == 0 else out


def eg1(eps: float = 0.0) -> PlanarSystem:
    """y' = -2x^3 - 4xy + eps * bump(r) x^2 y."""
    g = PolynomialField1D((0.0, 0.0, 0.0, 2.0))
    if eps == 0.0:
        return PlanarSystem(g, PolynomialField2D({(1, 0): 4.0}), name="eg1")

    def f(x, y):
        return 4.0 * x - eps * bump(np.hypot(x, y)) * x * x

    return PlanarSystem(g, OpaqueField2D(f, smooth=True), name=f"eg1(eps={eps})")


def eg2() -> PlanarSystem:
    """y' = -2x^5 + x^6 - xy."""
    return PlanarSystem(
        PolynomialField1D((0, 0, 0, 0, 0, 2.0, -1.0)),
        PolynomialField2D({(1, 0): 1.0}),
        name="eg2",
    )


def eg3() -> PlanarSystem:
    """y' = -2x^5 - xy."""
    return PlanarSystem(PolynomialField1D((0, 0, 0, 0, 0, 2.0)), PolynomialField2D({(1, 0): 1.0}), name="eg3")


def ding(k: float = 0.1) -> PlanarSystem:
    """x' = y + x^2/2 - x^3/3, y' = -k x^3 rewritten with f = F' = -x + x^2."""
    return PlanarSystem(
        PolynomialField1D((0, 0, 0, k)),
        PolynomialField2D({(1, 0): -1.0, (2, 0): 1.0}),
        name=f"ding(k={k})",
    )


MM_SEGMENTS = (
    (-np.inf, -0.5, 1.0, 1.0),
    (-0.5, -0.25, -3.0, -1.0),
    (-0.25, 0.25, 1.0, 0.0),
    (0.25, 0.5, -3.0, 1.0),
    (0.5, np.inf, 1.0, -1.0),
)


def mm(mu1: float = 0.0, mu2: float = -1.05) -> PlanarSystem:
    """y' = -g(x) + mu1 y + mu2 x y + x^2 y with the odd zigzag g."""
    g = PiecewiseLinearField1D(MM_SEGMENTS)
    f = PolynomialField2D({(0, 0): -mu1, (1, 0): -mu2, (2, 0): -1.0})
    return PlanarSystem(g, f, name=f"mm(mu1={mu1}, mu2={mu2})")
