"""Numerical companion: orbits, return maps, cycles, sectors, energy.

The integrator is a Dormand-Prince 5(4) pair with FSAL, mixed
absolute/relative error control and cubic Hermite dense output. Axis
crossings are bracketed on the interpolant by bisection and then polished
with genuine Runge-Kutta sub-steps so that event points carry the accuracy
of the integrator rather than of the interpolant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .core import (
    OpaqueField2D,
    PlanarSystem,
    PolynomialField1D,
    PolynomialField2D,
    ScalarField1D,
    series_at_origin,
)
from .errors import EscapeAbort, InconclusiveProbe, NotXOnly, StiffnessAbort

__all__ = [
    "Event",
    "Termination",
    "OrbitTrace",
    "ReturnMapSample",
    "LimitCycle",
    "SectorSummary",
    "BoundedResult",
    "integrate",
    "return_map",
    "find_limit_cycle",
    "energy_residual",
    "sector_probe",
    "to_lienard",
    "bounded_elliptic_test",
    "is_symmetric",
    "DP54",
]

# Dormand-Prince tableau
DP54 = {
    "c": (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0),
    "a": (
        (),
        (1 / 5,),
        (3 / 40, 9 / 40),
        (44 / 45, -56 / 15, 32 / 9),
        (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
        (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
        (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
    ),
    "b": (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0),
    "b4": (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40),
}
_A = DP54["a"]
_B = DP54["b"]
_E = tuple(b - bh for b, bh in zip(DP54["b"], DP54["b4"]))

EVENT_KINDS = ("pos-y-axis", "neg-y-axis", "pos-x-axis", "neg-x-axis")
CONVERGE_RADIUS = 1e-8
CONVERGE_STEPS = 10
EVENT_TIME_TOL = 1e-12


@dataclass(frozen=True)
class Event:
    kind: str
    t: float
    point: tuple[float, float]


@dataclass(frozen=True)
class Termination:
    kind: str  # time-limit | escaped | converged-to | section-hit
    point: tuple[float, float] | None = None
    radius: float | None = None

    def __str__(self) -> str:
        if self.kind == "escaped":
            return f"escaped({self.radius:g})"
        if self.kind == "converged-to":
            return f"converged-to({self.point[0]:g},{self.point[1]:g})"
        return self.kind


@dataclass
class OrbitTrace:
    samples: np.ndarray  # rows (t, x, y)
    events: list[Event]
    termination: Termination
    origin: tuple[float, float] = (0.0, 0.0)
    tol: float = 1e-9

    @property
    def t(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def x(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def y(self) -> np.ndarray:
        return self.samples[:, 2]

    @property
    def end(self) -> tuple[float, float]:
        return float(self.samples[-1, 1]), float(self.samples[-1, 2])

    def events_of(self, kind: str) -> list[Event]:
        return [e for e in self.events if e.kind == kind]

    def to_csv_rows(self) -> list[tuple[float, float, float, str]]:
        """Samples and events merged in time order; columns t,x,y,event."""
        rows = [(float(t), float(x), float(y), "") for t, x, y in self.samples]
        rows += [(e.t, e.point[0], e.point[1], e.kind) for e in self.events]
        sign = 1.0 if len(self.samples) < 2 or self.samples[-1, 0] >= self.samples[0, 0] else -1.0
        rows.sort(key=lambda r: (sign * r[0], r[3] != ""))
        return rows


@dataclass(frozen=True)
class ReturnMapSample:
    y0: float
    y1: float | None
    half: str  # "half" or "full"
    t: float | None = None
    termination: str = ""


@dataclass
class LimitCycle:
    y_star: float
    period: float
    amplitude: float
    closure_gap: float
    stability: str  # "stable" or "unstable"
    time_direction: int
    trace: OrbitTrace
    center: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class SectorSummary:
    elliptic: int
    hyperbolic: int
    parabolic: int
    probe_radius: float
    confidence: str  # exact-by-symmetry | empirical
    labels: tuple[str, ...] = ()
    rings: tuple[float, ...] = ()


@dataclass(frozen=True)
class BoundedResult:
    status: str  # bounded | hypothesis-unmet | divergence-unmet
    x0: float | None = None

    def __str__(self) -> str:
        return f"bounded({self.x0:.12g})" if self.status == "bounded" else self.status


# ----------------------------------------------------------------------------
# scalar stepper
# ----------------------------------------------------------------------------


def _rk_step(rhs, x, y, h, kx1, ky1):
    """One DP5 step; returns new state, error estimate and the FSAL slope."""
    kx = [kx1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    ky = [ky1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
    for s in range(1, 7):
        row = _A[s]
        sx = x
        sy = y
        for j, a in enumerate(row):
            if a:
                sx += h * a * kx[j]
                sy += h * a * ky[j]
        kx[s], ky[s] = rhs(sx, sy)
        if s == 6:
            xn, yn = sx, sy
    ex = h * sum(e * k for e, k in zip(_E, kx))
    ey = h * sum(e * k for e, k in zip(_E, ky))
    return xn, yn, ex, ey, kx[6], ky[6], kx, ky


def _hermite(t0, x0, y0, fx0, fy0, t1, x1, y1, fx1, fy1, t):
    h = t1 - t0
    s = (t - t0) / h
    h00 = (1 + 2 * s) * (1 - s) ** 2
    h10 = s * (1 - s) ** 2
    h01 = s * s * (3 - 2 * s)
    h11 = s * s * (s - 1)
    return (
        h00 * x0 + h10 * h * fx0 + h01 * x1 + h11 * h * fx1,
        h00 * y0 + h10 * h * fy0 + h01 * y1 + h11 * h * fy1,
    )


def _scalar_rhs(sys: PlanarSystem, sign: float):
    g, f = sys.g, sys.f
    if sign > 0:

        def rhs(x, y):
            return y, -g(x) - f(x, y) * y

    else:

        def rhs(x, y):
            return -y, g(x) + f(x, y) * y

    return rhs


def _event_coords(kind: str, x: float, y: float, ox: float, oy: float) -> float:
    return x - ox if kind in ("pos-y-axis", "neg-y-axis") else y - oy


def integrate(
    sys: PlanarSystem,
    p0: Sequence[float],
    t_span: Sequence[float],
    tol: float = 1e-9,
    *,
    origin: Sequence[float] = (0.0, 0.0),
    r_max: float = 1e6,
    stop_on: Iterable[str] = (),
    stop_count: int = 1,
    converge_points: Sequence[Sequence[float]] | None = None,
    h_max: float | None = None,
    max_rejects: int = 60,
    max_steps: int = 2_000_000,
    record: bool = True,
    raise_on_escape: bool = False,
) -> OrbitTrace:
    """Integrate from ``p0`` over ``t_span = (t0, t1)``; ``t1 < t0`` runs backward.

    Axis events refer to the axes through ``origin``. Integration stops at the
    ``stop_count``-th event whose kind is in ``stop_on`` (``section-hit``), on
    convergence to a point of ``converge_points`` (|p - q| < 1e-8 during 10
    consecutive accepted steps), on leaving the strip or the disc |p| < r_max
    (``escaped``), or at ``t1`` (``time-limit``).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    t0, t1 = float(t_span[0]), float(t_span[1])
    sign = 1.0 if t1 >= t0 else -1.0
    duration = abs(t1 - t0)
    rhs = _scalar_rhs(sys, sign)
    x, y = float(p0[0]), float(p0[1])
    if not sys.in_strip(x):
        raise EscapeAbort(f"start point x={x} outside the strip")
    ox, oy = float(origin[0]), float(origin[1])
    stop_on = set(stop_on)
    conv = [(float(q[0]), float(q[1])) for q in (converge_points if converge_points is not None else [(0.0, 0.0)])]
    hmax = duration if h_max is None else min(h_max, duration)

    samples = [(t0, x, y)] if record else []
    events: list[Event] = []
    fx, fy = rhs(x, y)
    # initial step from the usual scale argument
    sc = tol + tol * math.hypot(x, y)
    d0 = math.hypot(x, y) / sc
    d1 = math.hypot(fx, fy) / sc
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(max(h, 1e-10), hmax, 0.1)
    s = 0.0  # elapsed |t - t0|
    near_count = [0] * len(conv)
    hits = 0
    rejects = 0
    steps = 0
    term: Termination | None = None

    while term is None:
        if s >= duration:
            term = Termination("time-limit", (x, y))
            break
        if steps >= max_steps:
            raise StiffnessAbort(f"step budget {max_steps} exhausted at t={t0 + sign * s}")
        h = min(h, duration - s, hmax)
        xn, yn, ex, ey, fxn, fyn, _, _ = _rk_step(rhs, x, y, h, fx, fy)
        scx = tol + tol * max(abs(x), abs(xn))
        scy = tol + tol * max(abs(y), abs(yn))
        err = math.sqrt(0.5 * ((ex / scx) ** 2 + (ey / scy) ** 2))
        if not (err <= 1.0) or not math.isfinite(xn + yn):
            rejects += 1
            if rejects > max_rejects or h < 1e-14 * max(1.0, s):
                raise StiffnessAbort(f"{rejects} consecutive rejections at t={t0 + sign * s}, h={h:g}")
            fac = 0.2 if not math.isfinite(err) else max(0.2, 0.9 * err ** -0.2)
            h *= fac
            continue
        rejects = 0
        steps += 1
        ta, tb = s, s + h

        # events on this step
        stop_here = None
        for kind in EVENT_KINDS:
            ca = _event_coords(kind, x, y, ox, oy)
            cb = _event_coords(kind, xn, yn, ox, oy)
            if ca == 0.0 or ca * cb > 0.0:
                continue
            te, pe = _locate(rhs, kind, ta, x, y, fx, fy, tb, xn, yn, fxn, fyn, ox, oy)
            other = pe[1] - oy if kind in ("pos-y-axis", "neg-y-axis") else pe[0] - ox
            want_pos = kind.startswith("pos")
            if (other > 0) != want_pos or other == 0.0:
                continue
            ev = Event(kind, t0 + sign * te, pe)
            events.append(ev)
            if kind in stop_on:
                hits += 1
                if hits >= stop_count and (stop_here is None or te < stop_here[0]):
                    stop_here = (te, pe)
        if len(events) > 1:
            # keep the log time-ordered within a step
            tail = [e for e in events if sign * (e.t - t0) >= ta - 1e-300]
            if len(tail) > 1:
                head = events[: len(events) - len(tail)]
                tail.sort(key=lambda e: sign * e.t)
                events[:] = head + tail
        if stop_here is not None:
            te, pe = stop_here
            # discard events recorded after the stopping crossing
            events[:] = [e for e in events if sign * (e.t - t0) <= te + 1e-15]
            if record:
                samples.append((t0 + sign * te, pe[0], pe[1]))
            term = Termination("section-hit", pe)
            break

        x, y, fx, fy, s = xn, yn, fxn, fyn, tb
        if record:
            samples.append((t0 + sign * s, x, y))
        if not sys.in_strip(x) or math.hypot(x, y) > r_max:
            if raise_on_escape:
                raise EscapeAbort(f"|p| exceeded {r_max} at t={t0 + sign * s}")
            term = Termination("escaped", (x, y), r_max)
            break
        for i, (qx, qy) in enumerate(conv):
            if math.hypot(x - qx, y - qy) < CONVERGE_RADIUS:
                near_count[i] += 1
                if near_count[i] >= CONVERGE_STEPS:
                    term = Termination("converged-to", (qx, qy))
            else:
                near_count[i] = 0
        fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h *= fac

    arr = np.array(samples if record else [(t0, float(p0[0]), float(p0[1])), (t0 + sign * s, x, y)], dtype=float)
    return OrbitTrace(arr, events, term, (ox, oy), tol)


def _locate(rhs, kind, ta, xa, ya, fxa, fya, tb, xb, yb, fxb, fyb, ox, oy):
    """Crossing time in (ta, tb] by bisection on the Hermite interpolant,
    then Newton polishing with exact Runge-Kutta sub-steps from (xa, ya)."""
    lo, hi = ta, tb
    clo = _event_coords(kind, xa, ya, ox, oy)
    while hi - lo > EVENT_TIME_TOL * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        px, py = _hermite(ta, xa, ya, fxa, fya, tb, xb, yb, fxb, fyb, mid)
        cm = _event_coords(kind, px, py, ox, oy)
        if cm == 0.0:
            lo = hi = mid
            break
        if (cm > 0) == (clo > 0):
            lo, clo = mid, cm
        else:
            hi = mid
    te = 0.5 * (lo + hi)
    best = None
    for _ in range(6):
        dt = te - ta
        if dt <= 0.0:
            px, py = xa, ya
            vx, vy = fxa, fya
        else:
            px, py, _, _, vx, vy, _, _ = _rk_step(rhs, xa, ya, dt, fxa, fya)
        c = _event_coords(kind, px, py, ox, oy)
        if best is None or abs(c) < abs(best[2]):
            best = (te, (px, py), c)
        v = vx if kind in ("pos-y-axis", "neg-y-axis") else vy
        if abs(c) < 1e-14 or v == 0.0:
            break
        te_new = te - c / v
        if not (ta <= te_new <= tb + 1e-12 * max(1.0, abs(tb))):
            break
        if abs(te_new - te) < 1e-16 * max(1.0, abs(te)):
            te = te_new
            break
        te = te_new
    te, (px, py), c = best
    # snap the axis coordinate onto the axis; the residual is below 1e-10
    if kind in ("pos-y-axis", "neg-y-axis"):
        px = ox
    else:
        py = oy
    return te, (px, py)


# ----------------------------------------------------------------------------
# return maps and cycles
# ----------------------------------------------------------------------------


def return_map(
    sys: PlanarSystem,
    y0: float,
    half_or_full: str = "full",
    tol: float = 1e-10,
    *,
    t_max: float = 500.0,
    r_max: float = 1e3,
    center: Sequence[float] = (0.0, 0.0),
    time_direction: int = 1,
) -> ReturnMapSample:
    """First return to the positive (full) or negative (half) y-axis through
    ``center``, starting at ``center + (0, y0)``."""
    if y0 <= 0:
        raise ValueError("y0 must be positive")
    if half_or_full not in ("half", "full"):
        raise ValueError("half_or_full must be 'half' or 'full'")
    cx, cy = float(center[0]), float(center[1])
    kind = "pos-y-axis" if half_or_full == "full" else "neg-y-axis"
    tr = integrate(
        sys,
        (cx, cy + y0),
        (0.0, time_direction * t_max),
        tol,
        origin=(cx, cy),
        r_max=r_max,
        stop_on={kind},
        converge_points=[(cx, cy)],
        record=False,
    )
    if tr.termination.kind == "section-hit":
        ev = tr.events_of(kind)[-1]
        return ReturnMapSample(y0, ev.point[1] - cy, half_or_full, ev.t, "section-hit")
    return ReturnMapSample(y0, None, half_or_full, None, str(tr.termination))


def _displacement(sys, y0, tol, center, direction, t_max, r_max):
    try:
        r = return_map(sys, y0, "full", tol, t_max=t_max, r_max=r_max, center=center, time_direction=direction)
    except (StiffnessAbort, EscapeAbort):
        return None
    return None if r.y1 is None else r.y1 - y0


def find_limit_cycle(
    sys: PlanarSystem,
    y_bracket: Sequence[float] = (0.1, 10.0),
    scope: Sequence[float] | None = None,
    *,
    n_seeds: int = 10,
    tol: float = 1e-10,
    t_max: float = 200.0,
    r_max: float = 1e3,
    directions: Sequence[int] = (1, -1),
    xtol: float = 1e-11,
) -> LimitCycle | None:
    """Scan the return map on the positive y-axis through ``scope``.

    A sign change of y1 - y0 between neighbouring seeds is refined by
    bisection; the cycle found is integrated once more and returned with its
    closure gap. Forward time is tried first, then reversed time (which turns
    an unstable cycle into an attracting one).
    """
    center = (0.0, 0.0) if scope is None else (float(scope[0]), float(scope[1]))
    lo, hi = float(y_bracket[0]), float(y_bracket[1])
    seeds = np.linspace(lo, hi, n_seeds)
    for direction in directions:
        disp = [_displacement(sys, float(s), tol, center, direction, t_max, r_max) for s in seeds]
        for i in range(len(seeds) - 1):
            d0, d1 = disp[i], disp[i + 1]
            if d0 is None or d1 is None:
                continue
            if d0 == 0.0:
                a = b = float(seeds[i])
            elif d0 * d1 < 0.0:
                a, b = float(seeds[i]), float(seeds[i + 1])
                da = d0
                ok = True
                while b - a > xtol * max(1.0, b):
                    m = 0.5 * (a + b)
                    dm = _displacement(sys, m, tol, center, direction, t_max, r_max)
                    if dm is None:
                        ok = False
                        break
                    if dm == 0.0:
                        a = b = m
                        break
                    if (dm > 0) == (da > 0):
                        a, da = m, dm
                    else:
                        b = m
                if not ok:
                    continue
            else:
                continue
            ystar = 0.5 * (a + b)
            cyc = _close_cycle(sys, ystar, tol, center, direction, t_max, r_max)
            if cyc is None:
                continue
            # displacement goes - to + across an unstable cycle in forward time
            growing_outside = d1 > 0 if d0 != 0.0 else (disp[i + 1] or 0.0) > 0
            stable_in_dir = not growing_outside
            stable_forward = stable_in_dir if direction > 0 else not stable_in_dir
            cyc.stability = "stable" if stable_forward else "unstable"
            return cyc
    return None


def _close_cycle(sys, ystar, tol, center, direction, t_max, r_max) -> LimitCycle | None:
    cx, cy = center
    tr = integrate(
        sys,
        (cx, cy + ystar),
        (0.0, direction * t_max),
        tol,
        origin=center,
        r_max=r_max,
        stop_on={"pos-y-axis"},
        converge_points=[center],
    )
    if tr.termination.kind != "section-hit":
        return None
    ev = tr.events_of("pos-y-axis")[-1]
    gap = abs(ev.point[1] - cy - ystar)
    amp = float(np.max(np.abs(tr.x - cx)))
    # |x| peaks where y = 0; the located axis crossings beat the raw samples
    ax = [abs(e.point[0] - cx) for e in tr.events if e.kind in ("pos-x-axis", "neg-x-axis")]
    if ax and cy == 0.0:
        amp = max(amp, max(ax))
    return LimitCycle(
        y_star=ystar,
        period=abs(ev.t),
        amplitude=amp,
        closure_gap=gap,
        stability="",
        time_direction=direction,
        trace=tr,
        center=(cx, cy),
    )


# ----------------------------------------------------------------------------
# energy identity
# ----------------------------------------------------------------------------


def energy_residual(sys: PlanarSystem, trace: OrbitTrace, relative: bool = False) -> float:
    """max over steps of |dE/dt + f y^2| with E = y^2/2 + G(x).

    dE/dt is the difference quotient of E between consecutive samples; the
    right side is averaged over the same step with the Runge-Kutta quadrature
    of the integrator's own stages. With ``relative=True`` the result is
    divided by max(1, max |f y^2|) over the trace.
    """
    smp = trace.samples
    if len(smp) < 2:
        return 0.0
    t, xs, ys = smp[:, 0], smp[:, 1], smp[:, 2]
    sign = 1.0 if t[-1] >= t[0] else -1.0
    rhs = _scalar_rhs(sys, sign)
    E = sys.energy(xs, ys)
    worst = 0.0
    scale = 0.0
    f = sys.f
    for i in range(len(smp) - 1):
        h = abs(t[i + 1] - t[i])
        if h == 0.0:
            continue
        x0, y0 = xs[i], ys[i]
        fx, fy = rhs(x0, y0)
        xn, yn, _, _, _, _, kx, ky = _rk_step(rhs, x0, y0, h, fx, fy)
        # stage states recovered from the tableau
        w = 0.0
        for s_ in range(7):
            sx, sy = x0, y0
            for j, a in enumerate(_A[s_]):
                if a:
                    sx += h * a * kx[j]
                    sy += h * a * ky[j]
            if _B[s_]:
                w += _B[s_] * f(sx, sy) * sy * sy
        dEdt = sign * (E[i + 1] - E[i]) / h
        worst = max(worst, abs(dEdt + w))
        scale = max(scale, abs(float(f(x0, y0)) * y0 * y0))
    if relative:
        return worst / max(1.0, scale)
    return worst


# ----------------------------------------------------------------------------
# symmetry and Lienard reduction
# ----------------------------------------------------------------------------


def is_symmetric(sys: PlanarSystem, radius: float | None = None, n: int = 201) -> bool:
    """g odd and f(x, y) + f(-x, y) = 0 (exact for polynomials, sampled otherwise)."""
    r = sys.core_radius if radius is None else radius
    r = min(r, 10.0)
    g_odd = sys.g.odd_defect(r) <= 1e-12 * max(1.0, float(np.max(np.abs(sys.g(np.linspace(-r, r, 11))))))
    if not g_odd:
        return False
    if isinstance(sys.f, PolynomialField2D):
        return not sys.f.x_even_part().coeffs
    xs = np.linspace(0.0, r, n)
    ys = np.linspace(-10.0, 10.0, n)
    X, Y = np.meshgrid(xs, ys)
    return bool(np.max(np.abs(sys.f(X, Y) + sys.f(-X, Y))) <= 1e-12)


def to_lienard(sys: PlanarSystem) -> tuple[PolynomialField1D | ScalarField1D, ScalarField1D]:
    """(F, g) with F(x) = int_0^x f(s) ds for x-only f."""
    f = sys.f
    if not f.is_x_only():
        raise NotXOnly("f depends on y")
    if isinstance(f, PolynomialField2D):
        return PolynomialField1D(f.x_polynomial()).antiderivative(), sys.g
    from .core import OpaqueField1D

    inner = OpaqueField1D(lambda x: f(x, 0.0))
    return OpaqueField1D(inner.integral), sys.g


def _bisect(fun, a, b, fa, tol=1e-15, iters=200):
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = fun(m)
        if fm == 0.0 or abs(b - a) <= tol * max(1.0, abs(m)):
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def bounded_elliptic_test(
    F: ScalarField1D,
    g: ScalarField1D,
    search_radius: float = 10.0,
    n_scan: int = 4001,
) -> BoundedResult:
    """Boundedness test for the elliptic sector of x' = y - F(x), y' = -g(x).

    Returns ``bounded(x0)`` for the nonzero root x0 of F closest to 0.
    """
    xs = np.linspace(-search_radius, search_radius, n_scan)
    xs = xs[xs != 0.0]
    gx = np.asarray(g(xs), dtype=float)
    if np.any(xs * gx <= 0.0):
        return BoundedResult("hypothesis-unmet")
    if isinstance(g, PolynomialField1D):
        # odd leading term with positive coefficient: the integral diverges
        if g.degree < 1:
            return BoundedResult("divergence-unmet")
    else:
        far = [g.integral(s * search_radius * 10.0) for s in (1.0, -1.0)]
        near = [g.integral(s * search_radius) for s in (1.0, -1.0)]
        if any(fv <= 2.0 * nv for fv, nv in zip(far, near)):
            return BoundedResult("divergence-unmet")
    # scan outward from 0 on both sides
    candidates = []
    for side in (1.0, -1.0):
        pts = np.sort(np.abs(xs[np.sign(xs) == side])) * side
        vals = np.asarray(F(pts), dtype=float)
        for i in range(len(pts) - 1):
            if vals[i] == 0.0 and abs(pts[i]) > 0:
                candidates.append(float(pts[i]))
                break
            if vals[i] * vals[i + 1] < 0.0:
                r = _bisect(lambda s: float(F(s)), float(pts[i]), float(pts[i + 1]), float(vals[i]))
                candidates.append(r)
                break
    if not candidates:
        return BoundedResult("hypothesis-unmet")
    x0 = min(candidates, key=abs)
    if isinstance(F, PolynomialField1D):
        # Newton polish on the exact polynomial
        dF = F.derivative()
        for _ in range(5):
            d = float(dF(x0))
            if d == 0.0:
                break
            x0 -= float(F(x0)) / d
    return BoundedResult("bounded", float(x0))


# ----------------------------------------------------------------------------
# sector probe
# ----------------------------------------------------------------------------

_FATE_O, _FATE_X, _FATE_OG = 1, 2, 3


def _batch_fates(
    rhs_vec: Callable,
    x0: np.ndarray,
    y0: np.ndarray,
    sign: float,
    escape_r: np.ndarray,
    t_cap: float,
    tol: float = 1e-9,
    max_iter: int = 200_000,
    weight: float = 1.0,
    scale: float = 1.0,
    outer_r: float = np.inf,
) -> np.ndarray:
    """Vectorised DP5 run of many orbits at once; each keeps its own step.

    An orbit reaches O when it converges (|p| < 1e-8 for 10 steps) or is
    still trapped near O, without a full turn about it, at the time cap.
    Fates: O (reaches O without leaving its local region), OG (leaves the
    local region, later reaches O), X (leaves the disc |p| < outer_r or winds
    once around O). The local region of orbit i is ``qnorm(p) < escape_r[i]``
    with the quasi-homogeneous norm
    qnorm(x, y) = hypot(x, scale * (|y| / scale)^(1/weight)).
    """
    n = x0.size
    escape_r = np.broadcast_to(np.asarray(escape_r, dtype=float), (n,))
    inv_w = 1.0 / weight
    x, y = x0.astype(float).copy(), y0.astype(float).copy()
    t = np.zeros(n)
    fate = np.zeros(n, dtype=int)
    wind = np.zeros(n)
    near = np.zeros(n, dtype=int)
    left = np.zeros(n, dtype=bool)
    h = np.full(n, 1e-3)

    def F(xx, yy):
        u, v = rhs_vec(xx, yy)
        return sign * np.asarray(u, dtype=float) * np.ones_like(xx), sign * np.asarray(v, dtype=float) * np.ones_like(xx)

    kx1, ky1 = F(x, y)
    for _ in range(max_iter):
        act = np.flatnonzero(fate == 0)
        if act.size == 0:
            break
        xa, ya, ha = x[act], y[act], h[act]
        r = np.hypot(xa, ya)
        speed = np.hypot(kx1[act], ky1[act])
        # keep the swept angle per step small so winding is tracked reliably
        ha = np.minimum(ha, 0.25 * r / np.maximum(speed, 1e-300))
        ha = np.minimum(ha, t_cap - t[act])
        kx = [kx1[act]]
        ky = [ky1[act]]
        for s in range(1, 7):
            sx = xa.copy()
            sy = ya.copy()
            for j, a in enumerate(_A[s]):
                if a:
                    sx += ha * a * kx[j]
                    sy += ha * a * ky[j]
            u, v = F(sx, sy)
            kx.append(u)
            ky.append(v)
        xn, yn = sx, sy
        ex = ha * sum(e * k for e, k in zip(_E, kx))
        ey = ha * sum(e * k for e, k in zip(_E, ky))
        scx = tol + tol * np.maximum(np.abs(xa), np.abs(xn))
        scy = tol + tol * np.maximum(np.abs(ya), np.abs(yn))
        err = np.sqrt(0.5 * ((ex / scx) ** 2 + (ey / scy) ** 2))
        ok = np.isfinite(err) & (err <= 1.0)
        fac = np.where(err > 0, 0.9 * np.power(np.where(err > 0, err, 1.0), -0.2), 5.0)
        fac = np.clip(np.nan_to_num(fac, nan=0.2), 0.2, 5.0)
        acc = act[ok]
        if acc.size:
            th0 = np.arctan2(ya[ok], xa[ok])
            th1 = np.arctan2(yn[ok], xn[ok])
            wind[acc] += (th1 - th0 + np.pi) % (2 * np.pi) - np.pi
            x[acc], y[acc] = xn[ok], yn[ok]
            t[acc] += ha[ok]
            kx1[acc], ky1[acc] = kx[6][ok], ky[6][ok]
            rn = np.hypot(xn[ok], yn[ok])
            near[acc] = np.where(rn < CONVERGE_RADIUS, near[acc] + 1, 0)
            qn = np.hypot(xn[ok], scale * (np.abs(yn[ok]) / scale) ** inv_w)
            left[acc] |= qn > escape_r[acc]
            reached = np.where(left[acc], _FATE_OG, _FATE_O)
            f_new = np.zeros(acc.size, dtype=int)
            done = (near[acc] >= CONVERGE_STEPS) | (t[acc] >= t_cap * (1 - 1e-12))
            f_new[done] = reached[done]
            f_new[(rn > outer_r) | (np.abs(wind[acc]) > 2 * np.pi)] = _FATE_X
            fate[acc] = f_new
        h[act] = ha * fac
    fate[fate == 0] = np.where(left[fate == 0], _FATE_OG, _FATE_O)
    return fate


def _vectorised_rhs(sys: PlanarSystem):
    g, f = sys.g, sys.f
    if isinstance(f, OpaqueField2D) or not isinstance(g, (PolynomialField1D,)) and g.kind == "opaque":
        fv = np.vectorize(lambda a, b: float(f(a, b)))
        gv = np.vectorize(lambda a: float(g(a)))

        def rhs(x, y):
            try:
                gx = np.asarray(g(x), dtype=float)
                fx = np.asarray(f(x, y), dtype=float)
                if gx.shape != np.shape(x) or fx.shape != np.shape(x):
                    raise ValueError
            except Exception:
                gx, fx = gv(x), fv(x, y)
            return y, -gx - fx * y

        return rhs
    return sys.rhs


def _sector_of(a: int, w: int) -> str:
    """E: both ends at O; U/S: one end reaches O locally, the other leaves
    for good; H: everything passing through the local region."""
    if a != _FATE_X and w != _FATE_X:
        return "E"
    if a == _FATE_O and w == _FATE_X:
        return "U"
    if a == _FATE_X and w == _FATE_O:
        return "S"
    return "H"


def _components(grid: np.ndarray) -> list[tuple[str, set[tuple[int, int]]]]:
    """4-connected components on a (ring, ray) grid, periodic in the ray index."""
    nr, na = grid.shape
    seen = np.zeros_like(grid, dtype=bool)
    comps = []
    for j in range(nr):
        for i in range(na):
            if seen[j, i]:
                continue
            lab = grid[j, i]
            stack = [(j, i)]
            seen[j, i] = True
            cells = set()
            while stack:
                cj, ci = stack.pop()
                cells.add((cj, ci))
                for dj, di in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    nj, ni = cj + dj, (ci + di) % na
                    if 0 <= nj < nr and not seen[nj, ni] and grid[nj, ni] == lab:
                        seen[nj, ni] = True
                        stack.append((nj, ni))
            comps.append((lab, cells))
    return comps


def _cusp_weight(sys: PlanarSystem) -> float:
    """Vertical weight n + 1 of the quasi-homogeneous scaling y ~ x^(n+1)."""
    try:
        sd = series_at_origin(sys)
    except Exception:
        return 1.0
    if sd.a == 0.0 and sd.b == 0.0 and sd.n is not None:
        return float(sd.n + 1)
    return 1.0


def sector_probe(
    sys: PlanarSystem,
    delta: float,
    n_rays: int = 72,
    *,
    n_rings: int = 10,
    ring_ratio: float = 0.5,
    escape_factor: float = 4.0,
    t_cap: float = 1e4,
    tol: float = 1e-9,
    persist: int = 4,
    symmetric: bool | None = None,
    elliptic_bounded: bool | None = None,
    weight: float | None = None,
) -> SectorSummary:
    """Count elliptic, hyperbolic and parabolic sectors at a degenerate origin.

    Orbits are launched forward and backward from ``n_rays`` points on each
    of ``n_rings`` nested rings r = delta, delta*ratio, ... . The outer ring is
    the circle of radius delta; inner rings follow the quasi-homogeneous
    scaling y ~ x^w of the jet (w = n + 1 when a = b = 0), i.e. the points are
    (r cos t, delta (r/delta)^w sin t), so that the cusp-shaped sectors of a
    nilpotent origin keep a fixed angular width. Each launch point gets a
    fate in each time direction: O (reaches O inside its local region of size
    ``escape_factor * r``), OG (leaves that region, then reaches O) or X
    (leaves |p| < escape_factor * delta, or winds once around O). Both ends
    in {O, OG} gives E; O one way and X the other gives a parabolic label;
    anything else is H. On the (ring, ray) grid equal labels form connected
    regions, and a sector is a region present on each of the ``persist``
    innermost rings.
    """
    if delta <= 0 or n_rays < 8 or n_rings < 2:
        raise ValueError("need delta > 0, n_rays >= 8 and n_rings >= 2")
    th = 2.0 * np.pi * (np.arange(n_rays) + 0.5) / n_rays
    radii = delta * ring_ratio ** np.arange(n_rings)
    if weight is None:
        weight = _cusp_weight(sys)
    R, TH = np.meshgrid(radii, th, indexing="ij")
    X = (R * np.cos(TH)).ravel()
    Y = (delta * (R / delta) ** weight * np.sin(TH)).ravel()
    rhs = _vectorised_rhs(sys)
    esc = escape_factor * R.ravel()
    outer = escape_factor * delta
    fw = _batch_fates(rhs, X, Y, 1.0, esc, t_cap, tol, weight=weight, scale=delta, outer_r=outer)
    bw = _batch_fates(rhs, X, Y, -1.0, esc, t_cap, tol, weight=weight, scale=delta, outer_r=outer)
    labels = np.array([_sector_of(a, w) for a, w in zip(bw, fw)]).reshape(n_rings, n_rays)

    counts = {"E": 0, "H": 0, "U": 0, "S": 0}
    needed = set(range(n_rings - persist, n_rings))
    for lab, cells in _components(labels):
        if needed <= {j for (j, _) in cells}:
            counts[lab] += 1
    if symmetric is None:
        symmetric = is_symmetric(sys)
    E, H, P = counts["E"], counts["H"], counts["U"] + counts["S"]
    confidence = "empirical"
    if symmetric:
        confidence = "exact-by-symmetry"
        if P % 2:
            raise InconclusiveProbe(f"odd parabolic count {P} for a reversible system at delta={delta}")
        if elliptic_bounded and P:
            raise InconclusiveProbe(f"parabolic count {P} contradicts a bounded elliptic sector")
    if E + H == 0:
        raise InconclusiveProbe("no elliptic or hyperbolic region reaches the inner ring")
    return SectorSummary(
        elliptic=E,
        hyperbolic=H,
        parabolic=P,
        probe_radius=delta,
        confidence=confidence,
        labels=tuple("".join(row) for row in labels),
        rings=tuple(float(r) for r in radii),
    )
