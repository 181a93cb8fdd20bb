"""Independent reference computations used to derive and re-check frozen
test values. Nothing here imports the package's own solvers."""
from __future__ import annotations

import math

import numpy as np
import sympy as sp
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq


def rhs_from(g, f):
    def rhs(t, p):
        x, y = p
        return [y, -g(x) - f(x, y) * y]

    return rhs


def first_return(rhs, y0, center=(0.0, 0.0), direction=1, t_max=200.0, rtol=1e-12):
    """Next crossing of the upward half line x = cx, y > cy (full return)."""
    cx, cy = center

    def ev(t, p):
        return p[0] - cx

    # clockwise in forward time: the upper half line is crossed with x increasing
    ev.direction = 1.0 if direction > 0 else -1.0

    def fun(t, p):
        v = rhs(t, p)
        return [direction * v[0], direction * v[1]]

    sol = solve_ivp(fun, (0, t_max), [cx, cy + y0], method="DOP853", rtol=rtol, atol=rtol, events=ev, dense_output=True)
    for te, ye in zip(sol.t_events[0], sol.y_events[0]):
        if te > 1e-9 and ye[1] > cy:
            return float(ye[1] - cy), float(te), sol
    return None, None, sol


def vdp_cycle():
    """Amplitude and y* of the van der Pol cycle (g = x, f = x^2 - 1)."""
    rhs = rhs_from(lambda x: x, lambda x, y: x * x - 1.0)
    ystar = brentq(lambda y: first_return(rhs, y)[0] - y, 1.0, 4.0, xtol=1e-13)
    _, period, sol = first_return(rhs, ystar)
    ts = np.linspace(0.0, period, 200001)
    xs = sol.sol(ts)[0]
    return float(np.max(np.abs(xs))), float(ystar), float(period)


def conjugate_oracle(g, x, alpha=-10.0):
    G = lambda s: quad(g, 0.0, s, epsabs=1e-15, epsrel=1e-13)[0]
    target = G(x)
    return brentq(lambda s: G(s) - target, alpha, -1e-12, xtol=1e-15)


def count_real_roots_numpy(coeffs_high_first, tol=1e-7):
    r = np.roots(coeffs_high_first)
    return int(np.sum(np.abs(r.imag) <= tol * np.maximum(1.0, np.abs(r.real))))


def phi_sign_changes(a, b, c, n=200001):
    """Brute force: sign changes of Phi = c u^3 + b u^2 + a u + 1 on a grid
    covering the Cauchy bound."""
    bound = 1.0 + max(abs(a), abs(b), 1.0) / c
    u = np.linspace(-bound, bound, n)
    v = ((c * u + b) * u + a) * u + 1.0
    s = np.sign(v)
    s = s[s != 0]
    return int(np.sum(s[1:] != s[:-1]))


# ---------------------------------------------------------------------------
# symbolic chart algebra
# ---------------------------------------------------------------------------

LAM, MU, A, B, C, KAP = sp.symbols("lambda mu a b c kappa", real=True)
U, Z, V, W = sp.symbols("u z v w", real=True)


def plane_field_sym(family):
    x, y = sp.symbols("x y", real=True)
    if family == "sys61":
        Y = -LAM * x - x**3 - MU * y - A * x**2 * y - B * x * y**2 - C * y**3
    else:
        Y = -x - MU * y - A * x**2 * y - B * x * y**2 - C * y**3
    return x, y, y, Y


def chart_sym(family, chart):
    """Chart field by direct chain rule on x = 1/z, y = u/z (U) or
    x = v/z, y = 1/z (V), then time rescaling by z^2."""
    x, y, X, Y = plane_field_sym(family)
    if chart == "U":
        sub = {x: 1 / Z, y: U / Z}
        Xs, Ys = X.subs(sub), Y.subs(sub)
        # u = y/x, z = 1/x
        du = (Ys * (1 / Z) - (U / Z) * Xs) / (1 / Z) ** 2
        dz = -Xs / (1 / Z) ** 2
        s = U
    else:
        sub = {x: V / Z, y: 1 / Z}
        Xs, Ys = X.subs(sub), Y.subs(sub)
        du = (Xs * (1 / Z) - (V / Z) * Ys) / (1 / Z) ** 2
        dz = -Ys / (1 / Z) ** 2
        s = V
    P = sp.expand(sp.simplify(du * Z**2))
    Q = sp.expand(sp.simplify(dz * Z**2))
    return s, P, Q


def bb3_sym():
    """System (y1) and its z = w u blow-up, both symbolic; returns the
    blown-up field divided by u (time d delta = u d tau)."""
    u0, gam = sp.symbols("u0 gamma", real=True)
    du = -Z**2 * (U**2 + (MU + 2 * u0) * U + u0**2 + MU * u0 + LAM) - B * U**2
    dz = -Z**3 * U - u0 * Z**3
    sub = {Z: W * U}
    du_s = sp.expand(du.subs(sub))
    dw_s = sp.expand((dz.subs(sub) - W * du_s) / U)
    Pn, Qn = sp.expand(du_s / U), sp.expand(dw_s / U)
    gamma_expr = u0**2 + MU * u0 + LAM
    return u0, gamma_expr, Pn, Qn


def poly_coeffs(expr, s, t):
    p = sp.Poly(expr, s, t)
    return {k: v for k, v in zip(p.monoms(), p.coeffs())}


def mm_g(x):
    """Odd zigzag: slope 1 on |x|<1/4, slope -3 on 1/4<|x|<1/2, slope 1 beyond."""
    ax = abs(x)
    if ax <= 0.25:
        v = ax
    elif ax <= 0.5:
        v = 1.0 - 3.0 * ax
    else:
        v = ax - 1.0
    return v if x >= 0 else -v


def mm_cycle(mu1=0.0, mu2=-1.05):
    """Reversed-time fixed point of the return map on {x = 1, y > 0}."""
    rhs = rhs_from(mm_g, lambda x, y: -mu1 - mu2 * x - x * x)
    def disp(y):
        y1 = first_return(rhs, y, center=(1.0, 0.0), direction=-1, t_max=100.0)[0]
        return None if y1 is None else y1 - y

    ys = np.linspace(0.05, 1.0, 20)
    d = [disp(y) for y in ys]
    for i in range(len(ys) - 1):
        if d[i] is not None and d[i + 1] is not None and d[i] * d[i + 1] < 0:
            return float(brentq(disp, ys[i], ys[i + 1], xtol=1e-13))
    return None


# ---------------------------------------------------------------------------
# region predicates, one per set, evaluated literally
# ---------------------------------------------------------------------------


def s_regions(lam, mu, a, b, c):
    """Every S_k whose defining predicate holds (exact float comparisons)."""
    out = []
    if c == 0:
        u0 = -a / (2 * b)
        g0 = u0 * u0 + mu * u0 + lam
        preds = {
            1: a == 0 and mu == 0 and b < 0,
            2: a == 0 and mu == 0 and b > 0,
            3: a * a + mu * mu != 0 and b > a * a / 4,
            4: 0 < b < a * a / 4,
            5: a * a + mu * mu != 0 and b < 0,
            6: b == a * a / 4 and g0 < 0,
            7: b == a * a / 4 and g0 == 0,
            8: b == a * a / 4 and g0 > 0,
        }
        return [f"S{k}" for k, v in preds.items() if v]
    r3 = math.sqrt(3 * a * c)
    phi = lambda u: c * u**3 + b * u * u + a * u + 1
    if b * b - 3 * a * c > 0:
        sq = math.sqrt(b * b - 3 * a * c)
        r1, r2 = (-b - sq) / (3 * c), (-b + sq) / (3 * c)
        p1, p2 = phi(r1), phi(r2)
        g1, g2 = r1 * r1 + mu * r1 + lam, r2 * r2 + mu * r2 + lam
    else:
        p1 = p2 = g1 = g2 = float("nan")
    preds = {
        9: (-r3 <= b <= r3) or (b < -r3 and p2 > 0) or (b > r3 and p1 < 0) or (b > r3 and p1 > 0 and p2 > 0),
        10: b > r3 and p1 == 0 and g1 < 0,
        11: b > r3 and p1 == 0 and g1 == 0,
        12: b > r3 and p1 == 0 and g1 > 0,
        13: b < -r3 and p2 == 0,
        14: b > r3 and p1 > 0 and p2 == 0 and g2 < 0,
        15: b > r3 and p1 > 0 and p2 == 0 and g2 == 0,
        16: b > r3 and p1 > 0 and p2 == 0 and g2 > 0,
        17: b > r3 and p1 > 0 and p2 < 0,
        18: b < -r3 and p2 < 0,
    }
    return [f"S{k}" for k, v in preds.items() if v]


def g_regions(mu, a, b, c):
    r = 2 * math.sqrt(a * c)
    e = a - mu * math.sqrt(a * c) + c
    preds = {
        1: mu == 0 and a == 0 and c == 0 and b > 0,
        2: mu == 0 and a == 0 and c == 0 and b < 0,
        3: mu > 0 and a == 0 and c == 0 and b < 0,
        4: mu > 0 and a == 0 and c == 0 and b > 0,
        5: a > 0 and b > 0 and c == 0,
        6: a > 0 and b < 0 and c == 0,
        7: a == 0 and b > 0 and c > 0,
        8: a == 0 and b < 0 and c > 0,
        9: a > 0 and c > 0 and -r < b < r,
        10: a > 0 and c > 0 and b > r,
        11: a > 0 and c > 0 and b < -r,
        12: a > 0 and c > 0 and b == r and e < 0,
        13: a > 0 and c > 0 and b == -r,
        14: a > 0 and c > 0 and b == r and e == 0,
        15: a > 0 and c > 0 and b == r and e > 0,
    }
    return [f"G{k}" for k, v in preds.items() if v]


def near_g_boundary(mu, a, b, c, eps=1e-9):
    vals = [v for v in (mu, a, c) if v != 0] + [b, b * b - 4 * a * c]
    if a > 0 and c > 0:
        vals.append(a - mu * math.sqrt(a * c) + c)
    return any(abs(v) < eps for v in vals)


def near_s_boundary(lam, mu, a, b, c, eps=1e-9):
    """True when a random sample sits within eps of a region boundary that was
    not deliberately hit exactly."""
    vals = [v for v in (mu, a, c) if v != 0]
    if c == 0:
        if a != 0 or b != a * a / 4:
            vals.append(b - a * a / 4)
        vals.append(b)
    else:
        vals += [b * b - 3 * a * c, b]
        if b * b - 3 * a * c > 0:
            sq = math.sqrt(b * b - 3 * a * c)
            for r in ((-b - sq) / (3 * c), (-b + sq) / (3 * c)):
                vals.append(((c * r + b) * r + a) * r + 1)
    return any(abs(v) < eps for v in vals)
