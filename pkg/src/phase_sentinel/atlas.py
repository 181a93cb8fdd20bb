"""Global phase-portrait regions of the cubic families.

``region61`` labels (lambda, mu, a, b, c) with S1..S18 and ``region71``
labels (mu, a, b, c) with G1..G15. Every sign that takes part in the
decision is recorded; values within 1e-12 of zero (relative to the size of
the terms involved) count as zero.
"""
from __future__ import annotations

import json
import math
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .compactify import (
    DirectionTable,
    InfinityEquilibrium,
    infinity_inventory,
    phi_critical,
    tsign,
)
from .core import CubicParams
from .equilibrium import EquilibriumClass
from .errors import OutOfRegion, ParseError, PhaseSentinelError

__all__ = [
    "RegionLabel",
    "PortraitDescriptor",
    "region61",
    "region71",
    "region_of_params",
    "expected_inventory",
    "figure_tag",
    "origin_type",
    "portrait_descriptor",
    "parse_record",
    "classify_batch",
]


@dataclass(frozen=True)
class RegionLabel:
    family: str
    label: str
    discriminants: Mapping[str, Any] = field(default_factory=dict)

    @property
    def index(self) -> int:
        return int(self.label[1:])

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family, "label": self.label, "discriminants": dict(self.discriminants)}


def _nonneg(name: str, v: float, disc: dict) -> int:
    s = tsign(v)
    if s < 0:
        raise OutOfRegion(f"{name} must be >= 0, got {v!r}")
    disc[f"sign({name})"] = s
    return s


def region61(lambda_: float, mu: float, a: float, b: float, c: float) -> RegionLabel:
    disc: dict[str, Any] = {}
    vals = [float(v) for v in (lambda_, mu, a, b, c)]
    if not all(math.isfinite(v) for v in vals):
        raise OutOfRegion("parameters must be finite")
    lambda_, mu, a, b, c = vals
    _nonneg("lambda", lambda_, disc)
    s_mu = _nonneg("mu", mu, disc)
    s_a = _nonneg("a", a, disc)
    s_c = _nonneg("c", c, disc)
    sb = tsign(b)
    disc["sign(b)"] = sb
    if sb == 0:
        raise OutOfRegion("b must be nonzero")

    def done(k: int) -> RegionLabel:
        return RegionLabel("sys61", f"S{k}", disc)

    if s_c == 0:
        if s_a == 0 and s_mu == 0:
            return done(1 if sb < 0 else 2)
        if sb < 0:
            return done(5)
        d = b - a * a / 4.0
        sd = tsign(d, b + a * a / 4.0)
        disc["b-a^2/4"] = sd
        if sd > 0:
            return done(3)
        if sd < 0:
            return done(4)
        u0 = -a / (2.0 * b)
        g = u0 * u0 + mu * u0 + lambda_
        sg = tsign(g, u0 * u0 + mu * abs(u0) + lambda_)
        disc["u0"] = u0
        disc["u0^2+mu*u0+lambda"] = sg
        return done(6 if sg < 0 else 7 if sg == 0 else 8)

    crit = phi_critical(a, b, c)
    disc.update(crit["signs"])
    if crit["rho1"] is None:
        return done(9)
    disc["rho1"], disc["rho2"] = crit["rho1"], crit["rho2"]
    s1, s2 = crit["signs"]["phi(rho1)"], crit["signs"]["phi(rho2)"]

    def gam(key: str, rho: float) -> int:
        s = tsign(rho * rho + mu * rho + lambda_, rho * rho + mu * abs(rho) + lambda_)
        disc[key] = s
        return s

    if sb < 0:
        return done(9 if s2 > 0 else 13 if s2 == 0 else 18)
    if s1 < 0:
        return done(9)
    if s1 == 0:
        s = gam("rho1^2+mu*rho1+lambda", crit["rho1"])
        return done(10 if s < 0 else 11 if s == 0 else 12)
    if s2 > 0:
        return done(9)
    if s2 < 0:
        return done(17)
    s = gam("rho2^2+mu*rho2+lambda", crit["rho2"])
    return done(14 if s < 0 else 15 if s == 0 else 16)


def region71(mu: float, a: float, b: float, c: float) -> RegionLabel:
    disc: dict[str, Any] = {}
    vals = [float(v) for v in (mu, a, b, c)]
    if not all(math.isfinite(v) for v in vals):
        raise OutOfRegion("parameters must be finite")
    mu, a, b, c = vals
    s_mu = _nonneg("mu", mu, disc)
    s_a = _nonneg("a", a, disc)
    s_c = _nonneg("c", c, disc)
    sb = tsign(b)
    disc["sign(b)"] = sb
    if sb == 0:
        raise OutOfRegion("b must be nonzero")

    def done(k: int) -> RegionLabel:
        return RegionLabel("sys71", f"G{k}", disc)

    if s_c == 0:
        if s_a == 0:
            if s_mu == 0:
                return done(1 if sb > 0 else 2)
            return done(4 if sb > 0 else 3)
        return done(5 if sb > 0 else 6)
    if s_a == 0:
        return done(7 if sb > 0 else 8)
    d = b * b - 4.0 * a * c
    sd = tsign(d, b * b + 4.0 * a * c)
    disc["b^2-4ac"] = sd
    if sd < 0:
        return done(9)
    if sd > 0:
        return done(10 if sb > 0 else 11)
    if sb < 0:
        return done(13)
    rac = math.sqrt(a * c)
    e = a - mu * rac + c
    se = tsign(e, a + mu * rac + c)
    disc["a-mu*sqrt(ac)+c"] = se
    return done(12 if se < 0 else 14 if se == 0 else 15)


def region_of_params(p: CubicParams) -> RegionLabel:
    if p.family == "sys61":
        return region61(p.lambda_, p.mu, p.a, p.b, p.c)
    if p.family == "sys71":
        return region71(p.mu, p.a, p.b, p.c)
    raise OutOfRegion("only sys61 and sys71 have region atlases")


_INVENTORY61 = {
    1: "ABD", 2: "D", 3: "D", 4: "ABD", 5: "ABD", 6: "CD", 7: "CD", 8: "CD", 9: "ED",
    10: "K F D", 11: "K F D", 12: "K F D", 13: "F Q D", 14: "F Q D", 15: "F Q D", 16: "F Q D",
    17: "F1 F2 F3 D", 18: "F1 F2 F3 D",
}
_INVENTORY71 = {
    1: "G D", 2: "G D", 3: "G D", 4: "G D", 5: "G R D", 6: "G R D", 7: "G S D", 8: "G S D",
    9: "G D", 10: "G P1 P2 D", 11: "G P1 P2 D", 12: "G T D", 13: "G T D", 14: "G T D", 15: "G T D",
}


def expected_inventory(label: RegionLabel) -> list[str]:
    """Sorted labels of the equilibria at infinity implied by the region alone."""
    table = _INVENTORY61 if label.family == "sys61" else _INVENTORY71
    raw = table[label.index]
    return sorted(raw.split() if " " in raw else list(raw))


def figure_tag(label: RegionLabel) -> str:
    fig = "qjxt" if label.family == "sys61" else "qjxt1"
    return f"{fig}({'abcdefghijklmnopqr'[label.index - 1]})"


def origin_type(lambda_: float, mu: float, a: float, c: float) -> EquilibriumClass:
    """Type of O for the cubic family (lambda = 1 for sys71)."""
    if tsign(mu) == 0:
        if tsign(a) == 0 and tsign(c) == 0:
            return EquilibriumClass("center")
        return EquilibriumClass("stable-focus")
    if tsign(lambda_) == 0:
        return EquilibriumClass("stable-improper-node")
    d = mu * mu - 4.0 * lambda_
    sd = tsign(d, mu * mu + 4.0 * lambda_)
    if sd > 0:
        return EquilibriumClass("stable-node")
    if sd == 0:
        return EquilibriumClass("stable-improper-node")
    return EquilibriumClass("stable-focus")


def _flow_counts(kind: Any) -> dict[str, Any]:
    """Orbits entering (+) and leaving (-) an equilibrium, counted in its chart."""
    if isinstance(kind, DirectionTable):
        out: dict[str, Any] = {"in": 0, "out": 0}
        for row in kind.rows:
            key = "in" if row.sense == "+" else "out"
            if out[key] == "inf" or math.isinf(row.count):
                out[key] = "inf"
            else:
                out[key] += int(row.count)
        return out
    k = kind.kind if isinstance(kind, EquilibriumClass) else str(kind)
    if k == "saddle":
        return {"in": 2, "out": 2}
    if k == "stable-node":
        return {"in": "inf", "out": 0}
    if k == "unstable-node":
        return {"in": 0, "out": "inf"}
    return {"in": None, "out": None}


@dataclass(frozen=True)
class PortraitDescriptor:
    label: RegionLabel
    params: CubicParams
    origin: EquilibriumClass
    infinity: tuple[InfinityEquilibrium, ...]
    separatrices: Mapping[str, Mapping[str, Any]]
    figure: str
    verdict: str
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {
            "region": self.label.to_dict(),
            "params": self.params.as_dict(),
            "origin": self.origin.to_dict(),
            "infinity": [e.to_dict() for e in self.infinity],
            "separatrices": {k: dict(v) for k, v in self.separatrices.items()},
            "figure": self.figure,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def portrait_descriptor(label: RegionLabel, params: CubicParams, with_verdict: bool = True) -> PortraitDescriptor:
    from .criteria import INCONCLUSIVE, check_thm1

    inv = tuple(infinity_inventory(params))
    got = sorted(e.label for e in inv)
    if got != expected_inventory(label):
        raise PhaseSentinelError(f"inventory {got} does not match region {label.label}")
    origin = origin_type(params.lambda_, params.mu, params.a, params.c)
    verdict = check_thm1(params.to_system()).verdict if with_verdict else INCONCLUSIVE
    notes: list[str] = []
    if origin.kind == "center":
        notes.append("O is a center; every finite orbit is closed")
    elif verdict != INCONCLUSIVE:
        notes.append("O attracts every finite orbit that does not tend to infinity")
    if label.family == "sys61" and label.index == 5:
        notes.append("orbit leaving I_B- tends to O")
    return PortraitDescriptor(
        label,
        params,
        origin,
        inv,
        {e.label: _flow_counts(e.kind) for e in inv},
        figure_tag(label),
        verdict,
        tuple(notes),
    )


# ----------------------------------------------------------------------------
# batch
# ----------------------------------------------------------------------------

_KEYS61 = ("lambda", "mu", "a", "b", "c")
_KEYS71 = ("mu", "a", "b", "c")


def parse_record(line: str) -> CubicParams:
    """A JSON object with a ``family`` key, or 5 (sys61) / 4 (sys71) numbers
    separated by commas or blanks."""
    text = line.strip()
    if text.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON record: {exc.msg}") from exc
        fam = doc.get("family")
        keys = _KEYS61 if fam == "sys61" else _KEYS71 if fam == "sys71" else None
        if keys is None:
            raise ParseError("record needs family sys61 or sys71", field="family")
        vals = {k: float(doc.get(k, doc.get({"lambda": "λ", "mu": "μ"}.get(k, k), 0.0))) for k in keys}
    else:
        parts = text.replace(",", " ").split()
        try:
            nums = [float(p) for p in parts]
        except ValueError as exc:
            raise ParseError(f"bad numeric record {text!r}") from exc
        if len(nums) == 5:
            fam, vals = "sys61", dict(zip(_KEYS61, nums))
        elif len(nums) == 4:
            fam, vals = "sys71", dict(zip(_KEYS71, nums))
        else:
            raise ParseError(f"expected 4 or 5 numbers, got {len(nums)}")
    if "lambda" in vals:
        vals["lambda_"] = vals.pop("lambda")
    return _make(fam, vals)


def _make(fam: str, vals: dict[str, float]) -> CubicParams:
    try:
        return CubicParams(fam, **vals)
    except ParseError as exc:
        # out-of-region values are a classification outcome, not a parse failure
        raise OutOfRegion(str(exc)) from exc


def _one(args: tuple[int, str, bool]) -> dict[str, Any]:
    i, line, full = args
    rec: dict[str, Any] = {"index": i, "input": line.strip()}
    try:
        p = parse_record(line)
        lab = region_of_params(p)
        rec.update(family=lab.family, label=lab.label, figure=figure_tag(lab), discriminants=dict(lab.discriminants))
        if full:
            rec["descriptor"] = portrait_descriptor(lab, p).to_dict()
    except (OutOfRegion, ParseError) as exc:
        rec["error"] = f"{type(exc).__name__}: {exc}"
    return rec


def classify_batch(lines: Iterable[str], descriptors: bool = False, workers: int | None = None) -> tuple[list[dict[str, Any]], dict[str, int]]:
    """Label every non-blank, non-comment line; returns records and a histogram."""
    jobs = [(i, ln, descriptors) for i, ln in enumerate(lines) if ln.strip() and not ln.lstrip().startswith("#")]
    if workers is None:
        workers = int(os.environ.get("PHASE_SENTINEL_THREADS", "1") or 1)
    if workers > 1 and len(jobs) > 64:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            recs = list(ex.map(_one, jobs, chunksize=256))
    else:
        recs = [_one(j) for j in jobs]
    hist = Counter(r.get("label", "error") for r in recs)
    return recs, dict(sorted(hist.items(), key=lambda kv: (kv[0][0], int(kv[0][1:]) if kv[0][1:].isdigit() else 0)))
