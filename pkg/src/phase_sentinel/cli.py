"""phase-sentinel command line.

Exit codes: 0 when a verdict is reached, 2 when the analysis is
inconclusive, 1 on any error (I/O, parse, domain).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any, Sequence

from .core import CubicParams, PlanarSystem, as_planar, load_system
from .errors import PhaseSentinelError

__all__ = ["RunConfig", "build_parser", "cmd_analyze", "cmd_portrait", "cmd_atlas", "cmd_criteria", "main"]

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None
    out: str | None = None
    tol: float = 1e-9
    seeds: str | None = None
    probe_radius: float | None = None
    format: str = "svg"
    t_max: float = 40.0
    threads: int = 1

    def __post_init__(self):
        if not (self.tol > 0 and math.isfinite(self.tol)):
            raise PhaseSentinelError("--tol must be a positive number")
        if self.probe_radius is not None and not self.probe_radius > 0:
            raise PhaseSentinelError("--probe-radius must be positive")


def _dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_jsonable, allow_nan=True) + "\n"


def _jsonable(o: Any):
    if hasattr(o, "to_dict"):
        return o.to_dict()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    if hasattr(o, "tolist"):
        return o.tolist()
    return str(o)


def _emit(cfg: RunConfig, name: str, text: str) -> str | None:
    if cfg.out is None:
        sys.stdout.write(text)
        return None
    os.makedirs(cfg.out, exist_ok=True)
    path = os.path.join(cfg.out, name)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _load(cfg: RunConfig) -> PlanarSystem | CubicParams:
    if not cfg.input:
        raise PhaseSentinelError("--input is required")
    return load_system(cfg.input)


def _n_seeds(cfg: RunConfig, default: int) -> int:
    if cfg.seeds is None:
        return default
    try:
        n = int(cfg.seeds)
    except ValueError:
        raise PhaseSentinelError("--seeds must be an integer for this command") from None
    if n <= 0:
        raise PhaseSentinelError("--seeds must be positive")
    return n


# ----------------------------------------------------------------------------
# analysis pieces
# ----------------------------------------------------------------------------


def _criteria_section(obj) -> tuple[list[Any], str]:
    from .criteria import best_verdict, check_all

    reports = check_all(obj)
    return reports, best_verdict(reports)


def _origin_section(planar: PlanarSystem) -> dict[str, Any]:
    from .equilibrium import classify_system

    try:
        return {"classification": classify_system(planar).to_dict()}
    except PhaseSentinelError as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}


def _cubic_section(p: CubicParams) -> dict[str, Any]:
    from .atlas import portrait_descriptor, region_of_params
    from .compactify import infinity_inventory

    out: dict[str, Any] = {}
    try:
        out["infinity"] = [e.to_dict() for e in infinity_inventory(p)]
    except PhaseSentinelError as exc:
        out["infinity_error"] = f"{type(exc).__name__}: {exc}"
    try:
        lab = region_of_params(p)
        desc = portrait_descriptor(lab, p, with_verdict=False)
        out["region"] = lab.to_dict()
        out["figure"] = desc.figure
        out["origin_table"] = desc.origin.to_dict()
        out["separatrices"] = {k: dict(v) for k, v in desc.separatrices.items()}
    except PhaseSentinelError as exc:
        out["region_error"] = f"{type(exc).__name__}: {exc}"
    return out


def cmd_criteria(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .criteria import INCONCLUSIVE

    obj = _load(cfg)
    reports, verdict = _criteria_section(obj)
    report = {"command": "criteria", "verdict": verdict, "criteria": [r.to_dict() for r in reports]}
    _emit(cfg, "criteria.json", _dumps(report))
    return (EXIT_INCONCLUSIVE if verdict == INCONCLUSIVE else EXIT_OK), report


def cmd_analyze(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .criteria import INCONCLUSIVE
    from .flow import find_limit_cycle, sector_probe

    obj = _load(cfg)
    planar = as_planar(obj)
    reports, verdict = _criteria_section(obj)
    report: dict[str, Any] = {
        "command": "analyze",
        "system": planar.name or ("cubic" if isinstance(obj, CubicParams) else "planar"),
        "verdict": verdict,
        "criteria": [r.to_dict() for r in reports],
        "origin": _origin_section(planar),
    }
    if isinstance(obj, CubicParams):
        report["cubic"] = _cubic_section(obj)
    cycle_found = False
    if verdict == INCONCLUSIVE:
        try:
            cyc = find_limit_cycle(planar, n_seeds=_n_seeds(cfg, 10), tol=min(cfg.tol, 1e-9))
        except PhaseSentinelError as exc:
            report["limit_cycle"] = {"error": f"{type(exc).__name__}: {exc}"}
        else:
            cycle_found = cyc is not None
            report["limit_cycle"] = (
                None
                if cyc is None
                else {"y_star": cyc.y_star, "amplitude": cyc.amplitude, "period": cyc.period, "stability": cyc.stability}
            )
    origin_cls = report["origin"].get("classification")
    if cfg.probe_radius is not None and origin_cls and origin_cls["kind"] == "degenerate":
        s = sector_probe(planar, cfg.probe_radius)
        report["sectors"] = {
            "elliptic": s.elliptic,
            "hyperbolic": s.hyperbolic,
            "parabolic": s.parabolic,
            "confidence": s.confidence,
            "probe_radius": s.probe_radius,
        }
    origin_ok = origin_cls is not None and origin_cls["kind"] != "center-or-focus"
    reached = verdict != INCONCLUSIVE or cycle_found or origin_ok
    report["exit"] = EXIT_OK if reached else EXIT_INCONCLUSIVE
    _emit(cfg, "report.json", _dumps(report))
    if cfg.format == "report" and cfg.out:
        _portrait_files(cfg, obj, planar, report, formats=("report",))
    return report["exit"], report


def _portrait_files(cfg: RunConfig, obj, planar: PlanarSystem, report: dict[str, Any] | None, formats: Sequence[str]) -> list[str]:
    from .render import compute_portrait, parse_seeds, portrait_svg, report_figures, separatrix_seeds, traces_csv

    seeds = parse_seeds(cfg.seeds) if cfg.command == "portrait" else parse_seeds(None)
    origin = (report or {}).get("origin") or _origin_section(planar)
    cls = origin.get("classification") or {}
    kind = cls.get("kind", "")
    extra = separatrix_seeds(cls.get("directions", ())) if kind == "degenerate" else []
    por = compute_portrait(planar, seeds + extra, t_max=cfg.t_max, tol=max(cfg.tol, 1e-10))
    por.finite.append((0.0, 0.0, kind))
    title = planar.name or "system"
    if isinstance(obj, CubicParams):
        from .atlas import figure_tag, region_of_params
        from .compactify import infinity_inventory

        por.boundary = infinity_inventory(obj)
        try:
            lab = region_of_params(obj)
            por.meta["region"] = lab.label
            por.meta["figure"] = figure_tag(lab)
        except PhaseSentinelError:
            pass
    else:
        from .compactify import polynomial_boundary

        por.boundary = polynomial_boundary(planar)
    por.meta["seeds"] = len(seeds)
    if extra:
        por.meta["separatrix_seeds"] = len(extra)
    por.meta["orbits"] = sum(1 for o in por.orbits if o.trace is not None)
    written = []
    os.makedirs(cfg.out or ".", exist_ok=True)
    out_dir = cfg.out or "."
    if "svg" in formats or "report" in formats:
        path = os.path.join(out_dir, "portrait.svg")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(portrait_svg(por, title=title))
        written.append(path)
    if "csv" in formats or "report" in formats:
        path = os.path.join(out_dir, "traces.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(traces_csv(por))
        written.append(path)
    if "report" in formats:
        written += [os.path.join(out_dir, f) for f in report_figures(por, out_dir, title=title)]
        notes = {f"{o.seed[0]:g},{o.seed[1]:g}/{o.direction:+d}": o.note for o in por.orbits}
        meta = dict(por.meta)
        meta["orbit_notes"] = notes
        with open(os.path.join(out_dir, "portrait.json"), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_dumps(meta))
    return written


def cmd_portrait(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    obj = _load(cfg)
    planar = as_planar(obj)
    files = _portrait_files(cfg, obj, planar, None, formats=(cfg.format,))
    return EXIT_OK, {"command": "portrait", "files": files}


def cmd_atlas(cfg: RunConfig) -> tuple[int, dict[str, Any]]:
    from .atlas import classify_batch

    if not cfg.input:
        raise PhaseSentinelError("--input is required")
    with open(cfg.input, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    recs, hist = classify_batch(lines, descriptors=cfg.format == "report", workers=cfg.threads)
    body = "".join(json.dumps(r, sort_keys=True, default=_jsonable) + "\n" for r in recs)
    _emit(cfg, "atlas.jsonl", body)
    summary = {"records": len(recs), "histogram": hist}
    if cfg.out:
        _emit(cfg, "summary.json", _dumps(summary))
    return EXIT_OK, {"command": "atlas", "records": recs, "summary": summary}


_COMMANDS = {"analyze": cmd_analyze, "portrait": cmd_portrait, "atlas": cmd_atlas, "criteria": cmd_criteria}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phase-sentinel", description="Closed-orbit criteria and phase-portrait analysis.")
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--input", "-i", help="system document (JSON) or, for atlas, a records file")
    parser.add_argument("--out", "-o", help="output directory (default: stdout for reports)")
    parser.add_argument("--tol", type=float, default=1e-9, help="integration tolerance")
    parser.add_argument("--seeds", help="seed count, or 'x,y;x,y' for portrait")
    parser.add_argument("--probe-radius", type=float, help="sector probe radius for degenerate origins")
    parser.add_argument("--format", choices=("svg", "csv", "report"), default="svg")
    parser.add_argument("--t-max", type=float, default=40.0, help="portrait integration time")
    return parser


def _threads() -> int:
    raw = os.environ.get("PHASE_SENTINEL_THREADS", "").strip()
    if not raw:
        return 1
    n = int(raw)
    if n < 1:
        raise PhaseSentinelError("PHASE_SENTINEL_THREADS must be >= 1")
    return n


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        cfg = RunConfig(
            command=args.command,
            input=args.input,
            out=args.out,
            tol=args.tol,
            seeds=args.seeds,
            probe_radius=args.probe_radius,
            format=args.format,
            t_max=args.t_max,
            threads=_threads(),
        )
        code, _ = _COMMANDS[args.command](cfg)
        return code
    except (PhaseSentinelError, OSError, ValueError) as exc:
        print(f"phase-sentinel: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
