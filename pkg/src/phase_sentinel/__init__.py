"""Nonexistence of closed orbits, origin and infinity analysis for planar
systems x' = y, y' = -g(x) - f(x, y) y."""
from __future__ import annotations

from .atlas import classify_batch, portrait_descriptor, region61, region71, region_of_params
from .compactify import (
    briot_bouquet,
    chart_transform,
    classify_infinity,
    disc_project,
    infinity_equilibria,
    infinity_inventory,
    phi_analysis,
    verify_chart_consistency,
)
from .core import CubicParams, PlanarSystem, eval_field, load_system, parse_system, series_at_origin
from .criteria import check_all, check_thm1, check_thm1b, check_thm2, check_thm3, dulac_baseline
from .equilibrium import classify_origin, classify_system, region_of
from .errors import PhaseSentinelError
from .flow import energy_residual, find_limit_cycle, integrate, return_map, sector_probe

__version__ = "0.1.0"

__all__ = [
    "CubicParams",
    "PlanarSystem",
    "PhaseSentinelError",
    "eval_field",
    "load_system",
    "parse_system",
    "series_at_origin",
    "check_all",
    "check_thm1",
    "check_thm1b",
    "check_thm2",
    "check_thm3",
    "dulac_baseline",
    "classify_origin",
    "classify_system",
    "region_of",
    "integrate",
    "return_map",
    "find_limit_cycle",
    "energy_residual",
    "sector_probe",
    "chart_transform",
    "verify_chart_consistency",
    "phi_analysis",
    "infinity_equilibria",
    "classify_infinity",
    "infinity_inventory",
    "briot_bouquet",
    "disc_project",
    "region61",
    "region71",
    "region_of_params",
    "portrait_descriptor",
    "classify_batch",
]
