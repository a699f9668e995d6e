"""
Deterministic parameter sweeps and figure-data files.

A sweep runs over energy (fixed barrier) or over the voltage drop phi
(fixed energy).  Rows are computed independently, optionally in worker
processes, and always written in ascending axis order, so the output bytes
do not depend on the worker count.
"""
from __future__ import annotations

import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .currents import MODELS
from .errors import InvalidSpec, TunnelGaugeError, UnknownPreset
from .potential import (
    DEGENERATE_TOL, AsymRectangular, BarrierSpec, DoubleBarrier, LinearSlowing, Rectangular,
    barrier_from_json, barrier_to_json, build_profile,
)
from .uncertainty import analyze

FORMAT_VERSION = "tunnelgauge-v1"
OBSERVABLES = ("T", "m1", "m2", "dp2", "product", "dTdl")
_PER_MODEL = ("m1", "m2", "dp2", "product")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    range: tuple[float, float]
    n_points: int
    barrier: BarrierSpec
    models: tuple[str, ...] = MODELS
    observables: tuple[str, ...] = OBSERVABLES
    fixed_energy: float | None = None
    output: str | None = None
    format: str = "csv"
    notes: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "range", tuple(float(v) for v in self.range))
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "observables", tuple(self.observables))
        object.__setattr__(self, "notes", tuple(self.notes))
        if self.axis not in ("energy", "voltage"):
            raise InvalidSpec(f"axis must be 'energy' or 'voltage', got {self.axis!r}")
        lo, hi = self.range
        if not lo < hi:
            raise InvalidSpec(f"range min must be below max, got {self.range}")
        if not isinstance(self.n_points, int) or self.n_points < 2:
            raise InvalidSpec("n_points must be an integer >= 2")
        if not self.models or set(self.models) - set(MODELS):
            raise InvalidSpec(f"models must be a non-empty subset of {MODELS}")
        if not self.observables or set(self.observables) - set(OBSERVABLES):
            raise InvalidSpec(f"observables must be a non-empty subset of {OBSERVABLES}")
        if self.format not in ("csv", "json"):
            raise InvalidSpec("format must be 'csv' or 'json'")
        if self.axis == "voltage":
            if not isinstance(self.barrier, (AsymRectangular, LinearSlowing)):
                raise InvalidSpec("the voltage axis needs an asym_rectangular or linear_slowing barrier")
            if self.fixed_energy is None:
                raise InvalidSpec("the voltage axis needs fixed_energy")
        build_profile(self.barrier)

    @property
    def columns(self) -> list[str]:
        cols = ["E", "E_over_V0"] if self.axis == "energy" else ["phi"]
        cols.append("T")
        if self.needs_dTdl:
            cols.append("dTdl")
        for model in MODELS:
            if model in self.models:
                cols += [f"{o}_{model}" for o in _PER_MODEL if o in self.observables]
        cols.append("flags")
        return cols

    @property
    def needs_dTdl(self) -> bool:
        return "dTdl" in self.observables or "product" in self.observables


def sweep_from_json(data: dict) -> SweepSpec:
    if not isinstance(data, dict):
        raise InvalidSpec("sweep config must be a JSON object")
    data = dict(data)
    try:
        data["barrier"] = barrier_from_json(data["barrier"])
        if "notes" in data and isinstance(data["notes"], str):
            data["notes"] = (data["notes"],)
        return SweepSpec(**data)
    except KeyError as exc:
        raise InvalidSpec(f"sweep config is missing {exc}") from None
    except TypeError as exc:
        raise InvalidSpec(f"bad sweep config: {exc}") from None


def axis_grid(spec: SweepSpec) -> np.ndarray:
    """Uniform grid with inclusive endpoints.

    On the energy axis a grid that hits E = 0 or a region potential is shifted
    by half a spacing.
    """
    lo, hi = spec.range
    grid = np.linspace(lo, hi, spec.n_points)
    if spec.axis != "energy":
        return grid
    forbidden = (0.0,) + build_profile(spec.barrier).potentials()
    step = grid[1] - grid[0]

    def collides(g):
        return any(np.any(np.abs(g - V) <= DEGENERATE_TOL) for V in forbidden)

    if collides(grid):
        for shift in (-0.5 * step, 0.5 * step):
            shifted = grid + shift
            if shifted[0] > 0 and not collides(shifted):
                return shifted
    return grid


def _row(barrier, axis, value, fixed_energy, needs_dTdl) -> dict:
    if axis == "energy":
        E, spec = float(value), barrier
    else:
        E, spec = fixed_energy, replace(barrier, phi=float(value))
    try:
        rep = analyze(spec, E, need_dTdl=needs_dTdl)
    except (TunnelGaugeError, ArithmeticError) as exc:
        return {"error": type(exc).__name__}
    return {
        "T": rep.T, "dTdl": rep.dTdl,
        "m1_elastic": rep.m1_elastic, "m2_elastic": rep.m2_elastic,
        "dp2_elastic": rep.dp2_elastic, "product_elastic": rep.product_elastic,
        "m1_inelastic": rep.m1_inelastic, "m2_inelastic": rep.m2_inelastic,
        "dp2_inelastic": rep.dp2_inelastic, "product_inelastic": rep.product_inelastic,
        "flags": list(rep.flags),
    }


def _row_star(args):
    return _row(*args)


def run_sweep(spec: SweepSpec, threads: int | None = None) -> list[dict]:
    """One row per grid point, ascending along the axis."""
    grid = axis_grid(spec)
    jobs = [(spec.barrier, spec.axis, v, spec.fixed_energy, spec.needs_dTdl) for v in grid]
    threads = threads or os.cpu_count() or 1
    if threads > 1 and len(jobs) > 1:
        chunk = max(1, math.ceil(len(jobs) / (4 * threads)))
        with ProcessPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(_row_star, jobs, chunksize=chunk))
    else:
        raw = [_row_star(j) for j in jobs]

    cols = spec.columns
    V0 = spec.barrier.V0
    rows = []
    for value, res in zip(grid, raw):
        row = {}
        if spec.axis == "energy":
            row["E"] = float(value)
            row["E_over_V0"] = float(value) / V0 if V0 else math.nan
        else:
            row["phi"] = float(value)
        flags = list(res.get("flags", []))
        if "error" in res:
            flags.append(f"error:{res['error']}")
        for c in cols:
            if c not in row and c != "flags":
                row[c] = res.get(c, math.nan)
        row["flags"] = ";".join(flags)
        rows.append(row)
    return rows


def header_lines(spec: SweepSpec) -> list[str]:
    lines = [FORMAT_VERSION,
             f"axis={spec.axis} barrier={json.dumps(barrier_to_json(spec.barrier), sort_keys=True)}"]
    if spec.fixed_energy is not None:
        lines.append(f"fixed_energy={spec.fixed_energy!r} eV")
    lines += list(spec.notes)
    return lines


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.8e}"


def format_table(spec: SweepSpec, rows: list[dict], fmt: str | None = None) -> str:
    fmt = fmt or spec.format
    cols = spec.columns
    if fmt == "json":
        out = [{c: (r[c] if isinstance(r[c], str) or math.isfinite(r[c]) else None) for c in cols}
               for r in rows]
        return json.dumps(out, indent=1) + "\n"
    buf = io.StringIO()
    for line in header_lines(spec):
        buf.write(f"# {line}\n")
    buf.write(",".join(cols) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(r[c]) for c in cols) + "\n")
    return buf.getvalue()


def write_sweep(spec: SweepSpec, path, threads: int | None = None) -> Path:
    path = Path(path)
    rows = run_sweep(spec, threads)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_table(spec, rows), encoding="utf-8")
    return path


# -- figure presets ------------------------------------------------------------

FIG3_ENERGIES = (1.0, 2.5, 4.0)
_VOLTAGE_NOTE = ("fixed energies {1, 2.5, 4} eV and phi in [0, 2] V are artifact choices; "
                 "not fixed by the reference data")


def preset(name: str) -> list[SweepSpec]:
    """Sweep specs regenerating one figure; fig3 and fig4 give one spec per energy."""
    if name == "fig1":
        # lower end half a nominal spacing above 0 keeps E = V0 off the grid
        return [SweepSpec(
            axis="energy", range=(0.0025, 15.0), n_points=3000, barrier=Rectangular(5.0, 5.0),
            observables=("T", "dTdl", "dp2", "product"), output="fig1.csv",
            notes=("energy axis up to 3 V0 is an artifact choice",),
        )]
    if name in ("fig3", "fig4"):
        barrier = (AsymRectangular(5.0, 5.0, 0.0) if name == "fig3"
                   else LinearSlowing(5.0, 5.0, 0.0, 128))
        return [SweepSpec(
            axis="voltage", range=(0.0, 2.0), n_points=201, barrier=barrier,
            fixed_energy=E, output=f"{name}_E{E:g}.csv", notes=(_VOLTAGE_NOTE,),
        ) for E in FIG3_ENERGIES]
    if name == "fig6":
        return [SweepSpec(
            axis="energy", range=(0.002, 3.998), n_points=1000,
            barrier=DoubleBarrier(4.0, -2.1, 8.0, 2.0, 1.2),
            observables=("T", "m1"), output="fig6.csv",
        )]
    raise UnknownPreset(f"unknown preset {name!r}; expected fig1, fig3, fig4 or fig6")
