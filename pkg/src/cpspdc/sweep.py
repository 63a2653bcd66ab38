"""Parameter scans and purity optimization.

Wavelength sweeps re-solve the poling period at every point so each
row is exactly phase-matched at its own degenerate wavelength; the
optimizer is a deterministic log-uniform grid search with one local
refinement pass.
"""

from __future__ import annotations

import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass

import numpy as np

from .dispersion import CrystalDatabase
from .errors import IoError, SolverError, ValidationError
from .jsa import (PumpSpec, bandwidth_nm_to_ghz, compute_jsa, fwhm_linear,
                  phase_matching_function)
from .phasematch import PmType, make_config, tilt_angle
from .schmidt import jsa_purity

__all__ = [
    "SweepSpec",
    "OptimizationResult",
    "purity_vs_wavelength",
    "optimize_purity",
    "idler_bandwidth_vs_length",
    "load_sweep_spec",
    "run_sweep",
    "write_sweep_csv",
]

SWEEP_VARIABLES = ("lambda0", "length", "pump_width")


@dataclass(frozen=True)
class SweepSpec:
    """One-variable scan over one or more crystals.

    variable selects what start/stop/step scan over: the degenerate
    wavelength (nm), the crystal length (mm) or the pump width
    parameter (nm).  The remaining two quantities are fixed fields.
    """

    crystals: tuple
    pm_type: PmType
    variable: str
    start: float
    stop: float
    step: float
    lambda0_nm: float = 0.0
    length_mm: float = 0.0
    pump_width_nm: float = 0.0
    grid_n: int = 200

    def __post_init__(self):
        if not self.crystals:
            raise ValidationError("sweep spec: no crystals given")
        if self.variable not in SWEEP_VARIABLES:
            raise ValidationError(
                f"sweep spec: variable must be one of {SWEEP_VARIABLES}, "
                f"got {self.variable!r}")
        if self.step <= 0:
            raise ValidationError(f"sweep spec: step must be > 0, "
                                  f"got {self.step}")
        if self.stop < self.start:
            raise ValidationError("sweep spec: stop < start")
        for name in ("lambda0_nm", "length_mm", "pump_width_nm"):
            fixed = {"lambda0": "lambda0_nm", "length": "length_mm",
                     "pump_width": "pump_width_nm"}[self.variable]
            if name != fixed and getattr(self, name) <= 0:
                raise ValidationError(
                    f"sweep spec: fixed parameter {name} must be > 0")

    def values(self) -> np.ndarray:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return self.start + self.step * np.arange(n)


@dataclass(frozen=True)
class OptimizationResult:
    best_length_mm: float
    best_pump_width_nm: float
    best_purity: float
    evaluations: tuple  # ((length_mm, pump_width_nm, purity), ...)


def purity_vs_wavelength(db: CrystalDatabase, crystal: str, pm_type: PmType,
                         length_mm: float, pump_width_nm: float,
                         lambdas_nm, grid_n: int = 200):
    """Per-wavelength rows (lambda0, poling period, tilt, purity) with
    the poling period re-solved at every point."""
    rows = []
    for lam in np.asarray(lambdas_nm, dtype=float):
        cfg = make_config(db, crystal, pm_type, float(lam), length_mm)
        pump = PumpSpec(lambda0_nm=float(lam),
                        delta_lambda_nm=pump_width_nm)
        p = jsa_purity(compute_jsa(db, cfg, pump, n=grid_n))
        rows.append({"lambda0_nm": float(lam),
                     "poling_period_nm": cfg.poling_period_nm,
                     "tilt_deg": tilt_angle(db, crystal, pm_type, float(lam)),
                     "purity": p})
    return rows


def optimize_purity(db: CrystalDatabase, crystal: str, pm_type: PmType,
                    lambda0_nm: float, length_range_mm, pump_width_range_nm,
                    n_grid: int = 25, grid_n: int = 200) -> OptimizationResult:
    """Maximize purity over (L, pump width).

    Exhaustive n_grid x n_grid log-uniform search followed by one local
    refinement pass on a grid with halved log-steps around the
    incumbent.  Ties break toward smaller L, then smaller pump width.
    """
    def axis(lo, hi, n):
        lo, hi = float(lo), float(hi)
        if not 0 < lo <= hi:
            raise ValidationError(f"bad optimization range [{lo}, {hi}]")
        if lo == hi or n == 1:
            return np.array([lo])
        return np.exp(np.linspace(math.log(lo), math.log(hi), n))

    def evaluate(lengths, widths, evals):
        best = None
        for length in lengths:
            for width in widths:
                try:
                    cfg = make_config(db, crystal, pm_type, lambda0_nm,
                                      float(length))
                    pump = PumpSpec(lambda0_nm=lambda0_nm,
                                    delta_lambda_nm=float(width))
                    p = jsa_purity(compute_jsa(db, cfg, pump, n=grid_n))
                except (ValidationError, SolverError):
                    continue
                evals.append((float(length), float(width), p))
                # larger purity wins; ties prefer smaller L then width
                key = (p, -length, -width)
                if best is None or key > best[0]:
                    best = (key, float(length), float(width), p)
        return best

    lengths = axis(length_range_mm[0], length_range_mm[1], n_grid)
    widths = axis(pump_width_range_nm[0], pump_width_range_nm[1], n_grid)
    evals = []
    best = evaluate(lengths, widths, evals)
    if best is None:
        raise SolverError("optimize_purity: no valid grid point")
    # refinement: halved log-steps, one bracket either side of the incumbent
    def refine_axis(values, center):
        if values.size < 2:
            return np.array([center])
        step = (math.log(values[-1]) - math.log(values[0])) / (values.size - 1)
        offsets = np.array([-1.0, -0.5, 0.0, 0.5, 1.0]) * step
        pts = np.exp(np.log(center) + offsets)
        return pts[(pts >= values[0] * (1 - 1e-12))
                   & (pts <= values[-1] * (1 + 1e-12))]

    refined = evaluate(refine_axis(lengths, best[1]),
                       refine_axis(widths, best[2]), evals)
    if refined is not None and refined[0] > best[0]:
        best = refined
    return OptimizationResult(best_length_mm=best[1],
                              best_pump_width_nm=best[2],
                              best_purity=best[3],
                              evaluations=tuple(evals))


def idler_bandwidth_vs_length(db: CrystalDatabase, crystal: str,
                              pm_type: PmType, lambda0_nm: float,
                              pump_width_nm: float, lengths_mm):
    """Per-length rows (L, idler FWHM nm, idler FWHM GHz).

    The idler bandwidth is the FWHM of the phase-matching intensity
    along the idler axis at the degenerate signal wavelength, sampled
    on a dedicated fine grid (the sinc width scales as 1/L, so a fixed
    JSA grid under-resolves long crystals).
    """
    rows = []
    for length in np.asarray(lengths_mm, dtype=float):
        cfg = make_config(db, crystal, pm_type, lambda0_nm, float(length))
        # span ~5 expected FWHMs; the 0.56 nm reference width is the
        # 1 mm slice width at 1550 nm, rescaled by 1/L
        span = 5.0 * 0.56 * (lambda0_nm / 1550.0) ** 2 / float(length)
        li = np.linspace(lambda0_nm - span / 2.0, lambda0_nm + span / 2.0,
                         2001)
        pmf = phase_matching_function(db, cfg, np.full_like(li, lambda0_nm),
                                      li)
        fwhm = fwhm_linear(li, np.abs(pmf) ** 2)
        rows.append({"length_mm": float(length),
                     "idler_fwhm_nm": fwhm,
                     "idler_fwhm_ghz": bandwidth_nm_to_ghz(lambda0_nm, fwhm)})
    return rows


# --- sweep spec files and CSV output ---------------------------------------

def load_sweep_spec(path) -> SweepSpec:
    """Parse a TOML sweep spec (keys mirror SweepSpec fields; crystals
    may be a string or list)."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise IoError(f"cannot read sweep spec {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"sweep spec parse error in {path}: {exc}") \
            from exc
    try:
        crystals = doc["crystals"]
        if isinstance(crystals, str):
            crystals = [crystals]
        return SweepSpec(
            crystals=tuple(crystals),
            pm_type=PmType.parse(doc["pm_type"]),
            variable=doc["variable"],
            start=float(doc["start"]),
            stop=float(doc["stop"]),
            step=float(doc["step"]),
            lambda0_nm=float(doc.get("lambda0_nm", 0.0)),
            length_mm=float(doc.get("length_mm", 0.0)),
            pump_width_nm=float(doc.get("pump_width_nm", 0.0)),
            grid_n=int(doc.get("grid_n", 200)),
        )
    except KeyError as exc:
        raise ValidationError(
            f"sweep spec {path}: missing field {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"sweep spec {path}: bad field: {exc}") from exc


def run_sweep(db: CrystalDatabase, spec: SweepSpec):
    """Execute a sweep spec; yields (crystal, row) in deterministic
    order (crystals as listed, scan values ascending)."""
    for crystal in spec.crystals:
        if spec.variable == "lambda0":
            rows = purity_vs_wavelength(db, crystal, spec.pm_type,
                                        spec.length_mm, spec.pump_width_nm,
                                        spec.values(), grid_n=spec.grid_n)
        elif spec.variable == "length":
            rows = idler_bandwidth_vs_length(db, crystal, spec.pm_type,
                                             spec.lambda0_nm,
                                             spec.pump_width_nm,
                                             spec.values())
        else:  # pump_width
            rows = []
            for width in spec.values():
                cfg = make_config(db, crystal, spec.pm_type, spec.lambda0_nm,
                                  spec.length_mm)
                pump = PumpSpec(lambda0_nm=spec.lambda0_nm,
                                delta_lambda_nm=float(width))
                rows.append({"pump_width_nm": float(width),
                             "purity": jsa_purity(
                                 compute_jsa(db, cfg, pump, n=spec.grid_n))})
        for row in rows:
            yield crystal, row


def write_sweep_csv(rows, path, fixed_params: dict, db_checksum: str) -> None:
    """Stream (crystal, row) pairs to CSV with a '#' provenance header
    recording every fixed parameter and the database checksum."""
    rows = iter(rows)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            for key in sorted(fixed_params):
                fh.write(f"# {key} = {fixed_params[key]}\n")
            fh.write(f"# db_sha256 = {db_checksum}\n")
            first = next(rows, None)
            if first is None:
                fh.write("crystal\n")
                return
            crystal, row = first
            fh.write("crystal," + ",".join(row.keys()) + "\n")

            def emit(crystal, row):
                vals = ",".join(f"{v:.6g}" for v in row.values())
                fh.write(f"{crystal},{vals}\n")

            emit(crystal, row)
            for crystal, row in rows:
                emit(crystal, row)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
