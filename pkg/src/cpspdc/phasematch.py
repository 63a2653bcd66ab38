"""Counter-propagating quasi-phase-matching.

Phase mismatch, degenerate poling periods, group-velocity-matched
wavelengths and JSA ridge tilt angles.  The idler propagates backward,
so its wavevector enters the mismatch with the opposite sign and the
tilt-angle denominator carries a plus.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .dispersion import CrystalDatabase
from .errors import SolverError, ValidationError

__all__ = [
    "PmType",
    "PhaseMatchConfig",
    "delta_k",
    "poling_period",
    "gvm_wavelength",
    "tilt_angle",
    "DEFAULT_GVM_BRACKETS",
]


class PmType(enum.Enum):
    """Phase-matching configuration: fixed (pump, signal, idler) axes."""

    TYPE0 = ("z", "z", "z")
    TYPE2A = ("y", "z", "y")
    TYPE2B = ("y", "y", "z")

    @property
    def pump_axis(self):
        return self.value[0]

    @property
    def signal_axis(self):
        return self.value[1]

    @property
    def idler_axis(self):
        return self.value[2]

    @classmethod
    def parse(cls, text: str) -> "PmType":
        key = text.strip().lower().replace("-", "").replace("_", "")
        table = {"type0": cls.TYPE0, "0": cls.TYPE0,
                 "type2a": cls.TYPE2A, "2a": cls.TYPE2A,
                 "type2b": cls.TYPE2B, "2b": cls.TYPE2B}
        if key not in table:
            raise ValidationError(
                f"unknown phase-matching type {text!r} "
                "(expected type0, type2a or type2b)")
        return table[key]


# Default GVM search brackets (nm).  Type-II A phase matching puts the
# zero-tilt point well below the type-0 one for these crystals.
DEFAULT_GVM_BRACKETS = {
    PmType.TYPE0: (2000.0, 3000.0),
    PmType.TYPE2A: (1100.0, 2000.0),
    PmType.TYPE2B: (2000.0, 3000.0),
}


@dataclass(frozen=True)
class PhaseMatchConfig:
    """Crystal + phase-matching type + degenerate wavelength, poling
    period and crystal length.  Degeneracy convention: the pump center
    is lambda0/2 and signal = idler = lambda0."""

    crystal: str
    pm_type: PmType
    lambda0_nm: float
    poling_period_nm: float
    length_mm: float

    def __post_init__(self):
        if self.lambda0_nm <= 0:
            raise ValidationError(f"lambda0 must be > 0, got {self.lambda0_nm}")
        if self.poling_period_nm <= 0:
            raise ValidationError(
                f"poling period must be > 0, got {self.poling_period_nm}")
        if self.length_mm <= 0:
            raise ValidationError(f"length must be > 0, got {self.length_mm}")


def _models(db: CrystalDatabase, crystal: str, pm_type: PmType):
    return (db.model(crystal, pm_type.pump_axis),
            db.model(crystal, pm_type.signal_axis),
            db.model(crystal, pm_type.idler_axis))


def _k(model, lambda_nm):
    """Wavevector 2 pi n / lambda in rad/um for a single model."""
    return 2.0 * math.pi * model.n(lambda_nm) / (lambda_nm * 1e-3)


def delta_k(db: CrystalDatabase, config: PhaseMatchConfig,
            lambda_s_nm, lambda_i_nm):
    """Counter-propagating phase mismatch in rad/um.

    delta_k = k_s(lambda_s) - k_i(lambda_i) + 2 pi / Lambda - k_p(lambda_p)
    with the pump wavelength fixed by energy conservation,
    lambda_p = 1 / (1/lambda_s + 1/lambda_i).

    Accepts scalars or broadcastable arrays.
    """
    mp, ms, mi = _models(db, config.crystal, config.pm_type)
    lambda_p = 1.0 / (1.0 / lambda_s_nm + 1.0 / lambda_i_nm)
    k_qpm = 2.0 * math.pi / (config.poling_period_nm * 1e-3)
    return (2.0 * math.pi * ms.n(lambda_s_nm) / (lambda_s_nm * 1e-3)
            - 2.0 * math.pi * mi.n(lambda_i_nm) / (lambda_i_nm * 1e-3)
            + k_qpm
            - 2.0 * math.pi * mp.n(lambda_p) / (lambda_p * 1e-3))


def poling_period(db: CrystalDatabase, crystal: str, pm_type: PmType,
                  lambda0_nm: float) -> float:
    """Poling period (nm) that phase-matches the degenerate point.

    Closed form: Lambda = 2 pi / (k_p(lambda0/2) - k_s(lambda0)
    + k_i(lambda0)).  Counter-propagation makes the denominator large
    and positive, hence the sub-micron periods.
    """
    mp, ms, mi = _models(db, crystal, pm_type)
    denom = (_k(mp, lambda0_nm / 2.0) - _k(ms, lambda0_nm)
             + _k(mi, lambda0_nm))
    if denom <= 0.0:
        raise SolverError(
            f"phase matching impossible: QPM denominator {denom:g} <= 0 "
            f"for {crystal} {pm_type.name} at {lambda0_nm:g} nm")
    return 2.0 * math.pi / denom * 1e3  # um -> nm


def _gvm_mismatch(db, crystal, pm_type, lambda_nm):
    """g(lambda) = n_g,pump(lambda/2) - n_g,signal(lambda); zero at GVM."""
    mp, ms, _ = _models(db, crystal, pm_type)
    return mp.group_index(lambda_nm / 2.0) - ms.group_index(lambda_nm)


def gvm_wavelength(db: CrystalDatabase, crystal: str, pm_type: PmType,
                   bracket=None) -> float:
    """Degenerate wavelength (nm) where pump and signal group indices
    match, found by bisection on the given (lo, hi) bracket."""
    if bracket is None:
        bracket = DEFAULT_GVM_BRACKETS[pm_type]
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValidationError(f"bad bracket [{lo:g}, {hi:g}]")
    g_lo = _gvm_mismatch(db, crystal, pm_type, lo)
    g_hi = _gvm_mismatch(db, crystal, pm_type, hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if g_lo * g_hi > 0.0:
        raise SolverError(
            f"no GVM sign change in [{lo:g}, {hi:g}] nm for {crystal} "
            f"{pm_type.name} (g={g_lo:.3e} .. {g_hi:.3e})")
    scale = max(abs(g_lo), abs(g_hi))
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = _gvm_mismatch(db, crystal, pm_type, mid)
        if abs(g_mid) < 1e-12 * scale or hi - lo < 1e-9:
            return mid
        if g_lo * g_mid < 0.0:
            hi = mid
        else:
            lo, g_lo = mid, g_mid
    raise SolverError(
        f"GVM bisection did not converge for {crystal} {pm_type.name}")


def tilt_angle(db: CrystalDatabase, crystal: str, pm_type: PmType,
               lambda0_nm: float) -> float:
    """JSA ridge tilt (degrees) at the degenerate point:
    theta = atan(-(ng_p - ng_s) / (ng_p + ng_i)), with the plus in the
    denominator from the backward-propagating idler."""
    mp, ms, mi = _models(db, crystal, pm_type)
    ng_p = mp.group_index(lambda0_nm / 2.0)
    ng_s = ms.group_index(lambda0_nm)
    ng_i = mi.group_index(lambda0_nm)
    return math.degrees(math.atan(-(ng_p - ng_s) / (ng_p + ng_i)))


def make_config(db: CrystalDatabase, crystal: str, pm_type: PmType,
                lambda0_nm: float, length_mm: float) -> PhaseMatchConfig:
    """Convenience: solve the degenerate poling period and assemble a
    PhaseMatchConfig in one step."""
    period = poling_period(db, crystal, pm_type, lambda0_nm)
    return PhaseMatchConfig(crystal=crystal, pm_type=pm_type,
                            lambda0_nm=lambda0_nm,
                            poling_period_nm=period,
                            length_mm=length_mm)
