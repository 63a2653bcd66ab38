"""Crystal database and dispersion evaluation.

Owns the packaged crystal records (Sellmeier coefficients per optical
axis, d_eff metadata) and evaluates refractive index, group index and
wavevector for any crystal/axis/wavelength.

Wavelengths cross the public API in nanometers; the Sellmeier forms
themselves are written for lambda in micrometers, as is conventional
for published coefficient sets.
"""

from __future__ import annotations

import hashlib
import math

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import DispersionRangeError, IoError, ValidationError

__all__ = [
    "OpticalAxis",
    "SellmeierModel",
    "CrystalRecord",
    "CrystalDatabase",
    "load_database",
    "serialize_database",
    "default_database_path",
    "refractive_index",
    "group_index",
    "wavevector",
]

AXES = ("y", "z")
OpticalAxis = str  # one of AXES

CRYSTAL_NAMES = ("PPKTP", "PPRTP", "PPKTA", "PPRTA", "PPCTA")


# --- Sellmeier forms ------------------------------------------------------
#
# Each form maps (coefficients, lambda_um) -> n^2 and has a matching
# analytic derivative d(n^2)/d(lambda_um).  Forms are data-driven so a
# new crystal is a data change, not a code change.

def _n2_sell2pole(c, l):
    a, b, c1, d, e = c
    l2 = l * l
    return a + b / (l2 - c1) + d / (l2 - e)


def _d2_sell2pole(c, l):
    a, b, c1, d, e = c
    l2 = l * l
    return -2.0 * l * (b / (l2 - c1) ** 2 + d / (l2 - e) ** 2)


def _n2_sell4x(c, l):
    a, b, c1, d, e, f = c
    l2 = l * l
    return a + b / (1.0 - c1 / l2) + d * l2 + e / (l2 - f)


def _d2_sell4x(c, l):
    a, b, c1, d, e, f = c
    l2 = l * l
    return (-2.0 * b * c1 * l / (l2 - c1) ** 2
            + 2.0 * d * l
            - 2.0 * e * l / (l2 - f) ** 2)


def _n2_sellpq(c, l):
    a, b, c1, p, d, e, q = c
    return a + b / (1.0 - c1 / l ** p) + d / (1.0 - e / l ** q)


def _d2_sellpq(c, l):
    a, b, c1, p, d, e, q = c
    lp = l ** p
    lq = l ** q
    return (-b * c1 * p * l ** (p - 1.0) / (lp - c1) ** 2
            - d * e * q * l ** (q - 1.0) / (lq - e) ** 2)


FORMS = {
    # n^2 = a + b/(l^2 - c) + d/(l^2 - e)
    "sell2pole": (5, _n2_sell2pole, _d2_sell2pole),
    # n^2 = a + b/(1 - c/l^2) + d*l^2 + e/(l^2 - f)
    "sell4x": (6, _n2_sell4x, _d2_sell4x),
    # n^2 = a + b/(1 - c/l^p) + d/(1 - e/l^q); coefficients (a,b,c,p,d,e,q)
    "sellpq": (7, _n2_sellpq, _d2_sellpq),
}


@dataclass(frozen=True)
class SellmeierModel:
    """One dispersion curve: an algebraic form, its coefficients and
    the wavelength range (nm) over which it may be evaluated."""

    form_id: str
    coefficients: tuple[float, ...]
    valid_range_nm: tuple[float, float]

    def __post_init__(self):
        if self.form_id not in FORMS:
            raise ValidationError(f"unknown Sellmeier form {self.form_id!r}")
        arity = FORMS[self.form_id][0]
        if len(self.coefficients) != arity:
            raise ValidationError(
                f"form {self.form_id!r} needs {arity} coefficients, "
                f"got {len(self.coefficients)}")
        lo, hi = self.valid_range_nm
        if not (0.0 < lo < hi):
            raise ValidationError(f"bad valid_range_nm {self.valid_range_nm}")

    def _check(self, lambda_nm):
        lo, hi = self.valid_range_nm
        lam = float(lambda_nm) if not hasattr(lambda_nm, "min") else None
        if lam is not None:
            if not (lo <= lam <= hi):
                raise DispersionRangeError(
                    f"wavelength {lam:g} nm outside validity "
                    f"[{lo:g}, {hi:g}] nm")
        else:
            if lambda_nm.min() < lo or lambda_nm.max() > hi:
                raise DispersionRangeError(
                    f"wavelength grid [{lambda_nm.min():g}, "
                    f"{lambda_nm.max():g}] nm outside validity "
                    f"[{lo:g}, {hi:g}] nm")

    def n(self, lambda_nm):
        """Refractive index at lambda (nm)."""
        self._check(lambda_nm)
        l_um = lambda_nm * 1e-3
        n2 = FORMS[self.form_id][1](self.coefficients, l_um)
        return n2 ** 0.5

    def dn_dlambda(self, lambda_nm):
        """Analytic dn/dlambda in 1/nm."""
        self._check(lambda_nm)
        l_um = lambda_nm * 1e-3
        _, n2f, d2f = FORMS[self.form_id]
        n = n2f(self.coefficients, l_um) ** 0.5
        # dn/dl_um = (d(n^2)/dl_um) / (2n); convert to 1/nm
        return d2f(self.coefficients, l_um) / (2.0 * n) * 1e-3

    def group_index(self, lambda_nm):
        """n_g = n - lambda dn/dlambda (equals c k'(omega))."""
        return self.n(lambda_nm) - lambda_nm * self.dn_dlambda(lambda_nm)


@dataclass(frozen=True)
class CrystalRecord:
    name: str
    composition: str
    models: dict  # OpticalAxis -> SellmeierModel
    d_eff_type0: float  # pm/V
    d_eff_type2: float  # pm/V
    source: str

    def __post_init__(self):
        for axis in AXES:
            if axis not in self.models:
                raise ValidationError(
                    f"crystal {self.name}: missing axis {axis!r} model")
        if self.d_eff_type0 < 0 or self.d_eff_type2 < 0:
            raise ValidationError(f"crystal {self.name}: negative d_eff")


@dataclass(frozen=True)
class CrystalDatabase:
    records: dict  # name -> CrystalRecord
    checksum: str  # sha256 of the source file
    path: str

    def record(self, crystal: str) -> CrystalRecord:
        try:
            return self.records[crystal]
        except KeyError:
            raise ValidationError(f"unknown crystal {crystal!r}") from None

    def model(self, crystal: str, axis: OpticalAxis) -> SellmeierModel:
        if axis not in AXES:
            raise ValidationError(f"unknown axis {axis!r}")
        return self.record(crystal).models[axis]


def default_database_path() -> Path:
    return Path(resources.files("cpspdc").joinpath("data/crystals.toml"))


def load_database(path=None) -> CrystalDatabase:
    """Parse and validate a crystal database file (TOML grammar, see
    the packaged data/crystals.toml for the documented layout)."""
    p = Path(path) if path is not None else default_database_path()
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read database file {p}: {exc}") from exc
    try:
        doc = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"database parse error in {p}: {exc}") from exc
    if "crystal" not in doc or not doc["crystal"]:
        raise ValidationError(f"database {p} contains no crystal records")
    records = {}
    for entry in doc["crystal"]:
        name = entry.get("name")
        if not name:
            raise ValidationError(f"database {p}: crystal record without name")
        try:
            models = {
                axis: SellmeierModel(
                    form_id=spec["form"],
                    coefficients=tuple(float(x) for x in spec["coefficients"]),
                    valid_range_nm=tuple(float(x)
                                         for x in spec["valid_range_nm"]),
                )
                for axis, spec in entry.get("axis", {}).items()
            }
            rec = CrystalRecord(
                name=name,
                composition=entry["composition"],
                models=models,
                d_eff_type0=float(entry["d_eff_type0_pm_per_v"]),
                d_eff_type2=float(entry["d_eff_type2_pm_per_v"]),
                source=entry["source"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(
                f"database {p}: bad record {name!r}: {exc}") from exc
        if name in records:
            raise ValidationError(f"database {p}: duplicate crystal {name!r}")
        records[name] = rec
    return CrystalDatabase(records=records,
                           checksum=hashlib.sha256(raw).hexdigest(),
                           path=str(p))


def serialize_database(db: CrystalDatabase) -> str:
    """Emit a database back to its text form (round-trips via
    load_database up to formatting)."""
    out = ['schema = "cpspdc-crystal-db/1"', ""]
    for rec in db.records.values():
        out.append("[[crystal]]")
        out.append(f'name = "{rec.name}"')
        out.append(f'composition = "{rec.composition}"')
        out.append(f"d_eff_type0_pm_per_v = {rec.d_eff_type0!r}")
        out.append(f"d_eff_type2_pm_per_v = {rec.d_eff_type2!r}")
        out.append(f'source = "{rec.source}"')
        for axis in AXES:
            m = rec.models[axis]
            out.append(f"[crystal.axis.{axis}]")
            out.append(f'form = "{m.form_id}"')
            coeffs = ", ".join(repr(c) for c in m.coefficients)
            out.append(f"coefficients = [{coeffs}]")
            lo, hi = m.valid_range_nm
            out.append(f"valid_range_nm = [{lo!r}, {hi!r}]")
        out.append("")
    return "\n".join(out)


# --- module-level evaluation helpers --------------------------------------

def refractive_index(db: CrystalDatabase, crystal: str, axis: OpticalAxis,
                     lambda_nm):
    return db.model(crystal, axis).n(lambda_nm)


def group_index(db: CrystalDatabase, crystal: str, axis: OpticalAxis,
                lambda_nm):
    return db.model(crystal, axis).group_index(lambda_nm)


def wavevector(db: CrystalDatabase, crystal: str, axis: OpticalAxis,
               lambda_nm):
    """k = 2 pi n / lambda in rad/um."""
    n = db.model(crystal, axis).n(lambda_nm)
    return 2.0 * math.pi * n / (lambda_nm * 1e-3)
