"""Joint spectral amplitude construction and spectral measures.

The JSA is the product of a Gaussian pump envelope (in inverse
wavelength, i.e. sum frequency) and the sinc phase-matching function,
sampled on a square wavelength grid centered on the degenerate point
and normalized to unit Frobenius norm.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .dispersion import CrystalDatabase
from .errors import GridSpanError, IoError, ValidationError
from .phasematch import PhaseMatchConfig, delta_k

__all__ = [
    "PumpSpec",
    "SpectralGrid",
    "JsaMatrix",
    "MarginalSpectrum",
    "auto_span_nm",
    "pump_envelope",
    "phase_matching_function",
    "compute_jsa",
    "marginal_spectra",
    "fwhm_linear",
    "bandwidth_nm_to_ghz",
    "save_jsa_csv",
    "save_jsa_binary",
    "load_jsa",
]

C_UM_PER_PS = 299.792458  # speed of light, um/ps

# The grid span is chosen relative to the pump bandwidth: the pump
# envelope maps a pump-wavelength FWHM of 2*sqrt(ln2)*dl onto a band
# 4x wider along each down-converted axis (the pump wavelength is half
# the degenerate wavelength, so d(lambda_s) ~ 4 d(lambda_p) at fixed
# idler).  Five of those mapped widths keep the envelope negligible at
# the grid edge while resolving the sinc ridge.
SPAN_FACTOR = 5.0


def auto_span_nm(delta_lambda_nm: float) -> float:
    """Default square-grid span (nm) for a given pump width parameter."""
    return SPAN_FACTOR * 2.0 * math.sqrt(math.log(2.0)) * 4.0 * delta_lambda_nm


@dataclass(frozen=True)
class PumpSpec:
    """Gaussian pump for degenerate down-conversion at lambda0.

    delta_lambda_nm is the Gaussian width parameter of the pump
    amplitude in pump wavelength; the pump intensity FWHM is
    2*sqrt(ln 2)*delta_lambda ~ 1.67*delta_lambda.
    """

    lambda0_nm: float
    delta_lambda_nm: float

    def __post_init__(self):
        if self.lambda0_nm <= 0:
            raise ValidationError(f"lambda0 must be > 0, got {self.lambda0_nm}")
        if not 0 < self.delta_lambda_nm < 0.1 * self.lambda0_nm:
            raise ValidationError(
                f"pump width {self.delta_lambda_nm} nm must be positive and "
                f"small compared to lambda0 = {self.lambda0_nm} nm")

    @property
    def fwhm_nm(self) -> float:
        return 2.0 * math.sqrt(math.log(2.0)) * self.delta_lambda_nm


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform signal x idler wavelength axes (nm)."""

    signal_nm: np.ndarray
    idler_nm: np.ndarray

    def __post_init__(self):
        for name, ax in (("signal", self.signal_nm), ("idler", self.idler_nm)):
            ax = np.asarray(ax, dtype=float)
            if ax.ndim != 1 or ax.size < 2:
                raise ValidationError(f"{name} axis needs >= 2 points")
            d = np.diff(ax)
            if not np.all(d > 0):
                raise ValidationError(f"{name} axis must be strictly increasing")
            if not np.allclose(d, d[0], rtol=1e-9):
                raise ValidationError(f"{name} axis must be uniformly spaced")
        object.__setattr__(self, "signal_nm",
                           np.asarray(self.signal_nm, dtype=float))
        object.__setattr__(self, "idler_nm",
                           np.asarray(self.idler_nm, dtype=float))

    @property
    def n(self) -> int:
        return self.signal_nm.size

    @classmethod
    def centered(cls, lambda0_nm: float, span_nm: float, n: int):
        if n < 2:
            raise ValidationError(f"grid size must be >= 2, got {n}")
        if span_nm <= 0:
            raise ValidationError(f"grid span must be > 0, got {span_nm}")
        ax = np.linspace(lambda0_nm - span_nm / 2.0,
                         lambda0_nm + span_nm / 2.0, n)
        return cls(signal_nm=ax, idler_nm=ax.copy())

    def same_as(self, other: "SpectralGrid") -> bool:
        return (self.n == other.n
                and np.allclose(self.signal_nm, other.signal_nm, rtol=1e-12)
                and np.allclose(self.idler_nm, other.idler_nm, rtol=1e-12))


@dataclass(frozen=True)
class JsaMatrix:
    """Complex JSA samples f[signal, idler] with unit Frobenius norm."""

    grid: SpectralGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n, self.grid.n):
            raise ValidationError(
                f"amplitude shape {amps.shape} does not match grid "
                f"({self.grid.n}x{self.grid.n})")
        if not np.all(np.isfinite(amps)):
            raise ValidationError("JSA contains non-finite amplitudes")
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValidationError("JSA is identically zero")
        object.__setattr__(self, "amplitudes", amps / norm)


@dataclass(frozen=True)
class MarginalSpectrum:
    """Projected intensity along one axis, peak-normalized."""

    axis_nm: np.ndarray
    intensity: np.ndarray
    fwhm_nm: float


def pump_envelope(pump: PumpSpec, lambda_s_nm, lambda_i_nm):
    """Gaussian pump-envelope amplitude in (0, 1]; 1 exactly on the
    energy-conservation curve 1/lambda_s + 1/lambda_i = 2/lambda0."""
    l0 = pump.lambda0_nm * 1e-3
    dl = pump.delta_lambda_nm * 1e-3
    ls = np.asarray(lambda_s_nm, dtype=float) * 1e-3
    li = np.asarray(lambda_i_nm, dtype=float) * 1e-3
    lp0 = l0 / 2.0
    # width of the Gaussian in inverse wavelength; the quadratic term
    # in dl is the exact finite-width mapping of a wavelength interval
    # [lp0 - dl/2, lp0 + dl/2] into 1/lambda
    sigma_inv = dl / (lp0 * lp0 - (dl / 2.0) ** 2)
    arg = (1.0 / ls + 1.0 / li - 1.0 / lp0) / sigma_inv
    out = np.exp(-0.5 * arg * arg)
    return out if out.ndim else float(out)


def phase_matching_function(db: CrystalDatabase, config: PhaseMatchConfig,
                            lambda_s_nm, lambda_i_nm):
    """sinc(delta_k L / 2) amplitude; 1 exactly at delta_k = 0."""
    dk = delta_k(db, config, np.asarray(lambda_s_nm, dtype=float),
                 np.asarray(lambda_i_nm, dtype=float))
    x = dk * (config.length_mm * 1e3) / 2.0  # rad/um * um
    out = np.sinc(np.asarray(x) / np.pi)
    return out if out.ndim else float(out)


def compute_jsa(db: CrystalDatabase, config: PhaseMatchConfig,
                pump: PumpSpec, grid_span="auto", n: int = 200) -> JsaMatrix:
    """Sample f = pump_envelope * phase_matching_function on a square
    grid centered at (lambda0, lambda0) and normalize.

    grid_span is the full width of both axes in nm, or "auto" for the
    pump-scaled default (see auto_span_nm).
    """
    if config.lambda0_nm != pump.lambda0_nm:
        raise ValidationError(
            f"config lambda0 {config.lambda0_nm} nm != pump lambda0 "
            f"{pump.lambda0_nm} nm")
    span = (auto_span_nm(pump.delta_lambda_nm) if grid_span == "auto"
            else float(grid_span))
    grid = SpectralGrid.centered(config.lambda0_nm, span, n)
    ls, li = np.meshgrid(grid.signal_nm, grid.idler_nm, indexing="ij")
    f = pump_envelope(pump, ls, li) * phase_matching_function(db, config,
                                                              ls, li)
    return JsaMatrix(grid=grid, amplitudes=f.astype(complex))


def fwhm_linear(x: np.ndarray, y: np.ndarray) -> float:
    """Full width at half maximum of a sampled peak, with linear
    interpolation across the half-max crossings.

    Raises GridSpanError when the peak sits on the boundary or a
    crossing is missing (the sampled window is too small).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ipk = int(np.argmax(y))
    if ipk == 0 or ipk == y.size - 1:
        raise GridSpanError("peak lies on the grid boundary; enlarge the span")
    half = y[ipk] / 2.0
    below_left = np.nonzero(y[:ipk] < half)[0]
    below_right = np.nonzero(y[ipk:] < half)[0]
    if below_left.size == 0 or below_right.size == 0:
        raise GridSpanError(
            "half maximum not reached inside the grid; enlarge the span")
    i = below_left[-1]  # y[i] < half <= y[i+1]
    x_lo = x[i] + (half - y[i]) / (y[i + 1] - y[i]) * (x[i + 1] - x[i])
    j = ipk + below_right[0]  # y[j-1] >= half > y[j]
    x_hi = x[j - 1] + (half - y[j - 1]) / (y[j] - y[j - 1]) * (x[j] - x[j - 1])
    return x_hi - x_lo


def marginal_spectra(jsa: JsaMatrix):
    """Project |f|^2 onto the signal and idler axes.

    Returns (signal, idler) MarginalSpectrum with peak-normalized
    intensities and linearly interpolated FWHMs.
    """
    jsi = np.abs(jsa.amplitudes) ** 2
    out = []
    for axis, intensity in ((jsa.grid.signal_nm, jsi.sum(axis=1)),
                            (jsa.grid.idler_nm, jsi.sum(axis=0))):
        intensity = intensity / intensity.max()
        out.append(MarginalSpectrum(axis_nm=axis, intensity=intensity,
                                    fwhm_nm=fwhm_linear(axis, intensity)))
    return tuple(out)


def bandwidth_nm_to_ghz(lambda_center_nm: float, fwhm_nm: float) -> float:
    """Convert a narrow wavelength FWHM to frequency: dnu = c dl / l^2."""
    c_nm_ghz = 2.99792458e17 * 1e-9  # nm*GHz
    return c_nm_ghz * fwhm_nm / (lambda_center_nm * lambda_center_nm)


# --- file formats ----------------------------------------------------------

_MAGIC = b"CPSPDCJ1"


def save_jsa_csv(jsa: JsaMatrix, path) -> None:
    """Write rows (lambda_s_nm, lambda_i_nm, Re f, Im f)."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("lambda_s_nm,lambda_i_nm,re_f,im_f\n")
            for i, ls in enumerate(jsa.grid.signal_nm):
                for j, li in enumerate(jsa.grid.idler_nm):
                    a = jsa.amplitudes[i, j]
                    fh.write(f"{ls:.17g},{li:.17g},"
                             f"{a.real:.17e},{a.imag:.17e}\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def save_jsa_binary(jsa: JsaMatrix, path) -> None:
    """Compact binary layout: 8-byte magic "CPSPDCJ1", uint32 N, the
    two axes (N float64 each), then row-major (signal-major) complex
    amplitudes as interleaved re/im float64 pairs.  All little-endian.
    """
    n = jsa.grid.n
    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<I", n))
            fh.write(jsa.grid.signal_nm.astype("<f8").tobytes())
            fh.write(jsa.grid.idler_nm.astype("<f8").tobytes())
            fh.write(np.ascontiguousarray(jsa.amplitudes,
                                          dtype="<c16").tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def load_jsa(path) -> JsaMatrix:
    """Read a JSA file written by save_jsa_binary or save_jsa_csv
    (format detected from the leading bytes)."""
    try:
        with open(path, "rb") as fh:
            head = fh.read(8)
            if head == _MAGIC:
                (n,) = struct.unpack("<I", fh.read(4))
                sig = np.frombuffer(fh.read(8 * n), dtype="<f8")
                idl = np.frombuffer(fh.read(8 * n), dtype="<f8")
                amps = np.frombuffer(fh.read(16 * n * n), dtype="<c16")
                if amps.size != n * n:
                    raise ValidationError(f"truncated JSA file {path}")
                return JsaMatrix(grid=SpectralGrid(sig.copy(), idl.copy()),
                                 amplitudes=amps.reshape(n, n).copy())
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    # fall through: CSV
    import warnings
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            data = np.loadtxt(path, delimiter=",", skiprows=1)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"unrecognized JSA file {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 4:
        raise ValidationError(f"JSA CSV {path} must have 4 columns")
    sig = np.unique(data[:, 0])
    idl = np.unique(data[:, 1])
    n = sig.size
    if n * idl.size != data.shape[0]:
        raise ValidationError(f"JSA CSV {path} is not a full grid")
    amps = (data[:, 2] + 1j * data[:, 3]).reshape(n, idl.size)
    return JsaMatrix(grid=SpectralGrid(sig, idl), amplitudes=amps)
