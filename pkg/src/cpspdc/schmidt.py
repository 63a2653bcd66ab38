"""Schmidt decomposition of a JSA: mode functions, spectral purity
and Schmidt number."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .jsa import JsaMatrix

__all__ = [
    "SchmidtDecomposition",
    "decompose",
    "purity",
    "schmidt_number",
    "jsa_purity",
]


@dataclass(frozen=True)
class SchmidtDecomposition:
    """f[s, i] = sum_j c_j * signal_modes[j, s] * idler_modes[j, i],
    with descending nonnegative coefficients normalized so that
    sum c_j^2 = 1 and orthonormal mode rows."""

    coefficients: np.ndarray
    signal_modes: np.ndarray  # (modes, signal samples)
    idler_modes: np.ndarray  # (modes, idler samples)

    def reconstruct(self) -> np.ndarray:
        return np.einsum("j,js,ji->si", self.coefficients,
                         self.signal_modes, self.idler_modes)


def decompose(jsa_or_matrix) -> SchmidtDecomposition:
    """SVD of the (already normalized) amplitude matrix.

    Ordering is descending in coefficient; the sign/phase gauge is
    fixed by making the first nonzero component of each signal mode
    real positive, so the decomposition is deterministic.
    """
    f = (jsa_or_matrix.amplitudes if isinstance(jsa_or_matrix, JsaMatrix)
         else np.asarray(jsa_or_matrix, dtype=complex))
    if not np.all(np.isfinite(f)):
        raise ValidationError("JSA contains non-finite amplitudes")
    u, s, vh = np.linalg.svd(f)
    norm = np.sqrt((s * s).sum())
    if norm == 0:
        raise ValidationError("cannot decompose a zero matrix")
    c = s / norm
    signal_modes = u.T.copy()
    idler_modes = vh.copy()
    # reconstruct() rebuilds f / ||f||; JsaMatrix inputs are already
    # unit-norm so the round-trip is exact for them
    for j in range(signal_modes.shape[0]):
        row = signal_modes[j]
        nz = np.nonzero(np.abs(row) > 1e-14)[0]
        if nz.size:
            phase = row[nz[0]] / abs(row[nz[0]])
            signal_modes[j] = row / phase
            if j < idler_modes.shape[0]:
                idler_modes[j] = idler_modes[j] * phase
    return SchmidtDecomposition(coefficients=c,
                                signal_modes=signal_modes,
                                idler_modes=idler_modes)


def purity(d: SchmidtDecomposition) -> float:
    """Heralded-photon spectral purity p = sum_j c_j^4."""
    c2 = d.coefficients ** 2
    return float((c2 * c2).sum())


def schmidt_number(d: SchmidtDecomposition) -> float:
    """Effective mode count K = 1 / purity; 1 iff separable."""
    return 1.0 / purity(d)


def jsa_purity(jsa: JsaMatrix) -> float:
    """Convenience: purity of a JSA in one call."""
    return purity(decompose(jsa))
