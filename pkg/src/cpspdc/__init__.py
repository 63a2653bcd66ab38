"""Design and simulation toolkit for counter-propagating SPDC
photon-pair sources in periodically poled KTP-family crystals."""

__version__ = "0.1.0"

from .dispersion import (CrystalDatabase, CrystalRecord, SellmeierModel,
                         group_index, load_database, refractive_index,
                         serialize_database, wavevector)
from .errors import (CpspdcError, DispersionRangeError, GridSpanError,
                     IoError, SolverError, ValidationError)
from .hom import (HomCurve, InterferingPair, cross_term_bruteforce,
                  hom_curve, visibility_vs_purity_check)
from .jsa import (JsaMatrix, MarginalSpectrum, PumpSpec, SpectralGrid,
                  auto_span_nm, bandwidth_nm_to_ghz, compute_jsa,
                  marginal_spectra, phase_matching_function, pump_envelope)
from .phasematch import (PhaseMatchConfig, PmType, delta_k, gvm_wavelength,
                         make_config, poling_period, tilt_angle)
from .schmidt import (SchmidtDecomposition, decompose, jsa_purity, purity,
                      schmidt_number)
from .sweep import (OptimizationResult, SweepSpec, idler_bandwidth_vs_length,
                    optimize_purity, purity_vs_wavelength)

__all__ = [
    "__version__",
    # errors
    "CpspdcError", "ValidationError", "DispersionRangeError",
    "GridSpanError", "SolverError", "IoError",
    # dispersion
    "SellmeierModel", "CrystalRecord", "CrystalDatabase", "load_database",
    "serialize_database", "refractive_index", "group_index", "wavevector",
    # phasematch
    "PmType", "PhaseMatchConfig", "delta_k", "poling_period",
    "gvm_wavelength", "tilt_angle", "make_config",
    # jsa
    "PumpSpec", "SpectralGrid", "JsaMatrix", "MarginalSpectrum",
    "auto_span_nm", "pump_envelope", "phase_matching_function",
    "compute_jsa", "marginal_spectra", "bandwidth_nm_to_ghz",
    # schmidt
    "SchmidtDecomposition", "decompose", "purity", "schmidt_number",
    "jsa_purity",
    # hom
    "InterferingPair", "HomCurve", "hom_curve", "cross_term_bruteforce",
    "visibility_vs_purity_check",
    # sweep
    "SweepSpec", "OptimizationResult", "purity_vs_wavelength",
    "optimize_purity", "idler_bandwidth_vs_length",
]
