import numpy as np
import pytest

import cpspdc
from cpspdc import PmType

CRYSTALS = ("PPKTP", "PPRTP", "PPKTA", "PPRTA", "PPCTA")

# Reference design table: per-crystal GVM wavelengths (nm), poling
# periods (nm) and purities for type-0 and type-II A phase matching,
# at the GVM point and at 1550 nm, together with the (pump width nm,
# length mm) pairs the purities are quoted for.
GVM_TYPE0 = {"PPKTP": 2502.62, "PPRTP": 2531.59, "PPKTA": 2729.67,
             "PPRTA": 2734.62, "PPCTA": 2780.14}
GVM_TYPE2A = {"PPKTP": 1225.19, "PPRTP": 1282.04, "PPKTA": 1284.84,
              "PPRTA": 1379.66, "PPCTA": 1577.17}
PERIOD_GVM_TYPE0 = {"PPKTP": 686.266, "PPRTP": 685.767, "PPKTA": 734.277,
                    "PPRTA": 730.648, "PPCTA": 728.149}
PERIOD_1550_TYPE0 = {"PPKTP": 419.637, "PPRTP": 414.427, "PPKTA": 410.937,
                     "PPRTA": 408.139, "PPCTA": 399.928}
PERIOD_GVM_TYPE2A = {"PPKTP": 353.570, "PPRTP": 363.835, "PPKTA": 360.766,
                     "PPRTA": 383.846, "PPCTA": 426.314}
PERIOD_1550_TYPE2A = {"PPKTP": 451.185, "PPRTP": 442.863, "PPKTA": 437.999,
                      "PPRTA": 432.963, "PPCTA": 418.731}
# (pump width nm, length mm) used for the quoted purities
PARAMS_TYPE0 = {"PPKTP": (0.16, 5.0), "PPRTP": (0.16, 5.0),
                "PPKTA": (0.15, 5.0), "PPRTA": (0.18, 4.0),
                "PPCTA": (0.18, 4.0)}
PARAMS_TYPE2A = {"PPKTP": (0.20, 5.0), "PPRTP": (0.25, 5.0),
                 "PPKTA": (0.25, 5.0), "PPRTA": (0.25, 7.0),
                 "PPCTA": (0.20, 10.0)}
PURITY_GVM_TYPE0 = {"PPKTP": 0.985, "PPRTP": 0.985, "PPKTA": 0.983,
                    "PPRTA": 0.983, "PPCTA": 0.983}
PURITY_1550_TYPE0 = {"PPKTP": 0.920, "PPRTP": 0.920, "PPKTA": 0.912,
                     "PPRTA": 0.917, "PPCTA": 0.914}
PURITY_GVM_TYPE2A = {"PPKTP": 0.980, "PPRTP": 0.984, "PPKTA": 0.984,
                     "PPRTA": 0.987, "PPCTA": 0.984}
PURITY_1550_TYPE2A = {"PPKTP": 0.964, "PPRTP": 0.970, "PPKTA": 0.974,
                      "PPRTA": 0.979, "PPCTA": 0.984}

# all 20 (crystal, pm_type, lambda0, pump width, length, purity) rows
def table1_configs(db):
    rows = []
    for name in CRYSTALS:
        dl0, l0mm = PARAMS_TYPE0[name]
        dl2, l2mm = PARAMS_TYPE2A[name]
        rows.append((name, PmType.TYPE0, GVM_TYPE0[name], dl0, l0mm,
                     PURITY_GVM_TYPE0[name]))
        rows.append((name, PmType.TYPE0, 1550.0, dl0, l0mm,
                     PURITY_1550_TYPE0[name]))
        rows.append((name, PmType.TYPE2A, GVM_TYPE2A[name], dl2, l2mm,
                     PURITY_GVM_TYPE2A[name]))
        rows.append((name, PmType.TYPE2A, 1550.0, dl2, l2mm,
                     PURITY_1550_TYPE2A[name]))
    return rows


@pytest.fixture(scope="session")
def db():
    return cpspdc.load_database()


def jsa_for(db, crystal, pm_type, lambda0, pump_width, length, **kw):
    cfg = cpspdc.make_config(db, crystal, pm_type, lambda0, length)
    pump = cpspdc.PumpSpec(lambda0_nm=lambda0, delta_lambda_nm=pump_width)
    return cpspdc.compute_jsa(db, cfg, pump, **kw)


def random_jsa(rng, n=16, complex_amps=False):
    """A random normalized JSA on a synthetic grid around 1550 nm."""
    ax = np.linspace(1547.0, 1553.0, n)
    amps = rng.standard_normal((n, n))
    if complex_amps:
        amps = amps + 1j * rng.standard_normal((n, n))
    return cpspdc.JsaMatrix(grid=cpspdc.SpectralGrid(ax, ax.copy()),
                            amplitudes=amps)


def separable_jsa(n=32, width_s=0.5, width_i=0.3):
    """Exactly separable Gaussian JSA (rank 1)."""
    ax = np.linspace(1547.0, 1553.0, n)
    gs = np.exp(-0.5 * ((ax - 1550.0) / width_s) ** 2)
    gi = np.exp(-0.5 * ((ax - 1550.0) / width_i) ** 2)
    return cpspdc.JsaMatrix(grid=cpspdc.SpectralGrid(ax, ax.copy()),
                            amplitudes=np.outer(gs, gi))
