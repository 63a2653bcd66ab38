import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import cpspdc
from cpspdc import InterferingPair, PmType, ValidationError
from cpspdc.hom import cross_term, cross_term_bruteforce, hom_curve
from cpspdc.jsa import SpectralGrid, JsaMatrix

from conftest import jsa_for, random_jsa, separable_jsa


@pytest.fixture(scope="module")
def rtp_type0(db):
    return jsa_for(db, "PPRTP", PmType.TYPE0, 1550.0, 0.16, 5.0)


@pytest.fixture(scope="module")
def rtp_type2a(db):
    return jsa_for(db, "PPRTP", PmType.TYPE2A, 1550.0, 0.25, 5.0)


def test_type0_signal_signal(rtp_type0):
    curve = hom_curve(rtp_type0, rtp_type0, InterferingPair.SIGNAL_SIGNAL)
    assert curve.visibility == pytest.approx(0.9204, abs=0.005)
    assert curve.dip_fwhm_ps == pytest.approx(4.51, abs=0.2)
    assert curve.baseline == pytest.approx(0.5, abs=0.005)


def test_type0_idler_idler(rtp_type0):
    curve = hom_curve(rtp_type0, rtp_type0, InterferingPair.IDLER_IDLER)
    assert curve.visibility == pytest.approx(0.9204, abs=0.005)
    assert curve.dip_fwhm_ps == pytest.approx(36.41, abs=1.0)


def test_type2a_curves(rtp_type2a):
    ss = hom_curve(rtp_type2a, rtp_type2a, InterferingPair.SIGNAL_SIGNAL)
    assert ss.visibility == pytest.approx(0.9705, abs=0.005)
    assert ss.dip_fwhm_ps == pytest.approx(2.98, rel=0.05)
    ii = hom_curve(rtp_type2a, rtp_type2a, InterferingPair.IDLER_IDLER)
    assert ii.visibility == pytest.approx(0.9705, abs=0.005)
    assert ii.dip_fwhm_ps == pytest.approx(36.02, rel=0.05)


def test_heralded_axis_independence(rtp_type0):
    ss = hom_curve(rtp_type0, rtp_type0, InterferingPair.SIGNAL_SIGNAL)
    ii = hom_curve(rtp_type0, rtp_type0, InterferingPair.IDLER_IDLER)
    assert abs(ss.visibility - ii.visibility) < 0.005


def test_separable_sources_interfere_perfectly():
    jsa = separable_jsa()
    curve = hom_curve(jsa, jsa, InterferingPair.SIGNAL_SIGNAL)
    assert curve.p4.min() == pytest.approx(0.0, abs=1e-10)
    assert curve.visibility == pytest.approx(1.0, abs=1e-9)
    assert abs(cross_term(jsa, jsa, InterferingPair.SIGNAL_SIGNAL, 0.0)
               - 1.0) < 1e-10


def test_orthogonal_signal_modes_give_zero_cross_term():
    # disjoint signal supports stay orthogonal under any delay phase
    ax = np.linspace(1547.0, 1553.0, 16)
    g = np.exp(-0.5 * ((ax - 1550.0) / 0.8) ** 2)
    left = np.where(ax < 1550.0, g, 0.0)
    right = np.where(ax >= 1550.0, g, 0.0)
    f1 = JsaMatrix(grid=SpectralGrid(ax, ax.copy()),
                   amplitudes=np.outer(left, g))
    f2 = JsaMatrix(grid=SpectralGrid(ax, ax.copy()),
                   amplitudes=np.outer(right, g))
    for tau in (0.0, 1.3, -4.0):
        assert abs(cross_term(f1, f2, InterferingPair.SIGNAL_SIGNAL,
                              tau)) < 1e-12


def test_symmetry_in_delay_for_real_jsa(rtp_type0):
    curve = hom_curve(rtp_type0, rtp_type0, InterferingPair.SIGNAL_SIGNAL)
    assert np.allclose(curve.p4, curve.p4[::-1], atol=1e-10)


def test_swap_sources_for_real_jsas():
    rng = np.random.default_rng(8)
    f1 = random_jsa(rng, n=12)
    f2 = random_jsa(rng, n=12)
    tau = np.linspace(-5, 5, 41)
    c12 = hom_curve(f1, f2, InterferingPair.SIGNAL_SIGNAL, tau)
    c21 = hom_curve(f2, f1, InterferingPair.SIGNAL_SIGNAL, tau)
    assert np.allclose(c12.p4, c21.p4, atol=1e-10)


def test_grid_mismatch_rejected():
    rng = np.random.default_rng(9)
    f1 = random_jsa(rng, n=12)
    f2 = random_jsa(rng, n=16)
    with pytest.raises(ValidationError):
        hom_curve(f1, f2, InterferingPair.SIGNAL_SIGNAL,
                  np.linspace(-5, 5, 21))


def test_bruteforce_guard():
    rng = np.random.default_rng(10)
    f = random_jsa(rng, n=48)
    with pytest.raises(ValidationError):
        cross_term_bruteforce(f, f, InterferingPair.SIGNAL_SIGNAL, 0.0)


@settings(max_examples=10, deadline=None)
@given(n=st.integers(min_value=4, max_value=16),
       seed=st.integers(min_value=0, max_value=2**32 - 1),
       pair=st.sampled_from(list(InterferingPair)))
def test_contraction_equals_bruteforce(n, seed, pair):
    rng = np.random.default_rng(seed)
    f1 = random_jsa(rng, n=n, complex_amps=True)
    f2 = random_jsa(rng, n=n, complex_amps=True)
    for tau in (0.0, 0.37, -1.9, 5.0, -12.0):
        fast = cross_term(f1, f2, pair, tau)
        slow = cross_term_bruteforce(f1, f2, pair, tau)
        assert abs(fast - slow) < 1e-10


def test_baseline_approaches_half(rtp_type0, rtp_type2a):
    for jsa in (rtp_type0, rtp_type2a):
        for pair in InterferingPair:
            curve = hom_curve(jsa, jsa, pair)
            assert curve.baseline == pytest.approx(0.5, abs=0.01)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_identical_source_visibility_equals_purity(seed):
    rng = np.random.default_rng(seed)
    # smooth random JSA: random low-rank mixture of Gaussians so the
    # dip is resolvable on the default delay grid
    ax = np.linspace(1548.0, 1552.0, 48)
    amps = np.zeros((48, 48))
    for _ in range(3):
        cs, ci = 1550.0 + rng.uniform(-0.5, 0.5, 2)
        ws, wi = rng.uniform(0.2, 0.8, 2)
        amps += rng.uniform(0.2, 1.0) * np.outer(
            np.exp(-0.5 * ((ax - cs) / ws) ** 2),
            np.exp(-0.5 * ((ax - ci) / wi) ** 2))
    jsa = JsaMatrix(grid=SpectralGrid(ax, ax.copy()), amplitudes=amps)
    vis, pur, gap = cpspdc.visibility_vs_purity_check(jsa)
    assert gap <= 0.005
