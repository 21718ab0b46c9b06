import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polariton.dynamics import polariton_survival
from polariton.ensemble import CavityParams, EnsembleParams, SpectralDistribution, moment
from polariton.errors import DomainError
from polariton.memory import (MemoryScenario, central_peak, dark_state_linewidth,
                              dark_state_overlap, dressed_state, memory_fidelity,
                              optimize_detuning, pole_fidelity, two_ensemble_spectrum)
from polariton.spectral import transmission

LOSSLESS = CavityParams(0.0, 0.0)
CAV = CavityParams(0.0, 0.1)


def gauss(coupling, gamma=1e-4, fwhm=1.0):
    return EnsembleParams(coupling, gamma, SpectralDistribution("gaussian", 0.0, fwhm))


# ---------------------------------------------------------------- dressed state


def test_dressed_state_limits():
    s = dressed_state(0.0, 1.0)
    assert s.theta == pytest.approx(math.pi / 2)
    assert abs(s.photon_amplitude) ** 2 == pytest.approx(0.5)
    far = dressed_state(1e6, 1.0)
    assert abs(far.photon_amplitude) ** 2 < 1e-11
    assert far.matter_amplitude == pytest.approx(1.0)
    # negative detuning selects the photon-like branch
    assert abs(dressed_state(-1e6, 1.0).photon_amplitude) == pytest.approx(1.0)


@given(st.floats(-1e3, 1e3), st.floats(1e-3, 1e3))
def test_dressed_state_normalized(detuning, coupling):
    s = dressed_state(detuning, coupling)
    assert 0 < s.theta < math.pi
    assert abs(s.photon_amplitude) ** 2 + s.matter_amplitude**2 == pytest.approx(1.0)
    assert math.cos(s.theta) / math.sin(s.theta) == pytest.approx(
        detuning / (2 * coupling), rel=1e-9, abs=1e-12)


def test_scenario_defaults_and_checks():
    sc = MemoryScenario(CAV, gauss(10.0), 20.0)
    assert sc.storage_time == pytest.approx(100.0)
    assert sc.placed_ensemble.center == 20.0
    with pytest.raises(DomainError):
        MemoryScenario(LOSSLESS, gauss(10.0), 20.0)
    with pytest.raises(DomainError):
        MemoryScenario(CAV, gauss(10.0), 20.0, -1.0)
    with pytest.raises(DomainError):
        MemoryScenario(CAV, gauss(10.0), math.inf)


# ---------------------------------------------------------------- fidelity


def test_zero_storage_time_is_perfect():
    assert memory_fidelity(MemoryScenario(CAV, gauss(10.0), 20.0, 0.0)) == 1.0


@pytest.mark.parametrize("detuning", [5.0, 23.6, 200.0])
def test_fidelity_in_unit_interval(detuning):
    f = memory_fidelity(MemoryScenario(CAV, gauss(10.0), detuning))
    assert 0.0 <= f <= 1.0


def test_far_detuned_state_shows_free_induction_decay():
    # matter-like storage dephases as |FT rho|^2 = exp(-mu2 tau^2)
    e = gauss(1.0, 0.0)
    mu2 = moment(e.distribution, 2)
    for tau in (0.5, 1.0, 2.0):
        f = memory_fidelity(MemoryScenario(LOSSLESS, e, 400.0, tau))
        assert f == pytest.approx(math.exp(-mu2 * tau**2), abs=1e-4)


def test_lossless_mismatch_is_static_and_shrinks():
    # without loss channels the only loss is the static mismatch between the
    # zero-width dressed state and the true polariton, ~2.7 (Delta/Omega)^2
    t = np.array([5.0, 20.0, 100.0])
    losses = {}
    for o in (10.0, 40.0):
        e = gauss(o, 0.0).replace(center=o)
        a = 1 - polariton_survival(LOSSLESS, e, t, o).values
        b = 1 - polariton_survival(LOSSLESS, e, t, o, route="discrete", n_oracle=4000).values
        np.testing.assert_allclose(a, b, atol=1e-7)
        assert np.ptp(a[1:]) < 1e-5
        losses[o] = a[-1]
    assert losses[10.0] / losses[40.0] == pytest.approx(16, rel=0.15)


def test_lossless_storage_is_perfect_deep_in_protection():
    f = memory_fidelity(MemoryScenario(LOSSLESS, gauss(200.0, 0.0), 200.0, 100.0),
                        n_points=2**22)
    assert 1 - f < 1e-4


def test_storage_routes_agree():
    e = gauss(10.0).replace(center=23.6)
    t = np.linspace(0, 100, 41)
    a = polariton_survival(CAV, e, t, 23.6).values
    b = polariton_survival(CAV, e, t, 23.6, route="discrete", n_oracle=4000).values
    assert np.max(np.abs(a - b)) < 1e-2


def test_pole_fidelity_bounds():
    sc = MemoryScenario(CAV, gauss(10.0), 23.6)
    p = pole_fidelity(sc)
    assert 0 < p < 1
    # the exact polariton outlives the zero-width dressed state
    assert p > memory_fidelity(sc)


# ---------------------------------------------------------------- optimization


def test_optimizer_recovers_scan_maximum():
    res = optimize_detuning(CAV, gauss(10.0), delta_range=(10.0, 1000.0))
    assert res.scan_detuning.size >= 40
    assert res.fidelity >= res.scan_fidelity.max()
    assert 10.0 < res.detuning < 1000.0
    assert not res.flat
    # local optimality at the relative tolerance
    f = lambda d: memory_fidelity(MemoryScenario(CAV, gauss(10.0), d))
    assert res.fidelity >= f(res.detuning * 1.01) - 1e-9
    assert res.fidelity >= f(res.detuning / 1.01) - 1e-9


def test_optimizer_flat_objective_warns():
    # lossless zero-width ensemble: the dressed state is an exact eigenstate
    e = gauss(2.0, 0.0, fwhm=0.0)
    with pytest.warns(RuntimeWarning, match="flat"):
        res = optimize_detuning(LOSSLESS, e, 10.0, (1.0, 10.0))
    assert res.flat
    assert res.detuning == 1.0


def test_optimizer_edge_maximum():
    # at Omega = 5 Delta the best storage is as close to resonance as allowed
    res = optimize_detuning(CAV, gauss(5.0), delta_range=(5.0, 250.0))
    assert res.detuning == pytest.approx(5.0, rel=1e-2)
    assert res.fidelity >= res.scan_fidelity.max()


def test_optimizer_argument_checks():
    with pytest.raises(DomainError):
        optimize_detuning(CAV, gauss(5.0), delta_range=(10.0, 1.0))
    with pytest.raises(DomainError):
        optimize_detuning(CAV, gauss(5.0), delta_range=(1.0, 10.0), n_scan=10)
    with pytest.raises(DomainError):
        optimize_detuning(CAV, gauss(5.0, fwhm=0.0))


# ---------------------------------------------------------------- dark state


def test_dark_linewidth_examples():
    assert dark_state_linewidth(0.0, 1.0, 0.5, 1e-4) == pytest.approx(1e-4)
    assert dark_state_linewidth(1e6, 1.0, 0.5, 1e-4) == pytest.approx(0.5, rel=1e-10)
    assert dark_state_linewidth(0.5, 1.0, 0.5, 1e-4) == pytest.approx(
        (0.25 * 0.5 + 2e-4) / 2.25)
    # at delta ~ Delta the width is gamma + (Delta^2 / 2 Omega^2) kappa
    d, o, k, g = 0.1, 10.0, 0.5, 1e-4
    assert dark_state_linewidth(d, o, k, g) == pytest.approx(g + d * d / (2 * o * o) * k,
                                                              rel=1e-3)
    with pytest.raises(DomainError):
        dark_state_linewidth(0.0, 0.0, 0.5, 1e-4)
    with pytest.raises(DomainError):
        dark_state_linewidth(-1.0, 1.0, 0.5, 1e-4)


def test_dark_overlap_examples():
    assert dark_state_overlap(0.0, 1.0) == 0.0
    assert dark_state_overlap(math.sqrt(2), 1.0) == pytest.approx(0.5)
    assert dark_state_overlap(1e8, 1.0) == pytest.approx(1.0)
    assert dark_state_overlap(1.0, 0.0) == 1.0
    with pytest.raises(DomainError):
        dark_state_overlap(0.0, 0.0)


@given(st.floats(0, 1e3), st.floats(1e-3, 1e3), st.floats(0, 10), st.floats(0, 10))
def test_dark_linewidth_interpolates(detuning, coupling, kappa, gamma):
    g = dark_state_linewidth(detuning, coupling, kappa, gamma)
    assert min(kappa, gamma) - 1e-12 <= g <= max(kappa, gamma) + 1e-12
    p = dark_state_overlap(detuning, coupling)
    assert g == pytest.approx(p * kappa + (1 - p) * gamma, rel=1e-12, abs=1e-300)


PAIR_CAV = CavityParams(0.0, 0.5)
PAIR = EnsembleParams(1.0, 1e-4, SpectralDistribution("gaussian", 0.0, 0.1))


@given(st.floats(0.0, 5.0))
def test_two_ensemble_spectrum_symmetric(x):
    pair = [PAIR.replace(center=0.5), PAIR.replace(center=-0.5)]
    a, b = abs(transmission(PAIR_CAV, pair, x)), abs(transmission(PAIR_CAV, pair, -x))
    assert abs(a - b) < 1e-12


def test_two_ensemble_spectrum_grid_symmetric():
    s = two_ensemble_spectrum(PAIR_CAV, PAIR, 0.5, -3, 3, 6001)
    p = np.abs(s.amplitude)
    assert np.max(np.abs(p - p[::-1])) < 1e-12


def test_merged_ensembles_equal_single_with_sqrt2_coupling():
    s = two_ensemble_spectrum(PAIR_CAV, PAIR, 0.0, -3, 3, 601)
    single = transmission(PAIR_CAV, [PAIR.replace(coupling=math.sqrt(2))], s.probe_grid)
    np.testing.assert_allclose(s.amplitude, single, rtol=1e-12, atol=1e-15)


def test_three_peaks_and_dark_width():
    s = two_ensemble_spectrum(PAIR_CAV, PAIR, 0.5, -3, 3, 20001)
    peak = central_peak(PAIR_CAV, PAIR, 0.5)
    assert abs(peak.position) < 1e-6
    assert peak.fwhm == pytest.approx(dark_state_linewidth(0.5, 1.0, 0.5, 1e-4), rel=0.1)
    from polariton.spectral import extract_fwhm
    assert len(extract_fwhm(s)) == 3


def test_dark_width_law_when_well_separated():
    # delta >= 5 Delta with kappa, gamma << delta, Omega
    cav = CavityParams(0.0, 0.02)
    tpl = EnsembleParams(1.0, 1e-4, SpectralDistribution("gaussian", 0.0, 0.1))
    for d in (0.5, 1.0):
        peak = central_peak(cav, tpl, d)
        assert peak.fwhm == pytest.approx(dark_state_linewidth(d, 1.0, 0.02, 1e-4), rel=0.1)


def test_dark_state_breaks_down_near_width():
    peak = central_peak(PAIR_CAV, PAIR, 0.15)
    assert peak.fwhm > 1.5 * dark_state_linewidth(0.15, 1.0, 0.5, 1e-4)
