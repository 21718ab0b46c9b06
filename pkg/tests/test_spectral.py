import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polariton.ensemble import (CavityParams, EnsembleParams, Kind, SpectralDistribution,
                                sample_discrete)
from polariton.errors import DomainError
from polariton.spectral import (TransmissionSpectrum, denominator, extract_fwhm, find_poles,
                                measure_peaks, perturbative_poles, predicted_width, reflection,
                                spectrum, transmission)

CAV = CavityParams(0.0, 0.1)

# poles at Omega=3.5, Delta=1, kappa=0.1, gamma=1e-4, frozen from mpmath
# findroot on D built from exp(-z^2) erfc(-iz) and the log form respectively
GAUSS_POLE = complex(3.61850394874673485830114300601, 0.0240224743279873186666231418562)
RECT_POLE = complex(3.51185938445841993923336427431, 0.024854408785660964750134718321)


def ens(kind, coupling=3.5, gamma=1e-4, center=0.0, fwhm=1.0):
    return EnsembleParams(coupling, gamma, SpectralDistribution(kind, center, fwhm))


def test_empty_cavity_on_resonance():
    assert transmission(CAV, [], 0.0) == pytest.approx(-1.0, abs=1e-15)
    assert reflection(CAV, [], 0.0) == pytest.approx(0.0, abs=1e-15)
    assert transmission(CAV, [ens("gaussian", 0.0)], 0.0) == pytest.approx(-1.0, abs=1e-15)


def test_far_detuned_reflection_tends_to_one():
    assert abs(reflection(CAV, [ens("gaussian")], 1e6) - 1) < 1e-6


def test_dirac_lossless_center_is_dark():
    e = ens("gaussian", 3.5, 1e-12, fwhm=0.0)
    assert abs(transmission(CAV, [e], 0.0)) < 1e-10
    assert transmission(CAV, [e.replace(homogeneous_width=0.0)], 0.0) == 0


def test_lossless_cavity_is_disconnected():
    assert transmission(CavityParams(0.0, 0.0), [], 0.0) == 0


def test_transmission_formula():
    e = ens("lorentzian", 2.0, 0.01, fwhm=0.3)
    w = 0.77
    ref = (0.1 / 2j) / (w + 0.05j - 4.0 / (w + 0.5j * 0.31))
    assert transmission(CAV, [e], w) == pytest.approx(ref, rel=1e-14)


def test_two_point_spectrum_matches_direct_calls():
    e = ens("rect")
    s = spectrum(CAV, [e], -1.0, 2.0, 2)
    np.testing.assert_array_equal(s.amplitude, [transmission(CAV, [e], -1.0),
                                                transmission(CAV, [e], 2.0)])
    assert len(s) == 2


def test_spectrum_validation():
    with pytest.raises(DomainError):
        spectrum(CAV, [], 1.0, 0.0, 10)
    with pytest.raises(DomainError):
        TransmissionSpectrum(np.array([0.0, 0.0]), np.array([1, 1j]), CAV, ())
    with pytest.raises(DomainError):
        transmission(CAV, [ens("gaussian")] * 3, 0.0)


@given(st.sampled_from(list(Kind)), st.floats(-20, 20), st.floats(0, 8), st.floats(0, 4),
       st.floats(0, 2), st.floats(0, 2), st.floats(-3, 3))
def test_passivity(kind, w, coupling, fwhm, gamma, kappa, center):
    cav = CavityParams(0.0, kappa)
    e = EnsembleParams(coupling, gamma, SpectralDistribution(kind, center, fwhm))
    if kind is Kind.RECTANGULAR and gamma == 0 and fwhm > 0 and abs(abs(w - center) - fwhm / 2) < 1e-9:
        return  # logarithmic singularity exactly on an edge
    t = transmission(cav, [e], w)
    assert abs(t) <= 1 + 1e-12


def test_gaussian_polariton_peaks():
    peaks = extract_fwhm(spectrum(CAV, [ens("gaussian")], -6, 6, 24001))
    assert len(peaks) == 2
    assert peaks[0].position == pytest.approx(-3.6185, abs=0.01)
    assert peaks[1].position == pytest.approx(3.6185, abs=0.01)


def test_lorentzian_broad_peaks():
    peaks = measure_peaks(CAV, [ens("lorentzian")], -6, 6)
    assert len(peaks) == 2
    for p in peaks:
        assert p.fwhm == pytest.approx(0.55, rel=0.05)


def test_bare_cavity_line():
    peaks = extract_fwhm(spectrum(CAV, [], -1, 1, 20001))
    assert len(peaks) == 1
    assert peaks[0].position == pytest.approx(0.0, abs=1e-4)
    assert peaks[0].fwhm == pytest.approx(0.1, abs=2e-4)


def test_dirac_strong_coupling_widths():
    peaks = measure_peaks(CAV, [ens("gaussian", fwhm=0.0)], -6, 6)
    assert len(peaks) == 2
    for p in peaks:
        assert p.fwhm == pytest.approx((0.1 + 1e-4) / 2, rel=1e-3)


def test_no_peak_gives_empty_list():
    s = TransmissionSpectrum(np.linspace(0, 1, 5), np.zeros(5, complex), CAV, ())
    assert extract_fwhm(s) == []


def test_boundary_peak_is_flagged():
    peaks = extract_fwhm(spectrum(CAV, [], -0.02, 1.0, 2001))
    assert len(peaks) == 0 or peaks[0].at_boundary


def test_dirac_poles_closed_form():
    e = ens("gaussian", fwhm=1e-6)
    p = find_poles(CAV, [e]).poles
    re = math.sqrt(3.5**2 - ((0.1 - 1e-4) / 4) ** 2)
    np.testing.assert_allclose(p, [-re + 0.025025j, re + 0.025025j], atol=1e-6)


def test_bare_cavity_pole():
    p = find_poles(CAV, [ens("gaussian", 0.0)]).poles
    np.testing.assert_allclose(p, [0.05j], atol=1e-14)


def test_lorentzian_poles_match_quadratic():
    e = ens("lorentzian", 2.0, 0.03, center=0.2, fwhm=0.7)
    # (w + i k/2)(w - c + i(g + D)/2) = O^2, roots in the lower half plane
    a = 0.05j
    b = -0.2 + 0.5j * 0.73
    roots = np.roots([1.0, a + b, a * b - 4.0])
    p = find_poles(CAV, [e]).poles
    np.testing.assert_allclose(np.sort_complex(np.conj(roots)), p, atol=1e-10)


def test_gaussian_and_rectangular_reference_poles():
    assert abs(find_poles(CAV, [ens("gaussian")]).poles[1] - GAUSS_POLE) < 1e-10
    assert abs(find_poles(CAV, [ens("rect")]).poles[1] - RECT_POLE) < 1e-10


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("coupling", [2.0, 3.5, 7.0])
def test_pole_pair_symmetry_and_residual(kind, coupling):
    ps = find_poles(CAV, [ens(kind, coupling)])
    lo, hi = ps.poles
    assert abs(lo.real + hi.real) < 1e-9
    assert abs(lo.imag - hi.imag) < 1e-9
    assert lo.imag > 0 and hi.imag > 0
    assert ps.residual < 1e-10 * coupling
    assert np.all(np.abs(denominator(CAV, [ens(kind, coupling)], ps.roots)) < 1e-10 * coupling)


def test_rectangular_lossless_refuses_seed_on_cut():
    e = ens("rect", gamma=0.0)
    with pytest.raises(DomainError):
        find_poles(CAV, [e], seeds=[0.1 + 0.01j])


def test_perturbative_gaussian_within_one_percent():
    e = ens("gaussian")
    pert = perturbative_poles(e, CAV)
    exact = find_poles(CAV, [e]).poles
    assert pert[1].real == pytest.approx(3.602, abs=1e-3)
    np.testing.assert_allclose(pert.real, exact.real, rtol=1e-2)


def test_perturbative_rectangular():
    e = ens("rect")
    pert = perturbative_poles(e, CAV)
    ref = 3.5 * math.sqrt(1 + 1 / (12 * 3.5**2) - (0.1 - 1e-4) ** 2 / (16 * 3.5**2))
    assert pert[1].real == pytest.approx(ref, rel=1e-14)
    assert find_poles(CAV, [e]).poles[1].real == pytest.approx(ref, rel=1e-3)


def test_perturbative_trivial_and_lorentzian():
    e = ens("gaussian", 2.0, 0.0, fwhm=0.0)
    np.testing.assert_allclose(perturbative_poles(e, CavityParams(0, 0)), [-2, 2])
    with pytest.raises(DomainError, match="moment undefined"):
        perturbative_poles(ens("lorentzian"), CAV)


def test_predicted_widths():
    assert predicted_width(ens("rect"), CAV) == (0.1 + 1e-4) / 2
    g = predicted_width(ens("gaussian"), CAV)
    rho = math.sqrt(math.log(2) / math.pi) * math.exp(-3.5**2 * math.log(2))
    assert g == pytest.approx((0.1 + 1e-4 + 2 * math.pi * rho * 3.5**2) / 2, rel=1e-14)
    assert g == pytest.approx(0.05005, rel=0.1)
    assert predicted_width(ens("lorentzian", 100.0), CAV) == pytest.approx(0.55005, rel=1e-4)
    with pytest.raises(DomainError):
        predicted_width(ens("gaussian", center=1.0), CAV)


@pytest.mark.parametrize("kind", [Kind.GAUSSIAN, Kind.RECTANGULAR, Kind.LORENTZIAN])
@pytest.mark.parametrize("coupling", [1.5, 3.0, 5.0, 10.0])
def test_extracted_width_equals_pole_width(kind, coupling):
    # an isolated pole gives a Lorentzian line of FWHM 2 Im(lambda)
    e = ens(kind, coupling)
    peaks = measure_peaks(CAV, [e], -coupling - 3, coupling + 3)
    poles = find_poles(CAV, [e]).poles
    top = max(peaks, key=lambda p: p.position)
    tol = 0.02 if coupling > 2 or kind is Kind.RECTANGULAR else 0.5
    assert top.fwhm == pytest.approx(2 * poles[1].imag, rel=tol)


def test_gaussian_width_law_overshoots_at_three():
    # rho is taken at Omega while the pole sits at 3.15, where the Gaussian
    # is already half as dense; the formula overestimates the width by ~35%
    e = ens("gaussian", 3.0)
    top = max(measure_peaks(CAV, [e], -6, 6), key=lambda p: p.position)
    assert predicted_width(e, CAV) / top.fwhm > 1.3
    e5 = ens("gaussian", 5.0)
    top5 = max(measure_peaks(CAV, [e5], -8, 8), key=lambda p: p.position)
    assert top5.fwhm == pytest.approx(predicted_width(e5, CAV), rel=0.05)


def test_discrete_spectrum_matches_continuum():
    # gamma resolves the grid spacing 0.006 of N = 2000 midpoints
    e = ens("gaussian", 3.5, 0.05)
    disc = sample_discrete(e.distribution, 3.5, 0.05, 2000)
    w = np.linspace(-6, 6, 4001)
    cont = transmission(CAV, [e], w)
    d = (0.1 / 2j) / (w + 0.05j - disc.susceptibility(w))
    assert np.max(np.abs(d - cont)) / np.max(np.abs(cont)) < 1e-3


def test_two_ensembles_add():
    a, b = ens("gaussian", 1.0, center=0.5), ens("gaussian", 1.0, center=0.5)
    merged = ens("gaussian", math.sqrt(2.0), center=0.5)
    w = np.linspace(-3, 3, 101)
    np.testing.assert_allclose(transmission(CAV, [a, b], w), transmission(CAV, [merged], w),
                               rtol=1e-13)
