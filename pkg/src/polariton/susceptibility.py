"""Collective susceptibility W(omega) of an inhomogeneous ensemble.

``W(omega) = coupling**2 * integral rho(w') / (omega - w' + i gamma/2) dw'``

The closed forms accept complex ``omega`` and give the analytic continuation
from the upper half plane; the Gaussian one is entire, the Lorentzian has a
single pole and the rectangular one has a branch cut along its support (for
``gamma == 0``, shifted by ``-i gamma/2`` otherwise).
"""

from __future__ import annotations

import math

import numpy as np

from .ensemble import EnsembleParams, Kind, SpectralDistribution, density
from .errors import DomainError
from .faddeeva import faddeeva, faddeeva_derivative
from .quadrature import gauss_kronrod

__all__ = [
    "susceptibility",
    "susceptibility_derivative",
    "total_susceptibility",
    "susceptibility_quadrature",
    "pv_susceptibility",
]

_SQRT_LN2 = math.sqrt(math.log(2.0))
_SQRT_PI = math.sqrt(math.pi)


def _scalar(out):
    return complex(out) if np.ndim(out) == 0 else out


def susceptibility(ens: EnsembleParams, omega):
    """Closed-form W(omega) for the ensemble; ``omega`` may be complex."""
    x = np.asarray(omega, dtype=complex) - ens.center
    o2 = ens.coupling**2
    half_g = 0.5 * ens.homogeneous_width
    d = ens.fwhm
    if o2 == 0:
        return _scalar(np.zeros_like(x))
    if d == 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            return _scalar(o2 / (x + 1j * half_g))
    if ens.kind is Kind.LORENTZIAN:
        return _scalar(o2 / (x + 0.5j * (ens.homogeneous_width + d)))
    if ens.kind is Kind.GAUSSIAN:
        b = d / _SQRT_LN2
        return _scalar(-1j * _SQRT_PI * o2 / b * faddeeva((x + 1j * half_g) / b))
    # rectangular: (2 O^2/(i D)) arctan(D/(gamma - 2 i x)) written as a
    # difference of logs so the only cut is the support itself
    u = x + 1j * half_g
    with np.errstate(divide="ignore", invalid="ignore"):
        out = o2 / d * (np.log(u + 0.5 * d) - np.log(u - 0.5 * d))
    return _scalar(out)


def susceptibility_derivative(ens: EnsembleParams, omega):
    """dW/d(omega) of the closed form."""
    x = np.asarray(omega, dtype=complex) - ens.center
    o2 = ens.coupling**2
    half_g = 0.5 * ens.homogeneous_width
    d = ens.fwhm
    if o2 == 0:
        return _scalar(np.zeros_like(x))
    if d == 0:
        return _scalar(-o2 / (x + 1j * half_g) ** 2)
    if ens.kind is Kind.LORENTZIAN:
        return _scalar(-o2 / (x + 0.5j * (ens.homogeneous_width + d)) ** 2)
    if ens.kind is Kind.GAUSSIAN:
        b = d / _SQRT_LN2
        return _scalar(-1j * _SQRT_PI * o2 / b**2 * faddeeva_derivative((x + 1j * half_g) / b))
    u = x + 1j * half_g
    return _scalar(o2 / d * (1.0 / (u + 0.5 * d) - 1.0 / (u - 0.5 * d)))


def total_susceptibility(ensembles, omega):
    """Sum of the susceptibilities of several ensembles."""
    omega = np.asarray(omega, dtype=complex)
    out = np.zeros_like(omega)
    for ens in ensembles:
        out = out + susceptibility(ens, omega)
    return _scalar(out)


def _tan_map(dist: SpectralDistribution):
    """Map phi in (-pi/2, pi/2) onto the real line, returning (w(phi), dw/dphi)."""
    s = 0.5 * dist.fwhm

    def to_omega(phi):
        return dist.center + s * np.tan(phi), s / np.cos(phi) ** 2

    def to_phi(omega):
        return math.atan((omega - dist.center) / s)

    return to_omega, to_phi


def susceptibility_quadrature(dist: SpectralDistribution, coupling: float,
                              homogeneous_width: float, omega: float,
                              rtol: float = 1e-12) -> complex:
    """W(omega) by direct adaptive quadrature of its defining integral.

    Independent of the closed forms. Needs ``homogeneous_width > 0`` so that
    the integrand is smooth on the real line; break points are placed at
    ``omega`` and at ``omega +- 10**k * gamma``.
    """
    if not homogeneous_width > 0:
        raise DomainError("quadrature needs homogeneous_width > 0; use pv_susceptibility")
    if dist.is_dirac:
        raise DomainError("quadrature needs fwhm > 0")
    omega = float(omega)
    o2 = coupling**2
    if o2 == 0:
        return 0j
    hg = 0.5 * homogeneous_width
    d = dist.fwhm
    atol = 1e-11 * o2 / d
    near = [omega + sgn * homogeneous_width * 10.0**k
            for k in range(-1, 4) for sgn in (-1.0, 1.0)] + [omega]

    if dist.kind is Kind.LORENTZIAN:
        to_omega, to_phi = _tan_map(dist)

        def f(phi):
            w, jac = to_omega(phi)
            return density(dist, w) * jac / (omega - w + 1j * hg)

        pts = [to_phi(p) for p in near]
        val, _ = gauss_kronrod(f, -0.5 * math.pi, 0.5 * math.pi, points=pts,
                               rtol=rtol, atol=atol / o2)
        return complex(o2 * val[0])

    if dist.kind is Kind.GAUSSIAN:
        # density < 1e-120 beyond 20 FWHM: the tail is below any tolerance
        lo, hi = dist.center - 20 * d, dist.center + 20 * d
    else:
        lo, hi = dist.center - 0.5 * d, dist.center + 0.5 * d

    def g(w):
        return density(dist, w) / (omega - w + 1j * hg)

    val, _ = gauss_kronrod(g, lo, hi, points=near, rtol=rtol, atol=atol / o2)
    return complex(o2 * val[0])


def pv_susceptibility(dist: SpectralDistribution, coupling: float, omega: float,
                      rtol: float = 1e-12) -> complex:
    """W(omega) at zero homogeneous width.

    ``W/coupling**2 = PV integral rho(w')/(omega - w') dw' - i pi rho(omega)``.
    The principal value is taken by subtracting ``rho(omega)`` on a symmetric
    interval around ``omega``; the remaining integrand is regular.
    """
    omega = float(omega)
    o2 = coupling**2
    if dist.is_dirac:
        if omega == dist.center:
            raise DomainError("Dirac-limit susceptibility diverges at the center")
        return complex(o2 / (omega - dist.center))
    if o2 == 0:
        return 0j
    d = dist.fwhm
    a = 0.5 * d
    rho0 = density(dist, omega)
    atol = 1e-13

    def inner(w):
        dw = omega - w
        safe = np.where(dw == 0, 1.0, dw)
        return np.where(dw == 0, 0.0, (density(dist, w) - rho0) / safe)

    if dist.kind is Kind.RECTANGULAR:
        lo_s, hi_s = dist.center - 0.5 * d, dist.center + 0.5 * d
        if omega in (lo_s, hi_s):
            raise DomainError("principal value diverges at the support edges")
        edges = [lo_s, hi_s]
        total, _ = gauss_kronrod(inner, omega - a, omega + a, points=edges,
                                 rtol=rtol, atol=atol)
        pv = total[0]
        # outer pieces: the density is only nonzero inside the support
        for lo, hi in ((lo_s, min(hi_s, omega - a)), (max(lo_s, omega + a), hi_s)):
            if hi > lo:
                val, _ = gauss_kronrod(lambda w: density(dist, w) / (omega - w), lo, hi,
                                       rtol=rtol, atol=atol)
                pv += val[0]
    else:
        total, _ = gauss_kronrod(inner, omega - a, omega + a, points=[omega],
                                 rtol=rtol, atol=atol)
        pv = total[0]
        to_omega, to_phi = _tan_map(dist)

        def outer(phi):
            w, jac = to_omega(phi)
            return density(dist, w) * jac / (omega - w)

        for lo, hi in ((-0.5 * math.pi, to_phi(omega - a)), (to_phi(omega + a), 0.5 * math.pi)):
            val, _ = gauss_kronrod(outer, lo, hi, rtol=rtol, atol=atol)
            pv += val[0]
    return complex(o2 * pv, -math.pi * o2 * rho0)
