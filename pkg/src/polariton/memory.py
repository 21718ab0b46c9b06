"""Quantum-memory figures of merit.

Single ensemble: an excitation stored in the dispersive dressed state
``cos(theta/2)|0,S> + i sin(theta/2)|1,G>`` is read back after a time ``tau``
with fidelity ``F = |<psi|exp(-i H t)|psi>|**2``; the detuning trades cavity
loss (large photonic weight at small detuning) against inhomogeneous
dephasing (small protective gap at large detuning).

Two ensembles at ``w0 +- delta``: the cavity hybridizes with their
antisymmetric combination into a narrow dark state at ``w0``.

Sign convention: the ensemble sits at ``w0 + delta``. With ``theta`` in
(0, pi) and ``cot(theta) = delta/(2 Omega)`` this makes the dressed state
an eigenstate of the zero-width model, matter-like for ``delta -> +inf``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ._parallel import map_items
from .dynamics import mixing_angle, polariton_survival
from .ensemble import CavityParams, EnsembleParams
from .errors import DomainError
from .spectral import TransmissionSpectrum, find_poles, measure_peaks, spectrum

__all__ = [
    "MemoryScenario",
    "DressedState",
    "DetuningScan",
    "dressed_state",
    "memory_fidelity",
    "pole_fidelity",
    "optimize_detuning",
    "dark_state_linewidth",
    "dark_state_overlap",
    "two_ensemble_spectrum",
    "central_peak",
]


@dataclass(frozen=True)
class MemoryScenario:
    """Cavity, ensemble template (its center is ignored), detuning and
    storage time. ``storage_time=None`` means ten cavity lifetimes."""

    cavity: CavityParams
    ensemble: EnsembleParams
    detuning: float
    storage_time: float | None = None

    def __post_init__(self):
        if self.storage_time is None:
            if not self.cavity.linewidth > 0:
                raise DomainError("default storage time needs a lossy cavity; give storage_time")
            object.__setattr__(self, "storage_time", 10.0 / self.cavity.linewidth)
        if not (math.isfinite(self.storage_time) and self.storage_time >= 0):
            raise DomainError("storage_time must be finite and >= 0")
        if not math.isfinite(self.detuning):
            raise DomainError("detuning must be finite")

    @property
    def placed_ensemble(self) -> EnsembleParams:
        """The ensemble centered at ``w0 + detuning``."""
        return self.ensemble.replace(center=self.cavity.frequency + self.detuning)


@dataclass(frozen=True)
class DressedState:
    theta: float

    @property
    def photon_amplitude(self) -> complex:
        return 1j * math.sin(0.5 * self.theta)

    @property
    def matter_amplitude(self) -> float:
        return math.cos(0.5 * self.theta)


def dressed_state(detuning: float, coupling: float) -> DressedState:
    """Mixing angle in (0, pi) with ``cot(theta) = detuning / (2 coupling)``."""
    return DressedState(mixing_angle(detuning, coupling))


def memory_fidelity(scenario: MemoryScenario, *, route: str = "laplace", **kw) -> float:
    tau = scenario.storage_time
    if tau == 0:
        return 1.0
    ens = scenario.placed_ensemble
    res = polariton_survival(scenario.cavity, ens, np.array([tau]), scenario.detuning,
                             route=route, **kw)
    return float(min(1.0, res.values[0]))


def pole_fidelity(scenario: MemoryScenario) -> float:
    """``exp(-2 |Im lambda| tau)`` for the upper polariton pole.

    The survival of the exact (decaying) polariton rather than of the
    zero-width dressed state; it omits the static mismatch between the two.
    Used as a diagnostic.
    """
    poles = find_poles(scenario.cavity, [scenario.placed_ensemble]).poles
    lam = max(poles, key=lambda z: z.real)
    return float(math.exp(-2.0 * abs(lam.imag) * scenario.storage_time))


@dataclass(frozen=True)
class DetuningScan:
    detuning: float
    fidelity: float
    scan_detuning: np.ndarray
    scan_fidelity: np.ndarray
    flat: bool = False


def optimize_detuning(cavity: CavityParams, ensemble: EnsembleParams,
                      storage_time: float | None = None, delta_range=None, *,
                      n_scan: int = 48, rtol: float = 1e-3, route: str = "laplace",
                      **kw) -> DetuningScan:
    """Maximize the storage fidelity over the detuning.

    A log-spaced scan over ``delta_range`` (default ``[Omega, 10 Omega^2 /
    Delta]``) is refined by golden-section search around the best scan
    point to a relative detuning tolerance ``rtol``. Ties (values within
    1e-12) go to the smaller detuning. If the scan is flat (spread below
    1e-6) a ``RuntimeWarning`` is issued and the scan maximum is returned
    with ``flat=True``.
    """
    o = ensemble.coupling
    if delta_range is None:
        if ensemble.fwhm <= 0:
            raise DomainError("default detuning range needs fwhm > 0")
        delta_range = (o, 10.0 * o * o / ensemble.fwhm)
    lo, hi = (float(v) for v in delta_range)
    if not 0 < lo < hi:
        raise DomainError("delta_range must satisfy 0 < low < high")
    if n_scan < 40:
        raise DomainError("the coarse scan needs at least 40 points")

    def fid(d):
        return memory_fidelity(MemoryScenario(cavity, ensemble, float(d), storage_time),
                               route=route, **kw)

    grid = np.geomspace(lo, hi, n_scan)
    values = np.array(map_items(fid, grid))
    # values within rounding of the maximum count as ties
    i = int(np.flatnonzero(values >= values.max() - 1e-12)[0])
    if values.max() - values.min() < 1e-6:
        warnings.warn("fidelity is flat over the detuning range", RuntimeWarning, stacklevel=2)
        return DetuningScan(float(grid[i]), float(values[i]), grid, values, True)

    def neg(logd):
        return -fid(math.exp(logd))

    xtol = math.log1p(rtol)
    if 0 < i < n_scan - 1:
        a, b, c = np.log(grid[i - 1:i + 2])
        res = minimize_scalar(neg, bracket=(a, b, c), method="golden",
                              options={"xtol": xtol / abs(b) if b else xtol})
    else:
        j = 1 if i == 0 else n_scan - 2
        a, c = sorted(np.log([grid[i], grid[j]]))
        res = minimize_scalar(neg, bounds=(a, c), method="bounded", options={"xatol": xtol})
    best_d, best_f = float(grid[i]), float(values[i])
    if -res.fun > best_f:
        best_d, best_f = float(math.exp(res.x)), float(-res.fun)
    return DetuningScan(best_d, best_f, grid, values)


def _check_pair(detuning: float, coupling: float):
    if detuning < 0 or coupling < 0:
        raise DomainError("detuning and coupling must be non-negative")
    if detuning == 0 and coupling == 0:
        raise DomainError("detuning and coupling cannot both vanish")


def dark_state_linewidth(detuning: float, coupling: float, kappa: float, gamma: float) -> float:
    """``(delta^2 kappa + 2 Omega^2 gamma) / (delta^2 + 2 Omega^2)``."""
    _check_pair(detuning, coupling)
    d2, o2 = detuning**2, 2.0 * coupling**2
    return (d2 * kappa + o2 * gamma) / (d2 + o2)


def dark_state_overlap(detuning: float, coupling: float) -> float:
    """Photonic weight ``delta^2 / (delta^2 + 2 Omega^2)`` of the dark state."""
    _check_pair(detuning, coupling)
    d2 = detuning**2
    return d2 / (d2 + 2.0 * coupling**2)


def _pair(cavity: CavityParams, template: EnsembleParams, detuning: float):
    w0 = cavity.frequency
    return [template.replace(center=w0 + detuning), template.replace(center=w0 - detuning)]


def two_ensemble_spectrum(cavity: CavityParams, template: EnsembleParams, detuning: float,
                          omega_min: float, omega_max: float,
                          n_points: int) -> TransmissionSpectrum:
    """Transmission with identical ensembles centered at ``w0 +- detuning``."""
    return spectrum(cavity, _pair(cavity, template, detuning), omega_min, omega_max, n_points)


def central_peak(cavity: CavityParams, template: EnsembleParams, detuning: float,
                 half_window: float | None = None):
    """Peak of the two-ensemble spectrum closest to ``w0``, or None.

    The default window is ``w0 +- (2 sqrt(2) Omega + detuning + 4 Delta)``.
    """
    if half_window is None:
        half_window = 2 * math.sqrt(2) * template.coupling + detuning + 4 * template.fwhm
    w0 = cavity.frequency
    peaks = measure_peaks(cavity, _pair(cavity, template, detuning),
                          w0 - half_window, w0 + half_window)
    if not peaks:
        return None
    return min(peaks, key=lambda p: abs(p.position - w0))
