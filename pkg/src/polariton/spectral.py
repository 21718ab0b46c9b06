"""Cavity transmission, polariton poles and linewidths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.signal import find_peaks

from ._parallel import map_chunks
from .ensemble import CavityParams, EnsembleParams, Kind, density, moment
from .errors import ConvergenceError, DomainError
from .susceptibility import susceptibility, susceptibility_derivative

__all__ = [
    "TransmissionSpectrum",
    "PoleSet",
    "Peak",
    "as_ensembles",
    "denominator",
    "transmission",
    "reflection",
    "spectrum",
    "find_poles",
    "dirac_poles",
    "predicted_width",
    "perturbative_poles",
    "extract_fwhm",
    "measure_peaks",
]

MAX_ENSEMBLES = 2


def as_ensembles(ensembles) -> tuple[EnsembleParams, ...]:
    """Normalize ``None``, a single ensemble or a sequence to a tuple."""
    if ensembles is None:
        return ()
    if isinstance(ensembles, EnsembleParams):
        return (ensembles,)
    ensembles = tuple(ensembles)
    if len(ensembles) > MAX_ENSEMBLES:
        raise DomainError(f"at most {MAX_ENSEMBLES} ensembles are supported")
    for e in ensembles:
        if not isinstance(e, EnsembleParams):
            raise DomainError("ensembles must be EnsembleParams")
    return ensembles


def denominator(cavity: CavityParams, ensembles, omega):
    """``D(omega) = omega - omega_0 + i kappa/2 - sum W(omega)``."""
    omega = np.asarray(omega, dtype=complex)
    out = omega - cavity.complex_frequency
    for ens in as_ensembles(ensembles):
        out = out - susceptibility(ens, omega)
    return complex(out) if out.ndim == 0 else out


def _denominator_derivative(cavity, ensembles, omega):
    out = np.ones_like(np.asarray(omega, dtype=complex))
    for ens in ensembles:
        out = out - susceptibility_derivative(ens, omega)
    return complex(out) if np.ndim(out) == 0 else out


def transmission(cavity: CavityParams, ensembles, omega):
    """Complex transmission ``t = (kappa/2i) / D(omega)``.

    A lossless cavity (``kappa == 0``) does not couple to the ports and gives
    ``t = 0``; so does a probe sitting exactly on a lossless zero-width
    ensemble, where ``W`` diverges.
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.asarray(denominator(cavity, ensembles, omega))
        t = np.where(np.isfinite(d) & (d != 0) & (cavity.linewidth > 0),
                     -0.5j * cavity.linewidth / np.where(d == 0, 1.0, d), 0.0)
    return complex(t) if t.ndim == 0 else t


def reflection(cavity: CavityParams, ensembles, omega):
    """Complex reflection ``r = 1 + t``."""
    return 1.0 + transmission(cavity, ensembles, omega)


@dataclass(frozen=True)
class TransmissionSpectrum:
    probe_grid: np.ndarray
    amplitude: np.ndarray
    cavity: CavityParams = field(default_factory=CavityParams)
    ensembles: tuple = ()

    def __post_init__(self):
        grid = np.asarray(self.probe_grid, dtype=float)
        amp = np.asarray(self.amplitude, dtype=complex)
        if grid.shape != amp.shape or grid.ndim != 1:
            raise DomainError("grid and amplitude must be 1-D of equal length")
        if np.any(np.diff(grid) <= 0):
            raise DomainError("probe grid must be strictly increasing")
        object.__setattr__(self, "probe_grid", grid)
        object.__setattr__(self, "amplitude", amp)
        object.__setattr__(self, "ensembles", as_ensembles(self.ensembles))

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def __len__(self) -> int:
        return self.probe_grid.size


def spectrum(cavity: CavityParams, ensembles, omega_min: float, omega_max: float,
             n_points: int) -> TransmissionSpectrum:
    """Transmission sampled on ``n_points`` equally spaced probe frequencies."""
    if n_points < 2 or not omega_min < omega_max:
        raise DomainError("need n_points >= 2 and omega_min < omega_max")
    ensembles = as_ensembles(ensembles)
    grid = np.linspace(omega_min, omega_max, int(n_points))
    amp = map_chunks(lambda w: transmission(cavity, ensembles, w), grid)
    return TransmissionSpectrum(grid, amp, cavity, ensembles)


@dataclass(frozen=True)
class PoleSet:
    """Transmission poles.

    ``poles`` use the convention where the imaginary part is the positive
    half width: ``lambda = conj(root of D)``. ``residual`` is the largest
    ``|D|`` at the converged roots.
    """

    poles: np.ndarray
    residual: float

    @property
    def roots(self) -> np.ndarray:
        """Zeros of D, i.e. the complex eigenfrequencies (Im <= 0)."""
        return np.conj(self.poles)

    def __len__(self) -> int:
        return self.poles.size


def dirac_poles(cavity: CavityParams, ensembles) -> np.ndarray:
    """Poles of the homogeneous (zero-width) limit, from the eigenvalues of
    the small effective Hamiltonian with one bright mode per ensemble."""
    ensembles = [e for e in as_ensembles(ensembles) if e.coupling > 0]
    n = len(ensembles) + 1
    h = np.zeros((n, n), dtype=complex)
    h[0, 0] = cavity.complex_frequency
    for k, e in enumerate(ensembles, start=1):
        h[0, k] = 1j * e.coupling
        h[k, 0] = -1j * e.coupling
        h[k, k] = e.center - 0.5j * e.homogeneous_width
    return np.sort_complex(np.conj(np.linalg.eigvals(h)))


def find_poles(cavity: CavityParams, ensembles, seeds=None, *, max_iter: int = 200,
               tol: float = 1e-13) -> PoleSet:
    """Locate zeros of D(omega) by Newton iteration.

    ``seeds`` are complex guesses in the positive-half-width convention; the
    default uses the zero-width poles. Newton steps use the analytic
    derivative of the closed-form susceptibility, with a secant step when the
    derivative vanishes.
    """
    ensembles = as_ensembles(ensembles)
    if seeds is None:
        seeds = dirac_poles(cavity, ensembles)
    seeds = np.atleast_1d(np.asarray(seeds, dtype=complex))
    if seeds.size == 0:
        raise DomainError("need at least one seed")
    for e in ensembles:
        if e.kind is Kind.RECTANGULAR and e.homogeneous_width == 0 and e.fwhm > 0:
            inside = np.abs(seeds.real - e.center) <= 0.5 * e.fwhm
            if inside.any():
                raise DomainError(
                    f"seed {seeds[inside][0]} lies on the branch cut of a rectangular "
                    "ensemble with zero homogeneous width")
    scale = max([cavity.linewidth] + [max(e.coupling, e.fwhm, e.homogeneous_width)
                                      for e in ensembles] + [1e-300])

    roots = []
    residual = 0.0
    for seed in seeds:
        z = np.conj(seed)
        d = denominator(cavity, ensembles, z)
        z_prev, d_prev = None, None
        for _ in range(max_iter):
            dp = _denominator_derivative(cavity, ensembles, z)
            if abs(dp) > 1e-300 and np.isfinite(dp):
                step = d / dp
            elif z_prev is not None and d != d_prev:
                step = d * (z - z_prev) / (d - d_prev)
            else:
                raise ConvergenceError(f"zero derivative while refining seed {seed}")
            z_prev, d_prev = z, d
            z = z - step
            d = denominator(cavity, ensembles, z)
            if not np.isfinite(d):
                raise ConvergenceError(f"Newton iteration from seed {seed} left the domain")
            if abs(step) <= tol * max(abs(z), scale):
                break
        else:
            raise ConvergenceError(f"Newton iteration from seed {seed} did not converge "
                                   f"in {max_iter} iterations")
        residual = max(residual, abs(d))
        if all(abs(z - r) > 1e-8 * scale for r in roots):
            roots.append(z)
    poles = np.conj(np.array(roots))
    order = np.argsort(poles.real, kind="stable")
    return PoleSet(poles[order], residual)


def _resonant(ens: EnsembleParams, cavity: CavityParams):
    if ens.center != cavity.frequency:
        raise DomainError("formula assumes the ensemble is resonant with the cavity")


def predicted_width(ens: EnsembleParams, cavity: CavityParams) -> float:
    """Polariton FWHM ``(kappa + gamma + 2 pi rho(Omega) Omega**2) / 2``.

    Valid for a resonant ensemble in the regime ``Omega >> Delta``.
    """
    _resonant(ens, cavity)
    rho = 0.0 if ens.is_dirac or ens.coupling == 0 else density(
        ens.distribution, ens.center + ens.coupling)
    return 0.5 * (cavity.linewidth + ens.homogeneous_width
                  + 2.0 * math.pi * rho * ens.coupling**2)


def perturbative_poles(ens: EnsembleParams, cavity: CavityParams) -> np.ndarray:
    """Second-order (in Delta/Omega) pole pair, positive-half-width convention.

    Raises ``DomainError`` for the Lorentzian, whose second moment diverges.
    """
    _resonant(ens, cavity)
    o = ens.coupling
    if o == 0:
        raise DomainError("perturbative poles need a nonzero coupling")
    mu2 = moment(ens.distribution, 2)
    rho = 0.0 if ens.is_dirac else density(ens.distribution, ens.center + o)
    kappa, gamma = cavity.linewidth, ens.homogeneous_width
    shift = ((kappa + 2.0 * math.pi * rho * o**2 - gamma) / (4.0 * o)) ** 2
    re = o * np.sqrt(complex(1.0 + mu2 / o**2 - shift))
    half = 0.5 * predicted_width(ens, cavity)
    return cavity.frequency + np.array([-re, re]) + 1j * half


class Peak(NamedTuple):
    position: float
    fwhm: float
    height: float
    at_boundary: bool = False


def _crossing(grid, power, i, half, step):
    j = i
    n = grid.size
    while 0 <= j + step < n and power[j + step] > half:
        j += step
    k = j + step
    if not 0 <= k < n:
        return None
    # linear interpolation between j (above) and k (below)
    f = (power[j] - half) / (power[j] - power[k])
    return grid[j] + f * (grid[k] - grid[j])


def extract_fwhm(spec: TransmissionSpectrum, prominence: float = 1e-3) -> list[Peak]:
    """Peaks of ``|t|**2`` and their full widths at half maximum.

    A local maximum is kept when its prominence is at least ``prominence``
    times the largest value. Half-maximum crossings are linearly
    interpolated. A peak whose crossing falls off the grid is returned with
    ``at_boundary=True`` and a width doubled from the resolved side (or NaN).
    """
    power = spec.power
    grid = spec.probe_grid
    top = float(power.max()) if power.size else 0.0
    if top <= 0:
        return []
    idx, _ = find_peaks(power, prominence=prominence * top)
    out = []
    for i in idx:
        half = 0.5 * power[i]
        left = _crossing(grid, power, i, half, -1)
        right = _crossing(grid, power, i, half, +1)
        if left is not None and right is not None:
            out.append(Peak(float(grid[i]), float(right - left), float(power[i])))
        else:
            side = left if left is not None else right
            width = float("nan") if side is None else 2.0 * abs(grid[i] - side)
            out.append(Peak(float(grid[i]), width, float(power[i]), True))
    return out


def measure_peaks(cavity: CavityParams, ensembles, omega_min: float, omega_max: float,
                  n_coarse: int = 20001, n_zoom: int = 4001,
                  prominence: float = 1e-3) -> list[Peak]:
    """Locate peaks on a coarse spectrum, then re-measure each on a zoomed grid.

    The zoomed window spans eight coarse widths (at least eight coarse grid
    steps) around each peak so that every width is resolved by hundreds of
    points.
    """
    ensembles = as_ensembles(ensembles)
    coarse = spectrum(cavity, ensembles, omega_min, omega_max, n_coarse)
    dx = coarse.probe_grid[1] - coarse.probe_grid[0]
    out = []
    for peak in extract_fwhm(coarse, prominence):
        pos, width = peak.position, peak.fwhm
        for _ in range(3):
            w = max(width if np.isfinite(width) else 0.0, 8 * dx)
            lo, hi = pos - 4 * w, pos + 4 * w
            zoom = spectrum(cavity, ensembles, lo, hi, n_zoom)
            found = extract_fwhm(zoom, prominence=1e-6)
            if not found:
                break
            best = min(found, key=lambda p: abs(p.position - pos))
            pos, width = best.position, best.fwhm
            dx = (hi - lo) / (n_zoom - 1)
            if not best.at_boundary and width >= 200 * dx:
                break
        out.append(best if found else peak)
    return out
