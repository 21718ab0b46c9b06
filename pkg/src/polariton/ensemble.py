"""Parameter types for the cavity and the emitter ensembles.

Units: frequencies and rates are angular frequencies in rad/us and times are
in us. Rates quoted in "MHz" are used as-is in these units, so a cavity with
``linewidth=0.1`` has a 10 us energy lifetime. Only ratios matter physically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Kind",
    "SpectralDistribution",
    "EnsembleParams",
    "CavityParams",
    "DiscreteEnsemble",
    "density",
    "moment",
    "sample_discrete",
]

_LN2 = math.log(2.0)


class Kind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"
    RECTANGULAR = "rectangular"

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"rect": "rectangular", "gauss": "gaussian", "lorentz": "lorentzian"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise DomainError(f"unknown distribution kind {value!r}") from None


def _check_finite(name: str, value: float, *, nonnegative: bool = False) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    if nonnegative and value < 0:
        raise DomainError(f"{name} must be >= 0, got {value}")
    return value


@dataclass(frozen=True)
class SpectralDistribution:
    """Normalized emitter density of a given shape, center and FWHM.

    ``fwhm == 0`` is accepted as the homogeneous (Dirac) limit. The density
    itself is undefined there, but the susceptibility, transmission and
    dynamics are not.
    """

    kind: Kind = Kind.GAUSSIAN
    center: float = 0.0
    fwhm: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        object.__setattr__(self, "center", _check_finite("center", self.center))
        object.__setattr__(self, "fwhm", _check_finite("fwhm", self.fwhm, nonnegative=True))

    @property
    def is_dirac(self) -> bool:
        return self.fwhm == 0.0

    def shifted(self, center: float) -> "SpectralDistribution":
        return SpectralDistribution(self.kind, center, self.fwhm)


@dataclass(frozen=True)
class EnsembleParams:
    """Collective coupling, homogeneous linewidth and frequency distribution."""

    coupling: float = 3.5
    homogeneous_width: float = 1e-4
    distribution: SpectralDistribution = field(default_factory=SpectralDistribution)

    def __post_init__(self):
        object.__setattr__(self, "coupling",
                           _check_finite("coupling", self.coupling, nonnegative=True))
        object.__setattr__(self, "homogeneous_width",
                           _check_finite("homogeneous_width", self.homogeneous_width,
                                         nonnegative=True))
        if not isinstance(self.distribution, SpectralDistribution):
            raise DomainError("distribution must be a SpectralDistribution")

    @property
    def kind(self) -> Kind:
        return self.distribution.kind

    @property
    def center(self) -> float:
        return self.distribution.center

    @property
    def fwhm(self) -> float:
        return self.distribution.fwhm

    @property
    def is_dirac(self) -> bool:
        return self.distribution.is_dirac

    def replace(self, **changes) -> "EnsembleParams":
        """Copy with some of ``coupling``, ``homogeneous_width``, ``kind``,
        ``center`` or ``fwhm`` changed."""
        dist = self.distribution
        dist = SpectralDistribution(changes.pop("kind", dist.kind),
                                    changes.pop("center", dist.center),
                                    changes.pop("fwhm", dist.fwhm))
        return EnsembleParams(changes.pop("coupling", self.coupling),
                              changes.pop("homogeneous_width", self.homogeneous_width),
                              dist)


@dataclass(frozen=True)
class CavityParams:
    frequency: float = 0.0
    linewidth: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "frequency", _check_finite("frequency", self.frequency))
        object.__setattr__(self, "linewidth",
                           _check_finite("linewidth", self.linewidth, nonnegative=True))

    @property
    def complex_frequency(self) -> complex:
        return complex(self.frequency, -0.5 * self.linewidth)


@dataclass(frozen=True)
class DiscreteEnsemble:
    """Finite set of emitters with frequencies ``frequencies`` and couplings
    ``couplings`` (both 1-D arrays of equal length)."""

    frequencies: np.ndarray
    couplings: np.ndarray
    homogeneous_width: float = 0.0
    captured_mass: float = 1.0

    def __post_init__(self):
        w = np.asarray(self.frequencies, dtype=float).ravel()
        g = np.asarray(self.couplings, dtype=float).ravel()
        if w.shape != g.shape:
            raise DomainError("frequencies and couplings must have equal length")
        if np.any(g < 0):
            raise DomainError("couplings must be non-negative")
        object.__setattr__(self, "frequencies", w)
        object.__setattr__(self, "couplings", g)
        object.__setattr__(self, "homogeneous_width",
                           _check_finite("homogeneous_width", self.homogeneous_width,
                                         nonnegative=True))

    def __len__(self) -> int:
        return self.frequencies.size

    @property
    def collective_coupling(self) -> float:
        return float(np.sqrt(np.sum(self.couplings**2)))

    def symmetric_state(self) -> np.ndarray:
        """Normalized emitter amplitudes of the bright (symmetric) state."""
        norm = self.collective_coupling
        if norm == 0:
            raise DomainError("symmetric state undefined for zero coupling")
        return self.couplings / norm

    def susceptibility(self, omega):
        """Finite-sum susceptibility ``sum g_k**2 / (omega - omega_k + i gamma/2)``."""
        omega = np.asarray(omega, dtype=complex)
        x = omega[..., None] - self.frequencies + 0.5j * self.homogeneous_width
        out = np.sum(self.couplings**2 / x, axis=-1)
        return complex(out) if out.ndim == 0 else out


def density(dist: SpectralDistribution, omega):
    """Emitter density ``rho(omega)``, normalized to one."""
    if dist.fwhm <= 0:
        raise DomainError("density requires fwhm > 0")
    x = np.asarray(omega, dtype=float) - dist.center
    d = dist.fwhm
    if dist.kind is Kind.GAUSSIAN:
        out = math.sqrt(_LN2 / math.pi) / d * np.exp(-x * x * _LN2 / (d * d))
    elif dist.kind is Kind.LORENTZIAN:
        out = (0.5 * d / math.pi) / ((0.5 * d) ** 2 + x * x)
    else:
        # Heaviside steps take the value 1/2 on the edges
        ax = np.abs(x)
        out = np.where(ax < 0.5 * d, 1.0 / d, np.where(ax == 0.5 * d, 0.5 / d, 0.0))
    return float(out) if np.ndim(out) == 0 else out


def moment(dist: SpectralDistribution, k: int) -> float:
    """k-th moment of the density about its center.

    Odd moments vanish by symmetry. The Lorentzian has no moments of order
    two or higher and raises ``DomainError``.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {k}")
    k = int(k)
    if k == 0:
        return 1.0
    if dist.kind is Kind.LORENTZIAN and k >= 2 and not dist.is_dirac:
        raise DomainError("moment undefined: the Lorentzian has no moments of order >= 2")
    if k % 2 == 1 or dist.is_dirac:
        return 0.0
    d = dist.fwhm
    if dist.kind is Kind.GAUSSIAN:
        var = d * d / (2.0 * _LN2)
        return var ** (k // 2) * math.prod(range(k - 1, 0, -2))
    if dist.kind is Kind.RECTANGULAR:
        return (0.5 * d) ** k / (k + 1)
    raise DomainError("moment undefined")


def sample_discrete(dist: SpectralDistribution, coupling: float, homogeneous_width: float,
                    n: int, span: float = 12.0) -> DiscreteEnsemble:
    """Discretize a continuous ensemble on a midpoint-rule grid.

    Emitters sit at the midpoints of ``n`` equal cells covering
    ``center +- span*fwhm/2`` (the exact support for the rectangular kind), with
    ``g_k**2 = coupling**2 * rho(omega_k) * h``. The Dirac limit gives a single
    emitter of coupling ``coupling``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"need at least 2 emitters, got {n}")
    coupling = _check_finite("coupling", coupling, nonnegative=True)
    if dist.is_dirac:
        return DiscreteEnsemble(np.array([dist.center]), np.array([coupling]),
                                homogeneous_width, 1.0)
    if span <= 0:
        raise DomainError("span must be positive")
    half = 0.5 * dist.fwhm * (1.0 if dist.kind is Kind.RECTANGULAR else span)
    h = 2.0 * half / n
    w = dist.center - half + h * (np.arange(n) + 0.5)
    weights = density(dist, w) * h
    return DiscreteEnsemble(w, coupling * np.sqrt(weights), homogeneous_width,
                            float(np.sum(weights)))
