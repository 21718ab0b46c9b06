"""Cavity coupled to inhomogeneously broadened spin ensembles.

The submodules are ``ensemble`` (parameter types and densities),
``faddeeva`` and ``susceptibility`` (the collective response W),
``spectral`` (transmission, poles and line widths), ``dynamics``
(single-excitation time evolution by three independent routes) and
``memory`` (storage fidelity and the two-ensemble dark state). The most
used names are re-exported here.
"""

__version__ = "0.1.0"

from .dynamics import (alpha1_discrete, alpha1_fano, alpha1_laplace, build_heff, evolve,
                       laplace_fano_equivalence_report, polariton_survival)
from .ensemble import (CavityParams, DiscreteEnsemble, EnsembleParams, Kind,
                       SpectralDistribution, density, moment, sample_discrete)
from .errors import ConvergenceError, DomainError, SpectralLeakageError
from .faddeeva import faddeeva
from .memory import (MemoryScenario, dark_state_linewidth, dark_state_overlap, memory_fidelity,
                     optimize_detuning, two_ensemble_spectrum)
from .spectral import extract_fwhm, find_poles, measure_peaks, spectrum, transmission
from .susceptibility import susceptibility

__all__ = [
    "CavityParams", "EnsembleParams", "SpectralDistribution", "DiscreteEnsemble", "Kind",
    "density", "moment", "sample_discrete",
    "faddeeva", "susceptibility",
    "transmission", "spectrum", "find_poles", "extract_fwhm", "measure_peaks",
    "build_heff", "evolve", "alpha1_discrete", "alpha1_laplace", "alpha1_fano",
    "polariton_survival", "laplace_fano_equivalence_report",
    "MemoryScenario", "memory_fidelity", "optimize_detuning", "dark_state_linewidth",
    "dark_state_overlap", "two_ensemble_spectrum",
    "DomainError", "ConvergenceError", "SpectralLeakageError",
]
