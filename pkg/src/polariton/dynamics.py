"""Single-excitation dynamics under the non-Hermitian effective Hamiltonian.

Three independent routes compute the same amplitudes:

* discrete: a sampled ensemble propagated with an O(N) arrowhead product;
* Laplace: the resolvent of the continuous model, known in closed form on
  the real frequency axis, inverted by FFT along a line ``Im omega = sigma``;
* Fano: the lossless cavity amplitude as the Fourier transform of the
  spectral weight ``|a(omega)|**2``.

Amplitudes follow ``psi(t) = exp(-i H t) psi(0)``. Basis order is cavity
first, then emitters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .ensemble import CavityParams, DiscreteEnsemble, EnsembleParams, Kind, density, moment
from .errors import ConvergenceError, DomainError, SpectralLeakageError
from .quadrature import gauss_kronrod
from .spectral import find_poles
from .susceptibility import susceptibility, susceptibility_derivative

__all__ = [
    "EffectiveHamiltonian",
    "TimeSeries",
    "EquivalenceReport",
    "build_heff",
    "evolve",
    "evolve_dense",
    "mixing_angle",
    "dressed_vector",
    "alpha1_discrete",
    "alpha1_laplace",
    "laplace_amplitudes",
    "alpha1_fano",
    "fano_weight",
    "polariton_survival",
    "laplace_fano_equivalence_report",
]

FFT_POINTS = 2**20
SPAN_FACTOR = 40.0
TAPER_FRACTION = 0.05
LEAKAGE_LIMIT = 1e-6


# --------------------------------------------------------------------------
# discrete route


@dataclass(frozen=True)
class EffectiveHamiltonian:
    """Arrowhead matrix ``[[w0, i g], [-i g^T, diag(w_k)]]``.

    Only the diagonal (``cavity_frequency``, ``emitter_frequencies``) and the
    border ``couplings`` are stored. Leading axes of these arrays, if any,
    index independent systems that are propagated together.
    """

    cavity_frequency: np.ndarray
    emitter_frequencies: np.ndarray
    couplings: np.ndarray

    def __post_init__(self):
        w0 = np.asarray(self.cavity_frequency, dtype=complex)
        wk = np.asarray(self.emitter_frequencies, dtype=complex)
        g = np.asarray(self.couplings, dtype=float)
        if wk.shape != g.shape or wk.shape[:-1] != w0.shape:
            raise DomainError("inconsistent arrowhead shapes")
        object.__setattr__(self, "cavity_frequency", w0)
        object.__setattr__(self, "emitter_frequencies", wk)
        object.__setattr__(self, "couplings", g)

    @property
    def dim(self) -> int:
        return self.couplings.shape[-1] + 1

    def matvec(self, psi: np.ndarray) -> np.ndarray:
        """``H @ psi`` in O(N); ``psi`` has shape ``(..., N + 1)``."""
        a = psi[..., 0]
        b = psi[..., 1:]
        out = np.empty_like(psi)
        out[..., 0] = self.cavity_frequency * a + 1j * np.sum(self.couplings * b, axis=-1)
        out[..., 1:] = self.emitter_frequencies * b - 1j * self.couplings * a[..., None]
        return out

    def dense(self) -> np.ndarray:
        if self.couplings.ndim != 1:
            raise DomainError("dense form only for a single system")
        n = self.dim
        h = np.zeros((n, n), dtype=complex)
        h[0, 0] = self.cavity_frequency
        h[0, 1:] = 1j * self.couplings
        h[1:, 0] = -1j * self.couplings
        h[np.arange(1, n), np.arange(1, n)] = self.emitter_frequencies
        return h

    def shifted(self, omega: float) -> "EffectiveHamiltonian":
        """Same matrix minus ``omega`` times the identity."""
        return EffectiveHamiltonian(self.cavity_frequency - omega,
                                    self.emitter_frequencies - omega, self.couplings)


def build_heff(cavity: CavityParams, ens: DiscreteEnsemble) -> EffectiveHamiltonian:
    wk = ens.frequencies - 0.5j * ens.homogeneous_width
    return EffectiveHamiltonian(np.asarray(cavity.complex_frequency), wk, ens.couplings)


def evolve(h: EffectiveHamiltonian, initial, times, *, rtol: float = 1e-10,
           atol: float = 1e-12) -> np.ndarray:
    """Propagate ``i d(psi)/dt = H psi`` with an adaptive 8th-order Runge-Kutta.

    The integration runs in a frame rotating at the real part of the cavity
    frequency, which only changes a global phase that is restored on output.

    Returns
    -------
    ndarray
        ``psi(t)`` for each time, shape ``(len(times),) + initial.shape``.
    """
    psi0 = np.asarray(initial, dtype=complex)
    if psi0.shape[-1] != h.dim:
        raise DomainError(f"initial vector has dimension {psi0.shape[-1]}, expected {h.dim}")
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(times < 0) or np.any(np.diff(times) < 0):
        raise DomainError("times must be a non-decreasing 1-D sequence of non-negative values")
    ref = float(np.mean(h.cavity_frequency.real))
    hs = h.shifted(ref)
    shape = psi0.shape

    def rhs(_, y):
        return (-1j * hs.matvec(y.reshape(shape))).ravel()

    if times.size == 0:
        return np.empty((0,) + shape, dtype=complex)
    t_end = float(times[-1])
    if t_end == 0:
        return np.broadcast_to(psi0, (times.size,) + shape).copy()
    sol = solve_ivp(rhs, (0.0, t_end), psi0.ravel(), method="DOP853", t_eval=times,
                    rtol=rtol, atol=atol)
    if sol.status != 0:
        reached = sol.t[-1] if sol.t.size else 0.0
        raise ConvergenceError(f"time integration failed at t={reached:.6g}: {sol.message}")
    out = sol.y.T.reshape((times.size,) + shape)
    phase = np.exp(-1j * ref * times)
    return out * phase.reshape((-1,) + (1,) * len(shape))


def evolve_dense(h: EffectiveHamiltonian, initial, times) -> np.ndarray:
    """Matrix-exponential propagation; a test oracle for ``dim <= 65``."""
    if h.dim > 65:
        raise DomainError("dense propagation is limited to 64 emitters")
    hd = h.dense()
    psi0 = np.asarray(initial, dtype=complex)
    return np.array([scipy.linalg.expm(-1j * hd * t) @ psi0 for t in np.asarray(times, float)])


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    label: str = ""
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values)
        if t.shape != v.shape:
            raise DomainError("times and values must have equal shapes")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.times.size


def mixing_angle(detuning: float, coupling: float) -> float:
    """``theta`` in (0, pi) with ``cot(theta) = detuning / (2 coupling)``."""
    if not coupling > 0:
        raise DomainError("mixing angle needs a positive coupling")
    return math.atan2(2.0 * coupling, detuning)


def dressed_vector(ens: DiscreteEnsemble, theta: float) -> np.ndarray:
    """``cos(theta/2) |0,S> + i sin(theta/2) |1,G>`` for a discrete ensemble."""
    v = np.empty(len(ens) + 1, dtype=complex)
    v[0] = 1j * math.sin(0.5 * theta)
    v[1:] = math.cos(0.5 * theta) * ens.symmetric_state()
    return v


def alpha1_discrete(cavity: CavityParams, ens: DiscreteEnsemble, times, **kw) -> TimeSeries:
    h = build_heff(cavity, ens)
    psi0 = np.zeros(h.dim, dtype=complex)
    psi0[0] = 1.0
    psi = evolve(h, psi0, times, **kw)
    return TimeSeries(times, psi[:, 0], "alpha1", {"route": "discrete", "n": len(ens)})


# --------------------------------------------------------------------------
# Laplace route
#
# With D = E - W, E = omega - omega_0 + i kappa/2 and W the susceptibility,
# the one-sided Fourier transforms F(omega) = int_0^inf alpha(t) e^{i omega t}
# of the matrix elements in the (cavity, bright state) basis are
#   <1|U|1> : i / D
#   <S|U|S> : i W E / (Omega^2 D)
#   <S|U|1> : W / (Omega D)   and   <1|U|S> = -<S|U|1>.


def _transforms(d, w, e, coupling):
    return {
        "11": 1j / d,
        "SS": 1j * w * e / (coupling**2 * d),
        "S1": w / (coupling * d),
        "1S": -w / (coupling * d),
    }


def _reference_model(cavity: CavityParams, ens: EnsembleParams):
    """Small discrete ensemble whose susceptibility matches W at large
    detuning (same weight, damping and second moment).

    The Lorentzian maps exactly onto one emitter of width gamma + Delta.
    """
    gamma = ens.homogeneous_width
    if ens.is_dirac:
        w, g, width = [ens.center], [ens.coupling], gamma
    elif ens.kind is Kind.LORENTZIAN:
        w, g, width = [ens.center], [ens.coupling], gamma + ens.fwhm
    else:
        a = math.sqrt(moment(ens.distribution, 2))
        w = [ens.center - a, ens.center + a]
        g = [ens.coupling / math.sqrt(2.0)] * 2
        width = gamma
    return DiscreteEnsemble(np.array(w), np.array(g), width)


def _reference_amplitudes(cavity, ref: DiscreteEnsemble, times, components):
    h = build_heff(cavity, ref).dense()
    n = h.shape[0]
    s = np.zeros(n, dtype=complex)
    s[1:] = ref.symmetric_state()
    c = np.zeros(n, dtype=complex)
    c[0] = 1.0
    vecs = {"1": c, "S": s}
    lam, v = np.linalg.eig(h)
    times = np.asarray(times, dtype=float)
    if np.linalg.cond(v) < 1e8:
        vinv = np.linalg.inv(v)
        ev = np.exp(-1j * np.outer(times, lam))
        out = {}
        for comp in components:
            bra, ket = vecs[comp[0]], vecs[comp[1]]
            left = bra.conj() @ v
            right = vinv @ ket
            out[comp] = ev @ (left * right)
        return out
    props = [scipy.linalg.expm(-1j * h * t) for t in times]
    return {comp: np.array([vecs[comp[0]].conj() @ p @ vecs[comp[1]] for p in props])
            for comp in components}


def _taper(n: int) -> np.ndarray:
    w = np.ones(n)
    m = max(1, int(TAPER_FRACTION * n))
    ramp = 0.5 * (1.0 - np.cos(np.pi * (np.arange(m) + 0.5) / m))
    w[:m] = ramp
    w[-m:] = ramp[::-1]
    return w


def laplace_amplitudes(cavity: CavityParams, ens: EnsembleParams, times, components=("11",),
                       *, n_points: int = FFT_POINTS, half_span: float | None = None,
                       center: float | None = None, combine=None) -> dict:
    """Matrix elements of ``exp(-i H t)`` for the continuous model.

    ``components`` are keys among ``"11"`` (cavity), ``"SS"`` (bright state),
    ``"S1"`` and ``"1S"``. If ``combine`` is given, it maps a dict of
    transforms to a single transform and its inverse is returned under
    ``"combined"`` instead.

    The inversion samples the transform on ``omega + i sigma`` over a window
    of half width ``half_span`` (default 40 max(Omega, Delta, kappa)) with
    ``n_points`` nodes, after subtracting the exactly solvable transform of a
    moment-matched small reference ensemble. The window period ``2 pi /
    d(omega)`` must be at least ten times the largest requested time, and
    ``sigma = 30 / period`` bounds the wrap-around error by ``exp(-30)``.

    Raises
    ------
    SpectralLeakageError
        If the times exceed the allowed range for the grid, or if the
        truncated tail of the residual transform could change the result by
        more than 1e-6.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or np.any(times < 0):
        raise DomainError("times must be a 1-D array of non-negative values")
    coupling = ens.coupling
    if coupling == 0:
        raise DomainError("laplace_amplitudes needs a nonzero coupling; the bare "
                          "cavity is exp(-i w0 t)")
    if half_span is None:
        half_span = SPAN_FACTOR * max(coupling, ens.fwhm, cavity.linewidth)
    detuning = ens.center - cavity.frequency
    if center is None:
        center = (0.5 * (ens.center + cavity.frequency) if abs(detuning) < 0.5 * half_span
                  else ens.center)
    domega = 2.0 * half_span / n_points
    period = 2.0 * math.pi / domega
    t_max = float(times.max()) if times.size else 0.0
    if t_max > 0.1 * period:
        raise SpectralLeakageError(
            f"t={t_max:.4g} exceeds a tenth of the grid period {period:.4g}; "
            "use more points or a narrower window")
    sigma = 30.0 / period

    ref = _reference_model(cavity, ens)
    k = np.arange(n_points) - n_points // 2
    x = center + k * domega
    z = x + 1j * sigma
    e = z - cavity.complex_frequency
    w = susceptibility(ens, z)
    w_ref = ref.susceptibility(z)
    f = _transforms(e - w, w, e, coupling)
    f_ref = _transforms(e - w_ref, w_ref, e, coupling)
    if combine is not None:
        residuals = {"combined": combine(f) - combine(f_ref)}
        ref_parts = _reference_amplitudes(cavity, ref, times, ("11", "SS", "S1", "1S"))
        ref_time = {"combined": combine(ref_parts)}
    else:
        residuals = {c: f[c] - f_ref[c] for c in components}
        ref_time = _reference_amplitudes(cavity, ref, times, components)

    taper = _taper(n_points)
    edge = max(1, int(TAPER_FRACTION * n_points))
    out = {}
    for key, r in residuals.items():
        tail = float(max(np.abs(r[:edge]).max(), np.abs(r[-edge:]).max()))
        leak = tail * half_span / math.pi
        if leak > LEAKAGE_LIMIT:
            raise SpectralLeakageError(
                f"residual transform does not decay inside the window (tail estimate "
                f"{leak:.2e}); increase half_span")
        r = r * taper
        if times.size <= 8:
            vals = np.array([np.sum(r * np.exp(-1j * x * t)) for t in times])
            vals = vals * domega / (2 * math.pi) * np.exp(sigma * times)
        else:
            dt = period / n_points
            n_keep = min(n_points, int(math.ceil(t_max / dt)) + 4)
            grid_t = dt * np.arange(n_keep)
            # demodulated so that the spline sees a slowly varying signal
            spec = np.fft.fft(r)[:n_keep] * np.exp(-1j * (x[0] - center) * grid_t)
            spec *= domega / (2 * math.pi) * np.exp(sigma * grid_t)
            spline_re = CubicSpline(grid_t, spec.real)
            spline_im = CubicSpline(grid_t, spec.imag)
            vals = (spline_re(times) + 1j * spline_im(times)) * np.exp(-1j * center * times)
        out[key] = ref_time[key] + vals
    return out


def alpha1_laplace(cavity: CavityParams, ens: EnsembleParams, times, **kw) -> TimeSeries:
    """Cavity amplitude ``<1,G| exp(-i H t) |1,G>`` of the continuous model."""
    times = np.asarray(times, dtype=float)
    if ens.coupling == 0:
        vals = np.exp(-1j * cavity.complex_frequency * times)
    else:
        vals = laplace_amplitudes(cavity, ens, times, ("11",), **kw)["11"]
    return TimeSeries(times, vals, "alpha1", {"route": "laplace"})


# --------------------------------------------------------------------------
# Fano route


def fano_weight(cavity: CavityParams, ens: EnsembleParams, omega):
    """Lossless spectral weight ``|a|^2 = Omega^2 rho / |omega - w0 - W|^2``."""
    lossless = ens.replace(homogeneous_width=0.0)
    omega = np.asarray(omega, dtype=float)
    d = omega - cavity.frequency - susceptibility(lossless, omega)
    return ens.coupling**2 * density(ens.distribution, omega) / np.abs(d) ** 2


def _bound_states(cavity: CavityParams, ens: EnsembleParams):
    """Real eigenfrequencies outside a rectangular support and their cavity
    weights ``1 / (1 - W'(E))``."""
    lossless = ens.replace(homogeneous_width=0.0)
    half = 0.5 * ens.fwhm
    o2 = ens.coupling**2

    def c(w):
        return (w - cavity.frequency - susceptibility(lossless, w)).real

    out = []
    reach = abs(cavity.frequency - ens.center) + ens.coupling + ens.fwhm + 1.0
    for sgn in (1.0, -1.0):
        # C runs monotonically from -inf (+inf) at the upper (lower) edge
        eps = half * 1e-12
        a = ens.center + sgn * (half + eps)
        b = ens.center + sgn * (half + reach)
        while np.sign(c(a)) == np.sign(c(b)):
            eps *= 1e-3
            if eps < 1e-300:
                break
            a = ens.center + sgn * (half + eps)
        if np.sign(c(a)) == np.sign(c(b)):
            continue
        e = brentq(c, min(a, b), max(a, b), xtol=1e-15 * max(1.0, abs(b)), rtol=1e-15,
                   maxiter=500)
        x = e - ens.center
        wprime = o2 / ens.fwhm * (1.0 / (x + half) - 1.0 / (x - half))
        out.append((e, 1.0 / (1.0 - wprime)))
    return sorted(out)


def alpha1_fano(cavity: CavityParams, ens: EnsembleParams, times, *,
                rtol: float = 1e-9) -> TimeSeries:
    """Lossless cavity amplitude ``int |a(w)|^2 exp(-i w t) dw``.

    Cavity and emitter losses are ignored. Narrow polariton lines, located
    from the poles of the lossless transmission, are integrated in the
    variable ``u = arctan((w - p)/h)`` so that each line is smooth; the rest
    of the real line is mapped onto a finite interval with a tangent map.
    For a rectangular ensemble the spectrum is the continuum inside the
    support plus two bound states outside, each contributing its residue
    ``1 / (1 - W'(E))``.

    ``info["norm"]`` is the total spectral weight (one for a complete basis).
    """
    times = np.asarray(times, dtype=float)
    o = ens.coupling
    w0 = cavity.frequency
    if o == 0:
        return TimeSeries(times, np.exp(-1j * w0 * times), "alpha1",
                          {"route": "fano", "norm": 1.0})
    if ens.is_dirac:
        raise DomainError("the Fano route needs a continuous distribution (fwhm > 0)")
    lossless_cav = CavityParams(w0, 0.0)
    tt = np.concatenate([[0.0], times])

    def weight_times(w):
        wt = fano_weight(lossless_cav, ens, w)
        return wt[:, None] * np.exp(-1j * np.outer(w, tt))

    scale = max(o, ens.fwhm)
    bound = []
    if ens.kind is Kind.RECTANGULAR:
        lo, hi = ens.center - 0.5 * ens.fwhm, ens.center + 0.5 * ens.fwhm
        val, _ = gauss_kronrod(weight_times, lo, hi, points=[ens.center], rtol=rtol,
                               atol=1e-13)
        bound = _bound_states(lossless_cav, ens)
        for e, zres in bound:
            val = val + zres * np.exp(-1j * e * tt)
    else:
        lossless = ens.replace(homogeneous_width=0.0)
        poles = find_poles(lossless_cav, lossless).poles
        lines = [(p.real, abs(p.imag)) for p in poles if abs(p.imag) < 0.05 * ens.fwhm]
        lines.sort()
        windows = []
        for i, (p, h) in enumerate(lines):
            reach = 0.25 * ens.fwhm
            if i > 0:
                reach = min(reach, 0.5 * (p - lines[i - 1][0]))
            if i + 1 < len(lines):
                reach = min(reach, 0.5 * (lines[i + 1][0] - p))
            windows.append((p, max(h, 1e-300), reach))
        val = 0.0
        s = scale
        c0 = ens.center

        def phi_of(w):
            return math.atan((w - c0) / s)

        def outer(phi):
            w = c0 + s * np.tan(phi)
            return weight_times(w) * (s / np.cos(phi) ** 2)[:, None]

        # Lorentzian tails carry |a|^2 ~ O^2 D / (2 pi w^4); cut where the
        # remaining weight is below 1e-10 instead of chasing the oscillation
        # to infinity
        phi_lim = 0.5 * math.pi
        if ens.kind is Kind.LORENTZIAN:
            cut = (o**2 * ens.fwhm / (3 * math.pi * 1e-10)) ** (1 / 3)
            cut += abs(w0 - c0) + o
            phi_lim = math.atan(cut / s)
        edges = [-phi_lim]
        for p, h, reach in windows:
            edges += [phi_of(p - reach), phi_of(p + reach)]

            def local(u, p=p, h=h):
                w = p + h * np.tan(u)
                return weight_times(w) * (h / np.cos(u) ** 2)[:, None]

            umax = math.atan(reach / h)
            part, _ = gauss_kronrod(local, -umax, umax, points=[0.0], rtol=rtol, atol=1e-13)
            val = val + part
        edges.append(phi_lim)
        for a, b in zip(edges[0::2], edges[1::2]):
            part, _ = gauss_kronrod(outer, a, b, points=[phi_of(c0), phi_of(w0)],
                                    rtol=rtol, atol=1e-13)
            val = val + part
    info = {"route": "fano", "norm": float(val[0].real), "bound_states": bound}
    return TimeSeries(times, np.asarray(val[1:]), "alpha1", info)


# --------------------------------------------------------------------------
# polariton survival


def polariton_survival(cavity: CavityParams, ens: EnsembleParams, times,
                       detuning: float | None = None, *, route: str = "laplace",
                       n_oracle: int = 4000, span: float = 12.0, **kw) -> TimeSeries:
    """Probability ``|<psi|exp(-i H t)|psi>|^2`` of staying in the dressed state.

    ``psi = cos(theta/2)|0,S> + i sin(theta/2)|1,G>`` with
    ``cot(theta) = detuning / (2 Omega)``. ``detuning`` defaults to
    ``ens.center - cavity.frequency``; with that choice ``psi`` is the upper
    dressed eigenstate of the zero-width model.

    ``route`` is ``"laplace"`` (continuous model) or ``"discrete"`` (sampled
    ensemble with ``n_oracle`` emitters over ``span`` FWHMs).
    """
    times = np.asarray(times, dtype=float)
    if detuning is None:
        detuning = ens.center - cavity.frequency
    theta = mixing_angle(detuning, ens.coupling)
    s, c = math.sin(0.5 * theta), math.cos(0.5 * theta)
    if route == "laplace":
        def combine(f):
            return s * s * f["11"] + c * c * f["SS"] + 1j * s * c * (f["S1"] - f["1S"])

        amp = laplace_amplitudes(cavity, ens, times, combine=combine, **kw)["combined"]
    elif route == "discrete":
        from .ensemble import sample_discrete

        disc = sample_discrete(ens.distribution, ens.coupling, ens.homogeneous_width,
                               n_oracle, span)
        h = build_heff(cavity, disc)
        v = dressed_vector(disc, theta)
        psi = evolve(h, v, times, **kw)
        amp = psi @ v.conj()
    else:
        raise DomainError(f"unknown route {route!r}")
    prob = np.clip(np.abs(amp) ** 2, 0.0, None)
    return TimeSeries(times, prob, "survival",
                      {"route": route, "theta": theta, "amplitude": amp})


# --------------------------------------------------------------------------
# Laplace / Fano consistency


@dataclass(frozen=True)
class EquivalenceReport:
    discrepancy: float
    imag_alpha0: float
    spectral_identity_error: float
    laplace: TimeSeries
    fano: TimeSeries

    def __float__(self) -> float:
        return self.discrepancy


def laplace_fano_equivalence_report(cavity: CavityParams, ens: EnsembleParams, times,
                                    **kw) -> EquivalenceReport:
    """Compare the lossless cavity amplitude from the Laplace and Fano routes.

    Losses are switched off on both sides. Also checks the time-reversal
    consequences used to tie the two: ``Im alpha1(0) = 0`` and the identity
    ``Re[i/D] = pi Omega^2 rho |1/D|^2`` on a frequency grid.
    """
    lossless_cav = CavityParams(cavity.frequency, 0.0)
    lossless = ens.replace(homogeneous_width=0.0)
    times = np.asarray(times, dtype=float)
    if lossless.coupling == 0:
        vals = np.exp(-1j * cavity.frequency * times)
        lap = TimeSeries(times, vals, "alpha1", {"route": "laplace"})
    else:
        lap = alpha1_laplace(lossless_cav, lossless, times, **kw)
    fano = alpha1_fano(lossless_cav, lossless, times)
    disc = float(np.max(np.abs(lap.values - fano.values))) if times.size else 0.0
    imag0 = 0.0
    if times.size and times[0] == 0:
        imag0 = float(max(abs(lap.values[0].imag), abs(fano.values[0].imag)))
    if lossless.is_dirac or lossless.coupling == 0:
        ident = 0.0
    else:
        w = lossless.center + np.linspace(-3, 3, 2001) * max(lossless.fwhm, lossless.coupling)
        d = w - cavity.frequency - susceptibility(lossless, w)
        lhs = np.real(1j / d)
        rhs = math.pi * lossless.coupling**2 * density(lossless.distribution, w) / np.abs(d) ** 2
        ident = float(np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(lhs)), 1e-300))
    return EquivalenceReport(disc, imag0, ident, lap, fano)
