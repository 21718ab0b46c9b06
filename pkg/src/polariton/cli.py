"""Command-line front end.

Each run resolves a flat configuration (defaults < config file < flags),
validates it, computes one mode and writes a CSV plus a JSON sidecar with
the resolved configuration, the library version and summary scalars.

Config file grammar: one ``key = value`` per line, ``#`` starts a comment,
keys are the long flag names with or without dashes (``omega-c`` or
``omega_c``). A JSON file is also accepted; a sidecar written by a previous
run can be fed back directly, which reproduces that run.

CSV columns per mode (frequencies in rad/us relative to the cavity, times
in us)::

    spectrum     omega, re_t, im_t, abs_t_sq
    poles        re_pole, im_pole
    dynamics     t, re_alpha1, im_alpha1, abs_alpha1_sq  [, abs_alpha1_sq_oracle]
    survival     t, probability  [, probability_oracle]
    memory-scan  delta, fidelity
    dark-state   omega, abs_t_sq
    validate     check, value, tolerance, passed

For ``dynamics`` and ``survival`` the grid flags describe the time grid.
Exit status: 0 success, 1 invalid configuration, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .ensemble import CavityParams, EnsembleParams, Kind, SpectralDistribution
from .errors import ConvergenceError, DomainError, SpectralLeakageError

MODES = ("spectrum", "poles", "dynamics", "survival", "memory-scan", "dark-state", "validate")
FMT = "%.17g"


@dataclass
class ScenarioConfig:
    mode: str = "spectrum"
    dist: str = "gaussian"
    omega_c: float = 0.0
    delta_fwhm: float = 1.0
    coupling: float = 3.5
    gamma: float = 1e-4
    kappa: float = 0.1
    detuning: float | None = None
    tau: float | None = None
    grid_min: float | None = None
    grid_max: float | None = None
    grid_points: int | None = None
    oracle_n: int = 0
    out: str | None = None
    emit_plot: bool = False

    def validate(self) -> None:
        """Raise ``DomainError`` naming the first offending field."""
        if self.mode not in MODES:
            raise DomainError(f"mode: expected one of {', '.join(MODES)}, got {self.mode!r}")
        try:
            self.dist = Kind.parse(self.dist).value
        except DomainError as exc:
            raise DomainError(f"dist: {exc}") from None
        for name in ("omega_c", "delta_fwhm", "coupling", "gamma", "kappa"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name}: must be finite")
            if name != "omega_c" and v < 0:
                raise DomainError(f"{name}: must be >= 0, got {v}")
        for name in ("detuning", "tau", "grid_min", "grid_max"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise DomainError(f"{name}: must be finite")
        if self.tau is not None and self.tau < 0:
            raise DomainError(f"tau: must be >= 0, got {self.tau}")
        if self.grid_points is not None and self.grid_points < 2:
            raise DomainError(f"grid_points: need at least 2, got {self.grid_points}")
        if (self.grid_min is not None and self.grid_max is not None
                and not self.grid_max > self.grid_min):
            raise DomainError("grid_max: must exceed grid_min")
        if self.oracle_n < 0 or self.oracle_n == 1:
            raise DomainError(f"oracle_n: must be 0 (off) or >= 2, got {self.oracle_n}")
        if self.mode in ("survival", "memory-scan", "dark-state") and self.coupling == 0:
            raise DomainError(f"coupling: mode {self.mode} needs a positive coupling")
        if self.mode == "memory-scan" and self.tau is None and self.kappa == 0:
            raise DomainError("tau: required when kappa is 0")

    def cavity(self) -> CavityParams:
        return CavityParams(0.0, self.kappa)

    def ensemble(self, center: float | None = None) -> EnsembleParams:
        c = self.omega_c if center is None else center
        return EnsembleParams(self.coupling, self.gamma,
                              SpectralDistribution(self.dist, c, self.delta_fwhm))


_TYPES = {f.name: f.type for f in fields(ScenarioConfig)}


def _coerce(key: str, value):
    kind = _TYPES[key]
    if value is None or (isinstance(value, str) and value.strip().lower() in ("", "none", "null")):
        if "None" in kind:
            return None
        raise DomainError(f"{key}: a value is required")
    try:
        if kind.startswith("float"):
            return float(value)
        if kind.startswith("int"):
            f = float(value)
            if f != int(f):
                raise ValueError
            return int(f)
        if kind == "bool":
            if isinstance(value, bool):
                return value
            s = str(value).strip().lower()
            if s in ("1", "true", "yes", "on"):
                return True
            if s in ("0", "false", "no", "off"):
                return False
            raise ValueError
    except (TypeError, ValueError):
        raise DomainError(f"{key}: cannot parse {value!r}") from None
    return str(value).strip()


def _normalize_key(key: str) -> str:
    k = key.strip().lstrip("-").replace("-", "_")
    if k not in _TYPES:
        raise DomainError(f"{key}: unknown configuration key")
    return k


def read_config_file(path: str | Path) -> dict:
    """Parse a key-value text file or a JSON file (sidecars included)."""
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        if isinstance(data.get("config"), dict):
            data = data["config"]
        return {_normalize_key(k): _coerce(_normalize_key(k), v) for k, v in data.items()}
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{n}: expected 'key = value'")
        k, v = line.split("=", 1)
        key = _normalize_key(k)
        out[key] = _coerce(key, v)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polariton", description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1], formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", help="key=value or JSON configuration file")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--dist", help="gaussian, lorentzian or rect")
    p.add_argument("--omega-c", help="ensemble center relative to the cavity")
    p.add_argument("--delta-fwhm", help="inhomogeneous FWHM")
    p.add_argument("--coupling", help="collective coupling Omega")
    p.add_argument("--gamma", help="homogeneous emitter linewidth")
    p.add_argument("--kappa", help="cavity linewidth")
    p.add_argument("--detuning", help="dressed-state detuning (survival, dark-state)")
    p.add_argument("--tau", help="storage time")
    p.add_argument("--grid-min")
    p.add_argument("--grid-max")
    p.add_argument("--grid-points")
    p.add_argument("--oracle-n", help="emitters in the discrete cross-check (0 = off)")
    p.add_argument("--out", help="CSV path; the sidecar gets a .json suffix")
    p.add_argument("--emit-plot", action="store_true", default=None,
                   help="also write a matplotlib script plotting the CSV")
    return p


def resolve_config(argv=None) -> ScenarioConfig:
    args = build_parser().parse_args(argv)
    values = {}
    if args.config:
        try:
            values.update(read_config_file(args.config))
        except OSError as exc:
            raise DomainError(f"config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise DomainError(f"config: invalid JSON ({exc})") from None
    for key, raw in vars(args).items():
        if key == "config" or raw is None:
            continue
        values[key] = _coerce(key, raw)
    cfg = ScenarioConfig(**values)
    cfg.validate()
    return cfg


# --------------------------------------------------------------------------
# modes


def _grid(cfg: ScenarioConfig, lo: float, hi: float, n: int) -> np.ndarray:
    lo = lo if cfg.grid_min is None else cfg.grid_min
    hi = hi if cfg.grid_max is None else cfg.grid_max
    n = n if cfg.grid_points is None else cfg.grid_points
    if not hi > lo:
        raise DomainError("grid_max: must exceed grid_min")
    return np.linspace(lo, hi, n)


def _complex(z) -> list:
    return [float(z.real), float(z.imag)]


def _peaks(peaks) -> list:
    return [{"position": p.position, "fwhm": p.fwhm, "height": p.height,
             "at_boundary": p.at_boundary} for p in peaks]


def _run_spectrum(cfg):
    from .spectral import extract_fwhm, find_poles, spectrum

    reach = 2.0 * cfg.coupling + abs(cfg.omega_c) + 4.0 * cfg.delta_fwhm + 1.0
    w = _grid(cfg, -reach, reach, 20001)
    spec = spectrum(cfg.cavity(), [cfg.ensemble()], w[0], w[-1], w.size)
    t = spec.amplitude
    cols = {"omega": w, "re_t": t.real, "im_t": t.imag, "abs_t_sq": spec.power}
    summary = {"peaks": _peaks(extract_fwhm(spec))}
    if cfg.coupling > 0:
        summary["poles"] = [_complex(z) for z in find_poles(cfg.cavity(), [cfg.ensemble()]).poles]
    return cols, summary


def _run_poles(cfg):
    from .spectral import find_poles, predicted_width

    ps = find_poles(cfg.cavity(), [cfg.ensemble()])
    summary = {"poles": [_complex(z) for z in ps.poles], "residual": ps.residual}
    if cfg.omega_c == 0 and cfg.delta_fwhm > 0:
        summary["predicted_width"] = predicted_width(cfg.ensemble(), cfg.cavity())
    return {"re_pole": ps.poles.real, "im_pole": ps.poles.imag}, summary


def _run_dynamics(cfg):
    from .dynamics import alpha1_discrete, alpha1_laplace
    from .ensemble import sample_discrete

    t = _grid(cfg, 0.0, 20.0, 401)
    if t[0] < 0:
        raise DomainError("grid_min: times must be >= 0")
    a = alpha1_laplace(cfg.cavity(), cfg.ensemble(), t).values
    cols = {"t": t, "re_alpha1": a.real, "im_alpha1": a.imag, "abs_alpha1_sq": np.abs(a) ** 2}
    summary = {"abs_alpha1_sq_final": float(np.abs(a[-1]) ** 2)}
    if cfg.oracle_n:
        ens = cfg.ensemble()
        disc = sample_discrete(ens.distribution, ens.coupling, ens.homogeneous_width,
                               cfg.oracle_n)
        b = alpha1_discrete(cfg.cavity(), disc, t).values
        cols["abs_alpha1_sq_oracle"] = np.abs(b) ** 2
        summary["oracle_sup_difference"] = float(np.max(np.abs(a - b)))
    return cols, summary


def _run_survival(cfg):
    from .dynamics import polariton_survival

    t = _grid(cfg, 0.0, 20.0, 401)
    if t[0] < 0:
        raise DomainError("grid_min: times must be >= 0")
    ens = cfg.ensemble()
    res = polariton_survival(cfg.cavity(), ens, t, cfg.detuning)
    cols = {"t": t, "probability": res.values}
    summary = {"theta": res.info["theta"], "probability_final": float(res.values[-1])}
    if cfg.oracle_n:
        orc = polariton_survival(cfg.cavity(), ens, t, cfg.detuning, route="discrete",
                                 n_oracle=cfg.oracle_n)
        cols["probability_oracle"] = orc.values
        summary["oracle_sup_difference"] = float(np.max(np.abs(orc.values - res.values)))
    return cols, summary


def _run_memory(cfg):
    from .memory import optimize_detuning

    ens = cfg.ensemble()
    rng = None
    if cfg.grid_min is not None or cfg.grid_max is not None:
        lo = cfg.grid_min if cfg.grid_min is not None else cfg.coupling
        hi = (cfg.grid_max if cfg.grid_max is not None
              else 10.0 * cfg.coupling**2 / cfg.delta_fwhm)
        rng = (lo, hi)
    n = cfg.grid_points if cfg.grid_points is not None else 48
    tau = cfg.tau if cfg.tau is not None else 10.0 / cfg.kappa
    res = optimize_detuning(cfg.cavity(), ens, tau, rng, n_scan=n)
    summary = {"delta_opt": res.detuning, "fidelity_opt": res.fidelity, "tau": tau,
               "flat": res.flat}
    return {"delta": res.scan_detuning, "fidelity": res.scan_fidelity}, summary


def _run_dark_state(cfg):
    from .memory import (central_peak, dark_state_linewidth, dark_state_overlap,
                         two_ensemble_spectrum)

    d = cfg.detuning if cfg.detuning is not None else 0.5
    if d < 0:
        raise DomainError("detuning: must be >= 0 for the two-ensemble configuration")
    tpl = cfg.ensemble()
    reach = 2.0 * math.sqrt(2.0) * cfg.coupling + d + 4.0 * cfg.delta_fwhm
    w = _grid(cfg, -reach, reach, 20001)
    spec = two_ensemble_spectrum(cfg.cavity(), tpl, d, w[0], w[-1], w.size)
    peak = central_peak(cfg.cavity(), tpl, d)
    summary = {
        "detuning": d,
        "gamma_d": dark_state_linewidth(d, cfg.coupling, cfg.kappa, cfg.gamma),
        "photonic_weight": dark_state_overlap(d, cfg.coupling),
        "central_fwhm": None if peak is None else peak.fwhm,
    }
    return {"omega": w, "abs_t_sq": spec.power}, summary


def validation_checks() -> list[tuple[str, float, float]]:
    """Internal oracle comparisons as ``(name, value, tolerance)``."""
    from .dynamics import laplace_fano_equivalence_report
    from .susceptibility import susceptibility, susceptibility_quadrature

    checks = []
    cav = CavityParams(0.0, 0.0)
    for kind in Kind:
        ens = EnsembleParams(4.0, 0.0, SpectralDistribution(kind, 0.0, 1.0))
        rep = laplace_fano_equivalence_report(cav, ens, np.linspace(0, 20, 201))
        checks.append((f"laplace-fano {kind.value}", rep.discrepancy, 2e-2))
        checks.append((f"im alpha1(0) {kind.value}", rep.imag_alpha0, 1e-10))
        checks.append((f"spectral identity {kind.value}", rep.spectral_identity_error, 1e-10))
    for kind in Kind:
        worst = 0.0
        for gamma in (1e-4, 1e-2, 1.0):
            ens = EnsembleParams(3.5, gamma, SpectralDistribution(kind, 0.0, 1.0))
            for w in (-6.0, -3.5, -0.7, 0.0, 0.3, 3.5, 9.0):
                exact = susceptibility(ens, w)
                quad = susceptibility_quadrature(ens.distribution, 3.5, gamma, w)
                worst = max(worst, abs(exact - quad) / abs(quad))
        checks.append((f"W closed form vs quadrature {kind.value}", worst, 1e-8))
    return checks


def _run_validate(cfg):
    checks = validation_checks()
    width = max(len(c[0]) for c in checks)
    ok = True
    for name, value, tol in checks:
        passed = bool(value <= tol)
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name:<{width}}  {value:.3e} <= {tol:.0e}")
    cols = {"check": [c[0] for c in checks], "value": [c[1] for c in checks],
            "tolerance": [c[2] for c in checks],
            "passed": [int(c[1] <= c[2]) for c in checks]}
    return cols, {"all_passed": ok}


RUNNERS = {
    "spectrum": _run_spectrum,
    "poles": _run_poles,
    "dynamics": _run_dynamics,
    "survival": _run_survival,
    "memory-scan": _run_memory,
    "dark-state": _run_dark_state,
    "validate": _run_validate,
}


# --------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return FMT % float(v)


def write_csv(path: Path, cols: dict) -> None:
    names = list(cols)
    rows = zip(*(cols[n] for n in names))
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


PLOT_TEMPLATE = '''"""Plot {csv} (written by polariton {version})."""
import csv

import matplotlib.pyplot as plt

with open({csv!r}) as fh:
    rows = list(csv.reader(fh))
header, data = rows[0], rows[1:]
x = [float(r[0]) for r in data]
for j, name in enumerate(header[1:], 1):
    try:
        plt.plot(x, [float(r[j]) for r in data], label=name)
    except ValueError:
        pass
plt.xlabel(header[0])
plt.legend()
plt.savefig({png!r}, dpi=150)
'''


def run(cfg: ScenarioConfig) -> int:
    cols, summary = RUNNERS[cfg.mode](cfg)
    out = Path(cfg.out if cfg.out else f"polariton-{cfg.mode}.csv")
    write_csv(out, cols)
    sidecar = {"config": asdict(cfg), "version": __version__, "summary": summary}
    out.with_suffix(".json").write_text(json.dumps(_jsonable(sidecar), indent=2, sort_keys=True)
                                        + "\n")
    if cfg.emit_plot:
        script = PLOT_TEMPLATE.format(csv=str(out), png=str(out.with_suffix(".png")),
                                      version=__version__)
        out.with_name(out.stem + "_plot.py").write_text(script)
    if cfg.mode == "validate" and not summary["all_passed"]:
        return 2
    return 0


def main(argv=None) -> int:
    try:
        cfg = resolve_config(argv)
    except DomainError as exc:
        print(f"polariton: invalid configuration: {exc}", file=sys.stderr)
        return 1
    try:
        return run(cfg)
    except (ConvergenceError, SpectralLeakageError) as exc:
        print(f"polariton: numerical failure in {type(exc).__module__}: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"polariton: invalid configuration: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
