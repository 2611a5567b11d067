"""
Command-line front end.

Every subcommand builds a :class:`ScenarioConfig`, validates it without
running anything, then writes a CSV or JSON artifact.  Parameters come from
an optional JSON ``--config`` document; flags given on the command line win.

Exit status is 0 on success, 2 on a validation error and 3 when a numerical
accuracy check fails.  Errors are reported on stderr as one line::

    succmeas: error=<validation|accuracy> message=<text>
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from . import continuum, schwinger
from .coarse import build_partition
from .errors import AccuracyError, ValidationError, ZeroProbabilityError
from .hilbert import SpectralObservable, StateVector, pure_density, variance
from .probe import ExperimentSpec, ProbeCoupling, joint_distribution, marginal_q1
from .wigner import conditional_wigner, perturbed_state, width_count, width_stddev

__all__ = ["ScenarioConfig", "validate", "run", "main", "KINDS"]

EXIT_OK, EXIT_VALIDATION, EXIT_ACCURACY = 0, 2, 3
SIG_DIGITS = 12

KINDS = (
    "probe-sim",
    "wigner-sweep",
    "schwinger-table",
    "schwinger-dist",
    "continuum-sinc",
    "continuum-theta",
    "appendix-c",
)

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "schwinger-table": {"rows": [list(k) for k in schwinger.PAPER_TABLE], "method": "closed"},
    "schwinger-dist": {"n": 12, "delta_p": 2, "n0": 0},
    "wigner-sweep": {"n": 15, "delta_a": [0, 2, 4], "function": "identity",
                     "state": "uniform", "center_index": None, "threshold": 0.2},
    "probe-sim": {"preset": "qubit", "ratio1": 20.0, "sigma1": 1.0, "epsilon2": 1.0,
                  "sigma2": 0.5, "q1": None, "points": 401, "half_width": 4.0},
    "continuum-sinc": {"delta_p": [0.1], "sigma_p": 1.0},
    "continuum-theta": {"theta": ["pi/2", "pi/4", "0.001"], "delta_xprime": [1.0, 2.0],
                        "zero_fraction": 0.05},
    "appendix-c": {"delta_p": [0.1, 0.2, 0.4], "z": "pi"},
}

DEFAULT_TOL = {
    "schwinger-table": 0.0,
    "continuum-sinc": 1e-6,
    "appendix-c": 0.05,
}


@dataclass
class ScenarioConfig:
    """A fully resolved scenario: kind, parameters, output path and format."""

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    out: str = "-"
    fmt: str = "csv"
    tol: float = None

    def get(self, key: str):
        if key in self.params and self.params[key] is not None:
            return self.params[key]
        return DEFAULTS.get(self.kind, {}).get(key)

    @property
    def tolerance(self) -> float:
        return DEFAULT_TOL.get(self.kind, 0.0) if self.tol is None else float(self.tol)


# --------------------------------------------------------------------------
# parsing helpers

_PI_RE = re.compile(r"^\s*([-+]?[0-9.eE+-]*?)\s*\*?\s*pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_real(value) -> float:
    """Float, or a multiple of pi written as ``pi``, ``pi/4``, ``2*pi/3``."""
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    m = _PI_RE.match(text)
    if m:
        coef = m.group(1)
        coef = 1.0 if coef in ("", "+") else -1.0 if coef == "-" else float(coef)
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / den
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"cannot parse number {text!r}") from None


def _as_list(value) -> list:
    if value is None:
        return []
    if isinstance(value, str):
        return [v for v in value.split(",") if v.strip()]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _as_int(value, name: str) -> int:
    try:
        f = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be an integer") from None
    if f != int(f):
        raise ValidationError(f"{name} must be an integer")
    return int(f)


def _rows(value) -> list:
    if isinstance(value, str):
        out = []
        for item in value.split(","):
            parts = item.split(":")
            if len(parts) != 2:
                raise ValidationError(f"row {item!r} is not N:delta_p")
            out.append(parts)
        value = out
    return [(_as_int(n, "N"), _as_int(d, "delta_p")) for n, d in value]


def fmt_num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), f".{SIG_DIGITS}g")
    return str(x)


def _json_value(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), f".{SIG_DIGITS}g"))
    if isinstance(x, dict):
        return {str(k): _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return str(x)


def render_csv(header: List[str], rows: List[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_num(v) for v in r])
    return buf.getvalue()


def render_json(obj) -> str:
    return json.dumps(_json_value(obj), sort_keys=True, indent=2) + "\n"


# --------------------------------------------------------------------------
# validation

def _check_resolution(n: int, d: int) -> List[str]:
    out = []
    if n < 2:
        out.append("dimension must be an integer >= 2")
    if d < 0 or d % 2:
        out.append("resolution must be even")
    elif n >= 2 and n % (d + 1):
        out.append("dimension incompatible with resolution")
    return out


def _validate(cfg: ScenarioConfig) -> List[str]:
    v: List[str] = []
    if cfg.kind not in KINDS:
        return [f"unknown scenario kind {cfg.kind!r}"]
    if cfg.fmt not in ("csv", "json"):
        v.append("format must be csv or json")
    if cfg.tol is not None and not float(cfg.tol) >= 0:
        v.append("tol must be nonnegative")
    k = cfg.kind
    if k == "schwinger-table":
        rows = _rows(cfg.get("rows"))
        if not rows:
            v.append("no rows requested")
        for n, d in rows:
            v += _check_resolution(n, d)
        if cfg.get("method") not in ("closed", "matrix"):
            v.append("method must be closed or matrix")
    elif k == "schwinger-dist":
        n, d = _as_int(cfg.get("n"), "N"), _as_int(cfg.get("delta_p"), "delta_p")
        v += _check_resolution(n, d)
        n0 = _as_int(cfg.get("n0"), "n0")
        if not v and not 0 <= n0 < n // (d + 1):
            v.append(f"interval index {n0} out of range")
    elif k == "wigner-sweep":
        n = _as_int(cfg.get("n"), "N")
        for d in _as_list(cfg.get("delta_a")):
            v += _check_resolution(n, _as_int(d, "delta_a"))
        if cfg.get("function") not in ("identity", "square", "fourier"):
            v.append("function must be identity, square or fourier")
        if cfg.get("state") not in ("uniform", "gaussian"):
            v.append("state must be uniform or gaussian")
        c = cfg.get("center_index")
        if c is not None and not 0 <= _as_int(c, "center_index") < n:
            v.append("center index out of range")
        if not 0 < float(cfg.get("threshold")) < 1:
            v.append("threshold fraction must lie in (0, 1)")
    elif k == "probe-sim":
        if cfg.get("preset") != "qubit":
            v.append("unknown preset")
        for key in ("sigma1", "sigma2", "half_width"):
            if not float(cfg.get(key)) > 0:
                v.append(f"{key} must be positive")
        for key in ("ratio1", "epsilon2"):
            if not math.isfinite(float(cfg.get(key))):
                v.append(f"{key} must be finite")
        if _as_int(cfg.get("points"), "points") < 2:
            v.append("points must be at least 2")
    elif k == "continuum-sinc":
        for d in _as_list(cfg.get("delta_p")):
            if not parse_real(d) > 0:
                v.append("delta_p must be positive")
        if not float(cfg.get("sigma_p")) > 0:
            v.append("sigma_p must be positive")
    elif k == "continuum-theta":
        for t in _as_list(cfg.get("theta")):
            t = parse_real(t)
            if not 0 < t < math.pi or abs(math.sin(t)) <= continuum.SINGULAR_SIN:
                v.append("theta must lie in the open interval (0, pi)")
        for d in _as_list(cfg.get("delta_xprime")):
            if not parse_real(d) > 0:
                v.append("delta_xprime must be positive")
        if not 0 < float(cfg.get("zero_fraction")) < 1:
            v.append("zero_fraction must lie in (0, 1)")
    elif k == "appendix-c":
        for d in _as_list(cfg.get("delta_p")):
            if not 0 < parse_real(d) <= 0.5:
                v.append("delta_p outside the series regime (0, 0.5]")
        parse_real(cfg.get("z"))
    # unique, order preserved
    return list(dict.fromkeys(v))


def validate(cfg: ScenarioConfig) -> List[str]:
    """Every violated precondition of ``cfg``; never raises."""
    try:
        return _validate(cfg)
    except (ValidationError, TypeError, ValueError) as exc:
        return [str(exc)]


# --------------------------------------------------------------------------
# scenarios; each returns (csv header, csv rows, json object, failures)

def _schwinger_table(cfg):
    rows, failures = [], []
    tol = cfg.tolerance
    for n, d in sorted(_rows(cfg.get("rows"))):
        lhs, rhs = schwinger.robertson_table(schwinger.SchwingerSpace(n), d, cfg.get("method"))
        rows.append([n, d, lhs, rhs, bool(lhs >= rhs - tol)])
    header = ["N", "delta_p", "L", "R", "holds"]
    return header, rows, [dict(zip(header, r)) for r in rows], failures


def _schwinger_dist(cfg):
    n, d, n0 = (_as_int(cfg.get(k), k) for k in ("n", "delta_p", "n0"))
    space = schwinger.SchwingerSpace(n)
    dist = schwinger.conditional_w_q(space, d, n0)
    rows = [[int(q), w] for q, w in zip(dist.support, dist.weights)]
    width = schwinger.first_zero_width(space, d)
    obj = {"N": n, "delta_p": d, "weights": {str(int(q)): w for q, w in rows},
           "width": str(width), "width_float": float(width)}
    return ["q", "weight"], rows, obj, []


def _sweep_state(n: int, kind: str, center: int) -> StateVector:
    if kind == "uniform":
        return StateVector.normalized(np.ones(n))
    k = np.arange(n)
    return StateVector.normalized(np.exp(-0.5 * ((k - center) / (0.25 * n)) ** 2))


def _wigner_sweep(cfg):
    n = _as_int(cfg.get("n"), "N")
    center = cfg.get("center_index")
    center = n // 2 if center is None else _as_int(center, "center_index")
    levels = np.arange(1, n + 1, dtype=float)
    a = SpectralObservable.diagonal(levels, name="A")
    func = cfg.get("function")
    if func == "identity":
        b = a
    elif func == "square":
        b = a.function(np.square)
    else:
        b = schwinger.momentum_basis(schwinger.SchwingerSpace(n))
    rho = pure_density(_sweep_state(n, cfg.get("state"), center))
    thr = float(cfg.get("threshold"))
    rows = []
    for d in sorted({_as_int(x, "delta_a") for x in _as_list(cfg.get("delta_a"))}):
        cg = build_partition(a, d)
        n0 = cg.interval_of(center)
        dist = conditional_wigner(rho, cg, n0, b)
        f_val = variance(b.matrix(), perturbed_state(rho, cg, n0))
        rows.append([d, n0, f_val, width_count(dist, thr).value, width_stddev(dist).value])
    header = ["delta_a", "n0", "F", "width_count", "width_stddev"]
    return header, rows, [dict(zip(header, r)) for r in rows], []


def qubit_preset(ratio1: float, sigma1: float, epsilon2: float, sigma2: float) -> ExperimentSpec:
    """A with levels {0, 1}, B = sigma_x, state |+x>."""
    a = SpectralObservable.diagonal([0.0, 1.0], name="A")
    vx = np.array([[1.0, 1.0], [-1.0, 1.0]]) / np.sqrt(2)   # columns |-x>, |+x>
    b = SpectralObservable([-1.0, 1.0], vx, name="sigma_x")
    rho = pure_density(StateVector(np.array([1.0, 1.0]) / np.sqrt(2)))
    return ExperimentSpec(rho, a, build_partition(a, 0), b,
                          ProbeCoupling(ratio1 * sigma1, sigma1), ProbeCoupling(epsilon2, sigma2))


def _probe_sim(cfg):
    spec = qubit_preset(*(float(cfg.get(k)) for k in ("ratio1", "sigma1", "epsilon2", "sigma2")))
    q1 = cfg.get("q1")
    q1 = 0.0 if q1 is None else parse_real(q1)
    e2, s2 = spec.probe2.epsilon, spec.probe2.sigma_q
    hw = float(cfg.get("half_width"))
    lo, hi = -abs(e2) - hw * s2, abs(e2) + hw * s2
    grid = np.linspace(lo, hi, _as_int(cfg.get("points"), "points"))
    marg = marginal_q1(spec, q1)
    if not marg > 1e-300:
        raise ZeroProbabilityError("conditioning on impossible outcome")
    vals = np.asarray(joint_distribution(spec, q1, grid)) / marg
    rows = [[x, p] for x, p in zip(grid, vals)]
    obj = {"q1": q1, "ratio1": spec.probe1.ratio, "axis": list(grid), "density": list(vals)}
    return ["Q2", "density"], rows, obj, []


def _continuum_sinc(cfg):
    pkt = continuum.GaussianWavepacket(0.0, float(cfg.get("sigma_p")))
    rows, failures = [], []
    for d in sorted({parse_real(x) for x in _as_list(cfg.get("delta_p"))}):
        r = continuum.sinc_width_product(d, pkt, rtol=cfg.tolerance)
        rows.append([d, r.delta_x, r.product, r.numeric_first_zero, r.predicted_first_zero,
                     r.relative_deviation, r.verified])
        if not r.verified:
            failures.append(f"first zero off prediction by {r.relative_deviation:.3g} at delta_p={d:g}")
    header = ["delta_p", "delta_x", "product", "numeric_first_zero", "predicted_first_zero",
              "relative_deviation", "verified"]
    objs = [dict(zip(header, r)) for r in rows]
    return header, rows, objs[0] if len(objs) == 1 else objs, failures


def _continuum_theta(cfg):
    zf = float(cfg.get("zero_fraction"))
    thetas = sorted({parse_real(t) for t in _as_list(cfg.get("theta"))})
    dxps = sorted({parse_real(d) for d in _as_list(cfg.get("delta_xprime"))})
    rows = []
    for t in thetas:
        for d in dxps:
            w = continuum.theta_width(continuum.RotatedQuadrature(t, d), zero_fraction=zf)
            rows.append([t, d, w.value, w.method, w.value * d])
    header = ["theta", "delta_xprime", "delta_x", "method", "product"]
    return header, rows, [dict(zip(header, r)) for r in rows], []


def _appendix_c(cfg):
    z = parse_real(cfg.get("z"))
    tol = cfg.tolerance
    rows, failures = [], []
    for d in sorted({parse_real(x) for x in _as_list(cfg.get("delta_p"))}):
        r = continuum.appendix_c_series(d, z)
        d_bound = (d / 2) ** 5
        d_ok = abs(r.d_series - r.d_quadrature) <= d_bound
        n_rel = abs(r.n_series - r.n_quadrature) / max(abs(r.n_quadrature), 1e-300)
        n_ok = n_rel <= tol
        rows.append([d, z, r.d_series, r.d_quadrature, d_bound, d_ok,
                     r.n_series, r.n_quadrature, n_rel, n_ok])
        if not d_ok:
            failures.append(f"D series off quadrature beyond (dp/2)^5 at delta_p={d:g}")
        if not n_ok:
            failures.append(f"N series off quadrature by {n_rel:.3g} at delta_p={d:g}")
    header = ["delta_p", "z", "d_series", "d_quadrature", "d_bound", "d_ok",
              "n_series", "n_quadrature", "n_relative_error", "n_ok"]
    return header, rows, [dict(zip(header, r)) for r in rows], failures


SCENARIOS = {
    "schwinger-table": _schwinger_table,
    "schwinger-dist": _schwinger_dist,
    "wigner-sweep": _wigner_sweep,
    "probe-sim": _probe_sim,
    "continuum-sinc": _continuum_sinc,
    "continuum-theta": _continuum_theta,
    "appendix-c": _appendix_c,
}


def _error(kind: str, message: str) -> None:
    text = " ".join(str(message).split())
    sys.stderr.write(f"succmeas: error={kind} message={text}\n")


def render(cfg: ScenarioConfig) -> tuple:
    """(text, failures) for a validated config."""
    header, rows, obj, failures = SCENARIOS[cfg.kind](cfg)
    text = render_csv(header, rows) if cfg.fmt == "csv" else render_json(obj)
    return text, failures


def run(cfg: ScenarioConfig) -> int:
    """Validate, execute and write the artifact; returns the exit status."""
    violations = validate(cfg)
    if violations:
        _error("validation", "; ".join(violations))
        return EXIT_VALIDATION
    try:
        text, failures = render(cfg)
    except ValidationError as exc:
        _error("validation", exc)
        return EXIT_VALIDATION
    except AccuracyError as exc:
        _error("accuracy", exc)
        return EXIT_ACCURACY
    if cfg.out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    if failures:
        _error("accuracy", "; ".join(failures))
        return EXIT_ACCURACY
    return EXIT_OK


# --------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _error("validation", message)
        sys.exit(EXIT_VALIDATION)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON document with scenario parameters")
    p.add_argument("--out", help="output path, '-' for stdout (default)")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"))
    p.add_argument("--tol", type=float, help="tolerance used by the scenario's checks")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="succmeas", description="Successive-measurement numerics.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    sch = groups.add_parser("schwinger").add_subparsers(dest="action", required=True,
                                                        parser_class=_Parser)
    p = sch.add_parser("table", help="Robertson L and R for flat momentum states")
    p.add_argument("--rows", help="comma-separated N:delta_p pairs")
    p.add_argument("--method", choices=("closed", "matrix"))
    p.set_defaults(kind="schwinger-table")
    _common(p)
    p = sch.add_parser("dist", help="position distribution after a momentum block")
    p.add_argument("--n", type=int)
    p.add_argument("--delta-p", dest="delta_p", type=int)
    p.add_argument("--n0", type=int)
    p.set_defaults(kind="schwinger-dist")
    _common(p)

    wig = groups.add_parser("wigner").add_subparsers(dest="action", required=True,
                                                     parser_class=_Parser)
    p = wig.add_parser("sweep", help="F(delta_a) and widths for a diagonal A")
    p.add_argument("--n", type=int)
    p.add_argument("--delta-a", dest="delta_a", help="comma-separated even resolutions")
    p.add_argument("--function", choices=("identity", "square", "fourier"))
    p.add_argument("--state", choices=("uniform", "gaussian"))
    p.add_argument("--center-index", dest="center_index", type=int)
    p.add_argument("--threshold", type=float)
    p.set_defaults(kind="wigner-sweep")
    _common(p)

    prb = groups.add_parser("probe").add_subparsers(dest="action", required=True,
                                                    parser_class=_Parser)
    p = prb.add_parser("sim", help="conditional Q2 density for a preset experiment")
    p.add_argument("--preset", choices=("qubit",))
    p.add_argument("--ratio1", type=float, help="epsilon1 / sigma1")
    p.add_argument("--sigma1", type=float)
    p.add_argument("--epsilon2", type=float)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--q1", help="conditioning value of Q1 (default 0)")
    p.add_argument("--points", type=int)
    p.add_argument("--half-width", dest="half_width", type=float)
    p.set_defaults(kind="probe-sim")
    _common(p)

    con = groups.add_parser("continuum").add_subparsers(dest="action", required=True,
                                                        parser_class=_Parser)
    p = con.add_parser("sinc", help="first-zero width after a momentum window")
    p.add_argument("--delta-p", dest="delta_p", help="comma-separated window widths")
    p.add_argument("--sigma-p", dest="sigma_p", type=float)
    p.set_defaults(kind="continuum-sinc")
    _common(p)
    p = con.add_parser("theta", help="position width after a rotated-quadrature window")
    p.add_argument("--theta", help="comma-separated angles; 'pi/4' style accepted")
    p.add_argument("--delta-xprime", dest="delta_xprime", help="comma-separated widths")
    p.add_argument("--zero-fraction", dest="zero_fraction", type=float)
    p.set_defaults(kind="continuum-theta")
    _common(p)

    app = groups.add_parser("appendix-c").add_subparsers(dest="action", required=True,
                                                         parser_class=_Parser)
    p = app.add_parser("check", help="small-window series against quadrature")
    p.add_argument("--delta-p", dest="delta_p", help="comma-separated window widths")
    p.add_argument("--z")
    p.set_defaults(kind="appendix-c")
    _common(p)
    return parser


_META = {"group", "action", "kind", "config", "out", "fmt", "tol"}


def config_from_args(ns: argparse.Namespace) -> ScenarioConfig:
    doc: Dict[str, Any] = {}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config: {exc}") from None
        if not isinstance(doc, dict):
            raise ValidationError("config must be a JSON object")
        if "kind" in doc and doc["kind"] != ns.kind:
            raise ValidationError(f"config is for {doc['kind']!r}, not {ns.kind!r}")
    params = {k: v for k, v in doc.items() if k not in _META}
    for key, val in vars(ns).items():
        if key not in _META and val is not None:
            params[key] = val
    pick = lambda flag, key, default: flag if flag is not None else doc.get(key, default)  # noqa: E731
    return ScenarioConfig(kind=ns.kind, params=params,
                          out=pick(ns.out, "out", "-"),
                          fmt=pick(ns.fmt, "format", "csv"),
                          tol=pick(ns.tol, "tol", None))


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except ValidationError as exc:
        _error("validation", exc)
        return EXIT_VALIDATION
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
