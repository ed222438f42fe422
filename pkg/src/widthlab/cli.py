"""Experiment runner: JSON configs in, CSV/JSON artifacts out.

Every experiment is one JSON document with a ``kind``, a ``parameters`` map,
and an optional ``output_path`` prefix.  Runs are deterministic given the
config and seed — per-trial seeds derive from ``(seed, trial)``, so thread
count never changes results and rerunning a config rewrites byte-identical
CSV files.

Exit codes: 0 success; 2 invalid configuration; 3 a size/degree cap was hit;
4 numerical failure during an otherwise valid run.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .approx import reflect_and_truncate, sobolev_norm_from_coeffs, truncate_periodic, truncate_sobolev
from .errors import (
    CapExceeded,
    DegreeCap,
    DimensionMismatch,
    EmptyFeatureList,
    NegativeIndex,
    NotUnitNorm,
    OutOfSupport,
    PackingFailed,
    ParameterOutOfRange,
    ScaleNotUnit,
    UnsupportedCombination,
    WeightNotInSupport,
    WrongMeasure,
)
from .fitter import success_probability, estimate_minwidth, wilson_interval
from .hermite import HermitePolynomial, hermite_truncate
from .lattice import count_ball, enumerate_ball
from .lowerbound import (
    explicit_hard_function,
    gaussian_hard_family,
    hard_family_ball,
    hard_family_symmetric,
    lb_parameters,
    projection_residuals,
)
from .quadrature import (
    GAUSSIAN,
    MONTE_CARLO,
    TENSOR_GAUSS,
    UNIFORM_CUBE,
    QuadratureSpec,
    make_grid,
)
from .relu import DkDistribution, mixture_expectation, phi_K
from .trig import TrigPolynomial


class ConfigError(Exception):
    """The configuration document is malformed or violates a precondition."""


_CONFIG_ERRORS = (
    ConfigError, ParameterOutOfRange, DimensionMismatch, WrongMeasure,
    UnsupportedCombination, ScaleNotUnit, NegativeIndex,
)
_CAP_ERRORS = (CapExceeded, DegreeCap)
_NUMERICAL_ERRORS = (
    PackingFailed, OutOfSupport, WeightNotInSupport, NotUnitNorm,
    EmptyFeatureList, np.linalg.LinAlgError, FloatingPointError, OSError,
)

STOCHASTIC_KINDS = {"fit_curve", "minwidth", "lb_projection", "lb_explicit"}

# Default tensor-grid resolutions keeping node counts workable per dimension.
_DEFAULT_NODES = {UNIFORM_CUBE: {1: 24, 2: 24, 3: 24, 4: 12, 5: 8, 6: 6},
                  GAUSSIAN: {1: 40, 2: 40, 3: 24, 4: 12, 5: 8, 6: 6}}


def _fmt(value) -> str:
    x = float(value)
    if not math.isfinite(x):
        raise FloatingPointError("non-finite value in output")
    return "%.17g" % x


def _write_lines(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_curve(points, path: str) -> None:
    """Write (x, y, ci_lo, ci_hi) rows as CSV, preserving input order."""
    if not points:
        raise ParameterOutOfRange("cannot emit an empty curve")
    lines = ["x,y,ci_lo,ci_hi"]
    for x, y, lo, hi in points:
        lines.append(",".join(_fmt(v) for v in (x, y, lo, hi)))
    _write_lines(path, lines)


def read_curve(path: str) -> list[tuple[float, float, float, float]]:
    """Parse a curve CSV back into float tuples (round-trip of emit_curve)."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines or lines[0] != "x,y,ci_lo,ci_hi":
        raise ParameterOutOfRange(f"{path} is not a curve file")
    return [tuple(float(tok) for tok in ln.split(",")) for ln in lines[1:]]


def _need(params: dict, key: str):
    if key not in params:
        raise ConfigError(f"missing required parameter {key!r}")
    return params[key]


def _as_int(params: dict, key: str, minimum=None, default=None) -> int:
    raw = params.get(key, default)
    if raw is None:
        raise ConfigError(f"missing required parameter {key!r}")
    if isinstance(raw, bool) or int(raw) != raw:
        raise ConfigError(f"parameter {key!r} must be an integer, got {raw!r}")
    value = int(raw)
    if minimum is not None and value < minimum:
        raise ConfigError(f"parameter {key!r} must be >= {minimum}, got {value}")
    return value


def _as_real(params: dict, key: str, positive=False, default=None) -> float:
    raw = params.get(key, default)
    if raw is None:
        raise ConfigError(f"missing required parameter {key!r}")
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key!r} must be a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"parameter {key!r} must be finite, got {value}")
    if positive and value <= 0:
        raise ConfigError(f"parameter {key!r} must be positive, got {value}")
    return value


def _as_list(params: dict, scalar_key: str, list_key: str, default=None) -> list:
    if list_key in params:
        values = params[list_key]
        if not isinstance(values, list) or not values:
            raise ConfigError(f"parameter {list_key!r} must be a nonempty list")
        return values
    if scalar_key in params:
        return [params[scalar_key]]
    if default is not None:
        return default
    raise ConfigError(f"missing parameter {scalar_key!r} (or {list_key!r})")


def _grid(params: dict, d: int, measure: str, seed=None):
    spec = dict(params.get("grid", {}))
    scheme = spec.get("scheme", TENSOR_GAUSS)
    if scheme == TENSOR_GAUSS:
        nodes = spec.get("nodes_per_dim")
        if nodes is None:
            nodes = _DEFAULT_NODES[measure].get(d)
            if nodes is None:
                raise ConfigError(
                    f"no default tensor grid for dimension {d}; supply a grid spec"
                )
        return make_grid(QuadratureSpec(measure, TENSOR_GAUSS, d,
                                        nodes_per_dim=int(nodes)))
    if scheme == MONTE_CARLO:
        count = spec.get("sample_count", 20000)
        grid_seed = spec.get("seed")
        if grid_seed is None:
            if seed is None:
                raise ConfigError("monte_carlo grid needs a seed")
            grid_seed = (int(seed), 10007)  # derived, disjoint from trial seeds
        else:
            grid_seed = int(grid_seed)
        return make_grid(QuadratureSpec(measure, MONTE_CARLO, d,
                                        sample_count=int(count), seed=grid_seed))
    raise ConfigError(f"unknown grid scheme {scheme!r}")


def _distribution(params: dict, d: int) -> DkDistribution:
    spec = dict(params.get("dist", {"kind": "dk", "k": 2}))
    if spec.get("kind", "dk") != "dk":
        raise ConfigError(f"unsupported distribution kind {spec.get('kind')!r}")
    k = spec.get("k", 2)
    if not isinstance(k, (int, float)) or k < 0:
        raise ConfigError(f"distribution radius k must be nonnegative, got {k!r}")
    return DkDistribution(k=float(k), dimension=d)


def _target(params: dict, d: int):
    """Resolve the target function handle; returns (callable, description)."""
    spec = params.get("target", params.get("f"))
    if spec is None:
        raise ConfigError("missing target function (parameter 'target' or 'f')")
    if isinstance(spec, str):
        spec = {"type": spec}
    if not isinstance(spec, dict) or "type" not in spec:
        raise ConfigError(f"target must be a type name or object with 'type', got {spec!r}")
    kind = spec["type"]
    if kind == "abs":
        return (lambda nodes: np.abs(np.asarray(nodes, dtype=float)[:, 0]), {"type": "abs"})
    if kind == "trig_poly":
        poly = TrigPolynomial.from_json_dict(_need(spec, "polynomial"))
        if poly.dimension != d:
            raise ConfigError(f"target dimension {poly.dimension} != experiment dimension {d}")
        return poly.evaluate, {"type": "trig_poly", "terms": len(poly.terms)}
    if kind == "hermite_poly":
        poly = HermitePolynomial.from_json_dict(_need(spec, "polynomial"))
        if poly.dimension != d:
            raise ConfigError(f"target dimension {poly.dimension} != experiment dimension {d}")
        return poly.evaluate, {"type": "hermite_poly", "terms": len(poly.terms)}
    if kind == "explicit_hard":
        epsilon = _as_real(spec, "epsilon", positive=True,
                           default=params.get("epsilon"))
        ell = _as_int(spec, "ell", minimum=1, default=params.get("ell"))
        hard = explicit_hard_function(epsilon, ell, d)
        return hard.evaluate, {"type": "explicit_hard", "ell": ell, "epsilon": epsilon,
                               "lip_bound": hard.lip_bound}
    raise ConfigError(f"unknown target type {kind!r}")


def _label_str(label) -> str:
    if isinstance(label, tuple):
        return " ".join(str(v) for v in label)
    return str(label)


class _Run:
    """Shared state for one experiment run (paths, seed, thread budget)."""

    def __init__(self, out_dir: str, prefix: str, seed, threads: int):
        self.out_dir = out_dir
        self.prefix = prefix
        self.seed = seed
        self.threads = threads
        self.csv_files: list[str] = []

    def path(self, suffix: str) -> str:
        name = f"{self.prefix}_{suffix}"
        full = os.path.join(self.out_dir, name)
        self.csv_files.append(name)
        return full


def _run_count_lattice(params: dict, run: _Run) -> dict:
    ks = [(_as_real({"k": v}, "k") if not isinstance(v, int) else v)
          for v in _as_list(params, "k", "k_list")]
    ds = [_as_int({"d": v}, "d", minimum=1) for v in _as_list(params, "d", "d_list")]
    rows, counts = [], []
    for k in ks:
        if k < 0:
            raise ConfigError(f"radius k must be nonnegative, got {k}")
        for d in ds:
            q = count_ball(k, d)
            rows.append(f"{_fmt(k) if isinstance(k, float) else k},{d},{q}")
            counts.append({"k": k, "d": d, "count": q})
    _write_lines(run.path("counts.csv"), ["k,d,count"] + rows)
    return {"counts": counts}


def _coeff_csv(run: _Run, doc: dict, d: int) -> None:
    header = ",".join(f"k{i + 1}" for i in range(d)) + ",beta"
    rows = [",".join(str(c) for c in term["K"]) + "," + _fmt(term["beta"])
            for term in doc["terms"]]
    _write_lines(run.path("coefficients.csv"), [header] + rows)


def _run_approx_trig(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    L = _as_real(params, "L", positive=True)
    epsilon = _as_real(params, "epsilon", positive=True)
    mode = params.get("mode", "reflect")
    if mode not in ("reflect", "periodic"):
        raise ConfigError(f"mode must be 'reflect' or 'periodic', got {mode!r}")
    ratio = L / epsilon
    if mode == "periodic" and ratio < 2.0:
        raise ConfigError(f"periodic truncation needs L/epsilon >= 2, got {ratio}")
    if mode == "reflect" and ratio < 1.0:
        raise ConfigError(f"reflection truncation needs L/epsilon >= 1, got {ratio}")
    f, target_desc = _target(params, d)
    grid = _grid(params, d, UNIFORM_CUBE, run.seed)
    if mode == "periodic":
        report = truncate_periodic(f, L, epsilon, grid)
    else:
        report = reflect_and_truncate(f, L, epsilon, grid)
    doc = report.to_json_dict()
    _coeff_csv(run, doc["polynomial"], d)
    doc["target"] = target_desc
    doc["mode"] = mode
    return doc


def _run_approx_sobolev(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    s = _as_int(params, "s", minimum=1)
    gamma = _as_real(params, "gamma", positive=True)
    epsilon = _as_real(params, "epsilon", positive=True)
    f, target_desc = _target(params, d)
    grid = _grid(params, d, UNIFORM_CUBE, run.seed)
    report = truncate_sobolev(f, s, gamma, epsilon, grid)
    doc = report.to_json_dict()
    _coeff_csv(run, doc["polynomial"], d)
    doc["target"] = target_desc
    doc["s"] = s
    doc["kept_sobolev_norm"] = sobolev_norm_from_coeffs(report.polynomial, s)
    return doc


def _run_fit_curve(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    epsilon = _as_real(params, "epsilon", positive=True)
    trials = _as_int(params, "trials", minimum=1, default=200)
    rs = [_as_int({"r": v}, "r", minimum=1) for v in _as_list(params, "r", "r_list")]
    f, target_desc = _target(params, d)
    dist = _distribution(params, d)
    grid = _grid(params, d, UNIFORM_CUBE, run.seed)
    points, curve = [], []
    for r in rs:
        est = success_probability(f, epsilon, dist, r, trials, grid, run.seed,
                                  threads=run.threads)
        points.append((r, est.probability, est.ci_lo, est.ci_hi))
        curve.append(est.to_json_dict())
    emit_curve(points, run.path("curve.csv"))
    return {"target": target_desc, "epsilon": epsilon, "trials": trials,
            "dist_k": dist.k, "curve": curve}


def _run_minwidth(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    epsilon = _as_real(params, "epsilon", positive=True)
    delta = _as_real(params, "delta", positive=True)
    if not delta < 1.0:
        raise ConfigError(f"delta must be in (0, 1), got {delta}")
    trials = _as_int(params, "trials", minimum=1, default=200)
    r_max = _as_int(params, "r_max", minimum=1, default=4096)
    f, target_desc = _target(params, d)
    dist = _distribution(params, d)
    grid = _grid(params, d, UNIFORM_CUBE, run.seed)
    est = estimate_minwidth(f, epsilon, delta, dist, grid, trials, r_max, run.seed,
                            threads=run.threads)
    points = [(r, p, *wilson_interval(round(p * trials), trials))
              for r, p in est.search_trace]
    emit_curve(points, run.path("trace.csv"))
    doc = est.to_json_dict()
    doc["target"] = target_desc
    doc["dist_k"] = dist.k
    return doc


def _family(params: dict, d: int, run: _Run):
    spec = dict(params.get("family", {}))
    kind = spec.get("type", "symmetric" if "ell" in params or "ell" in spec else "ball")
    if kind == "symmetric":
        ell = _as_int(spec, "ell", minimum=1, default=params.get("ell"))
        return hard_family_symmetric(ell, d), {"type": "symmetric", "ell": ell}
    if kind == "ball":
        k = spec.get("k", params.get("k"))
        if k is None:
            raise ConfigError("ball family needs a radius parameter 'k'")
        return hard_family_ball(float(k), d), {"type": "ball", "k": k}
    if kind == "gaussian":
        L = _as_real(spec, "L", positive=True, default=params.get("L"))
        N = _as_int(spec, "N", minimum=1, default=params.get("N"))
        grid = _grid(params, d, GAUSSIAN, run.seed)
        fam = gaussian_hard_family(L, N, d, run.seed, grid)
        return fam, {"type": "gaussian", "L": L, "N": N, "kappa": fam.coherence}
    raise ConfigError(f"unknown family type {kind!r}")


def _run_lb_projection(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    trials = _as_int(params, "trials", minimum=1, default=200)
    rs = [_as_int({"r": v}, "r", minimum=0) for v in _as_list(params, "r", "r_list")]
    family, family_desc = _family(params, d, run)
    dist = _distribution(params, d)
    measure = GAUSSIAN if family_desc["type"] == "gaussian" else UNIFORM_CUBE
    grid = _grid(params, d, measure, run.seed)
    per_r = []
    for r in rs:
        def one_trial(t: int):
            rng = np.random.default_rng([int(run.seed), t])
            features = [dist.sample_feature(rng) for _ in range(r)]
            return projection_residuals(features, family, grid)
        if run.threads > 1:
            with ThreadPoolExecutor(max_workers=run.threads) as pool:
                reports = list(pool.map(one_trial, range(trials)))
        else:
            reports = [one_trial(t) for t in range(trials)]
        rows = ["trial,member,residual"]
        for t, rep in enumerate(reports):
            for label, res in zip(rep.labels, rep.residuals):
                rows.append(f"{t},{_label_str(label)},{_fmt(res)}")
        _write_lines(run.path(f"r{r}_residuals.csv"), rows)
        stacked = np.stack([rep.residuals for rep in reports])
        per_r.append({
            "r": r,
            "bound": reports[0].bound,
            "mean_residual": float(np.mean(stacked)),
            "member_means": {
                _label_str(label): float(np.mean(stacked[:, i]))
                for i, label in enumerate(family.labels)
            },
        })
    return {"family": family_desc, "N": len(family), "trials": trials,
            "dist_k": dist.k, "per_r": per_r}


def _run_lb_explicit(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    epsilon = _as_real(params, "epsilon", positive=True)
    trials = _as_int(params, "trials", minimum=1, default=200)
    if "ell" in params:
        ell = _as_int(params, "ell", minimum=1)
        planned = None
    else:
        L = _as_real(params, "L", positive=True)
        planned = lb_parameters(L, epsilon, d)
        if planned.degenerate:
            raise ConfigError(
                f"L={L}, epsilon={epsilon} give a degenerate instance (ell = 0)"
            )
        ell = planned.ell
    hard = explicit_hard_function(epsilon, ell, d)
    rs = [_as_int({"r": v}, "r", minimum=1) for v in _as_list(params, "r", "r_list", [1])]
    dist = _distribution(params, d)
    grid = _grid(params, d, UNIFORM_CUBE, run.seed)
    points, curve = [], []
    for r in rs:
        est = success_probability(hard.evaluate, epsilon, dist, r, trials, grid,
                                  run.seed, threads=run.threads)
        points.append((r, est.probability, est.ci_lo, est.ci_hi))
        curve.append(est.to_json_dict())
    emit_curve(points, run.path("curve.csv"))
    family_size = math.comb(d, ell)
    doc = {"ell": ell, "epsilon": epsilon, "lip_bound": hard.lip_bound,
           "family_size": family_size, "quarter_family": family_size / 4.0,
           "dist_k": dist.k, "trials": trials, "curve": curve}
    if planned is not None:
        doc["k_nonexplicit"] = planned.k_nonexplicit
    return doc


def _run_hermite_check(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    L = _as_real(params, "L", positive=True)
    epsilon = _as_real(params, "epsilon", positive=True)
    f, target_desc = _target(params, d)
    grid = _grid(params, d, GAUSSIAN, run.seed)
    report = hermite_truncate(f, L, epsilon, grid)
    doc = report.to_json_dict()
    _coeff_csv(run, doc["polynomial"], d)
    doc["target"] = target_desc
    return doc


def _run_mixture_check(params: dict, run: _Run) -> dict:
    d = _as_int(params, "d", minimum=1)
    k = _as_real(params, "k")
    if k < 0:
        raise ConfigError(f"radius k must be nonnegative, got {k}")
    rho = _as_real(params, "rho", positive=True, default=0.5)
    if rho > 1.0:
        raise ConfigError(f"argument scale rho must be in (0, 1], got {rho}")
    z_count = _as_int(params, "z_count", minimum=2, default=41)
    root = math.sqrt(d)
    zs = np.linspace(-root, root, z_count)
    header = ",".join(f"k{i + 1}" for i in range(d)) + ",max_err"
    rows, worst, worst_K = [header], -1.0, None
    for K in enumerate_ball(k, d):
        reference = phi_K(K, rho, zs)
        err = max(abs(mixture_expectation(K, rho, d, float(z)) - float(ref))
                  for z, ref in zip(zs, reference))
        rows.append(",".join(str(c) for c in K) + "," + _fmt(err))
        if err > worst:
            worst, worst_K = err, K
    _write_lines(run.path("mixture_errors.csv"), rows)
    return {"rho": rho, "k": k, "d": d, "max_error": worst, "worst_K": list(worst_K)}


_RUNNERS = {
    "count_lattice": _run_count_lattice,
    "approx_trig": _run_approx_trig,
    "approx_sobolev": _run_approx_sobolev,
    "fit_curve": _run_fit_curve,
    "minwidth": _run_minwidth,
    "lb_projection": _run_lb_projection,
    "lb_explicit": _run_lb_explicit,
    "hermite_check": _run_hermite_check,
    "mixture_check": _run_mixture_check,
}


def _load_config(path: str) -> tuple[str, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    kind = cfg.get("kind")
    if kind not in _RUNNERS:
        raise ConfigError(f"unknown kind {kind!r}; choose one of {sorted(_RUNNERS)}")
    params = cfg.get("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("'parameters' must be a JSON object")
    return raw, cfg


def _effective_seed(cfg: dict, override) -> int | None:
    params = cfg.get("parameters", {})
    seed = override if override is not None else params.get("seed")
    if cfg["kind"] in STOCHASTIC_KINDS:
        if seed is None:
            raise ConfigError(f"kind {cfg['kind']!r} is stochastic and needs a seed")
        if isinstance(seed, bool) or int(seed) != seed:
            raise ConfigError(f"seed must be an integer, got {seed!r}")
        return int(seed)
    if seed is not None and (isinstance(seed, bool) or int(seed) != seed):
        raise ConfigError(f"seed must be an integer, got {seed!r}")
    return None if seed is None else int(seed)


def run_config(config_path: str, out_dir: str = ".", threads: int | None = None,
               seed_override=None) -> tuple[int, dict | None]:
    """Execute one config; returns (exit_code, result document or None)."""
    start = time.monotonic()
    try:
        raw, cfg = _load_config(config_path)
        seed = _effective_seed(cfg, seed_override)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    prefix = cfg.get("output_path") or cfg["kind"]
    threads = threads if threads else (os.cpu_count() or 1)
    run = _Run(out_dir=out_dir, prefix=str(prefix), seed=seed, threads=int(threads))
    try:
        os.makedirs(out_dir, exist_ok=True)
        results = _RUNNERS[cfg["kind"]](dict(cfg.get("parameters", {})), run)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, None
    except _CAP_ERRORS as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3, None
    except _NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4, None
    doc = {
        "kind": cfg["kind"],
        "config_text": raw,
        "seed": seed,
        "threads": run.threads,
        "versions": {
            "widthlab": __version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
        "wall_time_s": time.monotonic() - start,
        "csv_files": run.csv_files,
        "results": results,
    }
    result_path = os.path.join(out_dir, f"{prefix}_result.json")
    with open(result_path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(result_path)
    return 0, doc


def validate_config(config_path: str) -> int:
    """Parse and sanity-check a config without running it."""
    try:
        _, cfg = _load_config(config_path)
        _effective_seed(cfg, None)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"ok: {cfg['kind']}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="widthlab",
        description="Random-feature width experiments: approximation, fitting, lower bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute one experiment config")
    run_p.add_argument("--config", required=True, help="path to a JSON experiment config")
    run_p.add_argument("--out-dir", default=".", help="directory for CSV/JSON artifacts")
    run_p.add_argument("--threads", type=int, default=None,
                       help="worker threads for trial loops (default: all cores)")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("--config", required=True, help="path to a JSON experiment config")
    args = parser.parse_args(argv)
    if args.command == "validate":
        return validate_config(args.config)
    code, _ = run_config(args.config, out_dir=args.out_dir, threads=args.threads,
                         seed_override=args.seed)
    return code


if __name__ == "__main__":
    sys.exit(main())
