"""Grid experiments: configuration, evaluation, and table output.

Configuration files are flat ``key = value`` text. Lists are comma
separated, ``#`` starts a comment, blank lines are ignored::

    families      = HermiteGamma, WafiRaoGamma, HermiteSzasz, SzaszDunkl
    n_values      = 5, 10, 50, 100
    x_grid        = 0, 2, 9            # start, stop, count (inclusive)
    mu_values     = 0, 0.5, 1
    alpha_values  = 0, 0.5
    lambda_values = 0, 1
    functions     = identity, square, sin, sqrt, exp_decay, constant
    checks        = moments, reductions, theorem6, theorem7, lemma8, final, identities
    final_c       = 2, 4
    output_path   = results.csv        # optional; stdout when absent
    output_format = csv                # csv | json
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from importlib import resources

import numpy as np

from .errors import ConfigError, DunklApproxError
from .moduli import (
    bound_final,
    bound_lemma8,
    bound_theorem6,
    bound_theorem7,
    final_deltas,
    theorem7_radicand,
)
from .moments import (
    central_moment_closed,
    moment_closed,
    moment_report,
    shifted_apply,
)
from .operators import Family, OperatorConfig, TargetFunction, apply, weights
from .dunkl_core import Polynomial
from .presets import PRESETS

CHECKS = ("moments", "reductions", "theorem6", "theorem7", "lemma8", "final", "identities")
FORMATS = ("csv", "json")
FAMILY_ORDER = tuple(Family)
COLUMNS = ("family", "n", "x", "mu", "alpha", "lambda", "function", "check", "value",
           "reference", "abs_err", "rel_err", "bound", "bound_ok", "trunc_k",
           "tail_mass", "precision_flag")

MOMENT_TOL = 1e-8
PARTITION_TOL = 1e-12
REDUCTION_TOL = 1e-12
ALGEBRA_TOL = 1e-12
AFFINE_TOL = 1e-9
# absolute slack on bound comparisons, covering rounding when a bound is
# attained with equality (f = t in the final K-functional check)
BOUND_SLACK = 1e-10
MONOMIALS = {"constant": 0, "identity": 1, "square": 2}
REDUCTION_PAIRS = {Family.HERMITE_GAMMA: Family.WAFI_RAO_GAMMA,
                   Family.HERMITE_SZASZ: Family.SZASZ_DUNKL}
AFFINE_COEFFS = (-1.0, 0.0, 1.0, 2.0)


@dataclass(frozen=True)
class ExperimentConfig:
    families: tuple[Family, ...]
    n_values: tuple[int, ...]
    x_grid: tuple[float, float, int]
    mu_values: tuple[float, ...]
    alpha_values: tuple[float, ...]
    lambda_values: tuple[float, ...]
    functions: tuple[str, ...]
    checks: tuple[str, ...]
    final_c: tuple[float, ...] = (2.0, 4.0)
    output_path: str | None = None
    output_format: str = "csv"

    @property
    def x_values(self) -> np.ndarray:
        start, stop, count = self.x_grid
        return np.linspace(start, stop, count)


def _split(raw: str) -> list[str]:
    return [p.strip() for p in raw.split(",") if p.strip()]


def _floats(key, raw, nonneg=True):
    try:
        vals = tuple(float(p) for p in _split(raw))
    except ValueError:
        raise ConfigError(f"{key}: expected numbers, got {raw!r}") from None
    for v in vals:
        if not math.isfinite(v) or (nonneg and v < 0.0):
            raise ConfigError(f"{key}: values must be finite and >= 0, got {v!r}")
    return vals


def _ints(key, raw):
    vals = []
    for p in _split(raw):
        try:
            v = int(p)
        except ValueError:
            raise ConfigError(f"{key}: expected integers, got {p!r}") from None
        if v < 1:
            raise ConfigError(f"{key}: values must be >= 1, got {v}")
        vals.append(v)
    return tuple(vals)


def _choices(key, raw, allowed):
    vals = tuple(_split(raw))
    for v in vals:
        if v not in allowed:
            raise ConfigError(f"{key}: unknown entry {v!r}; choose from {sorted(allowed)}")
    return vals


def _x_grid(raw):
    parts = _split(raw)
    if len(parts) != 3:
        raise ConfigError(f"x_grid: expected 'start, stop, count', got {raw!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"x_grid: malformed entry {raw!r}") from None
    if not (math.isfinite(start) and math.isfinite(stop) and 0.0 <= start <= stop):
        raise ConfigError(f"x_grid: need finite 0 <= start <= stop, got {raw!r}")
    if count < 2:
        raise ConfigError(f"x_grid: count must be >= 2, got {count}")
    if start == stop:
        raise ConfigError("x_grid: start == stop leaves no grid")
    return start, stop, count


PARSERS = {
    "families": lambda r: tuple(Family(v) for v in _choices(
        "families", r, {f.value for f in Family})),
    "n_values": lambda r: _ints("n_values", r),
    "x_grid": _x_grid,
    "mu_values": lambda r: _floats("mu_values", r),
    "alpha_values": lambda r: _floats("alpha_values", r),
    "lambda_values": lambda r: _floats("lambda_values", r),
    "functions": lambda r: _choices("functions", r, set(PRESETS)),
    "checks": lambda r: _choices("checks", r, set(CHECKS)),
    "final_c": lambda r: _floats("final_c", r),
    "output_path": lambda r: r.strip() or None,
    "output_format": lambda r: _choices("output_format", r, set(FORMATS))[0]
    if _split(r) else "csv",
}
OPTIONAL = {"final_c", "output_path", "output_format"}


def parse_config_text(text: str, base: dict[str, str] | None = None) -> ExperimentConfig:
    """Parse config text; keys missing from ``text`` are taken from ``base``."""
    raw = dict(base or {})
    raw.update(_raw_pairs(text))
    missing = [k for k in PARSERS if k not in raw and k not in OPTIONAL]
    if missing:
        raise ConfigError(f"missing keys: {', '.join(missing)}")
    values = {k: PARSERS[k](v) for k, v in raw.items()}
    for k, v in values.items():
        if isinstance(v, tuple) and not v:
            raise ConfigError(f"{k}: list must not be empty")
    if "final_c" in values and any(c <= 0.0 for c in values["final_c"]):
        raise ConfigError("final_c: constants must be > 0")
    return ExperimentConfig(**values)


def _raw_pairs(text: str) -> dict[str, str]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, value = body.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        if key not in PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def default_config_text() -> str:
    return resources.files("dunkl_approx").joinpath("default.cfg").read_text()


def load_config(path: str, seed_default: bool = False) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    base = _raw_pairs(default_config_text()) if seed_default else None
    return parse_config_text(text, base)


@dataclass(frozen=True)
class Row:
    family: str
    n: int
    x: float
    mu: float
    alpha: float
    lam: float
    function: str
    check: str
    value: float
    reference: float
    abs_err: float
    rel_err: float
    bound: float
    bound_ok: bool
    trunc_k: int | None = None
    tail_mass: float | None = None
    precision_flag: str = "ok"


def _row(cfg: OperatorConfig, x, function, check, value, reference, bound, *,
         kind, evaluation=None, flag="ok"):
    """kind "tol": bound is a tolerance on rel_err; kind "bound": bound caps abs_err."""
    abs_err = abs(value - reference)
    rel_err = abs_err / max(1.0, abs(reference))
    if kind == "tol":
        ok = rel_err <= bound
    else:
        ok = abs_err <= bound + BOUND_SLACK
    return Row(cfg.family.value, cfg.n, float(x), cfg.mu, cfg.alpha, cfg.lam, function,
               check, float(value), float(reference), abs_err, rel_err, float(bound),
               bool(ok), None if evaluation is None else evaluation.trunc_k,
               None if evaluation is None else evaluation.tail_mass, flag)


def _failed(cfg, x, function, check, exc):
    nan = math.nan
    return Row(cfg.family.value, cfg.n, float(x), cfg.mu, cfg.alpha, cfg.lam, function,
               check, nan, nan, nan, nan, nan, False, None, None,
               f"error:{type(exc).__name__}")


@dataclass(frozen=True)
class PointTask:
    family: Family
    n: int
    x: float
    mu: float
    alpha: float
    lam: float
    functions: tuple[str, ...]
    checks: tuple[str, ...]
    final_c: tuple[float, ...]


def _guarded(rows, cfg, x, function, check, make):
    try:
        out = make()
    except (DunklApproxError, ArithmeticError, ValueError) as exc:
        rows.append(_failed(cfg, x, function, check, exc))
        return
    if isinstance(out, Row):
        rows.append(out)
    else:
        rows.extend(out)


def evaluate_point(task: PointTask) -> list[Row]:
    """All enabled check rows for one grid point."""
    cfg = OperatorConfig(task.family, task.n, task.mu, task.alpha, task.lam)
    x = task.x
    rows: list[Row] = []
    checks = set(task.checks)
    hermite_gamma = cfg.family is Family.HERMITE_GAMMA
    flag = "ok"
    if hermite_gamma:
        try:
            if moment_report(cfg, x).precision_loss:
                flag = "precision_loss"
        except (DunklApproxError, ArithmeticError) as exc:
            flag = f"error:{type(exc).__name__}"

    cache: dict[str, object] = {}

    def evaluation(name):
        if name not in cache:
            cache[name] = apply(cfg, PRESETS[name].target, x)
        return cache[name]

    if "identities" in checks:
        def partition():
            ws = weights(cfg, x)
            return _row(cfg, x, "constant", "identities:partition", ws.total, 1.0,
                        PARTITION_TOL, kind="tol", flag=flag)
        _guarded(rows, cfg, x, "constant", "identities:partition", partition)

    for name in task.functions:
        p = PRESETS[name]
        f = p.target

        if "moments" in checks and hermite_gamma and name in MONOMIALS:
            m = MONOMIALS[name]

            def moments_row(m=m, name=name):
                ev = evaluation(name)
                return _row(cfg, x, name, "moments", ev.value, moment_closed(cfg, m, x),
                            MOMENT_TOL, kind="tol", evaluation=ev, flag=flag)
            _guarded(rows, cfg, x, name, "moments", moments_row)

        if "reductions" in checks and cfg.family in REDUCTION_PAIRS and cfg.alpha == 0.0:
            def reduction_row(name=name):
                ev = evaluation(name)
                ref = apply(cfg.with_family(REDUCTION_PAIRS[cfg.family]), f, x).value
                return _row(cfg, x, name, "reductions", ev.value, ref, REDUCTION_TOL,
                            kind="tol", evaluation=ev, flag=flag)
            _guarded(rows, cfg, x, name, "reductions", reduction_row)

        if not hermite_gamma:
            continue

        if "theorem6" in checks and p.lipschitz is not None:
            def t6(name=name, p=p):
                ev = evaluation(name)
                return _row(cfg, x, name, "theorem6", ev.value, f(x),
                            bound_theorem6(cfg, x, *p.lipschitz), kind="bound",
                            evaluation=ev, flag=flag)
            _guarded(rows, cfg, x, name, "theorem6", t6)

        if "theorem7" in checks and p.omega is not None:
            def t7(name=name, p=p):
                ev = evaluation(name)
                bound = bound_theorem7(cfg, x, p.omega(1.0 / math.sqrt(cfg.n)))
                return _row(cfg, x, name, "theorem7", ev.value, f(x), bound,
                            kind="bound", evaluation=ev, flag=flag)
            _guarded(rows, cfg, x, name, "theorem7", t7)

        if "lemma8" in checks and p.norms is not None:
            def l8(name=name, p=p):
                ev = evaluation(name)
                return _row(cfg, x, name, "lemma8", ev.value, f(x),
                            bound_lemma8(cfg, x, p.norms), kind="bound",
                            evaluation=ev, flag=flag)
            _guarded(rows, cfg, x, name, "lemma8", l8)

        if "final" in checks and p.omega is not None and p.omega2 is not None:
            for c in task.final_c:
                check = f"final:c={c:g}"

                def fin(name=name, p=p, c=c, check=check):
                    ev = evaluation(name)
                    d2, d1 = final_deltas(cfg, x)
                    bound = bound_final(cfg, x, c, p.omega2(d2), p.omega(d1))
                    return _row(cfg, x, name, check, ev.value, f(x), bound,
                                kind="bound", evaluation=ev, flag=flag)
                _guarded(rows, cfg, x, name, check, fin)

    if "identities" in checks and hermite_gamma:
        def algebra():
            n_l2 = cfg.n * central_moment_closed(cfg, 2, x)
            m1 = moment_closed(cfg, 1, x)
            m2 = moment_closed(cfg, 2, x)
            l1 = central_moment_closed(cfg, 1, x)
            l2 = central_moment_closed(cfg, 2, x)
            return [
                _row(cfg, x, "-", "identities:radicand", theorem7_radicand(cfg, x), n_l2,
                     ALGEBRA_TOL, kind="tol", flag=flag),
                _row(cfg, x, "-", "identities:central1", l1, m1 - x, ALGEBRA_TOL,
                     kind="tol", flag=flag),
                _row(cfg, x, "-", "identities:central2", l2, m2 - 2.0 * x * m1 + x * x,
                     ALGEBRA_TOL, kind="tol", flag=flag),
            ]
        _guarded(rows, cfg, x, "-", "identities:algebra", algebra)
        for a, b in itertools.product(AFFINE_COEFFS, AFFINE_COEFFS):
            label = f"affine:{a:g}{b:+g}t"

            def affine(a=a, b=b, label=label):
                g = TargetFunction.from_polynomial(Polynomial([a, b]), label)
                return _row(cfg, x, label, "identities:shifted_affine",
                            shifted_apply(cfg, g, x), a + b * x, AFFINE_TOL,
                            kind="tol", flag=flag)
            _guarded(rows, cfg, x, label, "identities:shifted_affine", affine)
    return rows


def grid_tasks(config: ExperimentConfig) -> list[PointTask]:
    """Grid points in lexicographic axis order: family, n, x, mu, alpha, lambda."""
    families = sorted(set(config.families), key=FAMILY_ORDER.index)
    tasks = []
    for fam, n, x, mu, a, lam in itertools.product(
            families, sorted(set(config.n_values)), config.x_values,
            sorted(set(config.mu_values)), sorted(set(config.alpha_values)),
            sorted(set(config.lambda_values))):
        tasks.append(PointTask(fam, n, float(x), mu, a, lam, config.functions,
                               config.checks, config.final_c))
    return tasks


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[Row, ...]

    @property
    def violations(self) -> tuple[Row, ...]:
        return tuple(r for r in self.rows if not r.bound_ok)

    @property
    def all_ok(self) -> bool:
        return not self.violations


def run(config: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Evaluate every grid point; rows come back in grid order whatever ``jobs`` is."""
    tasks = grid_tasks(config)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(evaluate_point, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [evaluate_point(t) for t in tasks]
    return ExperimentReport(tuple(itertools.chain.from_iterable(chunks)))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        if math.isnan(v) or math.isinf(v):
            return None
        # round-trip through the 17-digit text so CSV and JSON agree
        return float(format(v, ".17g"))
    return v


def to_csv(report: ExperimentReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in report.rows:
        writer.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


def to_json(report: ExperimentReport) -> str:
    objs = [{col: _json_value(v) for col, v in zip(COLUMNS, astuple(r))}
            for r in report.rows]
    return json.dumps(objs, indent=1) + "\n"


def render(report: ExperimentReport, fmt: str) -> str:
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}")
    return to_csv(report) if fmt == "csv" else to_json(report)


@dataclass(frozen=True)
class ConvergenceRow:
    mu: float
    alpha: float
    lam: float
    n: int
    sup_error: float
    bound: float
    monotone_ok: bool
    bound_ok: bool


def convergence_table(config: ExperimentConfig, function: str,
                      family: Family = Family.HERMITE_GAMMA) -> list[ConvergenceRow]:
    """sup over the x grid of |S_n f - f| for each n, with the smallest
    modulus-of-continuity bound over the grid as the bound column."""
    p = PRESETS[function]
    if p.omega is None:
        raise ConfigError(f"{function}: no analytic modulus of continuity")
    xs = config.x_values
    out = []
    for mu, a, lam in itertools.product(sorted(set(config.mu_values)),
                                        sorted(set(config.alpha_values)),
                                        sorted(set(config.lambda_values))):
        prev = math.inf
        for n in sorted(set(config.n_values)):
            cfg = OperatorConfig(family, n, mu, a, lam)
            err = max(abs(apply(cfg, p.target, float(x)).value - p.target(float(x)))
                      for x in xs)
            om = p.omega(1.0 / math.sqrt(n))
            bound = min(bound_theorem7(cfg, float(x), om) for x in xs)
            out.append(ConvergenceRow(mu, a, lam, n, err, bound,
                                      err <= prev + 1e-12, err <= bound))
            prev = err
    return out


def convergence_csv(rows: list[ConvergenceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = [f.name if f.name != "lam" else "lambda" for f in fields(ConvergenceRow)]
    writer.writerow(names)
    for r in rows:
        writer.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


__all__ = [
    "ExperimentConfig", "ExperimentReport", "Row", "COLUMNS", "CHECKS",
    "parse_config_text", "load_config", "default_config_text", "run",
    "render", "to_csv", "to_json", "convergence_table", "convergence_csv",
    "ConvergenceRow", "grid_tasks", "evaluate_point",
]
