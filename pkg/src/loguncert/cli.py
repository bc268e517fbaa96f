"""Command-line harness: ``loguncert verify | differentiate | estimate | constants``.

Configuration comes from an INI-style file (or the same structure as
JSON) with the sections ``[grid]``, ``[suite]``, ``[estimate]`` and
``[differentiate]``; command-line flags override file values.  Unknown
sections or keys are errors.

Exit codes: 0 pass, 1 inequality violation, 2 configuration error,
3 numerical failure (including an exhausted search budget).
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import constants as K
from .derivative import (DEFAULT_STEPS, differentiate_at_zero, identity_family,
                         rubin_family)
from .errors import (BudgetExhausted, DimensionMismatch, EqualityHypothesisViolated,
                     LogUncertError, NumericalFailure, ZeroFunction, ConfigError)
from .functionals import entropy, log_moment_physical
from .lab import (DEFAULT_STARTS, default_cases, default_trials, estimate_constant,
                  family_samples, make_case, make_family, parse_case, scan_suite, schwartz_trials,
                  self_consistency)
from .radial import SCHEMES, make_grid, normalize_l2

__all__ = ["main", "build_parser", "load_config", "RunConfig", "CSV_COLUMNS"]

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
CSV_COLUMNS = ("case", "d", "n", "r_max", "trial", "lhs", "rhs", "slack", "mode", "anchor")
FORMATS = ("csv", "json")
DIFFERENTIATE_SEED_OFFSET = 2_000
NUMERIC_ERRORS = (NumericalFailure, EqualityHypothesisViolated, ZeroFunction, DimensionMismatch,
                  FloatingPointError)
DERIVATIVE_ANCHOR = "F'(0) <= G_0 k'(0) + k_0 G'(0)"


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class GridConfig:
    dimension: tuple = (3,)
    resolution: int = 2048
    r_max: float = 12.0
    scheme: str = "composite-gauss"


@dataclass(frozen=True)
class SuiteConfig:
    cases: tuple = ()
    trials: int = 50
    tolerance: float = 1e-6


@dataclass(frozen=True)
class EstimateConfig:
    case: str = "main"
    family: str = "hermite-span"
    budget: int = 2000
    seed: int = 1
    starts: int = DEFAULT_STARTS
    validation: int = 50
    margin: float = 1e-3
    tolerance: float = 1e-6


@dataclass(frozen=True)
class DifferentiateConfig:
    s1: tuple = (0.1, 0.2, 0.3)
    endpoints: tuple = ("rubin", "sobolev")
    trials: int = 20
    order: int = 2
    tolerance: float = 1e-4
    constant: str = "empirical"
    constant_budget: int = 200
    identity: bool = True


@dataclass(frozen=True)
class RunConfig:
    """The full, validated configuration of a run."""

    grid: GridConfig = field(default_factory=GridConfig)
    suite: SuiteConfig = field(default_factory=SuiteConfig)
    estimate: EstimateConfig = field(default_factory=EstimateConfig)
    differentiate: DifferentiateConfig = field(default_factory=DifferentiateConfig)

    def as_dict(self) -> dict:
        return {f.name: {g.name: _plain(getattr(getattr(self, f.name), g.name))
                         for g in fields(getattr(self, f.name))} for f in fields(self)}


SECTIONS = {"grid": GridConfig, "suite": SuiteConfig, "estimate": EstimateConfig,
            "differentiate": DifferentiateConfig}


def _plain(v):
    return list(v) if isinstance(v, tuple) else v


def _split(raw, sep: str) -> list:
    if isinstance(raw, (list, tuple)):
        return list(raw)
    return [x.strip() for x in str(raw).replace("\n", sep).split(sep) if x.strip()]


def _convert(section: str, key: str, default, raw):
    where = f"[{section}] {key}"
    try:
        if isinstance(default, bool):
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text in ("1", "true", "yes", "on"):
                return True
            if text in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if isinstance(default, int):
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(raw)
            return int(str(raw).strip()) if not isinstance(raw, (int, float)) else int(raw)
        if isinstance(default, float):
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError(raw)
            return value
        if isinstance(default, tuple):
            if section == "suite" and key == "cases":
                return tuple(str(x) for x in _split(raw, ";"))
            items = _split(raw, ",")
            if key == "dimension":
                return tuple(int(x) for x in items)
            if key == "s1":
                return tuple(float(x) for x in items)
            return tuple(str(x) for x in items)
        return str(raw).strip()
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: cannot interpret {raw!r} as {type(default).__name__}") from None


def _read_raw(path: Path) -> dict:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
            raise ConfigError(f"{path}: expected an object of sections")
        return data
    parser = configparser.ConfigParser(interpolation=None, default_section="__none__")
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return {name: dict(parser[name]) for name in parser.sections()}


def _build(raw: dict) -> RunConfig:
    parts = {}
    for section, data in raw.items():
        if section not in SECTIONS:
            raise ConfigError(f"unknown config section [{section}]; expected one of {sorted(SECTIONS)}")
        cls = SECTIONS[section]
        defaults = cls()
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in data.items():
            if key not in known:
                raise ConfigError(f"unknown key {key!r} in [{section}]; expected one of {sorted(known)}")
            values[key] = _convert(section, key, getattr(defaults, key), value)
        parts[section] = replace(defaults, **values)
    return _validate(RunConfig(**parts))


def _validate(cfg: RunConfig) -> RunConfig:
    g = cfg.grid
    if not g.dimension or any(d < 1 for d in g.dimension):
        raise ConfigError(f"[grid] dimension must list integers >= 1, got {list(g.dimension)}")
    if g.scheme not in SCHEMES:
        raise ConfigError(f"[grid] scheme must be one of {SCHEMES}, got {g.scheme!r}")
    if not g.r_max > 0:
        raise ConfigError(f"[grid] r_max must be positive, got {g.r_max}")
    for section, key in (("suite", "trials"), ("estimate", "validation"),
                         ("differentiate", "trials"), ("estimate", "starts"),
                         ("differentiate", "constant_budget")):
        if getattr(getattr(cfg, section), key) < 0:
            raise ConfigError(f"[{section}] {key} must be nonnegative")
    if cfg.estimate.budget < 0:
        raise ConfigError(f"[estimate] budget must be nonnegative, got {cfg.estimate.budget}")
    bad = [e for e in cfg.differentiate.endpoints if e not in ("rubin", "sobolev")]
    if bad:
        raise ConfigError(f"[differentiate] endpoints must be 'rubin' or 'sobolev', got {bad}")
    const = cfg.differentiate.constant
    if const != "empirical":
        try:
            value = float(const)
        except ValueError:
            raise ConfigError("[differentiate] constant must be 'empirical' or a positive number") from None
        if not value > 0:
            raise ConfigError(f"[differentiate] constant must be positive, got {const}")
    if cfg.differentiate.order < 1:
        raise ConfigError("[differentiate] order must be >= 1")
    return cfg


def load_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> RunConfig:
    """Read a config file (INI or JSON) and apply ``{section: {key: value}}`` overrides."""
    raw = _read_raw(Path(path)) if path is not None else {}
    for section, data in (overrides or {}).items():
        raw.setdefault(section, {}).update(data)
    return _build(raw)


# ---------------------------------------------------------------------------
# report serialization


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(rows: Sequence[dict], columns: Sequence[str] = CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore",
                            lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else
                             repr(row[k]) if isinstance(row.get(k), float) else row[k])
                         for k in columns})
    return buf.getvalue()


def _json_text(payload: dict) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write_reports(out: Path, stem: str, formats: Sequence[str], rows: Sequence[dict],
                   payload: dict, extra_csv: dict | None = None) -> list[Path]:
    written = []
    if "csv" in formats:
        path = out / f"{stem}.csv"
        _atomic_write(path, _csv_text(rows))
        written.append(path)
        for name, (columns, extra_rows) in (extra_csv or {}).items():
            path = out / f"{stem}_{name}.csv"
            _atomic_write(path, _csv_text(extra_rows, columns))
            written.append(path)
    if "json" in formats:
        path = out / f"{stem}.json"
        _atomic_write(path, _json_text(payload))
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# commands


class _Violation(Exception):
    pass


def _grids(cfg: RunConfig):
    g = cfg.grid
    return [make_grid(d, g.r_max, g.resolution, g.scheme) for d in g.dimension]


def _cases(cfg: RunConfig, d: int):
    if not cfg.suite.cases:
        return default_cases(d)
    return [parse_case(text, d) for text in cfg.suite.cases]


def cmd_verify(cfg: RunConfig, out: Path, formats: Sequence[str]) -> int:
    """Scan the inequality suite; exit 1 if a checked case has slack below tolerance.

    The CSV holds one row per (case, dimension): the minimum slack over the
    trial set and the trial attaining it.  The JSON adds every trial row.
    """
    tol = cfg.suite.tolerance
    plan = [(grid, _cases(cfg, grid.dimension), default_trials(grid.dimension, cfg.suite.trials))
            for grid in _grids(cfg)]
    rows, violations, errors, summary = [], [], [], []
    for grid, cases, trials in plan:
        reports = scan_suite(cases, trials, grid)
        by_case = {c.id: c for c in cases}
        for rep in reports:
            row = dict(rep.as_row(), tolerance=tol, checked=by_case[rep.case].checked)
            rows.append(row)
            if rep.status == "error":
                errors.append(row)
            elif row["checked"] and rep.slack is not None and rep.slack < -tol:
                violations.append(row)
        for case in cases:
            mine = [r for r in reports if r.case == case.id]
            with_slack = [r for r in mine if r.slack is not None]
            worst = min(with_slack, key=lambda r: r.slack, default=None)
            summary.append({
                "case": case.id, "d": grid.dimension, "n": grid.n, "r_max": float(grid.r_max),
                "trial": None if worst is None else worst.trial,
                "lhs": None if worst is None else worst.lhs,
                "rhs": None if worst is None else worst.rhs,
                "slack": None if worst is None else worst.slack,
                "mode": case.mode, "anchor": case.anchor, "checked": case.checked,
                "tolerance": tol, "evaluated": len(with_slack),
                "skipped": len(mine) - len(with_slack)})
    status = "violation" if violations else "numerical-failure" if errors else "pass"
    payload = {"command": "verify", "config": cfg.as_dict(), "status": status,
               "tolerance": tol, "rows": summary, "trials": rows,
               "violations": violations, "errors": errors}
    _write_reports(out, "verify", formats, summary, payload)
    for s in summary:
        slack = "n/a" if s["slack"] is None else f"{s['slack']:+.3e}"
        flag = "" if not s["checked"] else ("  VIOLATED" if s["slack"] is not None
                                            and s["slack"] < -tol else "  ok")
        print(f"d={s['d']}  {s['case']:<32} {s['mode']:<8} min slack {slack}{flag}")
    for v in violations:
        print(f"violation: {v['case']} (d={v['d']}) slack {v['slack']:.3e} at witness {v['trial']}",
              file=sys.stderr)
    for e in errors:
        print(f"numerical failure: {e['case']} (d={e['d']}) on {e['trial']}: {e['detail']}",
              file=sys.stderr)
    if violations:
        return EXIT_VIOLATION
    return EXIT_NUMERIC if errors else EXIT_OK


def _endpoint_p(d: int, s1: float, endpoint: str) -> float:
    return 2.0 / (1.0 - 2.0 * s1) if endpoint == "rubin" else 2.0 * d / (d - 2.0 * s1)


def _endpoint_constant(cfg: RunConfig, grid, s1: float, p1: float) -> tuple[float, str]:
    const = cfg.differentiate.constant
    if const != "empirical":
        return float(const), "bound"
    case = make_case("rubin", grid.dimension, p=p1, s=s1)
    est = estimate_constant(case, make_family("hermite-span", grid), cfg.differentiate.constant_budget,
                            cfg.estimate.seed, grid, starts=min(DEFAULT_STARTS,
                                                                cfg.differentiate.constant_budget))
    return est.c_emp, "empirical"


def cmd_differentiate(cfg: RunConfig, out: Path, formats: Sequence[str]) -> int:
    """Differentiate the weighted-norm family at its equality point and recover coefficients."""
    dc = cfg.differentiate
    grids = _grids(cfg)
    for s1 in dc.s1:
        if not 0.0 < s1 < 0.5:
            raise ConfigError(f"[differentiate] s1 must satisfy 0 < s1 < 1/2, got {s1}")
        if s1 < DEFAULT_STEPS[0]:
            raise ConfigError(f"[differentiate] s1 = {s1} is below the largest step {DEFAULT_STEPS[0]}")
    seeds = range(DIFFERENTIATE_SEED_OFFSET, DIFFERENTIATE_SEED_OFFSET + dc.trials)
    rows, quotients, coefficients = [], [], []
    failed = False
    for grid in grids:
        d = grid.dimension
        trials = schwartz_trials(seeds, m=4)
        profiles = [normalize_l2(t.profile(grid)) for t in trials]
        base = dict(d=d, n=grid.n, r_max=float(grid.r_max), tolerance=dc.tolerance)
        if dc.identity and profiles:
            rep = differentiate_at_zero(identity_family(), profiles[0], order=dc.order)
            rows.append(dict(base, case="identity", trial=trials[0].label, lhs=rep.lhs_derivative,
                             rhs=rep.rhs_derivative, slack=rep.slack, mode="exact",
                             anchor=DERIVATIVE_ANCHOR, error=rep.error))
            failed |= rep.slack < -dc.tolerance
        moments = np.array([[entropy(f), log_moment_physical(f)] for f in profiles])
        for s1 in dc.s1:
            for endpoint in dc.endpoints:
                p1 = _endpoint_p(d, s1, endpoint)
                C, provenance = _endpoint_constant(cfg, grid, s1, p1)
                family = rubin_family(d, s1, p1, "bound" if provenance == "bound" else "empirical", C)
                dp, db = K.derivative_coefficients(d, s1, p1)
                expected = (0.5 * dp, -db)
                derivs = []
                for t, f in zip(trials, profiles):
                    rep = differentiate_at_zero(family, f, order=dc.order)
                    derivs.append(rep.lhs_derivative)
                    rows.append(dict(base, case=family.name, trial=t.label, lhs=rep.lhs_derivative,
                                     rhs=rep.rhs_derivative, slack=rep.slack, mode=rep.constant_label,
                                     anchor=DERIVATIVE_ANCHOR, error=rep.error, endpoint=endpoint,
                                     constant=C, constant_provenance=provenance))
                    for i, h in enumerate(rep.steps):
                        quotients.append(dict(family=family.name, d=d, trial=t.label, step=h,
                                              lhs_quotient=rep.lhs_quotients[i],
                                              rhs_quotient=rep.rhs_quotients[i],
                                              finite_t_slack=rep.finite_t_slack[i]))
                if len(derivs) >= 2:
                    fit = np.linalg.lstsq(moments, np.asarray(derivs), rcond=None)[0]
                    deviation = float(np.max(np.abs(fit - np.asarray(expected))))
                    ok = deviation <= dc.tolerance
                    failed |= not ok
                    coefficients.append(dict(
                        d=d, s1=s1, p1=p1, endpoint=endpoint,
                        recovered=[float(x) for x in fit], expected=list(expected),
                        deviation=deviation, tolerance=dc.tolerance, ok=ok))
    payload = {"command": "differentiate", "config": cfg.as_dict(), "rows": rows,
               "coefficients": coefficients, "quotients": quotients,
               "status": "violation" if failed else "pass"}
    qcols = ("family", "d", "trial", "step", "lhs_quotient", "rhs_quotient", "finite_t_slack")
    _write_reports(out, "differentiate", formats, rows, payload,
                   {"quotients": (qcols, quotients)})
    for c in coefficients:
        rec = ", ".join(f"{x + 0.0:.8f}" for x in c["recovered"])
        exp = ", ".join(f"{round(x, 12) + 0.0:g}" for x in c["expected"])
        print(f"d={c['d']}  s1={c['s1']:g}  {c['endpoint']:<8} p1={c['p1']:.6g}  "
              f"coefficients ({rec}) expected ({exp})  dev {c['deviation']:.2e}"
              f"  {'ok' if c['ok'] else 'MISMATCH'}")
    for r in rows:
        if r["case"] == "identity":
            print(f"d={r['d']}  identity family slack {r['slack']:+.3e}")
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_estimate(cfg: RunConfig, out: Path, formats: Sequence[str]) -> int:
    """Estimate the unknown constant of a case and validate it on disjoint trials."""
    ec = cfg.estimate
    plan = []
    for grid in _grids(cfg):
        case = parse_case(ec.case, grid.dimension)
        if case.mode != "unknown":
            raise ConfigError(f"[estimate] case {case.id} has a known constant; nothing to estimate")
        plan.append((grid, case, make_family(ec.family, grid)))
    rows, estimates, validations = [], [], []
    failed = False
    for grid, case, family in plan:
        est = estimate_constant(case, family, ec.budget, ec.seed, grid, starts=ec.starts)
        estimates.append(est.to_dict())
        base = dict(case=case.id, d=grid.dimension, n=grid.n, r_max=float(grid.r_max),
                    anchor=case.anchor, tolerance=ec.tolerance)
        rows.append(dict(base, trial=f"{family.name} (seed={ec.seed}, budget={ec.budget})",
                         lhs=est.c_emp, rhs=None, slack=None, mode="estimate"))
        if ec.validation and not case.ratio:
            samples = family_samples(family, grid, ec.validation, ec.seed)
            reports = self_consistency(case, est, samples, grid, ec.margin)
            for rep in reports:
                row = dict(rep.as_row(), mode="validation", tolerance=ec.tolerance)
                rows.append(row)
                validations.append(row)
                if rep.slack is not None and rep.slack < -ec.tolerance:
                    failed = True
        print(f"d={grid.dimension}  {case.id}: c_emp = {est.c_emp:.12g} over {family.name} "
              f"({est.evaluations} evaluations, seed {ec.seed})")
        print(f"   witness: {json.dumps(_clean(est.witness), sort_keys=True)}")
    worst = min((r for r in validations if r["slack"] is not None),
                key=lambda r: r["slack"], default=None)
    if worst is not None:
        print(f"validation with c = c_emp + {ec.margin:g}: min slack {worst['slack']:+.3e} "
              f"({worst['trial']})")
    payload = {"command": "estimate", "config": cfg.as_dict(), "rows": rows,
               "estimates": estimates, "validation": validations, "status": "violation" if failed else "pass"}
    _write_reports(out, "estimate", formats, rows, payload)
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_constants(cfg: RunConfig, out: Path | None, formats: Sequence[str]) -> int:
    """Print the HLS constants, the log-HLS constant and the entropic bound."""
    dims = cfg.grid.dimension
    table = []
    for d in dims:
        for frac in (0.0, 0.25, 0.5, 0.75):
            table.append(dict(quantity="k_lambda", d=d, lam=frac * d,
                              value=K.hls_constant(d, frac * d), provenance="closed-form"))
        fd = K.log_hls_constant_fd(d)
        table.append(dict(quantity="C_0", d=d, lam=0.0, value=K.log_hls_constant(d),
                          provenance="closed-form"))
        table.append(dict(quantity="C_0", d=d, lam=0.0, value=fd.value, provenance=fd.provenance))
        table.append(dict(quantity="beckner", d=d, lam=None, value=K.beckner_bound(d),
                          provenance="closed-form"))
    print(f"{'quantity':<10} {'d':>3} {'lambda':>8} {'value':>22}  provenance")
    for row in table:
        lam = "" if row["lam"] is None else f"{row['lam']:g}"
        print(f"{row['quantity']:<10} {row['d']:>3} {lam:>8} {row['value']:>22.15g}  {row['provenance']}")
    if out is not None:
        cols = ("quantity", "d", "lam", "value", "provenance")
        if "csv" in formats:
            _atomic_write(out / "constants.csv", _csv_text(table, cols))
        if "json" in formats:
            _atomic_write(out / "constants.json",
                          _json_text({"command": "constants", "dimensions": list(dims),
                                      "rows": table}))
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "differentiate": cmd_differentiate,
            "estimate": cmd_estimate, "constants": cmd_constants}


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loguncert",
        description="Numerical laboratory for logarithmic uncertainty inequalities "
                    "of radial functions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI or JSON config file")
    common.add_argument("--dimension", metavar="D",
                        help="dimension(s), e.g. 3 or 1,2,3 (overrides [grid] dimension)")
    common.add_argument("--resolution", metavar="N", type=int, help="number of radial nodes")
    common.add_argument("--rmax", metavar="R", type=float, help="radial cutoff")
    common.add_argument("--seed", metavar="S", type=int, help="master seed for estimation")
    common.add_argument("--out", metavar="DIR",
                        help="report directory (default: reports; constants writes "
                             "files only when given)")
    common.add_argument("--format", choices=FORMATS,
                        help="write only this report format (default: both)")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {"verify": "scan the inequality suite over the trial set",
             "differentiate": "differentiate the weighted-norm family at its equality point",
             "estimate": "estimate an unknown constant and validate it",
             "constants": "print k_lambda, C_0 and the entropic bound"}
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def _overrides(args) -> dict:
    grid, estimate = {}, {}
    if args.dimension is not None:
        grid["dimension"] = args.dimension
    if args.resolution is not None:
        grid["resolution"] = args.resolution
    if args.rmax is not None:
        grid["r_max"] = args.rmax
    if args.seed is not None:
        estimate["seed"] = args.seed
    return {k: v for k, v in (("grid", grid), ("estimate", estimate)) if v}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    formats = (args.format,) if args.format else FORMATS
    try:
        cfg = load_config(args.config, _overrides(args))
        if args.command == "constants":
            return cmd_constants(cfg, None if args.out is None else Path(args.out), formats)
        return COMMANDS[args.command](cfg, Path(args.out or "reports"), formats)
    except BudgetExhausted as exc:
        print(f"error: budget-exhausted: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except NUMERIC_ERRORS as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except LogUncertError as exc:
        # every remaining domain error is a parameter out of its admissible range
        print(f"config error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
