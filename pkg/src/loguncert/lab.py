"""Registry of the inequalities, trial profiles, gap scans and constant search.

Each :class:`InequalityCase` pairs a left- and right-hand functional with
its constant mode: ``exact`` and ``bound`` cases are checked for
nonnegative slack, ``unknown`` cases report ``rhs`` without the additive
constant, and ratio cases (the weighted radial inequality) report
``lhs / rhs`` when a constant is estimated.
"""

from __future__ import annotations

import json
import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import eval_genlaguerre, gammaln

from . import constants as K
from .errors import BudgetExhausted, InvalidParameters, LogUncertError, ZeroFunction
from .functionals import (entropy, gradient_sq, hls_energy, log_hls_energy, log_moment_fourier,
                          log_moment_physical, lp_norm_spectral, mass, mass_entropy,
                          sobolev_norm, weighted_lp_norm)
from .radial import RadialGrid, RadialProfile, SpectralProfile, l2_norm, normalize_l2
from .spectral import transform_matrix

__all__ = [
    "TRIAL_KINDS",
    "Trial",
    "trial",
    "hermite_mode",
    "default_trials",
    "schwartz_trials",
    "InequalityCase",
    "CASE_IDS",
    "make_case",
    "parse_case",
    "default_cases",
    "GapReport",
    "evaluate_gap",
    "scan_suite",
    "min_slack_by_case",
    "TrialFamily",
    "make_family",
    "ConstantEstimate",
    "estimate_constant",
    "family_samples",
    "self_consistency",
    "gaussian_main_value",
    "worker_count",
]

ASSUMPTION_TOL = 1e-10
SLACK_TOL = 1e-6
# three modes (two angles) keep the multi-start search reliably in the best basin
DEFAULT_SPAN = 3
DEFAULT_STARTS = 16
VALIDATION_STREAM = 7919


def worker_count() -> int:
    """Worker cap from ``LOGUNCERT_THREADS`` (default: up to 4 cores)."""
    raw = os.environ.get("LOGUNCERT_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise InvalidParameters(f"LOGUNCERT_THREADS must be an integer, got {raw!r}") from None
        return max(1, n)
    return max(1, min(4, os.cpu_count() or 1))


# ---------------------------------------------------------------------------
# trial profiles


def hermite_mode(d: int, k: int, r: np.ndarray) -> np.ndarray:
    """Unit-norm radial Hermite function ``L_k^{(d/2-1)}(r^2) e^{-r^2/2}``.

    These are eigenfunctions of the radial Fourier transform with
    eigenvalue ``(-1)^k``.
    """
    alpha = 0.5 * d - 1.0
    log_norm = 0.5 * (math.log(2.0) + gammaln(k + 1) - gammaln(k + alpha + 1)
                      - _log_sphere(d))
    return math.exp(log_norm) * eval_genlaguerre(k, alpha, r * r) * np.exp(-0.5 * r * r)


def _log_sphere(d: int) -> float:
    # log of the unit sphere area
    return math.log(2.0) + 0.5 * d * math.log(math.pi) - gammaln(0.5 * d)


@lru_cache(maxsize=32)
def _hermite_basis(grid: RadialGrid, m: int) -> tuple[np.ndarray, np.ndarray]:
    basis = np.array([hermite_mode(grid.dimension, k, grid.nodes) for k in range(m)])
    spec = basis @ transform_matrix(grid, grid).T
    basis.setflags(write=False)
    spec.setflags(write=False)
    return basis, spec


def _combination(grid: RadialGrid, coeffs: np.ndarray, label: str) -> RadialProfile:
    basis, spec = _hermite_basis(grid, coeffs.size)
    f = RadialProfile(grid, coeffs @ basis, label)
    # the transform is linear: reuse the transformed modes
    return f.attach_spectrum(SpectralProfile(grid, coeffs @ spec, label))


def _fmt(v) -> str:
    return f"{v:g}" if isinstance(v, float) else str(v)


TRIAL_KINDS = ("gaussian", "exponential", "poly-decay", "radial-hermite",
               "random-schwartz", "gaussian-mixture")
_REQUIRED = {
    "gaussian": ("a",), "exponential": ("a",), "poly-decay": ("a", "k"),
    "radial-hermite": ("k",), "random-schwartz": ("seed", "m"),
    "gaussian-mixture": ("seed", "m"),
}


@dataclass(frozen=True)
class Trial:
    """A named trial profile, e.g. ``Trial("gaussian", (("a", 0.5),))``."""

    kind: str
    params: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in TRIAL_KINDS:
            raise InvalidParameters(f"unknown trial kind {self.kind!r}; expected one of {TRIAL_KINDS}")
        given = dict(self.params)
        missing = [k for k in _REQUIRED[self.kind] if k not in given]
        extra = [k for k in given if k not in _REQUIRED[self.kind]]
        if missing or extra:
            raise InvalidParameters(
                f"{self.kind} takes parameters {_REQUIRED[self.kind]}, got {tuple(given)}")
        for key in ("a",):
            if key in given and not given[key] > 0:
                raise InvalidParameters(f"{self.kind}: {key} must be positive, got {given[key]}")
        if self.kind == "poly-decay" and not given["k"] > 0:
            raise InvalidParameters(f"poly-decay: k must be positive, got {given['k']}")
        for key in ("k", "m", "seed"):
            if key in given and self.kind != "poly-decay":
                v = given[key]
                if int(v) != v or v < (1 if key == "m" else 0):
                    raise InvalidParameters(f"{self.kind}: {key} must be a nonnegative integer, got {v}")
        object.__setattr__(self, "params", tuple((k, given[k]) for k in _REQUIRED[self.kind]))

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={_fmt(v)}" for k, v in self.params)
        return f"{self.kind}({inner})"

    @property
    def positive(self) -> bool:
        return self.kind in ("gaussian", "exponential", "poly-decay", "gaussian-mixture") or (
            self.kind == "radial-hermite" and dict(self.params)["k"] == 0)

    def profile(self, grid: RadialGrid) -> RadialProfile:
        p = dict(self.params)
        r = grid.nodes
        d = grid.dimension
        if self.kind == "gaussian":
            return RadialProfile(grid, np.exp(-p["a"] * r * r), self.label)
        if self.kind == "exponential":
            return RadialProfile(grid, np.exp(-p["a"] * r), self.label)
        if self.kind == "poly-decay":
            return RadialProfile(grid, (1.0 + (r / p["a"]) ** 2) ** (-p["k"]), self.label)
        if self.kind == "radial-hermite":
            return RadialProfile(grid, hermite_mode(d, int(p["k"]), r), self.label)
        rng = np.random.default_rng(int(p["seed"]))
        m = int(p["m"])
        if self.kind == "random-schwartz":
            return _combination(grid, rng.standard_normal(m), self.label)
        weights = rng.uniform(0.2, 1.0, m)
        widths = np.exp(rng.uniform(math.log(0.3), math.log(1.2), m))
        return RadialProfile(grid, weights @ np.exp(-np.outer(widths, r * r)), self.label)


def trial(kind: str, grid: RadialGrid, **params) -> RadialProfile:
    """Sample a trial profile of the given kind on ``grid``."""
    return Trial(kind, tuple(params.items())).profile(grid)


def schwartz_trials(seeds: Sequence[int], m: int = 6) -> list[Trial]:
    return [Trial("random-schwartz", (("seed", int(s)), ("m", m))) for s in seeds]


def default_trials(d: int, count: int = 50) -> list[Trial]:
    """A deterministic mixed trial set (positive profiles first)."""
    out = [Trial("gaussian", (("a", a),)) for a in (0.25, 0.5, 1.0, 2.0)]
    out += [Trial("exponential", (("a", a),)) for a in (1.0, 2.0)]
    out += [Trial("poly-decay", (("a", 1.0), ("k", float(d + 1)))),
            Trial("poly-decay", (("a", 2.0), ("k", float(d + 2))))]
    out += [Trial("radial-hermite", (("k", k),)) for k in range(4)]
    seed = 0
    while len(out) < count:
        kind = "gaussian-mixture" if seed % 2 == 0 else "random-schwartz"
        out.append(Trial(kind, (("seed", 1000 + seed), ("m", 4 if kind == "gaussian-mixture" else 6))))
        seed += 1
    return out[:count]


# ---------------------------------------------------------------------------
# inequality cases

CASE_IDS = ("hls", "log-hls", "log-sobolev", "hausdorff-young", "beckner", "sobolev-log",
            "hardy-log", "stein-weiss-log", "rubin", "main")

ANCHORS = {
    "hls": "int int f(x) f(y) |x-y|^(-lambda) dx dy <= k_lambda ||f||_{2d/(2d-lambda)}^2",
    "log-hls": "int int -log|x-y| f(x) f(y) dx dy <= (1/d) int f log f dx + C_0",
    "log-sobolev": "int |f|^2 log|f|^2 dx <= (a^2/pi) int |grad f|^2 dx - d(1 + log a)",
    "hausdorff-young": "||f^||_{p'} <= A_p ||f||_p",
    "beckner": "int |f|^2 log|f| dx + int |f^|^2 log|f^| dxi <= (d/2)(log 2 - 1)",
    "sobolev-log": "(2/d) int |f|^2 log|f| dx <= int |f^|^2 log|xi| dxi + c",
    "hardy-log": "-int |f|^2 log|x| dx <= int |f^|^2 log|xi| dxi + c",
    "stein-weiss-log": ("(2(1-t)/d) int |f|^2 log|f| dx - t int |f|^2 log|x| dx "
                        "<= int |f^|^2 log|xi| dxi + c"),
    "rubin": "|| |x|^(-beta) f ||_p <= C(p,s) ||f||_{H^s}, beta = s + d/p - d/2",
    "main": "2 int |f|^2 log|f| dx + (d-1) int |f|^2 log|x| dx <= int |f^|^2 log|xi| dxi + c",
}

Side = Callable[[RadialProfile], float]


@dataclass(frozen=True)
class InequalityCase:
    """One registered inequality ``lhs(f) <= rhs(f)`` (plus ``c`` when unknown).

    Attributes
    ----------
    id : str
        Case identifier with parameters, e.g. ``"stein-weiss-log(t=0.5)"``.
    kind : str
        Base identifier from :data:`CASE_IDS`.
    d : int
    params : tuple
        Case parameters as ``(name, value)`` pairs.
    assumptions : tuple of str
        Any of ``"nonnegative"``, ``"unit-l2"``, ``"unit-l1"``.
    normalization : str or None
        Normalization applied before evaluation (``"l2"``, ``"l1"``, ``"lp"``).
    mode : str
        ``"exact"``, ``"bound"`` or ``"unknown"``.
    constant : float or None
        The exact or bounding constant (from :mod:`loguncert.constants`).
    ratio : bool
        Whether the constant is multiplicative (estimated as ``lhs/rhs``).
    """

    id: str
    kind: str
    d: int
    params: tuple
    assumptions: tuple
    normalization: str | None
    mode: str
    constant: float | None
    lhs: Side = field(repr=False, compare=False)
    rhs: Side = field(repr=False, compare=False)
    ratio: bool = False
    norm_exponent: float = 2.0

    @property
    def anchor(self) -> str:
        return ANCHORS[self.kind]

    @property
    def checked(self) -> bool:
        """Whether nonnegative slack is asserted for this case."""
        return self.mode in ("exact", "bound")


def _case_id(kind: str, params: dict) -> str:
    if not params:
        return kind
    return kind + "(" + ",".join(f"{k}={_fmt(v)}" for k, v in params.items()) + ")"


def make_case(kind: str, d: int, **params) -> InequalityCase:
    """Build a registered case; parameters default to representative values."""
    if kind not in CASE_IDS:
        raise InvalidParameters(f"unknown case {kind!r}; expected one of {CASE_IDS}")
    if int(d) != d or d < 1:
        raise InvalidParameters(f"dimension must be an integer >= 1, got {d!r}")
    d = int(d)
    allowed = {"hls": ("lam",), "log-sobolev": ("a",), "hausdorff-young": ("p",),
               "stein-weiss-log": ("t",), "rubin": ("p", "s")}.get(kind, ())
    extra = [k for k in params if k not in allowed]
    if extra:
        raise InvalidParameters(f"case {kind} takes parameters {allowed}, got {tuple(params)}")
    common = dict(kind=kind, d=d)

    if kind == "hls":
        lam = float(params.get("lam", 0.5 * d))
        if not 0.0 < lam < d:
            raise InvalidParameters(f"hls: lambda must satisfy 0 < lambda < d = {d}, got {lam}")
        q = 2.0 * d / (2.0 * d - lam)
        k = K.hls_constant(d, lam)
        return InequalityCase(
            id=_case_id(kind, {"lam": lam}), params=(("lam", lam),),
            assumptions=("nonnegative",), normalization="lp", mode="exact", constant=k,
            lhs=lambda f: hls_energy(f, lam),
            rhs=lambda f: k * weighted_lp_norm(f, q, 0.0) ** 2, norm_exponent=q, **common)
    if kind == "log-hls":
        c0 = K.log_hls_constant(d)
        return InequalityCase(
            id=kind, params=(), assumptions=("nonnegative", "unit-l1"), normalization="l1",
            mode="exact", constant=c0, lhs=log_hls_energy,
            rhs=lambda f: mass_entropy(f) / d + c0, **common)
    if kind == "log-sobolev":
        a = float(params.get("a", math.sqrt(math.pi)))
        if not a > 0:
            raise InvalidParameters(f"log-sobolev: a must be positive, got {a}")
        return InequalityCase(
            id=_case_id(kind, {"a": a}), params=(("a", a),), assumptions=("unit-l2",),
            normalization="l2", mode="exact", constant=None,
            lhs=lambda f: 2.0 * entropy(f),
            rhs=lambda f: K.log_sobolev_rhs(d, a, gradient_sq(f)), **common)
    if kind == "hausdorff-young":
        p = float(params.get("p", 4.0 / 3.0))
        if not 1.0 < p < 2.0:
            raise InvalidParameters(f"hausdorff-young: need 1 < p < 2, got {p}")
        amp = K.hausdorff_young_constant(d, p)
        q = p / (p - 1.0)
        return InequalityCase(
            id=_case_id(kind, {"p": p}), params=(("p", p),), assumptions=("unit-l2",),
            normalization="l2", mode="bound", constant=amp,
            lhs=lambda f: lp_norm_spectral(f, q),
            rhs=lambda f: amp * weighted_lp_norm(f, p, 0.0), **common)
    if kind == "beckner":
        bound = K.beckner_bound(d)
        return InequalityCase(
            id=kind, params=(), assumptions=("unit-l2",), normalization="l2", mode="exact",
            constant=bound, lhs=lambda f: entropy(f) + entropy(f.spectrum),
            rhs=lambda f: bound, **common)
    if kind in ("sobolev-log", "hardy-log", "stein-weiss-log", "main"):
        if kind == "stein-weiss-log":
            t = float(params.get("t", 0.5))
            if not 0.0 <= t <= 1.0:
                raise InvalidParameters(f"stein-weiss-log: t must lie in [0, 1], got {t}")
        else:
            t = {"sobolev-log": 0.0, "hardy-log": 1.0}.get(kind)
        if kind == "main":
            def lhs(f):
                return 2.0 * entropy(f) + (d - 1) * log_moment_physical(f)
        elif t == 0.0:
            def lhs(f):
                return (2.0 / d) * entropy(f)
        elif t == 1.0:
            def lhs(f):
                return -log_moment_physical(f)
        else:
            def lhs(f):
                return 2.0 * (1.0 - t) / d * entropy(f) - t * log_moment_physical(f)
        case_params = {"t": t} if kind == "stein-weiss-log" else {}
        return InequalityCase(
            id=_case_id(kind, case_params), params=tuple(case_params.items()),
            assumptions=("unit-l2",), normalization="l2", mode="unknown", constant=None,
            lhs=lhs, rhs=log_moment_fourier, **common)
    # rubin
    s = float(params.get("s", 0.25))
    p = float(params.get("p", 2.0 / (1.0 - 2.0 * s) if s < 0.5 else 2.0 * d / (d - 2.0 * s)))
    try:
        beta = K.rubin_beta(d, p, s)
    except LogUncertError as exc:
        raise InvalidParameters(f"rubin: {exc}") from None
    if math.isinf(p):
        raise InvalidParameters("rubin: p must be finite")
    return InequalityCase(
        id=_case_id(kind, {"p": p, "s": s}), params=(("p", p), ("s", s)),
        assumptions=("unit-l2",), normalization="l2", mode="unknown", constant=None,
        lhs=lambda f: weighted_lp_norm(f, p, beta), rhs=lambda f: sobolev_norm(f, s),
        ratio=True, **common)


_CASE_RE = re.compile(r"^\s*([a-z-]+)\s*(?:\((.*)\))?\s*$")


def parse_case(text: str, d: int) -> InequalityCase:
    """Parse ``"name"`` or ``"name(k=v,...)"`` into a case."""
    m = _CASE_RE.match(text)
    if not m:
        raise InvalidParameters(f"cannot parse case {text!r}")
    params = {}
    if m.group(2):
        for item in m.group(2).split(","):
            if "=" not in item:
                raise InvalidParameters(f"case parameter {item!r} is not key=value")
            key, value = (x.strip() for x in item.split("=", 1))
            key = "lam" if key in ("lambda", "lam") else key
            try:
                params[key] = float(value)
            except ValueError:
                raise InvalidParameters(f"case parameter {key} is not a number: {value!r}") from None
    return make_case(m.group(1), d, **params)


def default_cases(d: int) -> list[InequalityCase]:
    """Every registered inequality, with the standard parameter sweeps."""
    cases = [make_case("hls", d, lam=lam) for lam in (0.25 * d, 0.5 * d, 0.75 * d)]
    cases.append(make_case("log-hls", d))
    cases += [make_case("log-sobolev", d, a=a) for a in (0.5, 1.0, math.sqrt(math.pi), 2.0)]
    cases.append(make_case("hausdorff-young", d))
    cases.append(make_case("beckner", d))
    cases += [make_case("sobolev-log", d), make_case("hardy-log", d)]
    cases += [make_case("stein-weiss-log", d, t=t) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
    cases.append(make_case("rubin", d))
    cases.append(make_case("main", d))
    return cases


# ---------------------------------------------------------------------------
# gap evaluation


@dataclass(frozen=True)
class GapReport:
    """Outcome of one (case, trial) evaluation.

    ``slack`` is ``rhs - lhs`` and is ``None`` whenever the assumption
    check failed or the evaluation raised; ``status`` is ``"ok"``,
    ``"assumption-failure"`` or ``"error"`` and ``detail`` explains why.
    """

    case: str
    trial: str
    d: int
    n: int
    r_max: float
    lhs: float | None
    rhs: float | None
    slack: float | None
    mode: str
    anchor: str
    assumptions_ok: bool
    detail: str = ""
    note: str = ""
    status: str = "ok"

    def as_row(self) -> dict:
        return asdict(self)


def _normalize(case: InequalityCase, f: RadialProfile) -> RadialProfile:
    if case.normalization == "l2":
        return normalize_l2(f)
    if case.normalization == "l1":
        m = mass(f)
        if not m > 0:
            raise ZeroFunction("profile has nonpositive mass")
        return f.scaled(1.0 / m)
    if case.normalization == "lp":
        norm = weighted_lp_norm(f, case.norm_exponent, 0.0)
        if norm == 0.0:
            raise ZeroFunction("cannot normalize the zero function")
        return f.scaled(1.0 / norm)
    return f


def check_assumptions(case: InequalityCase, f: RadialProfile) -> tuple[bool, str]:
    failed = []
    for name in case.assumptions:
        if name == "nonnegative":
            v = f.values
            if not f.is_real or np.min(v) < -ASSUMPTION_TOL * np.max(np.abs(v)):
                failed.append("f >= 0 fails")
        elif name == "unit-l2":
            if abs(l2_norm(f) - 1.0) > ASSUMPTION_TOL:
                failed.append(f"||f||_2 = {l2_norm(f)!r} != 1")
        elif name == "unit-l1":
            if abs(mass(f) - 1.0) > ASSUMPTION_TOL:
                failed.append(f"||f||_1 = {mass(f)!r} != 1")
    return (not failed), "; ".join(failed)


def evaluate_gap(case: InequalityCase, f: RadialProfile, label: str | None = None) -> GapReport:
    """Evaluate ``lhs``, ``rhs`` and the slack of ``case`` on ``f``.

    Profiles are normalized as the case requires; assumption failures and
    numerical errors are recorded in the report instead of raised.
    """
    grid = f.grid
    base = dict(case=case.id, trial=label if label is not None else f.label, d=grid.dimension,
                n=grid.n, r_max=float(grid.r_max), mode=case.mode, anchor=case.anchor)
    if grid.dimension != case.d:
        return GapReport(lhs=None, rhs=None, slack=None, assumptions_ok=False,
                         detail=f"case is for d={case.d}", status="error", **base)
    note = "rhs excludes the unknown constant" if case.mode == "unknown" else ""
    try:
        g = _normalize(case, f)
        ok, why = check_assumptions(case, g)
        if not ok:
            return GapReport(lhs=None, rhs=None, slack=None, assumptions_ok=False,
                             detail=why, note=note, status="assumption-failure", **base)
        lhs, rhs = float(case.lhs(g)), float(case.rhs(g))
        if not (math.isfinite(lhs) and math.isfinite(rhs)):
            raise FloatingPointError(f"non-finite value: lhs={lhs}, rhs={rhs}")
    except (LogUncertError, FloatingPointError, ValueError) as exc:
        status = "assumption-failure" if isinstance(exc, ZeroFunction) else "error"
        return GapReport(lhs=None, rhs=None, slack=None, assumptions_ok=False,
                         detail=f"{type(exc).__name__}: {exc}", note=note, status=status, **base)
    return GapReport(lhs=lhs, rhs=rhs, slack=rhs - lhs, assumptions_ok=True, note=note, **base)


def scan_suite(cases: Sequence[InequalityCase], trials: Sequence, grid: RadialGrid,
               threads: int | None = None) -> list[GapReport]:
    """Evaluate every (case, trial) pair; failures are reported, never raised.

    ``trials`` holds :class:`Trial` objects or ready profiles.  Results come
    back in case-major order regardless of the worker count.
    """
    profiles = []
    for t in trials:
        profiles.append(t if isinstance(t, RadialProfile) else t.profile(grid))
    if not profiles or not cases:
        return []
    # warm the shared per-grid caches once, outside the workers
    profiles[0].spectrum
    items = [(c, f) for c in cases for f in profiles]
    workers = threads or worker_count()
    if workers == 1:
        return [evaluate_gap(c, f) for c, f in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda cf: evaluate_gap(*cf), items))


def min_slack_by_case(reports: Sequence[GapReport]) -> dict:
    """Minimum slack (and its trial) per case over reports with a slack."""
    out: dict = {}
    for rep in reports:
        if rep.slack is None:
            continue
        best = out.get(rep.case)
        if best is None or rep.slack < best[0]:
            out[rep.case] = (rep.slack, rep.trial)
    return out


# ---------------------------------------------------------------------------
# parametric families and constant estimation


@dataclass(frozen=True)
class TrialFamily:
    """A continuous family of profiles for derivative-free search.

    Attributes
    ----------
    name : str
    dim : int
        Number of continuous parameters (at most 6).
    build : callable ``(x, grid) -> RadialProfile``
    describe : callable ``x -> dict``
        Human-readable witness parameters.
    spread : float
        Scale of the seeded starting design.
    """

    name: str
    dim: int
    build: Callable = field(repr=False, compare=False)
    describe: Callable = field(repr=False, compare=False)
    spread: float = 1.0


def _sphere_point(angles: np.ndarray) -> np.ndarray:
    out = np.ones(angles.size + 1)
    for i, a in enumerate(angles):
        out[i] *= math.cos(a)
        out[i + 1:] *= math.sin(a)
    return out


def make_family(spec: str, grid: RadialGrid) -> TrialFamily:
    """Build a family from ``"gaussian"``, ``"hermite-span[:m]"`` or ``"mixture"``."""
    name, _, arg = spec.partition(":")
    if name == "gaussian":
        # keep both e^{-a r^2} and its transform resolved on the grid
        lo, hi = math.log(30.0 / grid.r_max ** 2), math.log(grid.r_max ** 2 / 120.0)
        if lo > hi:
            raise InvalidParameters("grid too small for the gaussian family")

        def width(x):
            return math.exp(min(max(float(x[0]), lo), hi))

        return TrialFamily(
            "gaussian", 1,
            lambda x, g: RadialProfile(g, np.exp(-width(x) * g.nodes ** 2),
                                       f"gaussian(a={width(x):.12g})"),
            lambda x: {"a": width(x)}, spread=0.5 * (hi - lo))
    if name == "hermite-span":
        m = int(arg) if arg else DEFAULT_SPAN
        if not 2 <= m <= 7:
            raise InvalidParameters(f"hermite-span takes 2..7 modes (<= 6 parameters), got {m}")

        def coeffs(x):
            return _sphere_point(np.asarray(x, dtype=float))

        return TrialFamily(
            f"hermite-span:{m}", m - 1,
            lambda x, g: _combination(g, coeffs(x), "hermite-span"),
            lambda x: {"coefficients": [float(c) for c in coeffs(x)]}, spread=1.0)
    if name == "mixture":
        def parts(x):
            x = np.asarray(x, dtype=float)
            w = np.concatenate(([1.0], np.exp(np.clip(x[:2], -8, 8))))
            a = np.exp(np.clip(x[2:], math.log(30.0 / grid.r_max ** 2), math.log(4.0)))
            return w, a

        return TrialFamily(
            "mixture", 5,
            lambda x, g: RadialProfile(g, parts(x)[0] @ np.exp(-np.outer(parts(x)[1], g.nodes ** 2)),
                                       "mixture"),
            lambda x: {"weights": parts(x)[0].tolist(), "widths": parts(x)[1].tolist()},
            spread=1.0)
    raise InvalidParameters(f"unknown family {spec!r}; expected gaussian, hermite-span[:m] or mixture")


@dataclass(frozen=True)
class ConstantEstimate:
    """Empirical constant: the supremum found over a searched family.

    ``c_emp`` is ``max(lhs - rhs)`` (or ``max lhs/rhs`` for ratio cases) and
    is a lower bound for any valid constant.
    """

    case: str
    family: str
    c_emp: float
    witness: dict
    evaluations: int
    seed: int
    budget: int
    starts: int
    budget_exhausted: bool
    d: int
    n: int
    r_max: float
    start_values: tuple
    ratio: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["start_values"] = list(self.start_values)
        return out


class _OutOfBudget(Exception):
    pass


def _objective(case: InequalityCase, family: TrialFamily, grid: RadialGrid):
    def value(x) -> float:
        rep = evaluate_gap(case, family.build(x, grid))
        if rep.slack is None:
            return -math.inf
        return rep.lhs / rep.rhs if case.ratio else rep.lhs - rep.rhs
    return value


def _run_start(value, x0: np.ndarray, allotment: int):
    count = 0
    best = (-math.inf, x0)

    def neg(x):
        nonlocal count, best
        if count >= allotment:
            raise _OutOfBudget
        count += 1
        v = value(x)
        if v > best[0]:
            best = (v, np.array(x, dtype=float))
        return -v if math.isfinite(v) else 1e300

    exhausted = False
    try:
        res = minimize(neg, x0, method="Nelder-Mead",
                       options={"maxfev": allotment, "xatol": 1e-7, "fatol": 1e-12})
        exhausted = not res.success
    except _OutOfBudget:
        exhausted = True
    return best[0], best[1], count, exhausted


def estimate_constant(case: InequalityCase, family: TrialFamily, budget: int = 2000,
                      seed: int = 1, grid: RadialGrid | None = None, starts: int = DEFAULT_STARTS,
                      threads: int | None = None) -> ConstantEstimate:
    """Seeded multi-start Nelder-Mead search for the empirical constant.

    The budget is split evenly over the starts up front and every start
    draws its initial point from its own child of ``SeedSequence(seed)``,
    so the result does not depend on the worker count.
    """
    if case.mode != "unknown":
        raise InvalidParameters(f"{case.id} has a known constant; nothing to estimate")
    if grid is None or grid.dimension != case.d:
        raise InvalidParameters("estimate_constant needs a grid in the case's dimension")
    if budget <= 0:
        raise BudgetExhausted(f"budget {budget} allows no evaluations")
    starts = max(1, min(int(starts), budget))
    shares = [budget // starts + (1 if i < budget % starts else 0) for i in range(starts)]
    children = np.random.SeedSequence(int(seed)).spawn(starts)
    x0s = [np.random.default_rng(ch).normal(0.0, family.spread, family.dim) for ch in children]
    value = _objective(case, family, grid)
    # evaluate shared caches before fanning out
    family.build(x0s[0], grid).spectrum

    jobs = list(zip(x0s, shares))
    workers = min(threads or worker_count(), starts)
    if workers == 1:
        results = [_run_start(value, x0, n) for x0, n in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda job: _run_start(value, *job), jobs))
    finite = [i for i, r in enumerate(results) if math.isfinite(r[0])]
    if not finite:
        raise BudgetExhausted("no admissible profile was evaluated within the budget")
    best = max(finite, key=lambda i: (results[i][0], -i))
    return ConstantEstimate(
        case=case.id, family=family.name, c_emp=float(results[best][0]),
        witness=family.describe(results[best][1]),
        evaluations=int(sum(r[2] for r in results)), seed=int(seed), budget=int(budget),
        starts=starts, budget_exhausted=all(r[3] for r in results), d=grid.dimension,
        n=grid.n, r_max=float(grid.r_max),
        start_values=tuple(float(r[0]) for r in results), ratio=case.ratio)


def family_samples(family: TrialFamily, grid: RadialGrid, count: int,
                   seed: int) -> list[RadialProfile]:
    """``count`` random members of ``family`` for validation.

    Parameters are drawn like the search's starting design but from the
    stream ``SeedSequence([seed, VALIDATION_STREAM])``, which is disjoint
    from the streams the search spawns from ``SeedSequence(seed)``.
    """
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), VALIDATION_STREAM]))
    out = []
    for i in range(int(count)):
        x = rng.normal(0.0, family.spread, family.dim)
        f = family.build(x, grid)
        params = json.dumps(family.describe(x), sort_keys=True)
        out.append(RadialProfile(grid, f.values, f"{family.name}#{i} {params}"))
        if "spectrum" in f.__dict__:
            out[-1].attach_spectrum(f.spectrum)
    return out


def self_consistency(case: InequalityCase, estimate: ConstantEstimate,
                     validation: Sequence, grid: RadialGrid,
                     margin: float = 1e-3) -> list[GapReport]:
    """Gap reports on a validation set with ``c = c_emp + margin`` added to the rhs."""
    c = estimate.c_emp + margin
    out = []
    for rep in scan_suite([case], validation, grid, threads=1):
        if rep.slack is None:
            out.append(rep)
            continue
        if case.ratio:
            rhs = c * rep.rhs
        else:
            rhs = rep.rhs + c
        out.append(GapReport(**{**rep.as_row(), "rhs": rhs, "slack": rhs - rep.lhs,
                                "note": f"rhs includes c = c_emp + {margin:g}"}))
    return out


def gaussian_main_value(d: int) -> float:
    """``lhs - rhs`` of the main inequality at any Gaussian (dilation invariant).

    ``-(d/2)(1 + log pi) + ((d - 2)/2) psi(d/2)``.
    """
    from scipy.special import digamma
    return float(-0.5 * d * (1.0 + math.log(math.pi)) + 0.5 * (d - 2) * digamma(0.5 * d))
