"""Reproducible experiment suites and their reports.

Each suite is a pure function of an ``ExperimentConfig``: the seed fixes
every random draw, so two runs produce identical reports apart from the
timestamp.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable

import numpy as np

from . import __version__
from .convex import (
    Interval,
    Polygon,
    SteinerDensity,
    density_family,
    hausdorff,
    minkowski_sum,
    scale,
    steiner_center,
    steiner_defect,
)
from .errors import InvalidConfig, UnknownSuite
from .fbm import FbmSpec, dyadic_nodes, fbm_path, interpolate_linear, standard_normals
from .io import fmt
from .svcalc import (
    HukuharaPath,
    approximate_selection,
    membership_check,
    oplus,
    selection_family,
    verify_cor22,
    verify_th6,
    verify_th7,
)
from .variation import SampledPath, holder_constant, riesz_vp, riesz_vp_profile, var_p
from .young import young_integral, young_loeve_bound, young_loeve_lhs, young_via_fractional

SUITES = ("variation", "young", "steiner", "ex1", "ex2", "th6", "th7", "cor22", "prop3")


# ---------------------------------------------------------------------------
# configuration


@dataclass
class ExperimentConfig:
    suite: str = "variation"
    seed: int = 0
    n: int | None = None
    T: float = 1.0
    H: float = 0.8
    p: float = 2.0
    alpha: float = 0.75
    beta: float = 1.0
    rho: float | None = None
    theta: float | None = None
    n_selections: int = 16
    instances: int | None = None
    path: str = "fbm"
    out: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def need(ok, name, msg):
            if not ok:
                raise InvalidConfig(name, msg)

        need(isinstance(self.seed, int) and 0 <= self.seed < 2**63, "seed", "must be a non-negative integer")
        if self.n is not None:
            need(isinstance(self.n, int) and self.n >= 8 and self.n & (self.n - 1) == 0, "n", "must be a power of two >= 8")
        need(self.T > 0 and math.isfinite(self.T), "T", "must be positive")
        need(0 < self.H < 1, "H", "must lie in (0, 1)")
        need(self.p >= 1 and math.isfinite(self.p), "p", "must be >= 1")
        need(0 < self.alpha <= 1, "alpha", "must lie in (0, 1]")
        need(0 < self.beta <= 1, "beta", "must lie in (0, 1]")
        if self.rho is not None:
            need(0 < self.rho < 1, "rho", "must lie in (0, 1)")
        if self.theta is not None:
            need(0 < self.theta <= 1, "theta", "must lie in (0, 1]")
        need(isinstance(self.n_selections, int) and self.n_selections >= 1, "n_selections", "must be >= 1")
        if self.instances is not None:
            need(isinstance(self.instances, int) and self.instances >= 1, "instances", "must be >= 1")
        need(self.path in ("fbm", "constant"), "path", "must be 'fbm' or 'constant'")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ExperimentConfig)}


def _coerce(name: str, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    kind = _FIELD_TYPES[name]
    try:
        if "int" in kind:
            return None if raw.lower() == "none" else int(raw)
        if "float" in kind:
            return None if raw.lower() == "none" else float(raw)
    except ValueError as exc:
        raise InvalidConfig(name, f"cannot parse {raw!r}") from exc
    return raw


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"line {lineno}", "expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise InvalidConfig(key, "unknown key")
        out[key] = value
    return out


def make_config(file_values: dict | None = None, **overrides) -> ExperimentConfig:
    """Config from file values with keyword overrides (None means not given)."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(merged) - set(_FIELD_TYPES)
    if unknown:
        raise InvalidConfig(sorted(unknown)[0], "unknown key")
    return ExperimentConfig(**{k: _coerce(k, v) for k, v in merged.items()})


# ---------------------------------------------------------------------------
# reports

_RELATIONS = {
    "eq": lambda m, e, tol: abs(m - e) <= tol,
    "le": lambda m, e, tol: m <= e + tol,
    "lt": lambda m, e, tol: m < e,
    "ge": lambda m, e, tol: m >= e - tol,
    "gt": lambda m, e, tol: m > e,
}


@dataclass
class Check:
    name: str
    measured: float
    expected: float
    relation: str = "eq"
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        m, e = float(self.measured), float(self.expected)
        if math.isnan(m) or math.isnan(e):
            return False
        return bool(_RELATIONS[self.relation](m, e, self.tol))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": _num(self.measured),
            "expected": _num(self.expected),
            "relation": self.relation,
            "tol": _num(self.tol),
            "pass": self.passed,
        }


def _num(x):
    x = float(x)
    if math.isfinite(x):
        return float(fmt(x))
    return str(x)


def _text(x) -> str:
    x = float(x)
    return fmt(x) if math.isfinite(x) else str(x)


@dataclass
class Report:
    suite: str
    seed: int
    checks: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    version: str = __version__
    timestamp: str = ""

    def add(self, name, measured, expected, relation="eq", tol=0.0) -> Check:
        c = Check(name, float(measured), float(expected), relation, float(tol))
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "stamp": {"version": self.version, "seed": self.seed, "timestamp": self.timestamp},
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }


CSV_FIELDS = ["suite", "name", "measured", "expected", "relation", "tol", "pass", "version", "seed"]


def report_text(r: Report, format: str = "json") -> str:
    if format == "json":
        return json.dumps(r.to_dict(), indent=2) + "\n"
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for c in r.checks:
            w.writerow([r.suite, c.name, _text(c.measured), _text(c.expected), c.relation, _text(c.tol),
                        str(c.passed).lower(), r.version, r.seed])
        return buf.getvalue()
    raise ValueError(f"unknown format {format!r}")


def emit_report(r: Report, format: str = "json", dest=None) -> str:
    """Serialize the report; write it to ``dest`` when given. Returns the text."""
    text = report_text(r, format)
    if dest is not None:
        with open(dest, "w") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# suites


def _grid(n: int, T: float = 1.0) -> np.ndarray:
    return np.linspace(0.0, T, n + 1)


def _random_walks(seed: int, count: int, n: int, T: float, stream: int) -> np.ndarray:
    z = standard_normals(seed, (count, n), stream=stream) * math.sqrt(T / n)
    return np.hstack([np.zeros((count, 1)), np.cumsum(z, axis=1)])


def suite_variation(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 1024
    t = _grid(n, cfg.T)
    if cfg.path == "constant":
        path = SampledPath(t, np.zeros_like(t))
    else:
        path = fbm_path(FbmSpec(cfg.H, n, cfg.T, cfg.seed))
    forward = riesz_vp_profile(path, cfg.p)
    backward = riesz_vp_profile(path, cfg.p, reverse=True)
    total = forward[-1]
    defect = np.max(np.abs(forward[1:-1] + backward[1:-1] - total)) / max(1.0, total)
    r.add("additivity_max_rel_defect", defect, 0.0, "le", 1e-9)
    r.add("var_p", var_p(path, cfg.p), 0.0, "ge")
    r.add("riesz_vp", total, 0.0, "ge")

    count = cfg.instances or 1000
    walks = _random_walks(cfg.seed, count, n, cfg.T, stream=1)
    if cfg.path == "constant":
        walks = np.zeros_like(walks)
    for p in (1.5, 2.0, 3.0):
        worst = 0.0
        for w in walks:
            wp = SampledPath(t, w)
            v1 = riesz_vp(wp, 1.0)
            rhs = cfg.T ** (1 - 1 / p) * riesz_vp(wp, p) ** (1 / p)
            worst = max(worst, 0.0 if v1 == 0 else v1 / rhs)
        r.add(f"jensen_max_ratio_p{p:g}", worst, 1.0, "le", 1e-12)

    tq = _grid(10_000)
    r.add("riesz_t2_p2", riesz_vp(SampledPath(tq, tq**2), 2.0), 4.0 / 3.0, "eq", 0.01 * 4.0 / 3.0)


def suite_young(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 4096
    t = _grid(1024)
    g = SampledPath(t, t**2)
    res = young_integral(g, g, tol=1e-8, extrapolate=True)
    r.add("int_g_dg_t2", res.value[0], 0.5, "eq", 1e-6)
    lo, hi = 0.0, 1.0
    mid = 0.5 * (lo + hi)
    rhos = (mid - 0.25 * (hi - lo), mid, mid + 0.25 * (hi - lo))
    vals = [young_via_fractional(g, g, rho=rho, alpha=1.0, beta=1.0)[0] for rho in rhos]
    for rho, v in zip(rhos, vals):
        r.add(f"fractional_vs_riemann_rho{rho:g}", abs(v - res.value[0]), 0.0, "le", 1e-3)
    r.add("fractional_rho_spread", max(vals) - min(vals), 0.0, "le", 1e-3)

    f = fbm_path(FbmSpec(cfg.H, n, cfg.T, cfg.seed))
    gb = fbm_path(FbmSpec(cfg.H, n, cfg.T, cfg.seed + 1))
    Mg = holder_constant(gb, cfg.alpha)
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed, 2]))
    violations = 0
    worst = 0.0
    count = cfg.instances or 500
    for _ in range(count):
        i, j = np.sort(rng.choice(n + 1, size=2, replace=False))
        s, u = f.grid[i], f.grid[j]
        lhs = young_loeve_lhs(f, gb, s, u)
        rhs = young_loeve_bound(f, gb, s, u, cfg.alpha, cfg.p, Mg)
        violations += lhs > rhs
        worst = max(worst, lhs / rhs if rhs > 0 else 0.0)
    r.add("young_loeve_violations", violations, 0, "eq")
    r.add("young_loeve_max_ratio", worst, 1.0, "le")


def _random_polygon(rng) -> Polygon:
    k = int(rng.integers(3, 13))
    pts = rng.uniform(-1, 1, size=(k, 2)) * rng.uniform(0.1, 2.0) + rng.uniform(-3, 3, size=2)
    return Polygon(pts)


def suite_steiner(cfg: ExperimentConfig, r: Report) -> None:
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed, 3]))
    count = cfg.instances or 200
    uni1 = SteinerDensity.uniform(1)
    worst = 0.0
    for _ in range(count):
        a, b = np.sort(rng.uniform(-10, 10, size=2))
        worst = max(worst, abs(steiner_center(Interval(a, b), uni1)[0] - (a + b) / 2))
    r.add("interval_uniform_midpoint", worst, 0.0, "eq")

    mus = density_family(4, 2)
    member, linear, lipschitz = 0.0, 0.0, -np.inf
    for k in range(count):
        mu = mus[k % len(mus)]
        A, B = _random_polygon(rng), _random_polygon(rng)
        # negative weights reflect the body, which only the symmetric density tolerates
        lo = -2 if mu.tilt == 0.0 else 0
        a, b = (float(x) for x in rng.integers(lo, 3, size=2))
        sA, sB = steiner_center(A, mu), steiner_center(B, mu)
        member = max(member, steiner_defect(A, mu))
        combo = minkowski_sum(scale(a, A), scale(b, B))
        linear = max(linear, float(np.linalg.norm(steiner_center(combo, mu) - (a * sA + b * sB))))
        lipschitz = max(lipschitz, float(np.linalg.norm(sA - sB)) - mu.lipschitz() * hausdorff(A, B))
    r.add("polygon_membership_defect", member, 0.0, "le", 1e-6)
    r.add("polygon_linearity_defect", linear, 0.0, "le", 1e-6)
    r.add("polygon_lipschitz_excess", lipschitz, 0.0, "le", 1e-6)


def suite_ex1(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 4096
    w = fbm_path(FbmSpec(0.5, n, cfg.T, cfg.seed))
    p = 1.5
    rng_ = float(np.ptp(w.values))
    vps, errs = [], []
    for k in range(6):
        approx = interpolate_linear(w, dyadic_nodes(w, 2 ** (k + 6)))
        vps.append(riesz_vp(approx, p))
        errs.append((approx - w).sup_norm())
        r.add(f"vp_level{k}", vps[-1], math.inf, "lt")
    r.add("vp_strictly_increasing", float(all(b > a for a, b in zip(vps, vps[1:]))), 1.0)
    r.add("sup_error_nonincreasing", float(all(b <= a for a, b in zip(errs, errs[1:]))), 1.0)
    r.add("sup_error_final_over_range", errs[-1] / rng_, 0.05, "lt")


def _tent_setup(n: int):
    t = _grid(n)
    hp = HukuharaPath.from_intervals(t, np.zeros_like(t), np.ones_like(t))
    return t, hp


def suite_ex2(cfg: ExperimentConfig, r: Report) -> None:
    t, hp = _tent_setup(cfg.n or 1024)
    f1 = SampledPath(t, np.zeros_like(t))
    f2 = SampledPath(t, np.minimum(t, 1.0 - t))
    stitched = oplus(f1, f2, 0.5)
    r.add("f1_membership_defect", membership_check(f1, hp.F).defect, 0.0)
    r.add("f2_membership_defect", membership_check(f2, hp.F).defect, 0.0)
    end = len(t) - 1
    r.add("stitched_value_t1", stitched.values[end, 0], -0.5)
    r.add("stitched_defect_t1", hp.F[end].distance(stitched.values[end]), 0.5)


def _random_coef(rng) -> dict:
    """Coefficients of a smooth interval-valued derivative; evaluated on any grid."""
    return dict(
        a0=rng.uniform(-1, 1), a1=rng.uniform(-1, 1), k=rng.uniform(0.5, 4), ph=rng.uniform(0, 2 * np.pi),
        b0=rng.uniform(0.1, 1), b1=rng.uniform(0, 1),
    )


def _interval_hp(coef: dict, t: np.ndarray, x0: float = 0.0, eps: float = 0.0, shift: float = 0.0) -> HukuharaPath:
    lo = coef["a0"] + coef["a1"] * np.sin(coef["k"] * 2 * np.pi * t + coef["ph"])
    w = coef["b0"] + coef["b1"] * t**2
    move = shift * np.cos(3 * t)
    return HukuharaPath.from_intervals(t, lo - eps + move, lo + w + eps + move, x0)


def suite_th6(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 1024
    g_fine = fbm_path(FbmSpec(cfg.H, n, cfg.T, cfg.seed))
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed, 6]))
    rho = cfg.rho if cfg.rho is not None else 0.5 * ((1 - cfg.alpha) + cfg.beta)
    thetas = (cfg.theta,) if cfg.theta is not None else (1.0, 0.5, 0.25)
    count = cfg.instances or 50
    params = [(_random_coef(rng), rng.uniform(-1, 1), rng.uniform(0.01, 0.5), rng.uniform(-0.2, 0.2))
              for _ in range(count)]
    maxima = {}
    for cells in (n // 2, n):
        idx = np.arange(0, n + 1, n // cells)
        g = g_fine.restrict(idx)
        t = g.grid
        best = 0.0
        for coef, x0, eps, shift in params:
            hp1 = _interval_hp(coef, t, x0)
            hp2 = _interval_hp(coef, t, x0, eps, shift)
            rep = verify_th6(hp1, hp2, g, rho, thetas, n_selections=cfg.n_selections, alpha=cfg.alpha, beta=cfg.beta)
            best = max(best, rep.ratio)
        maxima[cells] = best
        r.add(f"max_ratio_n{cells}", best, math.inf, "lt")
    a, b = maxima[n // 2], maxima[n]
    drift = max(a / b, b / a) if a > 0 and b > 0 else math.inf
    r.add("max_ratio_drift", drift, 2.0, "lt")


def suite_th7(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 1024
    t = _grid(n, cfg.T)
    g = fbm_path(FbmSpec(cfg.H, n, cfg.T, cfg.seed))
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed, 7]))
    hp1 = _interval_hp(_random_coef(rng), t, rng.uniform(-1, 1))
    hp2 = _interval_hp(_random_coef(rng), t, rng.uniform(-1, 1))
    rep = verify_th7(hp1, hp2, g, n=cfg.n_selections, gap_sizes=(4, 64))
    r.add("member_identity_defect", rep.identity_defect, 0.0, "le", 1e-10)
    r.add("hull_inclusion_defect", rep.inclusion_defect, 0.0, "le", 1e-8)
    r.add("gap_n4", rep.gaps[4], 0.0, "ge")
    r.add("gap_n64", rep.gaps[64], rep.gaps[4], "lt")


def suite_cor22(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 1024
    t, hp = _tent_setup(n)
    g = fbm_path(FbmSpec(cfg.H, n, cfg.T, cfg.seed))
    rep = verify_cor22(hp, g, (1, 2, 4, 8, 16), cfg.n_selections)
    for k, v in rep.perturbation.items():
        r.add(f"sup_H_perturbation_n{k}", v, 1.0 / k, "eq", 1e-12)
    for k, v in rep.errors.items():
        r.add(f"e_n{k}", v, 0.0, "ge")
    r.add("e_nonincreasing", float(rep.nonincreasing), 1.0)
    r.add("e16_over_e1", rep.errors[16] / rep.errors[1] if rep.errors[1] > 0 else 0.0, 0.25, "le")


def suite_prop3(cfg: ExperimentConfig, r: Report) -> None:
    n = cfg.n or 512
    t, hp = _tent_setup(n)
    fam = selection_family(hp, cfg.n_selections)
    mid = SampledPath(t, t / 2)
    r.add("midpoint_membership_defect", membership_check(mid, hp.F).defect, 0.0, "le", 1e-8)
    ok = approximate_selection(mid, fam, 0.05)
    r.add("midpoint_error", ok.error, 0.05, "lt")
    target = SampledPath(t, t / 2 + t**2 / 16)
    r.add("control_membership_defect", membership_check(target, hp.F).defect, 0.0, "le", 1e-8)
    bad = approximate_selection(target, fam, 1e-4)
    r.add("control_error", bad.error, 1e-4, "ge")
    r.add("control_reported_failure", float(not bad.success), 1.0)


_SUITES: dict[str, Callable] = {
    "variation": suite_variation,
    "young": suite_young,
    "steiner": suite_steiner,
    "ex1": suite_ex1,
    "ex2": suite_ex2,
    "th6": suite_th6,
    "th7": suite_th7,
    "cor22": suite_cor22,
    "prop3": suite_prop3,
}


def run_experiment(cfg: ExperimentConfig) -> Report:
    try:
        suite = _SUITES[cfg.suite]
    except KeyError:
        raise UnknownSuite(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}") from None
    cfg.validate()
    r = Report(cfg.suite, cfg.seed, config=cfg.to_dict())
    suite(cfg, r)
    r.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return r
