"""Young integrals of sampled paths against a scalar integrator.

Two routes to the same number: left-point Riemann sums under dyadic refinement
of the sampled partition, and the fractional-derivative representation
evaluated on the piecewise-linear interpolants of the samples.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import (
    BadExponent,
    BadRho,
    BoundaryPoint,
    ExponentWarning,
    GridMismatch,
    NoConvergence,
    NonIntegrableSingularityWarning,
)
from .variation import (
    SampledPath,
    _same_grid,
    estimate_holder_exponent,
    holder_constant,
    node_index,
    var_p,
    window_indices,
)


@dataclass
class YoungResult:
    value: np.ndarray
    partition_used: int
    cauchy_defect: float
    levels: int
    bound_report: list | None = field(default=None)

    def to_json(self) -> dict:
        return {
            "value": [float(v) for v in np.atleast_1d(self.value)],
            "defect": float(self.cauchy_defect),
            "levels": int(self.levels),
            "partition_used": int(self.partition_used),
            "bound_report": self.bound_report,
        }


def _integrator_values(f: SampledPath, g: SampledPath, interpolate: bool) -> np.ndarray:
    if g.dim != 1:
        raise GridMismatch("the integrator g must be scalar")
    try:
        _same_grid(f, g)
        return g.values[:, 0]
    except GridMismatch:
        if not interpolate:
            raise
    if f.grid[0] < g.grid[0] or f.grid[-1] > g.grid[-1]:
        raise GridMismatch("g does not cover the grid of f")
    warnings.warn("g interpolated linearly onto the grid of f", stacklevel=3)
    return np.interp(f.grid, g.grid, g.values[:, 0])


def _partition_indices(f: SampledPath, partition) -> np.ndarray:
    if partition is None:
        return np.arange(len(f))
    p = np.asarray(partition)
    if np.issubdtype(p.dtype, np.integer):
        idx = p.astype(int)
    else:
        idx = np.array([node_index(f.grid, float(s), error=GridMismatch) for s in p], dtype=int)
    if idx.size < 2 or np.any(np.diff(idx) <= 0) or idx[0] < 0 or idx[-1] >= len(f):
        raise GridMismatch("partition must be an increasing subset of the grid with >= 2 nodes")
    return idx


def riemann_sum(f: SampledPath, g: SampledPath, partition=None, interpolate: bool = False) -> np.ndarray:
    """sum_i f(t_{i-1}) (g(t_i) - g(t_{i-1})) over the given partition (node indices or times)."""
    gv = _integrator_values(f, g, interpolate)
    idx = _partition_indices(f, partition)
    dg = np.diff(gv[idx])
    return dg @ f.values[idx[:-1]]


def _levels_partition(ia: int, ib: int, k: int) -> np.ndarray:
    m = ib - ia
    j = np.arange(2**k + 1)
    return ia + np.unique((j * m) // 2**k)


def young_integral(
    f: SampledPath,
    g: SampledPath,
    s: float | None = None,
    t: float | None = None,
    tol: float = 1e-6,
    max_levels: int | None = None,
    extrapolate: bool = False,
    p: float | None = None,
    alpha: float | None = None,
    report_bound: bool = False,
) -> YoungResult:
    """Integral of f dg over [s, t] by dyadic refinement of the sample partition.

    Level k uses 2^k cells (capped by the grid). Refinement stops once two
    successive levels differ by less than ``tol``. With ``extrapolate`` the
    level values are Richardson-extrapolated in integer powers of the mesh,
    which is only sound for piecewise-smooth data.
    """
    gv = _integrator_values(f, g, False)
    window = (f.grid[0] if s is None else s, f.grid[-1] if t is None else t)
    ia, ib = window_indices(f.grid, window)
    m = ib - ia
    if m == 0:
        return YoungResult(np.zeros(f.dim), 0, 0.0, 0)
    _check_exponents(f, g, p, alpha)
    top = math.ceil(math.log2(m))
    if extrapolate and 2**top != m:
        raise ValueError("Richardson extrapolation needs a power-of-two number of cells")
    last = top if max_levels is None else min(top, int(max_levels))
    table: list[list[np.ndarray]] = []
    value, defect, level = None, math.inf, 0
    for k in range(last + 1):
        idx = _levels_partition(ia, ib, k)
        row = [np.diff(gv[idx]) @ f.values[idx[:-1]]]
        if extrapolate:
            for i in range(1, k + 1):
                row.append((2**i * row[i - 1] - table[k - 1][i - 1]) / (2**i - 1))
        table.append(row)
        current = row[-1]
        if value is not None:
            defect = float(np.linalg.norm(current - value))
        value, level = current, k
        # two coarse levels can agree by accident; look at least two levels deep
        if defect < tol and k >= min(2, last):
            break
    if last == 0:
        defect = 0.0
    cells = len(_levels_partition(ia, ib, level)) - 1
    report = None
    if report_bound and p is not None and alpha is not None:
        report = _bound_report(f, g, ia, ib, alpha, p)
    if defect >= tol:
        raise NoConvergence(
            f"successive levels still differ by {defect:.3g} >= tol = {tol:.3g} after level {level}",
            value=value,
            defect=defect,
            levels=level,
        )
    return YoungResult(np.asarray(value), cells, defect, level, report)


def _check_exponents(f, g, p, alpha):
    a = alpha if alpha is not None else estimate_holder_exponent(g)
    inv_p = 1.0 / p if p is not None else estimate_holder_exponent(f)
    if a + inv_p <= 1.0:
        warnings.warn(
            f"1/p + alpha = {a + inv_p:.3f} <= 1: Riemann sums need not converge",
            ExponentWarning,
            stacklevel=3,
        )


def young_loeve_constant(alpha: float, p: float) -> float:
    theta = alpha + 1.0 / p
    if theta <= 1.0:
        raise BadExponent(f"alpha + 1/p = {theta} must exceed 1")
    return 1.0 / (1.0 - 2.0 ** (1.0 - theta))


def young_loeve_lhs(f: SampledPath, g: SampledPath, s: float, t: float) -> float:
    """|| int_s^t f dg - f(s)(g(t) - g(s)) || with the full sample partition."""
    ia, ib = window_indices(f.grid, (s, t))
    gv = g.values[:, 0]
    integral = np.diff(gv[ia : ib + 1]) @ f.values[ia:ib]
    return float(np.linalg.norm(integral - f.values[ia] * (gv[ib] - gv[ia])))


def young_loeve_bound(
    f: SampledPath, g: SampledPath, s: float, t: float, alpha: float, p: float, holder_g: float | None = None
) -> float:
    """C(alpha, p) Var_p(f, [s, t])^(1/p) M_alpha(g) (t - s)^alpha."""
    C = young_loeve_constant(alpha, p)
    if holder_g is None:
        holder_g = holder_constant(g, alpha)
    return C * var_p(f, p, (s, t)) ** (1.0 / p) * holder_g * (t - s) ** alpha


def _bound_report(f, g, ia, ib, alpha, p):
    Mg = holder_constant(g, alpha)
    out = []
    for idx in (_levels_partition(ia, ib, 0), _levels_partition(ia, ib, 1)):
        for a, b in zip(idx[:-1], idx[1:]):
            s, t = float(f.grid[a]), float(f.grid[b])
            out.append(
                {"s": s, "t": t, "lhs": young_loeve_lhs(f, g, s, t), "rhs": young_loeve_bound(f, g, s, t, alpha, p, Mg)}
            )
    return out


# ---------------------------------------------------------------------------
# fractional derivatives


def _left_at(tg: np.ndarray, v: np.ndarray, j: int, rho: float) -> np.ndarray:
    """Left-sided derivative of the interpolant of v (already zero at tg[0]) at node j."""
    t = tg[j]
    a, b = tg[:j], tg[1 : j + 1]
    va, vb = v[:j], v[1 : j + 1]
    slope = (vb - va) / (b - a)[:, None]
    u2 = t - a
    u1 = t - b
    A = v[j] - va - slope * u2[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        first = A * (np.where(u1 > 0, u1, np.inf) ** -rho - u2**-rho)[:, None]
    first[-1] = 0.0
    second = rho * slope * ((u2 ** (1 - rho) - np.where(u1 > 0, u1, 0.0) ** (1 - rho)) / (1 - rho))[:, None]
    return (v[j] / t**rho + np.sum(first + second, axis=0)) / math.gamma(1 - rho)


def _right_at(tg: np.ndarray, v: np.ndarray, j: int, rho: float) -> np.ndarray:
    """Right-sided derivative (without the complex unit factor) at node j; v zero at tg[-1]."""
    t, T = tg[j], tg[-1]
    a, b = tg[j:-1], tg[j + 1 :]
    va, vb = v[j:-1], v[j + 1 :]
    slope = (vb - va) / (b - a)[:, None]
    u1 = a - t
    u2 = b - t
    A = v[j] - va + slope * u1[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        first = A * (np.where(u1 > 0, u1, np.inf) ** -rho - u2**-rho)[:, None]
    first[0] = 0.0
    second = -rho * slope * ((u2 ** (1 - rho) - np.where(u1 > 0, u1, 0.0) ** (1 - rho)) / (1 - rho))[:, None]
    return (v[j] / (T - t) ** rho + np.sum(first + second, axis=0)) / math.gamma(1 - rho)


def _check_rho(rho):
    if not 0.0 < rho < 1.0:
        raise BadExponent(f"order must lie in (0, 1), got {rho}")


def _shifted(f: SampledPath, side: str) -> np.ndarray:
    if side == "left":
        return f.values - f.values[0]
    if side == "right":
        return f.values - f.values[-1]
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def fractional_derivative(f: SampledPath, rho: float, side: str, t: float) -> np.ndarray:
    """D^rho_{0+} f_{0+}(t) or D^rho_{T-} f_{T-}(t) of the piecewise-linear interpolant.

    The input is shifted internally (f - f(0) or f - f(T)). The right-sided
    value omits the (-1)^rho factor; see ``fractional_sign``. Integration is
    exact cell by cell, including the singular cell next to t.
    """
    _check_rho(rho)
    t = float(t)
    if not f.grid[0] < t < f.grid[-1]:
        raise BoundaryPoint(f"t = {t} must lie strictly inside ({f.grid[0]}, {f.grid[-1]})")
    v = _shifted(f, side)
    tg = f.grid - f.grid[0]
    tt = t - f.grid[0]
    k = int(np.searchsorted(tg, tt))
    if abs(tg[k] - tt) <= 1e-14 * max(1.0, tg[-1]):
        j = k
    else:
        vt = np.array([np.interp(tt, tg, v[:, c]) for c in range(v.shape[1])])
        tg = np.insert(tg, k, tt)
        v = np.insert(v, k, vt, axis=0)
        j = k
    if estimate_holder_exponent(f) < rho:
        warnings.warn("estimated Hoelder exponent below the derivative order", NonIntegrableSingularityWarning, stacklevel=2)
    return _left_at(tg, v, j, rho) if side == "left" else _right_at(tg, v, j, rho)


def fractional_derivative_nodes(f: SampledPath, rho: float, side: str) -> np.ndarray:
    """Fractional derivative at every node, shape (n + 1, d).

    The value at the endpoint where the shifted input vanishes (t = 0 for the
    left side, t = T for the right side) is set to its limit 0, valid whenever
    the Hoelder exponent of f exceeds rho.
    """
    _check_rho(rho)
    v = _shifted(f, side)
    tg = f.grid - f.grid[0]
    n = len(f)
    out = np.zeros((n, f.dim))
    if side == "left":
        for j in range(1, n):
            out[j] = _left_at(tg, v, j, rho)
    else:
        for j in range(0, n - 1):
            out[j] = _right_at(tg, v, j, rho)
    return out


def _fractional_raw(f: SampledPath, g: SampledPath, rho: float) -> np.ndarray:
    Df = fractional_derivative_nodes(f, rho, "left")
    Dg = fractional_derivative_nodes(g, 1.0 - rho, "right")[:, 0]
    h = np.diff(f.grid)
    w = np.zeros(len(f))
    w[:-1] += h / 2
    w[1:] += h / 2
    return (w * Dg) @ Df


@lru_cache(maxsize=1)
def fractional_sign() -> float:
    """Real sign standing in for (-1)^rho, calibrated on f = g = t over [0, 1]."""
    t = np.linspace(0.0, 1.0, 65)
    ref = SampledPath(t, t)
    raw = float(_fractional_raw(ref, ref, 0.5)[0])
    return float(np.sign(0.5 / raw))


def young_via_fractional(
    f: SampledPath,
    g: SampledPath,
    rho: float | None = None,
    alpha: float | None = None,
    beta: float | None = None,
) -> np.ndarray:
    """int_0^T f dg = s * int D^rho f_{0+} D^{1-rho} g_{T-} dt + f(0)(g(T) - g(0)).

    ``alpha`` and ``beta`` (Hoelder exponents of g and f) default to grid
    estimates; ``rho`` defaults to the midpoint of (1 - alpha, beta).
    """
    _same_grid(f, g)
    if g.dim != 1:
        raise GridMismatch("the integrator g must be scalar")
    alpha = estimate_holder_exponent(g) if alpha is None else alpha
    beta = estimate_holder_exponent(f) if beta is None else beta
    lo, hi = 1.0 - alpha, beta
    if rho is None:
        rho = 0.5 * (lo + hi)
    if not lo < rho < hi:
        raise BadRho(f"rho = {rho} outside ({lo:.4g}, {hi:.4g})")
    if np.all(f.values == f.values[0]):
        return f.values[0] * (g.values[-1, 0] - g.values[0, 0])
    raw = _fractional_raw(f, g, rho)
    return fractional_sign() * raw + f.values[0] * (g.values[-1, 0] - g.values[0, 0])


def lemma1_ratio(
    f1: SampledPath, f2: SampledPath, g: SampledPath, rho: float, theta: float, beta: float
) -> float:
    """Empirical constant in the stability estimate for int f dg under a change of f.

    (|| int f1 dg - int f2 dg || - ||f1(0) - f2(0)|| |g(T) - g(0)|)
        / ([||f1 - f2||_inf + (M_beta(f1) + M_beta(f2)) theta^beta] theta^(-rho))
    Integrals are full-grid Riemann sums. Returns 0 when f1 and f2 coincide.
    """
    if not 0 < theta <= 1:
        raise BadExponent(f"theta must lie in (0, 1], got {theta}")
    _same_grid(f1, f2)
    if np.array_equal(f1.values, f2.values):
        return 0.0
    dg = g.values[-1, 0] - g.values[0, 0]
    num = np.linalg.norm(riemann_sum(f1, g) - riemann_sum(f2, g)) - np.linalg.norm(f1.values[0] - f2.values[0]) * abs(dg)
    den = ((f1 - f2).sup_norm() + (holder_constant(f1, beta) + holder_constant(f2, beta)) * theta**beta) * theta**-rho
    if den == 0.0:
        return 0.0
    return float(num / den)
