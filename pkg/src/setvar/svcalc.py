"""Set-valued calculus on sampled grids.

A Hukuhara differentiable map F with F(0) = {x0} is carried as the pair
(x0, Phi) with Phi = D_H F. Steiner selections of Phi integrate to
selections of F, and Young integrals of finitely many such selections span an
inner approximation of the set-valued Young integral.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from ._parallel import pmap
from .convex import (
    Box,
    ConvexBody,
    Interval,
    Polygon,
    SphereQuadrature,
    SteinerDensity,
    _steiner_box,
    density_family,
    directed_hausdorff,
    hausdorff,
    hukuhara_diff,
    minkowski_sum,
    norm,
    scale,
    singleton,
    steiner_center,
)
from .errors import DifferenceNotExist, DimensionMismatch, ExponentWarning, NodesNotOnGrid, UnsupportedBody
from .variation import (
    SampledPath,
    SetValuedSampledPath,
    _same_grid,
    estimate_holder_exponent,
    holder_constant,
    node_index,
    riesz_vp,
)
from .young import young_integral

MEMBERSHIP_TOL = 1e-8
NOISE_FLOOR = 1e-12


# ---------------------------------------------------------------------------
# Aumann integration and Hukuhara differentiation


def _trapezoid_cells(Phi: SetValuedSampledPath) -> list[ConvexBody]:
    """Cell increments (h_j / 2)(Phi_j + Phi_{j+1})."""
    h = np.diff(Phi.grid)
    return [
        scale(h[j] / 2, minkowski_sum(Phi[j], Phi[j + 1])) for j in range(len(Phi) - 1)
    ]


def aumann_path(Phi: SetValuedSampledPath, x0=None) -> SetValuedSampledPath:
    """t -> x0 + int_0^t Phi, at every node, by the trapezoid rule per support direction."""
    x0 = np.zeros(Phi.dim) if x0 is None else np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != Phi.dim:
        raise DimensionMismatch(f"x0 in R^{x0.size}, Phi in R^{Phi.dim}")
    if Phi.kind in ("interval", "box"):
        h = np.diff(Phi.grid)[:, None]
        lo = np.vstack([x0, x0 + np.cumsum(h * (Phi.lo[:-1] + Phi.lo[1:]) / 2, axis=0)])
        hi = np.vstack([x0, x0 + np.cumsum(h * (Phi.hi[:-1] + Phi.hi[1:]) / 2, axis=0)])
        if Phi.kind == "interval":
            return SetValuedSampledPath.from_intervals(Phi.grid, lo[:, 0], hi[:, 0])
        return SetValuedSampledPath(Phi.grid, tuple(Box(a, b) for a, b in zip(lo, hi)))
    acc = singleton(x0)
    bodies = [acc]
    for cell in _trapezoid_cells(Phi):
        acc = minkowski_sum(acc, cell)
        bodies.append(acc)
    return SetValuedSampledPath(Phi.grid, tuple(bodies))


def aumann_integral(Phi: SetValuedSampledPath, t: float | None = None) -> ConvexBody:
    """int_0^t Phi(s) ds for a grid node t (default: the whole grid)."""
    j = len(Phi) - 1 if t is None else node_index(Phi.grid, t, error=NodesNotOnGrid)
    if Phi.kind == "interval":
        return aumann_path(Phi)[j]
    return aumann_path(SetValuedSampledPath(Phi.grid[: j + 1], Phi.bodies[: j + 1]))[j]


def hukuhara_derivative(F: SetValuedSampledPath, tol: float = 1e-12) -> SetValuedSampledPath:
    """Forward difference quotients (F(t_{j+1}) - F(t_j)) / h_j; the last node copies its predecessor."""
    h = np.diff(F.grid)
    if F.kind in ("interval", "box"):
        dlo = np.diff(F.lo, axis=0)
        dhi = np.diff(F.hi, axis=0)
        scale_ = tol * max(1.0, float(np.max(np.abs(F.hi))), float(np.max(np.abs(F.lo))))
        bad = np.nonzero(np.any(dhi - dlo < -scale_, axis=1))[0]
        if bad.size:
            raise DifferenceNotExist(int(bad[0]))
        dhi = np.maximum(dhi, dlo)
        lo = np.vstack([dlo, dlo[-1:]]) / np.append(h, h[-1])[:, None]
        hi = np.vstack([dhi, dhi[-1:]]) / np.append(h, h[-1])[:, None]
        if F.kind == "interval":
            return SetValuedSampledPath.from_intervals(F.grid, lo[:, 0], hi[:, 0])
        return SetValuedSampledPath(F.grid, tuple(Box(a, b) for a, b in zip(lo, hi)))
    out = []
    for j in range(len(F) - 1):
        C = hukuhara_diff(F[j + 1], F[j])
        if C is None:
            raise DifferenceNotExist(j)
        out.append(scale(1.0 / h[j], C))
    out.append(out[-1])
    return SetValuedSampledPath(F.grid, tuple(out))


@dataclass(frozen=True, eq=False)
class HukuharaPath:
    """F(t) = x0 + int_0^t Phi on the grid of Phi."""

    x0: np.ndarray
    Phi: SetValuedSampledPath

    def __post_init__(self):
        x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if x0.size != self.Phi.dim:
            raise DimensionMismatch(f"x0 in R^{x0.size}, Phi in R^{self.Phi.dim}")
        x0.flags.writeable = False
        object.__setattr__(self, "x0", x0)

    @classmethod
    def from_set_path(cls, F: SetValuedSampledPath) -> "HukuharaPath":
        if not F[0].is_singleton:
            raise UnsupportedBody("F(t_0) must be a single point")
        return cls(F[0].vertices()[0], hukuhara_derivative(F))

    @classmethod
    def from_intervals(cls, grid, lo, hi, x0: float = 0.0) -> "HukuharaPath":
        return cls(np.array([x0]), SetValuedSampledPath.from_intervals(grid, lo, hi))

    @property
    def grid(self) -> np.ndarray:
        return self.Phi.grid

    @property
    def dim(self) -> int:
        return self.Phi.dim

    @property
    def T(self) -> float:
        return self.Phi.T

    @cached_property
    def F(self) -> SetValuedSampledPath:
        return aumann_path(self.Phi, self.x0)

    @cached_property
    def bound(self) -> float:
        """sup_t ||Phi(t)||."""
        return self.Phi.sup_norm()

    def __add__(self, other: "HukuharaPath") -> "HukuharaPath":
        _same_grid(self.Phi, other.Phi)
        if self.Phi.kind == "interval" and other.Phi.kind == "interval":
            Phi = SetValuedSampledPath.from_intervals(
                self.grid, self.Phi.lo[:, 0] + other.Phi.lo[:, 0], self.Phi.hi[:, 0] + other.Phi.hi[:, 0]
            )
        else:
            Phi = SetValuedSampledPath(
                self.grid, tuple(minkowski_sum(A, B) for A, B in zip(self.Phi.bodies, other.Phi.bodies))
            )
        return HukuharaPath(self.x0 + other.x0, Phi)

    def dilate(self, eps: float) -> "HukuharaPath":
        """Same x0 with Phi replaced by Phi + eps * B(0, 1).

        In the plane the disc is replaced by an inscribed regular 64-gon.
        """
        if self.dim == 1:
            ball = Interval(-eps, eps)
        elif self.dim == 2:
            th = 2 * np.pi * np.arange(64) / 64
            ball = Polygon(eps * np.column_stack([np.cos(th), np.sin(th)]))
        else:
            raise UnsupportedBody("dilation is available for d <= 2")
        if self.Phi.kind == "interval":
            Phi = SetValuedSampledPath.from_intervals(self.grid, self.Phi.lo[:, 0] - eps, self.Phi.hi[:, 0] + eps)
        else:
            Phi = SetValuedSampledPath(self.grid, tuple(minkowski_sum(A, ball) for A in self.Phi.bodies))
        return HukuharaPath(self.x0, Phi)


# ---------------------------------------------------------------------------
# selections


@dataclass(frozen=True, eq=False)
class SelectionMember:
    f: SampledPath
    phi: SampledPath
    mu: SteinerDensity
    commutation_defect: float = 0.0

    def __iter__(self):
        return iter((self.f, self.phi))


def _cumtrapz(grid: np.ndarray, values: np.ndarray, x0: np.ndarray) -> np.ndarray:
    h = np.diff(grid)[:, None]
    return np.vstack([x0, x0 + np.cumsum(h * (values[:-1] + values[1:]) / 2, axis=0)])


def _steiner_nodes(Phi: SetValuedSampledPath, mu: SteinerDensity, q) -> np.ndarray:
    if Phi.kind in ("interval", "box"):
        return _steiner_box(Phi.lo, Phi.hi, mu)
    return np.array([steiner_center(C, mu, q) for C in Phi.bodies])


def steiner_selection(
    hp: HukuharaPath, mu: SteinerDensity, q: SphereQuadrature | None = None, check: bool = True
) -> SelectionMember:
    """phi(s) = St_mu(Phi(s)) and f = x0 + int_0^. phi (trapezoid).

    With ``check`` the commutation defect max_j |St_mu(F(t_j)) - f(t_j)| is
    recorded; for interval and box paths both sides are exact.
    """
    phi = _steiner_nodes(hp.Phi, mu, q)
    f = _cumtrapz(hp.grid, phi, hp.x0)
    defect = 0.0
    if check:
        direct = _steiner_nodes(hp.F, mu, q)
        defect = float(np.max(np.linalg.norm(direct - f, axis=1)))
    return SelectionMember(SampledPath(hp.grid, f), SampledPath(hp.grid, phi), mu, defect)


@dataclass(frozen=True, eq=False)
class SelectionFamily:
    hp: HukuharaPath
    members: tuple

    def __len__(self):
        return len(self.members)

    def __getitem__(self, k) -> SelectionMember:
        return self.members[k]

    def values(self) -> np.ndarray:
        """Member paths stacked with shape (n, n_nodes, d)."""
        return np.stack([m.f.values for m in self.members])

    def hull_at(self, j: int) -> ConvexBody:
        return _hull(self.values()[:, j, :])


def selection_family(
    hp: HukuharaPath, n: int, q: SphereQuadrature | None = None, check: bool = True
) -> SelectionFamily:
    """Steiner selections over the first n tilt densities (member 0 is uniform)."""
    mus = density_family(n, hp.dim)
    members = pmap(lambda mu: steiner_selection(hp, mu, q, check), mus)
    return SelectionFamily(hp, tuple(members))


def oplus(f1: SampledPath, f2: SampledPath, a: float) -> SampledPath:
    """f1 up to a, then the increments of f2 glued on continuously."""
    _same_grid(f1, f2)
    k = node_index(f1.grid, a, error=NodesNotOnGrid)
    v = f1.values.copy()
    v[k:] = f2.values[k:] - f2.values[k] + f1.values[k]
    return SampledPath(f1.grid, v)


@dataclass(frozen=True)
class MembershipResult:
    ok: bool
    defect: float
    worst_index: int
    worst_time: float

    def __bool__(self):
        return self.ok


def membership_check(f: SampledPath, F: SetValuedSampledPath, tol: float = MEMBERSHIP_TOL) -> MembershipResult:
    """Largest distance from f(t_j) to F(t_j) over the grid and where it occurs."""
    _same_grid(f, F)
    if F.kind in ("interval", "box"):
        excess = np.maximum(0.0, np.maximum(F.lo - f.values, f.values - F.hi))
        dist = np.linalg.norm(excess, axis=1)
    else:
        dist = np.array([C.distance(x) for C, x in zip(F.bodies, f.values)])
    j = int(np.argmax(dist))
    return MembershipResult(bool(dist[j] <= tol), float(dist[j]), j, float(F.grid[j]))


@dataclass
class ApproximationReport:
    path: SampledPath
    error: float
    success: bool
    epsilon: float
    window_cells: int
    chosen: list = field(default_factory=list)


def _modulus(values: np.ndarray, lag: int) -> float:
    """max |x(t + lag) - x(t)| over nodes, for a stack of paths (..., n_nodes, d)."""
    if lag == 0:
        return 0.0
    return float(np.max(np.linalg.norm(values[..., lag:, :] - values[..., :-lag, :], axis=-1)))


def approximate_selection(f: SampledPath, fam: SelectionFamily, eps: float) -> ApproximationReport:
    """Approximate f by family members glued on windows [k delta, (k + 1) delta).

    delta is the largest dyadic number of cells on which every member and f
    oscillate by at most eps / 3; at each window start the member nearest to
    f is chosen. A result above eps is reported, not raised.
    """
    _same_grid(f, fam.hp.Phi)
    stack = np.concatenate([fam.values(), f.values[None]], axis=0)
    n = len(f) - 1
    cells = 1
    while 2 * cells <= n and _modulus(stack, 2 * cells) <= eps / 3:
        cells *= 2
    members = fam.values()
    out = np.empty_like(f.values)
    chosen = []
    for start in range(0, n + 1, cells):
        stop = min(start + cells, n + 1)
        k = int(np.argmin(np.linalg.norm(members[:, start, :] - f.values[start], axis=1)))
        chosen.append(k)
        out[start:stop] = members[k, start:stop]
    err = float(np.max(np.linalg.norm(out - f.values, axis=1)))
    return ApproximationReport(SampledPath(f.grid, out), err, err < eps, eps, cells, chosen)


# ---------------------------------------------------------------------------
# set-valued Young integral


def _hull(points: np.ndarray) -> ConvexBody:
    points = np.asarray(points, dtype=float)
    d = points.shape[1]
    if d == 1:
        return Interval(points[:, 0].min(), points[:, 0].max())
    if d == 2:
        return Polygon(points)
    raise UnsupportedBody("hulls of integral values are available for d <= 2")


def _cumulative_riemann(f: SampledPath, gv: np.ndarray) -> np.ndarray:
    """int_0^{t_j} f dg for every node j with the full grid partition."""
    dg = np.diff(gv)[:, None]
    return np.vstack([np.zeros((1, f.dim)), np.cumsum(f.values[:-1] * dg, axis=0)])


def member_integrals(
    fam: SelectionFamily, g: SampledPath, t: float | None = None, tol: float | None = None
) -> np.ndarray:
    """Young integrals int_0^t f_k dg of every member, shape (n, d).

    The default uses the full grid partition, which keeps the map f -> int f dg
    exactly linear. With ``tol`` the dyadic refinement of ``young_integral`` is used.
    """
    _same_grid(fam.hp.Phi, g)
    j = len(g) - 1 if t is None else node_index(g.grid, t, error=NodesNotOnGrid)
    if tol is None:
        gv = g.values[:, 0]
        dg = np.diff(gv[: j + 1])
        return np.stack([dg @ m.f.values[:j] for m in fam.members])
    tt = float(g.grid[j])
    return np.stack(pmap(lambda m: young_integral(m.f, g, g.grid[0], tt, tol=tol).value, fam.members))


def member_integral_paths(fam: SelectionFamily, g: SampledPath) -> np.ndarray:
    """int_0^{t_j} f_k dg for every member and node, shape (n, n_nodes, d)."""
    _same_grid(fam.hp.Phi, g)
    gv = g.values[:, 0]
    return np.stack([_cumulative_riemann(m.f, gv) for m in fam.members])


def sv_young_integral(
    hp: HukuharaPath,
    g: SampledPath,
    t: float | None = None,
    n_selections: int = 16,
    q: SphereQuadrature | None = None,
    tol: float | None = None,
    p: float | None = None,
    alpha: float | None = None,
) -> ConvexBody:
    """Convex hull of the Young integrals of n Steiner selections.

    This is an inner approximation of the set-valued integral: only finitely
    many selections are used and no closure is taken.
    """
    if n_selections < 1:
        raise ValueError("n_selections must be >= 1")
    if p is not None:
        a = estimate_holder_exponent(g) if alpha is None else alpha
        if 1.0 / p + a <= 1.0:
            warnings.warn(f"1/p + alpha = {1.0 / p + a:.3f} <= 1", ExponentWarning, stacklevel=2)
    fam = selection_family(hp, n_selections, q, check=False)
    return _hull(member_integrals(fam, g, t, tol))


# ---------------------------------------------------------------------------
# verification procedures


def _trapz(grid: np.ndarray, y: np.ndarray) -> float:
    return float(np.sum(np.diff(grid) * (y[:-1] + y[1:]) / 2))


@dataclass
class Th6Report:
    lhs: float
    bracket: float
    ratio: float
    theta: float
    brackets: dict


def th6_bracket(hp1: HukuharaPath, hp2: HukuharaPath, g: SampledPath, rho, theta, alpha, beta) -> float:
    T = hp1.T - hp1.grid[0]
    dist = _trapz(hp1.grid, hp1.Phi.hausdorff_to(hp2.Phi))
    sup = hp1.bound + hp2.bound
    Mg = holder_constant(g, alpha)
    return (dist + (T + T ** (1 - beta)) * sup * theta**beta) * theta**-rho + Mg * T**alpha * dist


def verify_th6(
    hp1: HukuharaPath,
    hp2: HukuharaPath,
    g: SampledPath,
    rho: float,
    theta: float | Sequence[float] = (1.0, 0.5, 0.25),
    t: float | None = None,
    n_selections: int = 16,
    alpha: float | None = None,
    beta: float = 1.0,
) -> Th6Report:
    """Hausdorff distance between integral hulls against the constant-free bracket.

    Selections of a bounded Hukuhara derivative are Lipschitz, so ``beta``
    defaults to 1. A sequence of thetas is swept and the smallest bracket kept.
    """
    alpha = estimate_holder_exponent(g) if alpha is None else alpha
    thetas = [float(theta)] if np.isscalar(theta) else [float(x) for x in theta]
    H1 = sv_young_integral(hp1, g, t, n_selections)
    H2 = sv_young_integral(hp2, g, t, n_selections)
    lhs = hausdorff(H1, H2)
    brackets = {th: th6_bracket(hp1, hp2, g, rho, th, alpha, beta) for th in thetas}
    best = min(brackets, key=brackets.get)
    bracket = brackets[best]
    ratio = 0.0 if lhs == 0.0 else lhs / bracket
    return Th6Report(lhs, bracket, ratio, best, brackets)


@dataclass
class Th7Report:
    identity_defect: float
    inclusion_defect: float
    gaps: dict
    gap_decreasing: bool

    @property
    def identity_ok(self) -> bool:
        return self.identity_defect <= 1e-8

    @property
    def inclusion_ok(self) -> bool:
        return self.inclusion_defect <= 1e-8


def verify_th7(
    hp1: HukuharaPath,
    hp2: HukuharaPath,
    g: SampledPath,
    t: float | None = None,
    n: int = 16,
    gap_sizes: tuple = (4, 64),
    q: SphereQuadrature | None = None,
) -> Th7Report:
    """Additivity of the integral hull over F1 + F2.

    (i) member-wise identity int f_k^{1+2} dg = int f_k^1 dg + int f_k^2 dg,
    (ii) hull(sum members) inside hull_1 + hull_2, and (iii) the symmetric
    Hausdorff gap between the two sides at each size in ``gap_sizes``.
    """
    hp12 = hp1 + hp2
    sizes = sorted({n, *gap_sizes})
    largest = max(sizes)
    vals = {}
    for hp, key in ((hp1, 1), (hp2, 2), (hp12, 12)):
        vals[key] = member_integrals(selection_family(hp, largest, q, check=False), g, t)
    identity = float(np.max(np.linalg.norm(vals[12][:n] - vals[1][:n] - vals[2][:n], axis=1)))
    gaps = {}
    inclusion = 0.0
    for k in sizes:
        lhs = _hull(vals[12][:k])
        rhs = minkowski_sum(_hull(vals[1][:k]), _hull(vals[2][:k]))
        if k == n:
            inclusion = directed_hausdorff(lhs, rhs)
        gap = hausdorff(lhs, rhs)
        # distances at the rounding level of the hull endpoints carry no information
        gaps[k] = 0.0 if gap <= NOISE_FLOOR * (1.0 + norm(rhs)) else gap
    small, large = min(gap_sizes), max(gap_sizes)
    return Th7Report(identity, inclusion, gaps, gaps[large] < gaps[small])


@dataclass
class Cor22Report:
    perturbation: dict
    errors: dict
    nonincreasing: bool
    rate_ok: bool


def verify_cor22(
    hp: HukuharaPath,
    g: SampledPath,
    ns: Sequence[int] = (1, 2, 4, 8, 16),
    n_selections: int = 16,
    q: SphereQuadrature | None = None,
) -> Cor22Report:
    """Stability of the integral hull under D_H F_n = D_H F + (1/n) B(0, 1).

    e_n is the largest Hausdorff distance over grid times between the hulls
    for F_n and F. Reports whether e_n is nonincreasing and e_max <= e_min / 4.
    """
    def hulls(h):
        paths = member_integral_paths(selection_family(h, n_selections, q, check=False), g)
        return [_hull(paths[:, j, :]) for j in range(paths.shape[1])]

    base = hulls(hp)
    perturb, errors = {}, {}
    for k in ns:
        hk = hp.dilate(1.0 / k)
        perturb[k] = float(np.max(hk.Phi.hausdorff_to(hp.Phi)))
        errors[k] = max(hausdorff(A, B) for A, B in zip(hulls(hk), base))
    seq = [errors[k] for k in sorted(ns)]
    nonincreasing = all(b <= a for a, b in zip(seq, seq[1:]))
    rate = errors[max(ns)] <= errors[min(ns)] / 4
    return Cor22Report(perturb, errors, nonincreasing, rate)


def selection_vp_bound(fam: SelectionFamily, p: float) -> list[tuple[float, float]]:
    """(V_p(f_k), V_p(F)) for every member."""
    VF = riesz_vp(fam.hp.F, p)
    return [(riesz_vp(m.f, p), VF) for m in fam.members]
