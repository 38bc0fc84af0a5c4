"""Sampled paths, Hoelder constants and p-variation functionals.

All suprema run over partitions whose points lie on the sample grid. For
piecewise-linear interpolants of the samples that is exact; for anything else
it is a lower bound of the continuum quantity.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .convex import Box, ConvexBody, Interval, hausdorff, norm
from .errors import BadExponent, DimensionMismatch, GridMismatch, WindowNotOnGrid

GRID_TOL = 1e-12


def _check_grid(grid) -> np.ndarray:
    t = np.asarray(grid, dtype=float).reshape(-1)
    if t.size < 2:
        raise GridMismatch("a grid needs at least two nodes")
    if not np.all(np.isfinite(t)):
        raise GridMismatch("grid contains non-finite nodes")
    if np.any(np.diff(t) <= 0):
        raise GridMismatch("grid must be strictly increasing")
    return t


@dataclass(frozen=True, eq=False)
class SampledPath:
    """f: [t_0, t_n] -> R^d known at the nodes of ``grid``.

    ``values`` is stored with shape (n + 1, d); 1-D input is read as d = 1.
    """

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = _check_grid(self.grid)
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v.reshape(-1, 1)
        if v.ndim != 2 or v.shape[0] != t.size:
            raise GridMismatch(f"{v.shape[0]} values for {t.size} grid nodes")
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        t = t.copy()
        v = v.copy()
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "grid", t)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, f, grid) -> "SampledPath":
        t = _check_grid(grid)
        return cls(t, np.asarray([np.atleast_1d(f(s)) for s in t], dtype=float))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def T(self) -> float:
        return float(self.grid[-1])

    def __len__(self):
        return self.grid.size

    @property
    def scalar(self) -> np.ndarray:
        """Values of a scalar path as a 1-D array."""
        if self.dim != 1:
            raise DimensionMismatch(f"path is R^{self.dim}-valued")
        return self.values[:, 0]

    def index_of(self, t: float) -> int:
        return node_index(self.grid, t)

    def restrict(self, indices) -> "SampledPath":
        idx = np.asarray(indices, dtype=int)
        return SampledPath(self.grid[idx], self.values[idx])

    def __add__(self, other: "SampledPath") -> "SampledPath":
        _same_grid(self, other)
        return SampledPath(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledPath") -> "SampledPath":
        _same_grid(self, other)
        return SampledPath(self.grid, self.values - other.values)

    def __mul__(self, a: float) -> "SampledPath":
        return SampledPath(self.grid, float(a) * self.values)

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        return float(np.max(np.linalg.norm(self.values, axis=1)))


def _same_grid(a, b):
    if a.grid.shape != b.grid.shape or not np.allclose(a.grid, b.grid, rtol=0, atol=GRID_TOL * max(1.0, a.grid[-1])):
        raise GridMismatch("paths live on different grids")


def node_index(grid: np.ndarray, t: float, error=WindowNotOnGrid) -> int:
    k = int(np.searchsorted(grid, t))
    tol = GRID_TOL * max(1.0, abs(grid[-1]))
    for cand in (k - 1, k):
        if 0 <= cand < grid.size and abs(grid[cand] - t) <= tol:
            return cand
    raise error(f"{t} is not a grid node")


@dataclass(frozen=True, eq=False)
class SetValuedSampledPath:
    """F: [t_0, t_n] -> convex bodies of a common dimension."""

    grid: np.ndarray
    bodies: tuple

    def __post_init__(self):
        t = _check_grid(self.grid).copy()
        t.flags.writeable = False
        bodies = tuple(self.bodies)
        if len(bodies) != t.size:
            raise GridMismatch(f"{len(bodies)} bodies for {t.size} grid nodes")
        dims = {B.dim for B in bodies}
        if len(dims) != 1:
            raise DimensionMismatch(f"mixed body dimensions {sorted(dims)}")
        object.__setattr__(self, "grid", t)
        object.__setattr__(self, "bodies", bodies)

    @classmethod
    def from_intervals(cls, grid, lo, hi) -> "SetValuedSampledPath":
        return cls(grid, tuple(Interval(a, b) for a, b in zip(np.ravel(lo), np.ravel(hi))))

    @property
    def dim(self) -> int:
        return self.bodies[0].dim

    @property
    def T(self) -> float:
        return float(self.grid[-1])

    def __len__(self):
        return self.grid.size

    def __getitem__(self, j) -> ConvexBody:
        return self.bodies[j]

    @cached_property
    def kind(self) -> str:
        if all(isinstance(B, Interval) for B in self.bodies):
            return "interval"
        if all(isinstance(B, Box) for B in self.bodies):
            return "box"
        return "general"

    @cached_property
    def lo(self) -> np.ndarray:
        """Lower corners, shape (n + 1, d); interval and box paths only."""
        if self.kind == "interval":
            return np.array([[B.lo] for B in self.bodies])
        if self.kind == "box":
            return np.array([B.lo for B in self.bodies])
        raise TypeError("lo/hi arrays exist only for interval or box paths")

    @cached_property
    def hi(self) -> np.ndarray:
        if self.kind == "interval":
            return np.array([[B.hi] for B in self.bodies])
        if self.kind == "box":
            return np.array([B.hi for B in self.bodies])
        raise TypeError("lo/hi arrays exist only for interval or box paths")

    def norms(self) -> np.ndarray:
        if self.kind == "interval":
            return np.maximum(np.abs(self.lo[:, 0]), np.abs(self.hi[:, 0]))
        return np.array([norm(B) for B in self.bodies])

    def sup_norm(self) -> float:
        return float(np.max(self.norms()))

    def hausdorff_to(self, other: "SetValuedSampledPath") -> np.ndarray:
        """Nodewise Hausdorff distances to another path on the same grid."""
        _same_grid(self, other)
        if self.kind == "interval" and other.kind == "interval":
            return np.maximum(np.abs(self.lo - other.lo), np.abs(self.hi - other.hi))[:, 0]
        return np.array([hausdorff(A, B) for A, B in zip(self.bodies, other.bodies)])


PathLike = Union[SampledPath, SetValuedSampledPath]


def _metric(path: PathLike):
    """(kind, arrays) describing the metric for the numba kernels."""
    if isinstance(path, SampledPath):
        if path.dim == 1:
            return "scalar", (np.ascontiguousarray(path.values[:, 0]),)
        return "vector", (np.ascontiguousarray(path.values),)
    if path.kind in ("interval", "box"):
        return "box", (np.ascontiguousarray(path.lo), np.ascontiguousarray(path.hi))
    n = len(path)
    D = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            D[i, j] = D[j, i] = hausdorff(path.bodies[i], path.bodies[j])
    return "matrix", (D,)


def window_indices(grid: np.ndarray, window) -> tuple[int, int]:
    if window is None:
        return 0, grid.size - 1
    a, b = window
    ia, ib = node_index(grid, a), node_index(grid, b)
    if ia > ib:
        raise WindowNotOnGrid(f"window [{a}, {b}] is reversed")
    return ia, ib


def _check_p(p: float):
    if not p >= 1:
        raise BadExponent(f"p must be >= 1, got {p}")


def _prefix(path: PathLike, p: float, riesz: bool, ia: int, ib: int, band: int | None) -> np.ndarray:
    _check_p(p)
    kind, arrays = _metric(path)
    kernel = getattr(_kernels, f"prefix_{kind}")
    return kernel(*arrays, path.grid, float(p), bool(riesz), ia, ib, int(band or 0))


def holder_constant(path: PathLike, beta: float, window=None) -> float:
    """Grid restriction of M_beta: max over node pairs of d(f(s), f(t)) / (t - s)^beta."""
    if not 0 < beta <= 1:
        raise BadExponent(f"beta must lie in (0, 1], got {beta}")
    ia, ib = window_indices(path.grid, window)
    kind, arrays = _metric(path)
    kernel = getattr(_kernels, f"holder_{kind}")
    return float(kernel(*arrays, path.grid, float(beta), ia, ib))


def var_p(path: PathLike, p: float, window=None, band: int | None = None) -> float:
    """Young p-variation: sup over grid sub-partitions of sum d(f(t_{i-1}), f(t_i))^p."""
    ia, ib = window_indices(path.grid, window)
    return float(_prefix(path, p, False, ia, ib, band)[-1])


def riesz_vp(path: PathLike, p: float, window=None, band: int | None = None) -> float:
    """Riesz p-variation: the same supremum with terms divided by (t_i - t_{i-1})^(p - 1).

    ``band`` limits the partition gap to that many grid cells, which turns the
    O(n^2) search into O(n * band) at the price of a lower bound.
    """
    ia, ib = window_indices(path.grid, window)
    return float(_prefix(path, p, True, ia, ib, band)[-1])


def var_p_profile(path: PathLike, p: float, band: int | None = None) -> np.ndarray:
    """Var_p(f, [t_0, t_j]) for every node j."""
    return _prefix(path, p, False, 0, len(path) - 1, band)


def riesz_vp_profile(path: PathLike, p: float, band: int | None = None, reverse: bool = False) -> np.ndarray:
    """V_p(f, [t_0, t_j]) for every j, or V_p(f, [t_j, T]) when ``reverse``."""
    if not reverse:
        return _prefix(path, p, True, 0, len(path) - 1, band)
    flipped = _reversed(path)
    return _prefix(flipped, p, True, 0, len(path) - 1, band)[::-1]


def _reversed(path: PathLike) -> PathLike:
    t = path.grid[-1] - path.grid[::-1]
    if isinstance(path, SampledPath):
        return SampledPath(t, path.values[::-1])
    return SetValuedSampledPath(t, path.bodies[::-1])


def vp_norm(path: PathLike, p: float) -> float:
    """sup_t ||f(t)|| + V_p(f)^(1/p)."""
    return path.sup_norm() + riesz_vp(path, p) ** (1.0 / p)


def estimate_holder_exponent(path: SampledPath, max_lag_fraction: float = 0.25) -> float:
    """Log-log regression of the largest increment at dyadic lags.

    Using the maximal increment (a sup, like the Hoelder seminorm itself) makes
    the estimate sit slightly below the true exponent for Gaussian paths.
    """
    n = len(path) - 1
    lags = []
    lag = 1
    while lag <= max(1, int(n * max_lag_fraction)):
        lags.append(lag)
        lag *= 2
    if len(lags) < 2:
        return 1.0
    h = np.diff(path.grid)
    xs, ys = [], []
    for lag in lags:
        inc = np.linalg.norm(path.values[lag:] - path.values[:-lag], axis=1)
        m = float(np.max(inc))
        if m <= 0:
            continue
        xs.append(np.log(lag * float(np.mean(h))))
        ys.append(np.log(m))
    if len(xs) < 2:
        return 1.0
    slope = float(np.polyfit(xs, ys, 1)[0])
    return float(min(1.0, max(slope, 1e-6)))


def piecewise_linear(path: SampledPath, t) -> np.ndarray:
    """Linear interpolation of the samples at times ``t``; shape (len(t), d)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return np.column_stack([np.interp(t, path.grid, path.values[:, k]) for k in range(path.dim)])


def sample_intervals(grid: Sequence[float], lo_fn, hi_fn) -> SetValuedSampledPath:
    t = _check_grid(grid)
    return SetValuedSampledPath.from_intervals(t, [lo_fn(s) for s in t], [hi_fn(s) for s in t])
