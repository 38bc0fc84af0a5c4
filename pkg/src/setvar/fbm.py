"""Seeded fractional Brownian motion on a uniform grid.

Paths are exact Gaussian samples: the covariance of (B_H(t_1), ..., B_H(t_n))
is factorized by Cholesky and applied to standard normals. Normals come from a
Philox counter-based stream pushed through the inverse normal CDF, so a seed
fixes the path bit-for-bit on any platform with IEEE doubles.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import ndtri

from .errors import NodesNotOnGrid, NotPositiveDefinite, SizeTooLarge
from .variation import SampledPath, node_index

MAX_CHOLESKY_N = 2**14


@dataclass(frozen=True)
class FbmSpec:
    H: float
    n: int
    T: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.H < 1.0:
            raise ValueError(f"Hurst exponent must lie in (0, 1), got {self.H}")
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n + 1)


def fbm_covariance(t: np.ndarray, H: float) -> np.ndarray:
    s, u = np.meshgrid(t, t, indexing="ij")
    return 0.5 * (s ** (2 * H) + u ** (2 * H) - np.abs(s - u) ** (2 * H))


@lru_cache(maxsize=8)
def _cholesky_factor(H: float, n: int, T: float) -> np.ndarray:
    if n > MAX_CHOLESKY_N:
        raise SizeTooLarge(f"n = {n} exceeds the Cholesky cap {MAX_CHOLESKY_N}")
    t = np.linspace(0.0, T, n + 1)[1:]
    R = fbm_covariance(t, H)
    try:
        L = np.linalg.cholesky(R)
    except np.linalg.LinAlgError:
        jitter = 1e-12 * float(np.trace(R)) / n
        try:
            L = np.linalg.cholesky(R + jitter * np.eye(n))
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefinite(f"fBm covariance (H={H}, n={n}) is not positive definite") from exc
    L.flags.writeable = False
    return L


def standard_normals(seed: int, size, stream: int = 0) -> np.ndarray:
    """Deterministic N(0, 1) draws; ``stream`` selects an independent Philox key."""
    bitgen = np.random.Philox(key=[int(seed) & (2**64 - 1), int(stream)])
    u = np.random.Generator(bitgen).random(size)
    # random() can return exactly 0.0; keep the inverse CDF finite
    u = np.where(u == 0.0, np.nextafter(0.0, 1.0), u)
    return ndtri(u)


def fbm_paths(spec: FbmSpec, n_paths: int) -> np.ndarray:
    """``n_paths`` independent samples, shape (n_paths, n + 1), first column zero."""
    L = _cholesky_factor(float(spec.H), int(spec.n), float(spec.T))
    Z = standard_normals(spec.seed, (int(spec.n), int(n_paths)))
    X = (L @ Z).T
    return np.hstack([np.zeros((int(n_paths), 1)), X])


def fbm_path(spec: FbmSpec) -> SampledPath:
    return SampledPath(spec.grid, fbm_paths(spec, 1)[0])


def interpolate_linear(path: SampledPath, coarse_nodes) -> SampledPath:
    """Piecewise-linear path through the samples at ``coarse_nodes``, on the full grid."""
    idx = sorted({node_index(path.grid, float(s), error=NodesNotOnGrid) for s in np.atleast_1d(coarse_nodes)})
    if idx[0] != 0 or idx[-1] != len(path) - 1:
        raise NodesNotOnGrid("coarse nodes must include both endpoints")
    tc = path.grid[idx]
    vals = np.column_stack([np.interp(path.grid, tc, path.values[idx, k]) for k in range(path.dim)])
    return SampledPath(path.grid, vals)


def dyadic_nodes(path: SampledPath, cells: int) -> np.ndarray:
    """Every (n / cells)-th node of a grid with n cells; ``cells`` must divide n."""
    n = len(path) - 1
    if cells < 1 or n % cells:
        raise NodesNotOnGrid(f"{cells} cells do not divide a grid of {n} cells")
    return path.grid[:: n // cells]
