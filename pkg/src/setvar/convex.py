"""Compact convex bodies in R^d (d <= 3) and their algebra.

Bodies are immutable values of three kinds: ``Interval`` (d = 1), ``Box``
(axis-aligned, d = 2 or 3) and ``Polygon`` (d = 2, stored as its CCW hull).
Support functions, Minkowski sums, scaling and the Hausdorff metric are exact;
generalized Steiner centers of polygons go through a sphere/ball quadrature.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, QuadratureUnavailable, UnsupportedBody, UnsupportedVariantMix

DEDUP_TOL = 1e-12
HUKUHARA_TOL = 1e-9

# E[max(p_1, 0)] under the normalized Lebesgue measure of the unit ball.
_HALF_BALL_MOMENT = {1: 0.25, 2: 2.0 / (3.0 * math.pi), 3: 3.0 / 16.0}


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2) / math.gamma(1 + d / 2)


def sphere_area(d: int) -> float:
    return d * ball_volume(d)


class ConvexBody:
    """Common interface; use ``Interval``, ``Box`` or ``Polygon``."""

    dim: int

    def vertices(self) -> np.ndarray:
        raise NotImplementedError

    def support(self, p) -> float:
        p = np.asarray(p, dtype=float).reshape(-1)
        if p.size != self.dim:
            raise DimensionMismatch(f"direction of length {p.size} for a body in R^{self.dim}")
        return float(np.max(self.vertices() @ p))

    def support_many(self, P: np.ndarray) -> np.ndarray:
        """Support function at every row of ``P`` (shape (m, d))."""
        return np.max(np.asarray(P, dtype=float) @ self.vertices().T, axis=1)

    def distance(self, x) -> float:
        return float(self.distances(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def distances(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def project(self, x) -> np.ndarray:
        raise NotImplementedError

    def contains(self, x, tol: float = 1e-9) -> bool:
        return self.distance(x) <= tol

    @property
    def is_singleton(self) -> bool:
        return len(self.vertices()) == 1 or bool(np.ptp(self.vertices(), axis=0).max() == 0.0)


@dataclass(frozen=True)
class Interval(ConvexBody):
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise UnsupportedBody("interval endpoints must be finite")
        if lo > hi:
            raise UnsupportedBody(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    dim = 1

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def vertices(self) -> np.ndarray:
        if self.lo == self.hi:
            return np.array([[self.lo]])
        return np.array([[self.lo], [self.hi]])

    def support(self, p) -> float:
        p = float(np.asarray(p, dtype=float).reshape(-1)[0])
        return max(p * self.lo, p * self.hi)

    def distances(self, X):
        x = np.asarray(X, dtype=float).reshape(-1)
        return np.maximum(0.0, np.maximum(self.lo - x, x - self.hi))

    def project(self, x):
        return np.clip(np.asarray(x, dtype=float).reshape(1), self.lo, self.hi)


@dataclass(frozen=True, eq=False)
class Box(ConvexBody):
    """Axis-aligned box in R^2 or R^3."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lo, dtype=float).reshape(-1)
        hi = np.array(self.hi, dtype=float).reshape(-1)
        if lo.shape != hi.shape:
            raise DimensionMismatch("lo and hi differ in length")
        if not 1 <= lo.size <= 3:
            raise UnsupportedBody(f"boxes are supported for d <= 3, got d = {lo.size}")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise UnsupportedBody("box corners must be finite")
        if np.any(lo > hi):
            raise UnsupportedBody("box has lo > hi")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return self.lo.size

    def __eq__(self, other):
        return isinstance(other, Box) and np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    def __hash__(self):
        return hash((self.lo.tobytes(), self.hi.tobytes()))

    def vertices(self) -> np.ndarray:
        corners = itertools.product(*zip(self.lo, self.hi))
        return np.unique(np.array(list(corners)), axis=0)

    def support(self, p) -> float:
        p = np.asarray(p, dtype=float).reshape(-1)
        if p.size != self.dim:
            raise DimensionMismatch(f"direction of length {p.size} for a body in R^{self.dim}")
        return float(np.sum(np.maximum(p * self.lo, p * self.hi)))

    def support_many(self, P):
        P = np.asarray(P, dtype=float)
        return np.sum(np.maximum(P * self.lo, P * self.hi), axis=1)

    def distances(self, X):
        X = np.asarray(X, dtype=float).reshape(-1, self.dim)
        return np.linalg.norm(X - np.clip(X, self.lo, self.hi), axis=1)

    def project(self, x):
        return np.clip(np.asarray(x, dtype=float).reshape(self.dim), self.lo, self.hi)

    def to_polygon(self) -> "Polygon":
        if self.dim != 2:
            raise UnsupportedVariantMix("only planar boxes convert to polygons")
        return Polygon(self.vertices())


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points, tol: float = DEDUP_TOL) -> np.ndarray:
    """CCW hull without collinear points, starting at the lowest (y, x) vertex."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.size == 0:
        raise UnsupportedBody("empty point set")
    if not np.all(np.isfinite(pts)):
        raise UnsupportedBody("polygon vertices must be finite")
    scale = max(1.0, float(np.max(np.abs(pts))))
    # x values within the tolerance of their neighbour form one group, ordered by y
    pts = pts[np.argsort(pts[:, 0], kind="stable")]
    group = np.concatenate([[0], np.cumsum(np.diff(pts[:, 0]) > tol * scale)])
    pts = pts[np.lexsort((pts[:, 1], group))]
    keep = [pts[0]]
    for q in pts[1:]:
        if np.max(np.abs(q - keep[-1])) > tol * scale:
            keep.append(q)
    pts = keep
    if len(pts) == 1:
        return np.array(pts)
    # all points on one line: the tolerant chain below would drop them in x-order
    P = np.array(pts)
    b = P[np.argmax(np.sum((P - P[0]) ** 2, axis=1))]
    c = P[np.argmax(np.sum((P - b) ** 2, axis=1))]
    d = (c - b) / np.linalg.norm(c - b)
    if np.max(np.abs(d[0] * (P[:, 1] - b[1]) - d[1] * (P[:, 0] - b[0]))) <= tol * scale:
        s = (P - b) @ d
        ends = P[[np.argmin(s), np.argmax(s)]]
        start = int(np.lexsort((ends[:, 0], ends[:, 1]))[0])
        return np.roll(ends, -start, axis=0)

    def turns_left(o, a, b):
        # relative test: near-duplicates just above the dedup tolerance must not
        # knock out a genuine vertex
        lim = tol * math.hypot(a[0] - o[0], a[1] - o[1]) * math.hypot(b[0] - o[0], b[1] - o[1])
        return _cross(o, a, b) > lim

    def chain(seq):
        out = []
        for q in seq:
            while len(out) >= 2 and not turns_left(out[-2], out[-1], q):
                out.pop()
            out.append(q)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) == 0:
        hull = np.array([pts[0]])
    # collapse near-duplicates that survive at the seam (e.g. two-point hulls)
    if len(hull) == 2 and np.max(np.abs(hull[0] - hull[1])) <= tol * scale:
        hull = hull[:1]
    start = int(np.lexsort((hull[:, 0], hull[:, 1]))[0])
    return np.roll(hull, -start, axis=0)


@dataclass(frozen=True, eq=False)
class Polygon(ConvexBody):
    """Convex polygon in R^2. Input points are replaced by their convex hull."""

    vertices_: np.ndarray = field(repr=False)

    def __init__(self, vertices):
        hull = convex_hull_2d(vertices)
        hull.flags.writeable = False
        object.__setattr__(self, "vertices_", hull)

    dim = 2

    def __repr__(self):
        return f"Polygon({self.vertices_.tolist()})"

    def __eq__(self, other):
        return isinstance(other, Polygon) and np.array_equal(self.vertices_, other.vertices_)

    def __hash__(self):
        return hash(self.vertices_.tobytes())

    def vertices(self) -> np.ndarray:
        return self.vertices_

    def edge_normals(self) -> np.ndarray:
        """Outward unit normals of the edges (both sides for a segment)."""
        V = self.vertices_
        if len(V) == 1:
            return np.zeros((0, 2))
        E = np.roll(V, -1, axis=0) - V
        N = np.column_stack([E[:, 1], -E[:, 0]])
        return N / np.linalg.norm(N, axis=1, keepdims=True)

    def _closest(self, X):
        V = self.vertices_
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        if len(V) == 1:
            return np.broadcast_to(V[0], X.shape).copy(), np.zeros(len(X), dtype=bool)
        A = V
        B = np.roll(V, -1, axis=0)
        AB = B - A
        L2 = np.sum(AB * AB, axis=1)
        AX = X[:, None, :] - A[None, :, :]
        s = np.clip(np.sum(AX * AB[None], axis=2) / L2[None], 0.0, 1.0)
        C = A[None] + s[..., None] * AB[None]
        D = np.linalg.norm(X[:, None, :] - C, axis=2)
        k = np.argmin(D, axis=1)
        closest = C[np.arange(len(X)), k]
        if len(V) >= 3:
            cross = AB[None, :, 0] * AX[..., 1] - AB[None, :, 1] * AX[..., 0]
            inside = np.all(cross >= 0.0, axis=1)
        else:
            inside = np.zeros(len(X), dtype=bool)
        return closest, inside

    def distances(self, X):
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        closest, inside = self._closest(X)
        d = np.linalg.norm(X - closest, axis=1)
        return np.where(inside, 0.0, d)

    def project(self, x):
        x = np.asarray(x, dtype=float).reshape(1, 2)
        closest, inside = self._closest(x)
        return x[0].copy() if inside[0] else closest[0]


def singleton(x) -> ConvexBody:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size == 1:
        return Interval(x[0], x[0])
    if x.size == 2:
        return Polygon(x.reshape(1, 2))
    return Box(x, x)


def _as_common(A: ConvexBody, B: ConvexBody):
    if A.dim != B.dim:
        raise DimensionMismatch(f"bodies live in R^{A.dim} and R^{B.dim}")
    if type(A) is type(B):
        return A, B
    if A.dim == 2:
        A = A.to_polygon() if isinstance(A, Box) else A
        B = B.to_polygon() if isinstance(B, Box) else B
        return A, B
    raise UnsupportedVariantMix(f"cannot combine {type(A).__name__} with {type(B).__name__}")


def support(C: ConvexBody, p) -> float:
    return C.support(p)


def _polygon_sum(P: Polygon, Q: Polygon) -> Polygon:
    V, W = P.vertices_, Q.vertices_
    if len(V) < 3 or len(W) < 3:
        return Polygon((V[:, None, :] + W[None, :, :]).reshape(-1, 2))
    # merge edge sequences by polar angle; both start at their lowest vertex
    V2 = np.vstack([V, V[:2]])
    W2 = np.vstack([W, W[:2]])
    out = []
    i = j = 0
    n, m = len(V), len(W)
    while i < n or j < m:
        out.append(V2[i] + W2[j])
        if i >= n:
            j += 1
            continue
        if j >= m:
            i += 1
            continue
        e, f = V2[i + 1] - V2[i], W2[j + 1] - W2[j]
        c = e[0] * f[1] - e[1] * f[0]
        if c >= 0:
            i += 1
        if c <= 0:
            j += 1
    return Polygon(np.array(out))


def minkowski_sum(A: ConvexBody, B: ConvexBody) -> ConvexBody:
    A, B = _as_common(A, B)
    if isinstance(A, Interval):
        return Interval(A.lo + B.lo, A.hi + B.hi)
    if isinstance(A, Box):
        return Box(A.lo + B.lo, A.hi + B.hi)
    return _polygon_sum(A, B)


def scale(a: float, A: ConvexBody) -> ConvexBody:
    a = float(a)
    if isinstance(A, Interval):
        lo, hi = a * A.lo, a * A.hi
        return Interval(min(lo, hi), max(lo, hi))
    if isinstance(A, Box):
        lo, hi = a * A.lo, a * A.hi
        return Box(np.minimum(lo, hi), np.maximum(lo, hi))
    return Polygon(a * A.vertices_)


def translate(A: ConvexBody, x) -> ConvexBody:
    return minkowski_sum(A, singleton(x))


def linear_combination(weights: Sequence[float], bodies: Sequence[ConvexBody]) -> ConvexBody:
    """Minkowski combination sum_i w_i * C_i."""
    acc = None
    for w, C in zip(weights, bodies):
        term = scale(w, C)
        acc = term if acc is None else minkowski_sum(acc, term)
    if acc is None:
        raise ValueError("empty combination")
    return acc


def _directed_box(A_lo, A_hi, B_lo, B_hi):
    excess = np.maximum(0.0, np.maximum(B_lo - A_lo, A_hi - B_hi))
    return np.sqrt(np.sum(excess * excess, axis=-1))


def hausdorff(A: ConvexBody, B: ConvexBody) -> float:
    """Hausdorff distance in the Euclidean norm."""
    A, B = _as_common(A, B)
    if isinstance(A, Interval):
        return max(abs(A.lo - B.lo), abs(A.hi - B.hi))
    if isinstance(A, Box):
        return float(max(_directed_box(A.lo, A.hi, B.lo, B.hi), _directed_box(B.lo, B.hi, A.lo, A.hi)))
    # dist(., B) is convex, so its max over A sits at a vertex of A
    return float(max(np.max(B.distances(A.vertices_)), np.max(A.distances(B.vertices_))))


def directed_hausdorff(A: ConvexBody, B: ConvexBody) -> float:
    """sup_{a in A} dist(a, B): zero iff A is contained in B."""
    A, B = _as_common(A, B)
    return float(np.max(B.distances(A.vertices())))


def norm(A: ConvexBody) -> float:
    return float(np.max(np.linalg.norm(A.vertices(), axis=1)))


def _hukuhara_polygon(A: Polygon, B: Polygon):
    normals = np.vstack([A.edge_normals(), B.edge_normals(), np.eye(2), -np.eye(2)])
    angles = np.round(np.arctan2(normals[:, 1], normals[:, 0]), 12)
    _, idx = np.unique(angles, return_index=True)
    N = normals[idx]
    h = A.support_many(N) - B.support_many(N)
    scale_ = max(1.0, norm(A), norm(B))
    tol = HUKUHARA_TOL * scale_
    pts = []
    for i, j in itertools.combinations(range(len(N)), 2):
        M = np.array([N[i], N[j]])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, [h[i], h[j]])
        if np.all(N @ x <= h + tol):
            pts.append(x)
    if not pts:
        return None
    C = Polygon(np.array(pts))
    if hausdorff(minkowski_sum(B, C), A) >= tol:
        return None
    return C


def hukuhara_diff(A: ConvexBody, B: ConvexBody) -> ConvexBody | None:
    """C with B + C = A, or None when no such body exists."""
    A, B = _as_common(A, B)
    if isinstance(A, Interval):
        if A.width < B.width:
            return None
        lo, hi = A.lo - B.lo, A.hi - B.hi
        return Interval(lo, max(lo, hi))
    if isinstance(A, Box):
        if np.any(A.hi - A.lo < B.hi - B.lo):
            return None
        lo, hi = A.lo - B.lo, A.hi - B.hi
        return Box(lo, np.maximum(lo, hi))
    return _hukuhara_polygon(A, B)


# ---------------------------------------------------------------------------
# Steiner densities and quadrature


@dataclass(frozen=True)
class SteinerDensity:
    """Affine tilt density xi(p) = kappa * (1 + c <u, p>) on the unit ball.

    The density is taken with respect to the normalized volume measure of the
    ball, so kappa = 1 for every tilt (the linear term integrates to zero).
    """

    direction: tuple
    tilt: float = 0.0

    def __post_init__(self):
        u = np.asarray(self.direction, dtype=float).reshape(-1)
        if not 1 <= u.size <= 3:
            raise UnsupportedBody(f"densities are supported for d <= 3, got {u.size}")
        nrm = np.linalg.norm(u)
        if nrm == 0:
            raise ValueError("direction must be nonzero")
        if not abs(self.tilt) < 1:
            raise ValueError(f"tilt must satisfy |c| < 1, got {self.tilt}")
        object.__setattr__(self, "direction", tuple(float(v) for v in u / nrm))
        object.__setattr__(self, "tilt", float(self.tilt))

    @classmethod
    def uniform(cls, d: int) -> "SteinerDensity":
        return cls(tuple([1.0] + [0.0] * (d - 1)), 0.0)

    @property
    def dim(self) -> int:
        return len(self.direction)

    @property
    def u(self) -> np.ndarray:
        return np.array(self.direction)

    kappa = 1.0

    def __call__(self, P) -> np.ndarray:
        P = np.asarray(P, dtype=float)
        return self.kappa * (1.0 + self.tilt * (P @ self.u))

    def gradient(self, P=None) -> np.ndarray:
        g = self.kappa * self.tilt * self.u
        if P is None:
            return g
        P = np.asarray(P, dtype=float).reshape(-1, self.dim)
        return np.broadcast_to(g, P.shape)

    def lipschitz(self) -> float:
        c = abs(self.tilt)
        return self.dim * self.kappa * (1.0 + c) + self.kappa * c

    def to_json(self) -> dict:
        return {"direction": list(self.direction), "tilt": self.tilt}


def steiner_lipschitz(mu: SteinerDensity) -> float:
    """d * max over the sphere of xi plus max over the ball of |grad xi|."""
    return mu.lipschitz()


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes/weights for the unit sphere (measure omega) and unit ball (Lebesgue)."""

    dim: int
    sphere_nodes: np.ndarray
    sphere_weights: np.ndarray
    ball_nodes: np.ndarray
    ball_weights: np.ndarray

    @property
    def volume(self) -> float:
        return ball_volume(self.dim)


@lru_cache(maxsize=16)
def sphere_quadrature(
    dim: int, sphere_nodes: int = 360, ball_nodes_radial: int = 40, ball_nodes_angular: int = 60
) -> SphereQuadrature:
    if dim == 1:
        # piecewise-linear integrands with a kink at 0 are integrated exactly
        x, w = np.polynomial.legendre.leggauss(max(2, ball_nodes_radial))
        r, wr = 0.5 * (x + 1.0), 0.5 * w
        bn = np.concatenate([-r[::-1], r]).reshape(-1, 1)
        bw = np.concatenate([wr[::-1], wr])
        return SphereQuadrature(1, np.array([[-1.0], [1.0]]), np.ones(2), bn, bw)
    if dim == 2:
        th = 2 * np.pi * np.arange(sphere_nodes) / sphere_nodes
        sn = np.column_stack([np.cos(th), np.sin(th)])
        sw = np.full(sphere_nodes, 2 * np.pi / sphere_nodes)
        x, w = np.polynomial.legendre.leggauss(ball_nodes_radial)
        r, wr = 0.5 * (x + 1.0), 0.5 * w * 0.5 * (x + 1.0)
        ph = 2 * np.pi * (np.arange(ball_nodes_angular) + 0.5) / ball_nodes_angular
        bn = (r[:, None, None] * np.stack([np.cos(ph), np.sin(ph)], axis=1)[None]).reshape(-1, 2)
        bw = (wr[:, None] * np.full(ball_nodes_angular, 2 * np.pi / ball_nodes_angular)[None]).reshape(-1)
        return SphereQuadrature(2, sn, sw, bn, bw)
    raise QuadratureUnavailable(f"no sphere quadrature for d = {dim}")


def _steiner_quadrature_raw(C: ConvexBody, mu: SteinerDensity, q: SphereQuadrature) -> np.ndarray:
    if q.dim != C.dim or mu.dim != C.dim:
        raise QuadratureUnavailable(f"quadrature in R^{q.dim}, density in R^{mu.dim}, body in R^{C.dim}")
    sig_s = C.support_many(q.sphere_nodes)
    boundary = (q.sphere_weights * sig_s * mu(q.sphere_nodes)) @ q.sphere_nodes
    sig_b = C.support_many(q.ball_nodes)
    interior = np.sum(q.ball_weights * sig_b) * mu.gradient()
    return (boundary - interior) / q.volume


def _steiner_box(lo, hi, mu: SteinerDensity) -> np.ndarray:
    # St = E_mu[argmax_{x in C} <p, x>]; for boxes the argmax splits by coordinate sign
    plus = 0.5 + mu.kappa * mu.tilt * mu.u * _HALF_BALL_MOMENT[mu.dim]
    # the uniform case takes the exact midpoint (no underflow for subnormal ends)
    return np.where(plus == 0.5, (lo + hi) / 2, lo * (1.0 - plus) + hi * plus)


def steiner_center_raw(C: ConvexBody, mu: SteinerDensity, q: SphereQuadrature | None = None) -> np.ndarray:
    """Steiner center before the projection onto C."""
    if mu.dim != C.dim:
        raise QuadratureUnavailable(f"density in R^{mu.dim} for a body in R^{C.dim}")
    if isinstance(C, Interval):
        return _steiner_box(np.array([C.lo]), np.array([C.hi]), mu)
    if isinstance(C, Box):
        return _steiner_box(C.lo, C.hi, mu)
    return _steiner_quadrature_raw(C, mu, q if q is not None else sphere_quadrature(2))


def steiner_center(C: ConvexBody, mu: SteinerDensity, q: SphereQuadrature | None = None) -> np.ndarray:
    """Generalized Steiner center St_mu(C), projected onto C."""
    x = steiner_center_raw(C, mu, q)
    if isinstance(C, Polygon):
        return C.project(x)
    return x


def steiner_defect(C: ConvexBody, mu: SteinerDensity, q: SphereQuadrature | None = None) -> float:
    """Distance from the unprojected Steiner center to C."""
    return C.distance(steiner_center_raw(C, mu, q))


def steiner_center_quadrature(C: ConvexBody, mu: SteinerDensity, q: SphereQuadrature) -> np.ndarray:
    """Steiner center by quadrature for any body (no closed-form shortcut)."""
    return _steiner_quadrature_raw(C, mu, q)


def _van_der_corput(k: int, base: int) -> float:
    v, denom = 0.0, 1.0
    while k:
        k, r = divmod(k, base)
        denom *= base
        v += r / denom
    return v


def density_family(n: int, d: int) -> list[SteinerDensity]:
    """First n members of a fixed enumeration of tilt densities; member 0 is uniform."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= d <= 3:
        raise UnsupportedBody(f"d must be 1, 2 or 3, got {d}")
    out = [SteinerDensity.uniform(d)]
    for k in range(1, n):
        if d == 1:
            out.append(SteinerDensity((1.0,), 2.0 * _van_der_corput(k + 1, 2) - 1.0))
        elif d == 2:
            th = 2 * math.pi * _van_der_corput(k, 2)
            out.append(SteinerDensity((math.cos(th), math.sin(th)), _van_der_corput(k, 3)))
        else:
            z = 1.0 - 2.0 * _van_der_corput(k, 2)
            ph = 2 * math.pi * _van_der_corput(k, 3)
            s = math.sqrt(max(0.0, 1.0 - z * z))
            out.append(SteinerDensity((s * math.cos(ph), s * math.sin(ph), z), _van_der_corput(k, 5)))
    return out


# ---------------------------------------------------------------------------
# JSON


def body_to_json(C: ConvexBody) -> dict:
    if isinstance(C, Interval):
        return {"kind": "interval", "lo": C.lo, "hi": C.hi}
    if isinstance(C, Box):
        return {"kind": "box", "lo": C.lo.tolist(), "hi": C.hi.tolist()}
    return {"kind": "polygon", "vertices": C.vertices_.tolist()}


def body_from_json(obj: dict) -> ConvexBody:
    kind = obj.get("kind")
    if kind == "interval":
        return Interval(obj["lo"], obj["hi"])
    if kind == "box":
        return Box(obj["lo"], obj["hi"])
    if kind == "polygon":
        return Polygon(obj["vertices"])
    raise UnsupportedBody(f"unknown body kind {kind!r}")
