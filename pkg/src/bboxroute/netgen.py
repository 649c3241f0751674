"""Random connected unit disk graph generation.

Placement is uniform on a square; whole placements are rejected until the
graph is connected. Instances are reproducible: the same (density, side,
seed) always yields the same coordinates, bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, QhullError

from . import kernels
from .geom import EPS, PERTURB, Point

MAX_REJECTIONS = 10_000
_GP_ATTEMPTS = 8


class GenerationError(Exception):
    pass


@dataclass
class NetworkInstance:
    coords: np.ndarray  # (n, 2) float64, immutable by convention
    side: float
    density: float
    seed: int
    adjacency: list[np.ndarray] = field(repr=False)
    rejected_attempts: int = 0

    @property
    def n(self) -> int:
        return len(self.coords)

    def point(self, i: int) -> Point:
        return Point(self.coords[i, 0], self.coords[i, 1])

    @property
    def points(self) -> list[Point]:
        return [Point(x, y) for x, y in self.coords]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    @classmethod
    def from_points(cls, pts, side: float = 0.0, density: float = 0.0,
                    seed: int = 0, perturb: bool = True) -> "NetworkInstance":
        """Build an instance from explicit coordinates (fixtures, tests).

        With perturb=True, general position is restored by seeded jitter
        when a violation is detected.
        """
        coords = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        if perturb:
            rng = np.random.default_rng(np.random.SeedSequence(seed))
            coords = ensure_general_position(coords, rng)
        if side <= 0:
            side = float(max(coords.max(initial=1.0), 1.0))
        adjacency = _build_adjacency(coords)
        return cls(coords=coords, side=float(side), density=float(density),
                   seed=int(seed), adjacency=adjacency)


def node_count_for_density(density: float, side: float) -> int:
    """Expected occupancy of a random unit disk equals n * pi / side**2,
    so n = density * side**2 / pi."""
    if density <= 0:
        raise ValueError("density must be positive")
    if side <= 2:
        raise ValueError("side must exceed the unit disk diameter")
    return int(round(density * side * side / math.pi))


def _build_adjacency(coords: np.ndarray) -> list[np.ndarray]:
    n = len(coords)
    edges = kernels.udg_edges(np.ascontiguousarray(coords), 1.0)
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[int(u)].append(int(v))
        nbrs[int(v)].append(int(u))
    return [np.array(sorted(b), dtype=np.int64) for b in nbrs]


def _has_duplicate(coords: np.ndarray) -> bool:
    # grid hash at ~EPS resolution; exact duplicates and near-coincident pairs
    key = np.round(coords / (10 * EPS)).astype(np.int64)
    _, counts = np.unique(key, axis=0, return_counts=True)
    return bool((counts > 1).any())


def _delaunay_degenerate(coords: np.ndarray) -> bool:
    """Detect general-position violations that matter: collinear triangles
    and near-cocircular neighbor quadruples in the Delaunay triangulation."""
    if len(coords) < 4:
        return False
    try:
        tri = Delaunay(coords)
    except QhullError:
        return True
    simp = tri.simplices
    pts = coords
    a = pts[simp[:, 0]]
    b = pts[simp[:, 1]]
    c = pts[simp[:, 2]]
    d = 2.0 * (
        a[:, 0] * (b[:, 1] - c[:, 1])
        + b[:, 0] * (c[:, 1] - a[:, 1])
        + c[:, 0] * (a[:, 1] - b[:, 1])
    )
    if np.any(np.abs(d) < 1e-14):
        return True
    a2 = (a ** 2).sum(axis=1)
    b2 = (b ** 2).sum(axis=1)
    c2 = (c ** 2).sum(axis=1)
    ux = (a2 * (b[:, 1] - c[:, 1]) + b2 * (c[:, 1] - a[:, 1]) + c2 * (a[:, 1] - b[:, 1])) / d
    uy = (a2 * (c[:, 0] - b[:, 0]) + b2 * (a[:, 0] - c[:, 0]) + c2 * (b[:, 0] - a[:, 0])) / d
    r2 = (a[:, 0] - ux) ** 2 + (a[:, 1] - uy) ** 2
    # opposite vertex of each neighboring simplex must be clearly outside
    for k in range(3):
        nb = tri.neighbors[:, k]
        ok = nb >= 0
        if not ok.any():
            continue
        opp_idx = simp[nb[ok]]  # (m, 3) vertices of the neighbor
        own = simp[ok]
        # the vertex of the neighbor not shared with this simplex
        mask = (
            (opp_idx[:, :, None] != own[:, None, :]).all(axis=2)
        )
        opp = opp_idx[np.arange(len(opp_idx)), mask.argmax(axis=1)]
        dx = pts[opp, 0] - ux[ok]
        dy = pts[opp, 1] - uy[ok]
        d2 = dx * dx + dy * dy
        if np.any(np.abs(d2 - r2[ok]) < EPS * (1.0 + r2[ok])):
            return True
    return False


def ensure_general_position(coords: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Apply symmetric jitter of magnitude PERTURB until no duplicate points
    remain and the Delaunay triangulation is unambiguous."""
    coords = np.array(coords, dtype=np.float64)
    for _ in range(_GP_ATTEMPTS):
        if not _has_duplicate(coords) and not _delaunay_degenerate(coords):
            return coords
        coords = coords + rng.uniform(-PERTURB, PERTURB, size=coords.shape)
    raise GenerationError("general-position violation survived perturbation")


def _bfs_reaches_all(adjacency: list[np.ndarray]) -> bool:
    n = len(adjacency)
    if n == 0:
        raise ValueError("empty graph")
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        u = stack.pop()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(int(v))
    return count == n


def is_connected(net: NetworkInstance) -> bool:
    """One traversal from node 0 must reach every node."""
    return _bfs_reaches_all(net.adjacency)


def generate_udg(density: float, side: float, seed) -> NetworkInstance:
    """Uniform i.i.d. placement, rejection-resampled until connected."""
    n = node_count_for_density(density, side)
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
        seed_label = ss.entropy if isinstance(ss.entropy, int) else 0
    else:
        ss = np.random.SeedSequence(int(seed))
        seed_label = int(seed)
    rng = np.random.default_rng(ss)
    rejected = 0
    while True:
        coords = rng.uniform(0.0, side, size=(n, 2))
        coords = ensure_general_position(coords, rng)
        adjacency = _build_adjacency(coords)
        if _bfs_reaches_all(adjacency):
            return NetworkInstance(
                coords=coords,
                side=float(side),
                density=float(density),
                seed=seed_label,
                adjacency=adjacency,
                rejected_attempts=rejected,
            )
        rejected += 1
        if rejected > MAX_REJECTIONS:
            raise GenerationError("density too low for connectivity")


def save_instance(net: NetworkInstance, path) -> None:
    """Line format: header `side density seed n`, then one `x y` per node.
    17 significant digits round-trip float64 exactly."""
    with open(path, "w") as fh:
        fh.write(f"{net.side:.17g} {net.density:.17g} {net.seed} {net.n}\n")
        for x, y in net.coords:
            fh.write(f"{x:.17g} {y:.17g}\n")


def load_instance(path) -> NetworkInstance:
    with open(path) as fh:
        header = fh.readline().split()
        side, density, seed, n = float(header[0]), float(header[1]), int(header[2]), int(header[3])
        coords = np.empty((n, 2), dtype=np.float64)
        for i in range(n):
            xs, ys = fh.readline().split()
            coords[i, 0] = float(xs)
            coords[i, 1] = float(ys)
    adjacency = _build_adjacency(coords)
    return NetworkInstance(coords=coords, side=side, density=density, seed=seed,
                           adjacency=adjacency)
