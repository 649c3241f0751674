"""2-localized Delaunay graph construction, face enumeration, hole detection.

The graph keeps a rotation system (neighbors sorted counterclockwise around
each node); faces are the orbits of the walk rule
``next(u->v) = (v, neighbor of v immediately clockwise from u)``,
which traverses interior faces counterclockwise and the outer face clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import kernels
from .geom import EPS, Point, Polygon, convex_hull, dist
from .netgen import NetworkInstance

Dart = tuple[int, int]


class TopologyError(Exception):
    pass


@dataclass
class Hole:
    hole_id: int
    cycle: list[int]  # perimeter node ids; inner holes CCW, outer CW
    kind: str  # "inner" | "outer"
    perimeter_length: float

    def polygon(self, net: NetworkInstance) -> Polygon:
        return Polygon([net.point(i) for i in self.cycle])


class LDelGraph:
    def __init__(self, net: NetworkInstance, edges: np.ndarray):
        self.net = net
        n = net.n
        self.edge_set: set[Dart] = set()
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if (u, v) in self.edge_set or (v, u) in self.edge_set:
                continue
            self.edge_set.add((min(u, v), max(u, v)))
            nbrs[u].append(v)
            nbrs[v].append(u)
        coords = net.coords
        self.nbrs: list[np.ndarray] = []
        self._pos: dict[Dart, int] = {}
        for u in range(n):
            lst = nbrs[u]
            ang = [math.atan2(coords[v, 1] - coords[u, 1], coords[v, 0] - coords[u, 0]) for v in lst]
            order = sorted(range(len(lst)), key=lambda i: ang[i])
            ring = np.array([lst[i] for i in order], dtype=np.int64)
            self.nbrs.append(ring)
            for idx, v in enumerate(ring):
                self._pos[(u, int(v))] = idx
        self._angles = [
            np.array(
                [math.atan2(coords[v, 1] - coords[u, 1], coords[v, 0] - coords[u, 0]) for v in ring]
            )
            for u, ring in enumerate(self.nbrs)
        ]
        self.faces: list[list[Dart]] = []
        self.face_of: dict[Dart, int] = {}
        self.outer_face: int = -1
        self._walk_faces()

    # -- embedding ---------------------------------------------------------

    def next_dart(self, dart: Dart) -> Dart:
        """Continue the face walk: at v, leave via the neighbor immediately
        clockwise from u (counterclockwise traversal of interior faces)."""
        u, v = dart
        ring = self.nbrs[v]
        idx = self._pos.get((v, u))
        if idx is None:
            raise TopologyError(f"dart {dart} not in graph")
        return (v, int(ring[idx - 1]))

    def _walk_faces(self) -> None:
        seen: set[Dart] = set()
        for u in range(self.net.n):
            for v in self.nbrs[u]:
                d0 = (u, int(v))
                if d0 in seen:
                    continue
                face: list[Dart] = []
                d = d0
                while True:
                    if d in seen:
                        raise TopologyError("inconsistent half-edge structure")
                    seen.add(d)
                    face.append(d)
                    d = self.next_dart(d)
                    if d == d0:
                        break
                self.faces.append(face)
                self.face_of.update({dd: len(self.faces) - 1 for dd in face})
        areas = [self._face_area(f) for f in self.faces]
        if areas:
            self.outer_face = int(np.argmin(areas))

    def _face_area(self, face: list[Dart]) -> float:
        coords = self.net.coords
        s = 0.0
        for u, v in face:
            s += coords[u, 0] * coords[v, 1] - coords[v, 0] * coords[u, 1]
        return 0.5 * s

    def face_nodes(self, fid: int) -> list[int]:
        return [u for u, _ in self.faces[fid]]

    def face_toward(self, u: int, target: Point) -> int:
        """Face incident to u whose wedge contains the direction toward target."""
        ring = self.nbrs[u]
        if len(ring) == 0:
            raise TopologyError(f"isolated node {u}")
        x, y = self.net.coords[u]
        d = math.atan2(target[1] - y, target[0] - x)
        ang = self._angles[u]
        # wedge between ring[i] and ring[i+1] is the face left of (u -> ring[i])
        i = int(np.searchsorted(ang, d, side="right")) - 1
        if i < 0:
            i = len(ring) - 1
        return self.face_of[(u, int(ring[i]))]

    def degree(self, u: int) -> int:
        return len(self.nbrs[u])

    @property
    def n_edges(self) -> int:
        return len(self.edge_set)

    def edge_lengths(self) -> dict[Dart, float]:
        coords = self.net.coords
        out = {}
        for u, v in self.edge_set:
            out[(u, v)] = math.hypot(coords[u, 0] - coords[v, 0], coords[u, 1] - coords[v, 1])
        return out


def _hop2_csr(net: NetworkInstance) -> tuple[np.ndarray, np.ndarray]:
    n = net.n
    rows = []
    cols = []
    for u, nbr in enumerate(net.adjacency):
        rows.extend([u] * len(nbr))
        cols.extend(int(v) for v in nbr)
    a = sp.csr_matrix((np.ones(len(rows), dtype=bool), (rows, cols)), shape=(n, n))
    h2 = ((a + a @ a) > 0).tocsr()
    h2.sort_indices()
    return h2.indptr.astype(np.int64), h2.indices.astype(np.int64)


def _adjacency_csr(net: NetworkInstance) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(net.n + 1, dtype=np.int64)
    chunks = []
    for u, nbr in enumerate(net.adjacency):
        indptr[u + 1] = indptr[u] + len(nbr)
        chunks.append(nbr)
    indices = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    return indptr, indices.astype(np.int64)


def build_ldel2(net: NetworkInstance) -> LDelGraph:
    """Edges of all 2-localized triangles plus all Gabriel edges.

    A triangle of mutually unit-close nodes qualifies when its circumdisk
    interior contains no node within 2 UDG hops of any of its corners; a
    Gabriel edge is a unit edge whose diametral circle is empty.
    """
    coords = np.ascontiguousarray(net.coords)
    indptr, indices = _adjacency_csr(net)
    h2ptr, h2idx = _hop2_csr(net)
    tris = kernels.local_triangles(coords, indptr, indices, h2ptr, h2idx)

    edges: set[Dart] = set()
    for u, v, w in tris:
        u, v, w = int(u), int(v), int(w)
        edges.add((u, v))
        edges.add((v, w))
        edges.add((u, w))

    udg_edges = []
    for u, nbr in enumerate(net.adjacency):
        for v in nbr:
            if u < v:
                udg_edges.append((u, int(v)))
    udg_edges = np.array(udg_edges, dtype=np.int64) if udg_edges else np.empty((0, 2), np.int64)
    keep = kernels.gabriel_mask(coords, udg_edges)
    for (u, v), k in zip(udg_edges, keep):
        if k:
            edges.add((int(u), int(v)))

    arr = np.array(sorted(edges), dtype=np.int64) if edges else np.empty((0, 2), np.int64)
    return LDelGraph(net, arr)


def enumerate_faces(g: LDelGraph) -> list[list[int]]:
    """Face node cycles; validates Euler's formula for the connected graph."""
    v = g.net.n
    e = g.n_edges
    f = len(g.faces)
    if v - e + f != 2:
        raise TopologyError(f"Euler check failed: V={v} E={e} F={f}")
    return [g.face_nodes(i) for i in range(f)]


def _simple_cycles_of_walk(walk: list[int]) -> list[list[int]]:
    """Decompose a closed walk into simple cycles (stack extraction).

    Spurs over bridges come out as 2-node cycles and are dropped by callers.
    """
    cycles = []
    stack: list[int] = []
    pos: dict[int, int] = {}
    for node in walk:
        if node in pos:
            p = pos[node]
            cyc = stack[p:]
            if len(cyc) >= 2:
                cycles.append(cyc)
            for q in stack[p:]:
                pos.pop(q, None)
            del stack[p:]
        pos[node] = len(stack)
        stack.append(node)
    if len(stack) >= 2:
        cycles.append(stack)
    return cycles


def _orient(cycle: list[int], net: NetworkInstance, ccw: bool) -> list[int]:
    pts = [net.point(i) for i in cycle]
    s = 0.0
    for i in range(len(pts)):
        x1, y1 = pts[i]
        x2, y2 = pts[(i + 1) % len(pts)]
        s += x1 * y2 - x2 * y1
    if (s > 0) != ccw:
        cycle = [cycle[0]] + cycle[:0:-1]
    return cycle


def _cycle_length(cycle: list[int], net: NetworkInstance) -> float:
    total = 0.0
    for i in range(len(cycle)):
        total += dist(net.point(cycle[i]), net.point(cycle[(i + 1) % len(cycle)]))
    return total


def detect_holes(g: LDelGraph) -> list[Hole]:
    """Inner holes: interior faces with >= 4 distinct perimeter nodes.
    Outer holes: faces of the graph augmented with convex hull edges that
    contain a hull edge longer than 1."""
    net = g.net
    holes: list[Hole] = []
    hid = 0
    for fid, face in enumerate(g.faces):
        if fid == g.outer_face:
            continue
        walk = [u for u, _ in face]
        if len(set(walk)) < 4:
            continue
        for cyc in _simple_cycles_of_walk(walk):
            if len(cyc) < 4:
                continue
            cyc = _orient(cyc, net, ccw=True)
            holes.append(Hole(hid, cyc, "inner", _cycle_length(cyc, net)))
            hid += 1

    holes.extend(_outer_holes(g, hid))
    return holes


def _outer_holes(g: LDelGraph, next_id: int) -> list[Hole]:
    net = g.net
    if net.n < 3:
        return []
    try:
        hull = convex_hull(net.points)
    except ValueError:
        return []
    pts = net.points
    hull_ids = []
    for hp in hull.vertices:
        best = min(range(net.n), key=lambda i: dist(pts[i], hp))
        hull_ids.append(best)
    hull_edges = set()
    long_hull_edges = set()
    for i in range(len(hull_ids)):
        u, v = hull_ids[i], hull_ids[(i + 1) % len(hull_ids)]
        if u == v:
            continue
        e = (min(u, v), max(u, v))
        hull_edges.add(e)
        if dist(pts[u], pts[v]) > 1.0 + EPS:
            long_hull_edges.add(e)
    if not long_hull_edges:
        return []

    aug_edges = set(g.edge_set) | hull_edges
    aug = LDelGraph(net, np.array(sorted(aug_edges), dtype=np.int64))
    out: list[Hole] = []
    for fid, face in enumerate(aug.faces):
        if fid == aug.outer_face:
            continue
        walk = [u for u, _ in face]
        face_edge_set = {(min(u, v), max(u, v)) for u, v in face}
        if not (face_edge_set & long_hull_edges):
            continue
        if len(set(walk)) < 3:
            continue
        candidates = [
            c
            for c in _simple_cycles_of_walk(walk)
            if len(c) >= 3
            and any(
                (min(c[i], c[(i + 1) % len(c)]), max(c[i], c[(i + 1) % len(c)])) in long_hull_edges
                for i in range(len(c))
            )
        ]
        if not candidates:
            continue
        cyc = max(candidates, key=len)
        cyc = _orient(cyc, net, ccw=False)
        out.append(Hole(next_id, cyc, "outer", _cycle_length(cyc, net)))
        next_id += 1
    return out


def hole_convex_hull(h: Hole, net: NetworkInstance) -> Polygon:
    if len(h.cycle) < 3:
        raise ValueError("hole needs at least 3 nodes")
    return convex_hull([net.point(i) for i in h.cycle])


def holes_by_node(holes: list[Hole], n: int) -> list[set[int]]:
    """Per node, the ids of holes whose perimeter it belongs to."""
    member: list[set[int]] = [set() for _ in range(n)]
    for h in holes:
        for u in h.cycle:
            member[u].add(h.hole_id)
    return member


def dump_topology(g: LDelGraph, holes: list[Hole]) -> str:
    """Line-based debug dump for fixture diffing."""
    lines = [f"nodes {g.net.n}", f"edges {g.n_edges}", f"faces {len(g.faces)}"]
    for u, v in sorted(g.edge_set):
        lines.append(f"edge {u} {v}")
    for fid in range(len(g.faces)):
        tag = " outer" if fid == g.outer_face else ""
        lines.append(f"face {fid}{tag}: " + " ".join(str(u) for u in g.face_nodes(fid)))
    for h in holes:
        lines.append(
            f"hole {h.hole_id} {h.kind} perimeter {h.perimeter_length:.6f}: "
            + " ".join(str(u) for u in h.cycle)
        )
    return "\n".join(lines) + "\n"
