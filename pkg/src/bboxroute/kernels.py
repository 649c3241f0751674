"""Hot numeric kernels.

Each kernel has two interchangeable implementations: a numba ``@njit`` loop
and a vectorized pure-numpy fallback. Set ``BBOXROUTE_NO_NUMBA=1`` to force
the numpy path (or when numba is unavailable it is used automatically).
``benchmarks/bench_kernels.py`` compares the two.

All kernels take plain float64/int64 arrays and are deterministic.
"""

from __future__ import annotations

import os

import numpy as np

EPS = 1e-9

_flag = os.environ.get("BBOXROUTE_NO_NUMBA", "").strip().lower()
_want_numba = _flag not in ("1", "true", "yes")

if _want_numba:
    try:
        from numba import njit

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover
        HAS_NUMBA = False
else:
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and _want_numba


# ---------------------------------------------------------------------------
# unit-disk adjacency
# ---------------------------------------------------------------------------

def _udg_edges_numpy(coords: np.ndarray, radius: float) -> np.ndarray:
    n = len(coords)
    if n < 2:
        return np.empty((0, 2), dtype=np.int64)
    r2 = (radius + EPS) ** 2
    out = []
    # chunk rows to keep the distance block under ~30 MB
    chunk = max(1, int(4e6) // max(n, 1))
    for s in range(0, n, chunk):
        e = min(n, s + chunk)
        d2 = (
            (coords[s:e, 0:1] - coords[None, :, 0]) ** 2
            + (coords[s:e, 1:2] - coords[None, :, 1]) ** 2
        )
        ii, jj = np.nonzero(d2 <= r2)
        ii = ii + s
        keep = ii < jj
        out.append(np.stack([ii[keep], jj[keep]], axis=1))
    return np.concatenate(out, axis=0).astype(np.int64)


def _udg_edges_loop(coords, radius):  # pragma: no cover - numba source
    n = coords.shape[0]
    r2 = (radius + EPS) ** 2
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = coords[i, 0] - coords[j, 0]
            dy = coords[i, 1] - coords[j, 1]
            if dx * dx + dy * dy <= r2:
                count += 1
    out = np.empty((count, 2), dtype=np.int64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = coords[i, 0] - coords[j, 0]
            dy = coords[i, 1] - coords[j, 1]
            if dx * dx + dy * dy <= r2:
                out[k, 0] = i
                out[k, 1] = j
                k += 1
    return out


# ---------------------------------------------------------------------------
# localized Delaunay triangle test
# ---------------------------------------------------------------------------

def _local_triangles_loop(coords, indptr, indices, hop2_indptr, hop2_indices):  # pragma: no cover
    """Triangles (u<v<w) of mutually adjacent nodes whose circumdisk interior
    contains no node reachable within 2 hops of u, v or w."""
    n = coords.shape[0]
    max_tris = 0
    for u in range(n):
        deg = indptr[u + 1] - indptr[u]
        max_tris += deg * deg
    tris = np.empty((max_tris, 3), dtype=np.int64)
    cnt = 0
    for u in range(n):
        for ii in range(indptr[u], indptr[u + 1]):
            v = indices[ii]
            if v <= u:
                continue
            # sorted-merge intersection of adj(u) and adj(v), keeping w > v
            a = indptr[u]
            b = indptr[v]
            ea = indptr[u + 1]
            eb = indptr[v + 1]
            while a < ea and b < eb:
                wa = indices[a]
                wb = indices[b]
                if wa < wb:
                    a += 1
                elif wb < wa:
                    b += 1
                else:
                    w = wa
                    a += 1
                    b += 1
                    if w <= v:
                        continue
                    # circumcircle of (u, v, w)
                    ax = coords[u, 0]
                    ay = coords[u, 1]
                    bx = coords[v, 0]
                    by = coords[v, 1]
                    cx = coords[w, 0]
                    cy = coords[w, 1]
                    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
                    if abs(d) < 1e-300:
                        continue
                    a2 = ax * ax + ay * ay
                    b2 = bx * bx + by * by
                    c2 = cx * cx + cy * cy
                    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
                    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
                    r2 = (ax - ux) * (ax - ux) + (ay - uy) * (ay - uy)
                    tol = EPS * (1.0 + r2)
                    ok = True
                    for node in (u, v, w):
                        for jj in range(hop2_indptr[node], hop2_indptr[node + 1]):
                            z = hop2_indices[jj]
                            if z == u or z == v or z == w:
                                continue
                            dx = coords[z, 0] - ux
                            dy = coords[z, 1] - uy
                            if dx * dx + dy * dy < r2 - tol:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        tris[cnt, 0] = u
                        tris[cnt, 1] = v
                        tris[cnt, 2] = w
                        cnt += 1
    return tris[:cnt]


def _local_triangles_numpy(coords, indptr, indices, hop2_indptr, hop2_indices):
    n = coords.shape[0]
    adj = [indices[indptr[u]:indptr[u + 1]] for u in range(n)]
    out = []
    for u in range(n):
        au = adj[u]
        au = au[au > u]
        for v in au:
            common = np.intersect1d(au, adj[v], assume_unique=True)
            for w in common[common > v]:
                ax, ay = coords[u]
                bx, by = coords[v]
                cx, cy = coords[w]
                d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
                if abs(d) < 1e-300:
                    continue
                a2 = ax * ax + ay * ay
                b2 = bx * bx + by * by
                c2 = cx * cx + cy * cy
                ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
                uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
                r2 = (ax - ux) ** 2 + (ay - uy) ** 2
                tol = EPS * (1.0 + r2)
                cand = np.concatenate([
                    hop2_indices[hop2_indptr[q]:hop2_indptr[q + 1]] for q in (u, v, w)
                ])
                cand = cand[(cand != u) & (cand != v) & (cand != w)]
                if cand.size:
                    dx = coords[cand, 0] - ux
                    dy = coords[cand, 1] - uy
                    if np.any(dx * dx + dy * dy < r2 - tol):
                        continue
                out.append((u, v, w))
    if not out:
        return np.empty((0, 3), dtype=np.int64)
    return np.asarray(out, dtype=np.int64)


# ---------------------------------------------------------------------------
# Gabriel edge test
# ---------------------------------------------------------------------------

def _gabriel_mask_loop(coords, edges):  # pragma: no cover - numba source
    n = coords.shape[0]
    m = edges.shape[0]
    keep = np.ones(m, dtype=np.bool_)
    for k in range(m):
        u = edges[k, 0]
        v = edges[k, 1]
        mx = 0.5 * (coords[u, 0] + coords[v, 0])
        my = 0.5 * (coords[u, 1] + coords[v, 1])
        dx = coords[u, 0] - mx
        dy = coords[u, 1] - my
        r2 = dx * dx + dy * dy
        tol = EPS * (1.0 + r2)
        for z in range(n):
            if z == u or z == v:
                continue
            zx = coords[z, 0] - mx
            zy = coords[z, 1] - my
            if zx * zx + zy * zy < r2 - tol:
                keep[k] = False
                break
    return keep


def _gabriel_mask_numpy(coords, edges):
    m = edges.shape[0]
    keep = np.ones(m, dtype=bool)
    if m == 0:
        return keep
    mids = 0.5 * (coords[edges[:, 0]] + coords[edges[:, 1]])
    r2 = np.sum((coords[edges[:, 0]] - mids) ** 2, axis=1)
    tol = EPS * (1.0 + r2)
    chunk = max(1, int(4e6) // max(len(coords), 1))
    for s in range(0, m, chunk):
        e = min(m, s + chunk)
        d2 = (
            (mids[s:e, 0:1] - coords[None, :, 0]) ** 2
            + (mids[s:e, 1:2] - coords[None, :, 1]) ** 2
        )
        inside = d2 < (r2[s:e, None] - tol[s:e, None])
        rows = np.arange(s, e)
        inside[rows - s, edges[s:e, 0]] = False
        inside[rows - s, edges[s:e, 1]] = False
        keep[s:e] = ~inside.any(axis=1)
    return keep


# ---------------------------------------------------------------------------
# batched segment-vs-rectangle visibility
# ---------------------------------------------------------------------------

def _segments_hit_rects_loop(ax, ay, bx, by, rects):  # pragma: no cover - numba source
    m = ax.shape[0]
    nr = rects.shape[0]
    hit = np.zeros(m, dtype=np.bool_)
    for k in range(m):
        dx = bx[k] - ax[k]
        dy = by[k] - ay[k]
        for r in range(nr):
            lo_x = rects[r, 0]
            hi_x = rects[r, 1]
            lo_y = rects[r, 2]
            hi_y = rects[r, 3]
            t0 = 0.0
            t1 = 1.0
            ok = True
            for side in range(4):
                if side == 0:
                    p = -dx
                    q = ax[k] - lo_x
                elif side == 1:
                    p = dx
                    q = hi_x - ax[k]
                elif side == 2:
                    p = -dy
                    q = ay[k] - lo_y
                else:
                    p = dy
                    q = hi_y - ay[k]
                if abs(p) < EPS:
                    if q < -EPS:
                        ok = False
                        break
                else:
                    t = q / p
                    if p < 0:
                        if t > t1:
                            ok = False
                            break
                        if t > t0:
                            t0 = t
                    else:
                        if t < t0:
                            ok = False
                            break
                        if t < t1:
                            t1 = t
            if not ok or t1 - t0 <= EPS:
                continue
            tm = 0.5 * (t0 + t1)
            mx = ax[k] + tm * dx
            my = ay[k] + tm * dy
            if lo_x + EPS < mx < hi_x - EPS and lo_y + EPS < my < hi_y - EPS:
                hit[k] = True
                break
    return hit


def _segments_hit_rects_numpy(ax, ay, bx, by, rects):
    m = ax.shape[0]
    hit = np.zeros(m, dtype=bool)
    if m == 0 or rects.shape[0] == 0:
        return hit
    dx = (bx - ax)[:, None]
    dy = (by - ay)[:, None]
    p = np.stack([-dx, dx, -dy, dy], axis=2)  # (m, nr?, 4) after broadcast
    q = np.stack(
        [
            ax[:, None] - rects[None, :, 0],
            rects[None, :, 1] - ax[:, None],
            ay[:, None] - rects[None, :, 2],
            rects[None, :, 3] - ay[:, None],
        ],
        axis=2,
    )
    p = np.broadcast_to(p, q.shape).copy()
    parallel = np.abs(p) < EPS
    outside_parallel = parallel & (q < -EPS)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = q / p
    neg = p < 0
    t_enter = np.where(neg & ~parallel, t, -np.inf)
    t_exit = np.where(~neg & ~parallel, t, np.inf)
    t0 = np.maximum(t_enter.max(axis=2), 0.0)
    t1 = np.minimum(t_exit.min(axis=2), 1.0)
    valid = ~outside_parallel.any(axis=2) & (t1 - t0 > EPS)
    tm = 0.5 * (t0 + t1)
    mx = ax[:, None] + tm * dx
    my = ay[:, None] + tm * dy
    strict = (
        (mx > rects[None, :, 0] + EPS)
        & (mx < rects[None, :, 1] - EPS)
        & (my > rects[None, :, 2] + EPS)
        & (my < rects[None, :, 3] - EPS)
    )
    return (valid & strict).any(axis=1)


# ---------------------------------------------------------------------------
# batched segment-vs-polygon blocking (for visibility graphs)
# ---------------------------------------------------------------------------

def _segments_blocked_loop(ax, ay, bx, by, ex1, ey1, ex2, ey2, poly_ptr, vx, vy, vert_ptr):  # pragma: no cover
    """Per segment: True when it properly crosses any polygon edge or its
    midpoint lies strictly inside any polygon.

    (ex1..ey2, poly_ptr): all polygon edges, grouped per polygon.
    (vx, vy, vert_ptr): polygon vertex rings for point-in-polygon tests.
    """
    m = ax.shape[0]
    npoly = poly_ptr.shape[0] - 1
    blocked = np.zeros(m, dtype=np.bool_)
    for k in range(m):
        px = ax[k]
        py = ay[k]
        qx = bx[k]
        qy = by[k]
        done = False
        for e in range(ex1.shape[0]):
            rx = ex1[e]
            ry = ey1[e]
            sx = ex2[e]
            sy = ey2[e]
            d1 = (sx - rx) * (py - ry) - (sy - ry) * (px - rx)
            d2 = (sx - rx) * (qy - ry) - (sy - ry) * (qx - rx)
            d3 = (qx - px) * (ry - py) - (qy - py) * (rx - px)
            d4 = (qx - px) * (sy - py) - (qy - py) * (sx - px)
            scale = 1.0 + abs(px) + abs(py) + abs(qx) + abs(qy) + abs(rx) + abs(ry)
            tol = EPS * scale
            if (
                ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol))
                and ((d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol))
            ):
                blocked[k] = True
                done = True
                break
        if done:
            continue
        mx = 0.5 * (px + qx)
        my = 0.5 * (py + qy)
        for pi in range(npoly):
            lo = vert_ptr[pi]
            hi = vert_ptr[pi + 1]
            nv = hi - lo
            on_boundary = False
            for i in range(nv):
                x1 = vx[lo + i]
                y1 = vy[lo + i]
                x2 = vx[lo + (i + 1) % nv]
                y2 = vy[lo + (i + 1) % nv]
                crossv = (x2 - x1) * (my - y1) - (y2 - y1) * (mx - x1)
                if abs(crossv) <= EPS * (1.0 + abs(x1) + abs(y1) + abs(x2) + abs(y2)):
                    if (
                        min(x1, x2) - EPS <= mx <= max(x1, x2) + EPS
                        and min(y1, y2) - EPS <= my <= max(y1, y2) + EPS
                    ):
                        on_boundary = True
                        break
            if on_boundary:
                continue
            inside = False
            j = nv - 1
            for i in range(nv):
                xi = vx[lo + i]
                yi = vy[lo + i]
                xj = vx[lo + j]
                yj = vy[lo + j]
                if (yi > my) != (yj > my):
                    x_cross = xi + (my - yi) / (yj - yi) * (xj - xi)
                    if mx < x_cross:
                        inside = not inside
                j = i
            if inside:
                blocked[k] = True
                break
    return blocked


def _segments_blocked_numpy(ax, ay, bx, by, ex1, ey1, ex2, ey2, poly_ptr, vx, vy, vert_ptr):
    m = ax.shape[0]
    blocked = np.zeros(m, dtype=bool)
    if m == 0:
        return blocked
    ne = ex1.shape[0]
    if ne:
        for k in range(m):
            px, py, qx, qy = ax[k], ay[k], bx[k], by[k]
            d1 = (ex2 - ex1) * (py - ey1) - (ey2 - ey1) * (px - ex1)
            d2 = (ex2 - ex1) * (qy - ey1) - (ey2 - ey1) * (qx - ex1)
            d3 = (qx - px) * (ey1 - py) - (qy - py) * (ex1 - px)
            d4 = (qx - px) * (ey2 - py) - (qy - py) * (ex2 - px)
            tol = EPS * (1.0 + abs(px) + abs(py) + abs(qx) + abs(qy) + np.abs(ex1) + np.abs(ey1))
            proper = (
                (((d1 > tol) & (d2 < -tol)) | ((d1 < -tol) & (d2 > tol)))
                & (((d3 > tol) & (d4 < -tol)) | ((d3 < -tol) & (d4 > tol)))
            )
            if proper.any():
                blocked[k] = True
        if blocked.all():
            return blocked
    npoly = vert_ptr.shape[0] - 1
    mx = 0.5 * (ax + bx)
    my = 0.5 * (ay + by)
    for k in range(m):
        if blocked[k]:
            continue
        for pi in range(npoly):
            lo, hi = vert_ptr[pi], vert_ptr[pi + 1]
            pvx = vx[lo:hi]
            pvy = vy[lo:hi]
            nx = np.roll(pvx, -1)
            ny = np.roll(pvy, -1)
            crossv = (nx - pvx) * (my[k] - pvy) - (ny - pvy) * (mx[k] - pvx)
            tol = EPS * (1.0 + np.abs(pvx) + np.abs(pvy))
            on_edge = (
                (np.abs(crossv) <= tol)
                & (np.minimum(pvx, nx) - EPS <= mx[k])
                & (mx[k] <= np.maximum(pvx, nx) + EPS)
                & (np.minimum(pvy, ny) - EPS <= my[k])
                & (my[k] <= np.maximum(pvy, ny) + EPS)
            )
            if on_edge.any():
                continue
            cond = (pvy > my[k]) != (ny > my[k])
            with np.errstate(divide="ignore", invalid="ignore"):
                x_cross = pvx + (my[k] - pvy) / (ny - pvy) * (nx - pvx)
            if (cond & (mx[k] < x_cross)).sum() % 2 == 1:
                blocked[k] = True
                break
    return blocked


# ---------------------------------------------------------------------------
# implementation selection
# ---------------------------------------------------------------------------

if USE_NUMBA:
    udg_edges = njit(cache=True)(_udg_edges_loop)
    local_triangles = njit(cache=True)(_local_triangles_loop)
    gabriel_mask = njit(cache=True)(_gabriel_mask_loop)
    segments_hit_rects = njit(cache=True)(_segments_hit_rects_loop)
    segments_blocked_by_polygons = njit(cache=True)(_segments_blocked_loop)
else:
    udg_edges = _udg_edges_numpy
    local_triangles = _local_triangles_numpy
    gabriel_mask = _gabriel_mask_numpy
    segments_hit_rects = _segments_hit_rects_numpy
    segments_blocked_by_polygons = _segments_blocked_numpy
