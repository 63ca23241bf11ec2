"""Implicit curves Im Q~ = 0 in the closed upper half-plane.

Marching squares on a rectangular grid; the y = 0 row carries the boundary
values of the continuation from above, so the traced curves meet the axis
where the trajectory does.  Corner classification treats exactly-zero nodes
as outside (v > 0 is inside); crossings landing on a node are keyed by the
node so that branches meeting there link through it.  Segments lying inside
the axis row are discarded: the plotted set is the closure of the upper
half-plane part of the level set, and real segments of it are carried by
the contact abscissas instead.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .n1 import eval_Q_jet, split_point_mass

_AMBIGUOUS = {5, 10}

# corner bits: 0 = (i, j), 1 = (i+1, j), 2 = (i+1, j+1), 3 = (i, j+1)
# edges: 0 bottom, 1 right, 2 top, 3 left
_CASE_SEGMENTS = {
    0: [],
    1: [(3, 0)],
    2: [(0, 1)],
    3: [(3, 1)],
    4: [(1, 2)],
    6: [(0, 2)],
    7: [(3, 2)],
    8: [(2, 3)],
    9: [(0, 2)],
    11: [(1, 2)],
    12: [(3, 1)],
    13: [(0, 1)],
    14: [(3, 0)],
    15: [],
}


def env_thread_cap():
    raw = os.environ.get("GZNT_LAB_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"GZNT_LAB_THREADS={raw!r} is not an integer") from exc
    return max(n, 1)


@dataclass(frozen=True)
class Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise DomainError("degenerate box")
        if self.y0 < 0:
            raise DomainError("the box must stay in the closed upper half-plane (y0 >= 0)")


@dataclass
class LevelCurveSet:
    box: Box
    nx: int
    ny: int
    polylines: list = field(default_factory=list)   # arrays of complex vertices
    contacts: list = field(default_factory=list)    # endpoint contacts (abscissas)

    @property
    def cell_width(self):
        return (self.box.x1 - self.box.x0) / self.nx

    @property
    def cell_height(self):
        return (self.box.y1 - self.box.y0) / self.ny

    def write_csv(self, fh):
        fh.write("polyline,re,im\n")
        for pid, poly in enumerate(self.polylines):
            for v in poly:
                fh.write(f"{pid},{v.real:.17g},{v.imag:.17g}\n")


# ---------------------------------------------------------------------------
# vectorized field evaluation


def _piece_transform_grid(piece, Z, boundary_row):
    """Continued transform of one density piece on a closed-UHP grid."""
    lo, hi = piece.lo, piece.hi
    with np.errstate(divide="ignore", invalid="ignore"):
        i_n = np.log((hi - Z) / (lo - Z))
        if boundary_row is not None:
            x = Z[boundary_row].real
            re = np.log(np.abs(hi - x)) - np.log(np.abs(lo - x))
            im = np.where((lo < x) & (x < hi), math.pi, 0.0)
            i_n[boundary_row] = re + 1j * im
        acc = piece.coeffs[0] * i_n
        hp, lp = hi, lo
        for n in range(1, len(piece.coeffs)):
            i_n = Z * i_n + (hp - lp) / n
            hp *= hi
            lp *= lo
            c = piece.coeffs[n]
            if c:
                acc = acc + c * i_n
    return acc


def _base_grid(M, Z, boundary_row, skip_atom=None):
    acc = np.full(Z.shape, complex(M.a_eff, math.pi * M.fullline))
    if M.b:
        acc = acc + M.b * Z
    for piece in M.measure.pieces:
        acc = acc + _piece_transform_grid(piece, Z, boundary_row)
    with np.errstate(divide="ignore", invalid="ignore"):
        for atom in M.measure.atoms:
            if skip_atom is not None and atom.location == skip_atom:
                continue
            acc = acc + atom.mass / (atom.location - Z)
    return acc


def field_values(Q, xs, ys, threads=None):
    """Q~ on the grid xs x ys (ys >= 0); non-finite where evaluation fails."""
    threads = env_thread_cap() if threads is None else max(int(threads), 1)
    X, Y = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    Z = X + 1j * Y

    def eval_block(zblock):
        boundary = np.where(zblock.imag[:, 0] == 0.0)[0]
        brow = boundary[0] if len(boundary) else None
        f = Q.factor
        with np.errstate(divide="ignore", invalid="ignore"):
            if f.alpha is not None and f.alpha.imag == 0.0:
                a = f.alpha.real
                m0, m1 = split_point_mass(Q, a)
                core = -m0 * (zblock - a) + (zblock - a) ** 2 * _base_grid(m1, zblock, brow)
            else:
                base = _base_grid(Q.base, zblock, brow)
                if f.alpha is not None:
                    core = (zblock - f.alpha) * (zblock - f.alpha.conjugate()) * base
                else:
                    core = base
            if f.beta is not None:
                core = core / ((zblock - f.beta) * (zblock - f.beta.conjugate()))
        return core

    if threads <= 1 or Z.shape[0] < 4:
        return eval_block(Z)
    chunks = np.array_split(np.arange(Z.shape[0]), threads)
    out = np.empty(Z.shape, dtype=complex)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {pool.submit(eval_block, Z[rows]): rows for rows in chunks if len(rows)}
        for fut, rows in futures.items():
            out[rows] = fut.result()
    return out


# ---------------------------------------------------------------------------
# marching squares


def _edge_nodes(edge, i, j):
    """Node index pairs of a cell edge in canonical (low -> high) order."""
    if edge == 0:
        return (i, j), (i + 1, j)
    if edge == 1:
        return (i + 1, j), (i + 1, j + 1)
    if edge == 2:
        return (i, j + 1), (i + 1, j + 1)
    return (i, j), (i, j + 1)


def trace_im_zero(Q, box, nx, ny, threads=None):
    """March the Im Q~ = 0 set on an (nx x ny)-cell grid over the box.

    Returns a LevelCurveSet whose polylines have linearly interpolated
    vertices; endpoint contacts with the axis are collected per the cell
    height.  A finite generalized pole strictly inside the box is refused.
    """
    box = Box(*box) if not isinstance(box, Box) else box
    beta = Q.factor.beta
    if beta is not None and (box.x0 < beta.real < box.x1) and (box.y0 < beta.imag < box.y1):
        raise DomainError(f"the generalized pole {beta} lies inside the box")
    xs = np.linspace(box.x0, box.x1, nx + 1)
    ys = np.linspace(box.y0, box.y1, ny + 1)
    vals = field_values(Q, xs, ys, threads).imag  # shape (ny+1, nx+1)
    finite = np.isfinite(vals)
    inside = finite & (vals > 0.0)

    # cells with corners of mixed classification and all-finite values
    f_cell = finite[:-1, :-1] & finite[:-1, 1:] & finite[1:, 1:] & finite[1:, :-1]
    code = (
        inside[:-1, :-1].astype(np.int8)
        + 2 * inside[:-1, 1:]
        + 4 * inside[1:, 1:]
        + 8 * inside[1:, :-1]
    )
    jj, ii = np.nonzero(f_cell & (code > 0) & (code < 15))

    def node_value(i, j):
        return vals[j, i]

    def node_point(i, j):
        return complex(xs[i], ys[j])

    crossings = {}

    def crossing(edge, i, j):
        # _edge_nodes returns nodes in canonical order, so (ia, ja) anchors
        # the same key from both cells sharing the edge
        (ia, ja), (ib, jb) = _edge_nodes(edge, i, j)
        ekey = ("h" if edge in (0, 2) else "v", ia, ja)
        if ekey in crossings:
            return crossings[ekey]
        va, vb = node_value(ia, ja), node_value(ib, jb)
        t = va / (va - vb)
        if t <= 0.0:
            key, pt = ("n", ia, ja), node_point(ia, ja)
        elif t >= 1.0:
            key, pt = ("n", ib, jb), node_point(ib, jb)
        else:
            # interpolate the varying coordinate only: the constant one must
            # stay bit-exact for crossings of touching edges to coincide
            if edge in (0, 2):
                pt = complex(xs[ia] * (1.0 - t) + xs[ib] * t, ys[ja])
            else:
                pt = complex(xs[ia], ys[ja] * (1.0 - t) + ys[jb] * t)
            # rounding may put the point onto a node; key it geometrically
            # then, so branches meeting at the node link through it
            if pt == node_point(ia, ja):
                key = ("n", ia, ja)
            elif pt == node_point(ib, jb):
                key = ("n", ib, jb)
            else:
                key = ekey
        crossings[ekey] = (key, pt)
        return key, pt

    segments = []
    for j, i in zip(jj.tolist(), ii.tolist()):
        c = int(code[j, i])
        if c in _AMBIGUOUS:
            center = complex(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]))
            try:
                center_in = eval_Q_jet(Q, center, 0, continued=True).f.imag > 0.0
            except Exception:
                center_in = False
            if c == 5:
                pairs = [(0, 1), (2, 3)] if center_in else [(3, 0), (1, 2)]
            else:
                pairs = [(3, 0), (1, 2)] if center_in else [(0, 1), (2, 3)]
        else:
            pairs = _CASE_SEGMENTS[c]
        for ea, eb in pairs:
            ka, pa = crossing(ea, i, j)
            kb, pb = crossing(eb, i, j)
            if ka == kb or pa == pb:
                continue  # degenerate
            if pa.imag == 0.0 and pb.imag == 0.0:
                continue  # segment inside the axis row: real-segment regime
            segments.append((ka, kb, pa, pb))

    polylines = _link_segments(segments)
    curves = LevelCurveSet(box, nx, ny, polylines)
    ch = curves.cell_height
    for poly in polylines:
        if len(poly) >= 2 and poly[0] != poly[-1]:
            for endpoint in (poly[0], poly[-1]):
                if abs(endpoint.imag) <= ch:
                    curves.contacts.append(float(endpoint.real))
    curves.contacts.sort()
    return curves


def _link_segments(segments):
    """Chain segments sharing crossing keys into polylines."""
    adj = {}
    for idx, (ka, kb, _, _) in enumerate(segments):
        adj.setdefault(ka, []).append((idx, kb))
        adj.setdefault(kb, []).append((idx, ka))
    used = [False] * len(segments)
    points = {}
    for ka, kb, pa, pb in segments:
        points[ka] = pa
        points[kb] = pb

    def walk(start_key, first_idx, next_key):
        chain = [start_key, next_key]
        used[first_idx] = True
        prev, cur = start_key, next_key
        while True:
            ext = [(i, other) for i, other in adj.get(cur, []) if not used[i]]
            if not ext:
                break
            if len(ext) == 1:
                idx, nxt = ext[0]
            else:
                # junction (roundoff micro-spurs): keep the straightest run
                d_in = points[cur] - points[prev]
                def straightness(cand):
                    d_out = points[cand[1]] - points[cur]
                    if d_in == 0 or d_out == 0:
                        return -2.0
                    return (d_in.real * d_out.real + d_in.imag * d_out.imag) / (abs(d_in) * abs(d_out))
                idx, nxt = max(ext, key=straightness)
            used[idx] = True
            chain.append(nxt)
            prev, cur = cur, nxt
        return chain

    polylines = []
    # open chains first: start from degree-1 keys
    for key, links in adj.items():
        if len(links) != 1:
            continue
        idx, other = links[0]
        if used[idx]:
            continue
        chain = walk(key, idx, other)
        polylines.append(np.array([points[k] for k in chain]))
    # remaining loops
    for idx, (ka, kb, _, _) in enumerate(segments):
        if used[idx]:
            continue
        chain = walk(ka, idx, kb)
        polylines.append(np.array([points[k] for k in chain]))
    return polylines


def departure_points(curves):
    """Sorted abscissas where the traced curves meet the real axis.

    Vertices within one cell height of the axis are clustered along x (gap
    threshold one cell width); each cluster reports the vertex closest to
    the axis.
    """
    ch, cw = curves.cell_height, curves.cell_width
    near = []
    for poly in curves.polylines:
        for v in poly:
            if abs(v.imag) <= ch:
                near.append(v)
    if not near:
        return []
    near.sort(key=lambda v: (v.real, abs(v.imag)))
    clusters = [[near[0]]]
    for v in near[1:]:
        if v.real - clusters[-1][-1].real <= cw * 1.5:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    out = []
    for cluster in clusters:
        best = min(cluster, key=lambda v: abs(v.imag))
        out.append(float(best.real))
    return sorted(out)
