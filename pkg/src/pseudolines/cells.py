"""Planar face structure and north->south dual DAG of a wiring diagram.

The complex is built by a single left-to-right sweep.  Between swap
columns the picture is n wires stacked in n+1 "gaps" (gap 0 above wire 1
holds the north face, gap n below wire n the south face); each gap holds
the face currently open there.  A swap at gap g closes the face in gap g,
opens a new one, and splits a boundary segment of the faces in gaps g-1
and g+1 (the crossing vertex lies on their boundary).

Segments are maximal pieces of a pseudoline between consecutive crossings
on it, including the two unbounded rays.  A segment on wire w always has
the gap-(w-1) face above it and the gap-w face below it, and neither can
change during the segment's life (any swap at gap w-1 or w ends it).  The
dual DAG has one edge per segment, oriented face-above -> face-below, so
every edge advances the gap index by one: sorting faces by (gap, creation
order) is a topological order with north first and south last.

Counts for a valid diagram: faces = 1 + n + n(n-1)/2, segments = n^2.
Storage is flat int32 arrays so that n = 2160 (about 2.33M faces and
4.67M segments) stays comfortably in memory.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from fractions import Fraction
import json

import numpy as np

from .wiring import WiringDiagram, ensure_valid

__all__ = [
    "CellComplex",
    "ZoneReport",
    "build_complex",
    "face_size",
    "zone_complexity",
    "zone_report",
    "topological_order",
    "export_dot",
    "zone_report_json",
]


def _csr(keys: np.ndarray, nbuckets: int) -> tuple[np.ndarray, np.ndarray]:
    """Group array indices by key, preserving index order inside a bucket."""
    order = np.argsort(keys, kind="stable").astype(np.int64)
    counts = np.bincount(keys, minlength=nbuckets)
    ptr = np.zeros(nbuckets + 1, dtype=np.int64)
    np.cumsum(counts, out=ptr[1:])
    return ptr, order


@dataclass
class CellComplex:
    """Faces, pseudoline segments, and the dual DAG of a diagram.

    Face ids: the n+1 unbounded left-edge faces get ids 0..n (id = gap),
    then one new face per swap in sweep order.  Segment ids likewise: the
    n left-edge rays get 0..n-1 (wire order), then two per swap.  ``first``
    and ``last`` are the column span of a face or segment, on the column
    axis 0..M where swap j acts between columns j and j+1.

    Immutable after construction; safe for concurrent reads.
    """

    diagram: WiringDiagram
    n: int
    columns: int  # M = number of swaps
    seg_owner: np.ndarray
    seg_wire: np.ndarray
    seg_above: np.ndarray
    seg_below: np.ndarray
    seg_first: np.ndarray
    seg_last: np.ndarray
    face_gap: np.ndarray
    face_first: np.ndarray
    face_last: np.ndarray
    # boundary lists in left-to-right order, CSR over face ids
    lower_ptr: np.ndarray
    lower_idx: np.ndarray
    upper_ptr: np.ndarray
    upper_idx: np.ndarray
    # segments grouped by wire, faces grouped by gap
    wire_ptr: np.ndarray
    wire_idx: np.ndarray
    gap_ptr: np.ndarray
    gap_idx: np.ndarray
    _rotation: "tuple | None" = field(default=None, repr=False, compare=False)

    north: int = 0

    @property
    def south(self) -> int:
        return self.n

    @property
    def num_faces(self) -> int:
        return len(self.face_gap)

    @property
    def num_segments(self) -> int:
        return len(self.seg_owner)

    def lower_boundary(self, f: int) -> list[int]:
        """Segments bounding face f from below, left to right."""
        self._check_face(f)
        return self.lower_idx[self.lower_ptr[f] : self.lower_ptr[f + 1]].tolist()

    def upper_boundary(self, f: int) -> list[int]:
        """Segments bounding face f from above, left to right."""
        self._check_face(f)
        return self.upper_idx[self.upper_ptr[f] : self.upper_ptr[f + 1]].tolist()

    def lower_degree(self, f: int) -> int:
        return int(self.lower_ptr[f + 1] - self.lower_ptr[f])

    def upper_degree(self, f: int) -> int:
        return int(self.upper_ptr[f + 1] - self.upper_ptr[f])

    def faces_at_gap(self, g: int) -> list[int]:
        return self.gap_idx[self.gap_ptr[g] : self.gap_ptr[g + 1]].tolist()

    def segments_on_wire(self, w: int) -> list[int]:
        return self.wire_idx[self.wire_ptr[w] : self.wire_ptr[w + 1]].tolist()

    def _check_face(self, f: int) -> None:
        if not 0 <= f < self.num_faces:
            raise KeyError(f"unknown face id {f}")


def build_complex(d: WiringDiagram) -> CellComplex:
    """Sweep a valid diagram into its cell complex.

    Validates first and raises InvalidDiagramError on failure.  Runs in
    O(n^2) time and memory.
    """
    ensure_valid(d)
    n, swaps = d.n, d.swaps
    m = len(swaps)
    nseg = n * n
    nface = n + 1 + m

    seg_owner = array("i", bytes(4 * nseg))
    seg_wire = array("i", bytes(4 * nseg))
    seg_above = array("i", bytes(4 * nseg))
    seg_below = array("i", bytes(4 * nseg))
    seg_first = array("i", bytes(4 * nseg))
    seg_last = array("i", [m]) * nseg
    face_gap = array("i", bytes(4 * nface))
    face_first = array("i", bytes(4 * nface))
    face_last = array("i", [m]) * nface

    # left edge: face i sits in gap i, ray i-1 on wire i belongs to line i
    for i in range(n + 1):
        face_gap[i] = i
    for w in range(1, n + 1):
        seg_owner[w - 1] = w
        seg_wire[w - 1] = w
        seg_above[w - 1] = w - 1
        seg_below[w - 1] = w

    gap_face = list(range(n + 1))
    wire_seg = [0] + list(range(n))  # wire_seg[w] = current segment on wire w
    wire_line = list(range(n + 1))  # wire_line[w] = current pseudoline on wire w
    next_face = n + 1
    next_seg = n

    for j, g in enumerate(swaps):
        col = j + 1
        seg_last[wire_seg[g]] = j
        seg_last[wire_seg[g + 1]] = j
        old = gap_face[g]
        face_last[old] = j
        fnew = next_face
        next_face += 1
        face_gap[fnew] = g
        face_first[fnew] = col
        wire_line[g], wire_line[g + 1] = wire_line[g + 1], wire_line[g]
        s1 = next_seg
        s2 = next_seg + 1
        next_seg += 2
        seg_owner[s1] = wire_line[g]
        seg_wire[s1] = g
        seg_above[s1] = gap_face[g - 1]
        seg_below[s1] = fnew
        seg_first[s1] = col
        seg_owner[s2] = wire_line[g + 1]
        seg_wire[s2] = g + 1
        seg_above[s2] = fnew
        seg_below[s2] = gap_face[g + 1]
        seg_first[s2] = col
        wire_seg[g] = s1
        wire_seg[g + 1] = s2
        gap_face[g] = fnew

    def as_np(a: array) -> np.ndarray:
        return np.frombuffer(a, dtype=np.int32)

    seg_above_np = as_np(seg_above)
    seg_below_np = as_np(seg_below)
    seg_wire_np = as_np(seg_wire)
    face_gap_np = as_np(face_gap)

    lower_ptr, lower_idx = _csr(seg_above_np, nface)
    upper_ptr, upper_idx = _csr(seg_below_np, nface)
    wire_ptr, wire_idx = _csr(seg_wire_np, n + 1)
    gap_ptr, gap_idx = _csr(face_gap_np, n + 1)

    return CellComplex(
        diagram=d,
        n=n,
        columns=m,
        seg_owner=as_np(seg_owner),
        seg_wire=seg_wire_np,
        seg_above=seg_above_np,
        seg_below=seg_below_np,
        seg_first=as_np(seg_first),
        seg_last=as_np(seg_last),
        face_gap=face_gap_np,
        face_first=as_np(face_first),
        face_last=as_np(face_last),
        lower_ptr=lower_ptr,
        lower_idx=lower_idx,
        upper_ptr=upper_ptr,
        upper_idx=upper_idx,
        wire_ptr=wire_ptr,
        wire_idx=wire_idx,
        gap_ptr=gap_ptr,
        gap_idx=gap_idx,
    )


def face_size(c: CellComplex, f: int) -> int:
    """Number of edges bounding face f (upper plus lower, rays included)."""
    c._check_face(f)
    return c.lower_degree(f) + c.upper_degree(f)


def zone_complexity(c: CellComplex, p: int) -> int:
    """Total edge count of the cells supported by pseudoline p.

    A segment shared by two cells of the zone is counted in both.
    """
    if not 1 <= p <= c.n:
        raise KeyError(f"unknown pseudoline id {p}")
    sel = np.flatnonzero(c.seg_owner == p)
    faces = np.unique(np.concatenate([c.seg_above[sel], c.seg_below[sel]]))
    sizes = (c.lower_ptr[faces + 1] - c.lower_ptr[faces]) + (
        c.upper_ptr[faces + 1] - c.upper_ptr[faces]
    )
    return int(sizes.sum())


@dataclass(frozen=True)
class ZoneReport:
    per_line: dict[int, int]
    average: Fraction
    max: int


def zone_report(c: CellComplex) -> ZoneReport:
    """Zone complexity of every pseudoline, with exact average and max."""
    sizes_all = np.diff(c.lower_ptr) + np.diff(c.upper_ptr)
    owner_ptr, owner_idx = _csr(c.seg_owner, c.n + 1)
    per = {}
    for p in range(1, c.n + 1):
        segs = owner_idx[owner_ptr[p] : owner_ptr[p + 1]]
        faces = np.unique(np.concatenate([c.seg_above[segs], c.seg_below[segs]]))
        per[p] = int(sizes_all[faces].sum())
    total = sum(per.values())
    return ZoneReport(per_line=per, average=Fraction(total, c.n), max=max(per.values()))


def zone_report_json(r: ZoneReport) -> str:
    payload = {
        "per_line": {str(p): v for p, v in sorted(r.per_line.items())},
        "average": f"{r.average.numerator}/{r.average.denominator}",
        "max": r.max,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def topological_order(c: CellComplex) -> list[int]:
    """Faces in an order where every dual edge goes forward.

    North comes first, south last.  Every dual edge must advance the gap
    index by exactly one; a violation means the construction is broken and
    raises RuntimeError.
    """
    if not np.array_equal(c.face_gap[c.seg_above] + 1, c.face_gap[c.seg_below]):
        raise RuntimeError("dual edge does not advance the gap index; complex is malformed")
    return c.gap_idx.tolist()


def export_dot(c: CellComplex) -> str:
    """DOT text of the dual DAG: one node per face, one edge per segment."""
    out = ["digraph dual {"]
    for f in range(c.num_faces):
        if f == c.north:
            out.append(f'  f{f} [label="north"];')
        elif f == c.south:
            out.append(f'  f{f} [label="south"];')
        else:
            out.append(f"  f{f};")
    for s in range(c.num_segments):
        out.append(f'  f{c.seg_above[s]} -> f{c.seg_below[s]} [label="{c.seg_owner[s]}"];')
    out.append("}")
    return "\n".join(out) + "\n"
