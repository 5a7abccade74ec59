"""Cutpath counting, enumeration and exit statistics.

A cutpath is a north->south path in the dual DAG of a cell complex; it
crosses every pseudoline exactly once, so it has n+1 faces and n crossed
segments.  Exits of a face are its lower-boundary pseudolines, labelled
left to right: a single exit is "unique", otherwise the outermost two are
"left" and "right" and the rest are "middle".

Each cutpath carries six statistics: (m, k, u) read from north to south
and (m_rot, k_rot, u_rot) read from the half-turn-rotated complex, where
m counts the middle exits of all visited cells (taken or not), k the
middle exits actually taken, and u the unique exits taken.  The rotated
triple is computed by translating the path into the rotated complex and
re-running the same forward code there, so there is a single stats code
path.

Counting is an exact big-integer DP over faces in gap order.  Counts of a
gap are final once the segments of the next wire are consumed, so only
two gap levels of big integers are ever alive; this keeps the 2160-wire
flagship instance within desktop memory.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import json
from typing import Iterator

from .cells import CellComplex, build_complex, face_size
from .wiring import rotate180

__all__ = [
    "Cutpath",
    "CutpathStats",
    "ExitKind",
    "count_cutpaths",
    "enumerate_cutpaths",
    "classify_exits",
    "cutpath_stats",
    "rotated_complex",
    "verify_cutpath_lemmas",
    "CutpathCheckReport",
]

ENUMERATION_MAX_N = 10


class ExitKind(Enum):
    UNIQUE = "unique"
    LEFT = "left"
    RIGHT = "right"
    MIDDLE = "middle"


@dataclass(frozen=True)
class Cutpath:
    """Alternating face/segment sequence from north to south.

    ``faces`` has n+1 ids, ``segments`` the n crossed segment ids;
    ``segments[i]`` is the exit taken from ``faces[i]``.
    """

    faces: tuple[int, ...]
    segments: tuple[int, ...]


@dataclass(frozen=True)
class CutpathStats:
    """The sextuple (m, k, u) forward and (m_rot, k_rot, u_rot) rotated."""

    m: int
    k: int
    u: int
    m_rot: int
    k_rot: int
    u_rot: int

    def key(self) -> tuple[int, int, int, int, int, int]:
        return (self.m, self.k, self.u, self.m_rot, self.k_rot, self.u_rot)

    def invariant_violations(self, n: int) -> list[str]:
        """Constraints every real cutpath's sextuple must satisfy."""
        bad = []
        if self.k > self.m or self.k_rot > self.m_rot:
            bad.append("taken middle exits exceed middle exits seen")
        if self.k + self.u > n or self.k_rot + self.u_rot > n:
            bad.append("taken middle plus unique exits exceed n")
        if self.k > self.u_rot or self.k_rot > self.u:
            bad.append("middle/unique correspondence under rotation fails")
        if self.m > n or self.m_rot > n:
            bad.append("middle exits seen exceed n")
        if 2 * (self.m + self.m_rot - self.u - self.u_rot) > 3 * n:
            bad.append("zone-derived bound m+m_rot-u-u_rot <= 1.5n fails")
        return bad


def count_cutpaths(c: CellComplex) -> int:
    """Exact number of north->south paths in the dual DAG.

    DP in gap order: count(north) = 1 and each face sums the counts above
    its upper boundary.  Finished gap levels are released as the sweep
    advances.
    """
    counts: list[int] = [0] * c.num_faces
    counts[c.north] = 1
    above, below = c.seg_above, c.seg_below
    for w in range(1, c.n + 1):
        segs = c.wire_idx[c.wire_ptr[w] : c.wire_ptr[w + 1]]
        for a, b in zip(above[segs].tolist(), below[segs].tolist()):
            counts[b] += counts[a]
        for f in c.faces_at_gap(w - 1):
            counts[f] = 0
    return counts[c.south]


def enumerate_cutpaths(c: CellComplex, limit: int | None = None) -> Iterator[Cutpath]:
    """Yield cutpaths in deterministic DFS order (exits tried left to right).

    Complete when the total count does not exceed ``limit``.  Intended for
    small complexes (n <= 10 or so); the count grows exponentially.
    """
    seg_below = c.seg_below
    emitted = 0
    faces = [c.north]
    segs: list[int] = []

    def walk() -> Iterator[Cutpath]:
        nonlocal emitted
        f = faces[-1]
        if f == c.south:
            emitted += 1
            yield Cutpath(tuple(faces), tuple(segs))
            return
        for s in c.lower_boundary(f):
            if limit is not None and emitted >= limit:
                return
            faces.append(int(seg_below[s]))
            segs.append(s)
            yield from walk()
            faces.pop()
            segs.pop()

    yield from walk()


def classify_exits(c: CellComplex, f: int) -> list[tuple[int, ExitKind]]:
    """Label the lower-boundary pseudolines of face f, left to right."""
    boundary = c.lower_boundary(f)
    d = len(boundary)
    out = []
    for pos, s in enumerate(boundary):
        owner = int(c.seg_owner[s])
        if d == 1:
            kind = ExitKind.UNIQUE
        elif pos == 0:
            kind = ExitKind.LEFT
        elif pos == d - 1:
            kind = ExitKind.RIGHT
        else:
            kind = ExitKind.MIDDLE
        out.append((owner, kind))
    return out


def rotated_complex(c: CellComplex) -> tuple[CellComplex, list[int], list[int]]:
    """The half-turn complex plus face and segment translation tables.

    A face alive at gap g over columns [a, b] corresponds to the rotated
    face at gap n-g over columns [M-b, M-a]; same for segments with wire
    w -> n+1-w.  The result is cached on the complex.
    """
    if c._rotation is None:
        crot = build_complex(rotate180(c.diagram))
        mcol = c.columns
        rot_face_at = {
            key: f
            for f, key in enumerate(zip(crot.face_gap.tolist(), crot.face_first.tolist()))
        }
        face_map = [
            rot_face_at[(c.n - g, mcol - last)]
            for g, last in zip(c.face_gap.tolist(), c.face_last.tolist())
        ]
        rot_seg_at = {
            key: s
            for s, key in enumerate(zip(crot.seg_wire.tolist(), crot.seg_first.tolist()))
        }
        seg_map = [
            rot_seg_at[(c.n + 1 - w, mcol - last)]
            for w, last in zip(c.seg_wire.tolist(), c.seg_last.tolist())
        ]
        object.__setattr__(c, "_rotation", (crot, face_map, seg_map))
    return c._rotation


def _check_path(c: CellComplex, p: Cutpath) -> None:
    ok = (
        len(p.faces) == c.n + 1
        and len(p.segments) == c.n
        and p.faces[0] == c.north
        and p.faces[-1] == c.south
        and all(
            int(c.seg_above[s]) == p.faces[i] and int(c.seg_below[s]) == p.faces[i + 1]
            for i, s in enumerate(p.segments)
        )
    )
    if not ok:
        raise ValueError("not a cutpath of this complex")


def _forward_stats(c: CellComplex, p: Cutpath, include_terminal: bool) -> tuple[int, int, int]:
    m = k = u = 0
    last = len(p.faces) - 1
    for i, f in enumerate(p.faces):
        d = c.lower_degree(f)
        if i < last:
            if d == 1:
                u += 1
            elif d >= 3:
                pos = c.lower_boundary(f).index(p.segments[i])
                if 0 < pos < d - 1:
                    k += 1
        if d >= 3 and (i < last or include_terminal):
            m += d - 2
    return m, k, u


def cutpath_stats(c: CellComplex, p: Cutpath, include_terminal: bool = True) -> CutpathStats:
    """Exit statistics of a cutpath, forward and in the rotated reading.

    ``include_terminal`` controls whether the final visited cell counts
    toward the middle-exits-seen totals; the terminal cell never has lower
    exits, so both settings agree, and the flag exists only to make that
    explicit.  Raises ValueError when p is not a path of c.
    """
    _check_path(c, p)
    m, k, u = _forward_stats(c, p, include_terminal)
    crot, face_map, seg_map = rotated_complex(c)
    rpath = Cutpath(
        tuple(face_map[f] for f in reversed(p.faces)),
        tuple(seg_map[s] for s in reversed(p.segments)),
    )
    _check_path(crot, rpath)
    m_rot, k_rot, u_rot = _forward_stats(crot, rpath, include_terminal)
    return CutpathStats(m, k, u, m_rot, k_rot, u_rot)


@dataclass
class CutpathCheckReport:
    n: int
    total: int
    checks: dict
    groups: list
    ok: bool

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "total_cutpaths": str(self.total),
            "checks": self.checks,
            "groups": self.groups,
            "ok": self.ok,
        }
        return json.dumps(payload, indent=2)


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def verify_cutpath_lemmas(
    c: CellComplex, include_terminal: bool = True
) -> CutpathCheckReport:
    """Exhaustively check the cutpath facts on one complex.

    Per path: (a) no pseudoline is a middle exit of two visited cells,
    (b) the visited face sizes sum to 4n + m + m_rot - u - u_rot, and for
    n >= 2 that sum is at most 5.5n - 5, (c) the sextuple invariants hold.
    Grouping paths by sextuple: (d) each group size obeys both encoding
    bounds, the groups partition the path set, and the total count is at
    most n^6 times the maximum profile bound.

    Exhaustive enumeration; refuses n > 10.
    """
    from .profiles import encoding_bound, max_profile_bound

    n = c.n
    if n > ENUMERATION_MAX_N:
        raise ValueError(f"exhaustive check limited to n <= {ENUMERATION_MAX_N}, got {n}")

    checks = {
        "middle_exit_uniqueness": {"ok": True, "witness": None},
        "edge_sum_identity": {"ok": True, "witness": None},
        "edge_sum_bound": {"ok": True, "witness": None},
        "stats_invariants": {"ok": True, "witness": None},
        "group_bounds": {"ok": True, "witness": None},
        "group_total": {"ok": True, "witness": None},
    }
    if n < 2:
        # at n=1 the 5.5n-5 bound is below the trivial path sum
        checks["edge_sum_bound"] = {"ok": True, "witness": None, "note": "skipped for n < 2"}

    def fail(name: str, path: Cutpath, detail: str) -> None:
        if checks[name]["ok"]:
            checks[name].update(ok=False, witness=list(path.faces), detail=detail)

    groups: dict[tuple, int] = {}
    total = 0
    for path in enumerate_cutpaths(c):
        total += 1
        seen_middles: set[int] = set()
        for f in path.faces:
            for owner, kind in classify_exits(c, f):
                if kind is ExitKind.MIDDLE:
                    if owner in seen_middles:
                        fail(
                            "middle_exit_uniqueness",
                            path,
                            f"pseudoline {owner} is a middle exit of two visited cells",
                        )
                    seen_middles.add(owner)
        st = cutpath_stats(c, path, include_terminal)
        groups[st.key()] = groups.get(st.key(), 0) + 1

        edge_sum = sum(face_size(c, f) for f in path.faces)
        expect = 4 * n + st.m + st.m_rot - st.u - st.u_rot
        if edge_sum != expect:
            fail("edge_sum_identity", path, f"sum {edge_sum} != {expect}")
        if n >= 2 and 2 * edge_sum > 11 * n - 10:
            fail("edge_sum_bound", path, f"sum {edge_sum} exceeds 5.5n-5")
        bad = st.invariant_violations(n)
        if bad:
            fail("stats_invariants", path, "; ".join(bad))

    group_rows = []
    for key in sorted(groups):
        m, k, u, m_rot, k_rot, u_rot = key
        fwd = encoding_bound(n, m, k, u)
        rev = encoding_bound(n, m_rot, k_rot, u_rot)
        size = groups[key]
        group_rows.append(
            {
                "key": list(key),
                "size": str(size),
                "bound_forward": _frac_str(fwd),
                "bound_reverse": _frac_str(rev),
            }
        )
        if size > min(fwd, rev):
            checks["group_bounds"].update(
                ok=False, witness=list(key), detail=f"group size {size} exceeds bound"
            )

    count = count_cutpaths(c)
    if sum(groups.values()) != count:
        checks["group_total"].update(
            ok=False, witness=None, detail="sextuple groups do not partition the path set"
        )
    profile_cap, _ = max_profile_bound(n)
    if count > n**6 * profile_cap:
        checks["group_total"].update(
            ok=False, witness=None, detail="total count exceeds n^6 times the profile bound"
        )

    ok = all(entry["ok"] for entry in checks.values())
    return CutpathCheckReport(n=n, total=total, checks=checks, groups=group_rows, ok=ok)
