"""Triangle flips and greedy local search for cutpath maximization.

A flippable triangle appears in the swap word as positions i < j < k with
gaps (g, g+-1, g) and no other swap touching wires g-1..g+2 in between:
exactly the bounded faces of size 3.  Flipping moves one of the three
pseudolines across the opposite crossing, i.e. replaces the local pattern
g, g+-1, g by g+-1, g, g+-1 after commuting the unrelated in-between
swaps out of the way (they all have gap distance >= 2 from g, so they
commute across the outer swaps; the result is the flipped arrangement,
with in-between swaps reordered only by commutation moves).
"""

from __future__ import annotations

from dataclasses import dataclass
import json

from .cells import build_complex
from .cutpaths import count_cutpaths
from .wiring import WiringDiagram, ensure_valid

__all__ = ["TriangleSite", "triangles", "flip", "greedy_maximize", "GreedyTrace"]

DEFAULT_MAX_STEPS = 1000


@dataclass(frozen=True, order=True)
class TriangleSite:
    """Word positions (i, j, k) of the three swaps bounding a triangle."""

    i: int
    j: int
    k: int


def triangles(d: WiringDiagram) -> list[TriangleSite]:
    """All flippable triangle sites, in word-position order.

    Sites correspond one-to-one to the bounded faces of size 3: the face
    is created by swap i, closed by swap k, and its third vertex is the
    swap j splitting its other boundary.
    """
    ensure_valid(d)
    c = build_complex(d)
    m = c.columns
    sites = []
    for f in range(c.num_faces):
        first, last = int(c.face_first[f]), int(c.face_last[f])
        if first == 0 or last == m:
            continue  # unbounded on one side
        up = c.upper_boundary(f)
        low = c.lower_boundary(f)
        if len(up) + len(low) != 3:
            continue
        i, k = first - 1, last
        j = int(c.seg_last[up[0] if len(up) == 2 else low[0]])
        sites.append(TriangleSite(i, j, k))
    sites.sort()
    return sites


def _site_gaps(d: WiringDiagram, t: TriangleSite) -> tuple[int, int]:
    """The (outer, middle) gaps of a site, raising if the site is stale."""
    s = d.swaps
    ok = 0 <= t.i < t.j < t.k < len(s)
    if ok:
        g, gp = s[t.i], s[t.j]
        ok = s[t.k] == g and abs(g - gp) == 1
        ok = ok and all(
            abs(s[p] - g) >= 2 for p in range(t.i + 1, t.k) if p != t.j
        )
    if not ok:
        raise ValueError(f"stale or invalid triangle site {t}")
    return s[t.i], s[t.j]


def flip(d: WiringDiagram, t: TriangleSite) -> WiringDiagram:
    """Flip the triangle at site t.

    The in-between swaps (all commuting with gap g) are moved across the
    outer swaps, and the triple g, g', g becomes g', g, g'.  The flipped
    triple lands at positions (j-1, j, j+1) and is flippable again.
    """
    g, gp = _site_gaps(d, t)
    s = d.swaps
    word = (
        s[: t.i]
        + s[t.i + 1 : t.j]
        + (gp, g, gp)
        + s[t.j + 1 : t.k]
        + s[t.k + 1 :]
    )
    return WiringDiagram(d.n, word)


@dataclass
class GreedyTrace:
    steps: list  # (step index, site applied or None, count after)
    truncated: bool

    def to_json(self) -> str:
        payload = {
            "steps": [
                {
                    "step": i,
                    "site": None if site is None else [site.i, site.j, site.k],
                    "count": str(count),
                }
                for i, site, count in self.steps
            ],
            "truncated": self.truncated,
        }
        return json.dumps(payload, indent=2)


def greedy_maximize(
    d: WiringDiagram, max_steps: int = DEFAULT_MAX_STEPS
) -> tuple[WiringDiagram, GreedyTrace]:
    """Apply the best strictly improving flip until a local maximum.

    Every single-flip neighbour is counted from scratch (complexes are
    rebuilt, not updated); ties break toward the smallest site triple, so
    runs are reproducible.  The trace records the starting count as step 0
    and one entry per applied flip; counts are strictly increasing.
    """
    ensure_valid(d)
    current = d
    count = count_cutpaths(build_complex(current))
    steps: list = [(0, None, count)]
    truncated = False
    step = 0
    while True:
        if step >= max_steps:
            truncated = len(_improving(current, count)) > 0
            break
        best = None
        for site, neighbour_count in _improving(current, count):
            if best is None or neighbour_count > best[1]:
                best = (site, neighbour_count)
        if best is None:
            break
        step += 1
        current = flip(current, best[0])
        count = best[1]
        steps.append((step, best[0], count))
    return current, GreedyTrace(steps=steps, truncated=truncated)


def _improving(d: WiringDiagram, count: int) -> list[tuple[TriangleSite, int]]:
    out = []
    for site in triangles(d):
        c = count_cutpaths(build_complex(flip(d, site)))
        if c > count:
            out.append((site, c))
    return out
