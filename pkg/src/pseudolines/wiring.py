"""Wiring-diagram representation of marked simple pseudoline arrangements.

A diagram on ``n`` wires is a word of ``n(n-1)/2`` adjacent swaps, read
left to right.  Wires are numbered 1..n top to bottom; a swap at gap ``g``
(1 <= g <= n-1) crosses the two pseudolines currently occupying wires
``g`` and ``g+1``.  Pseudoline ``i`` is the one starting on wire ``i`` at
the left edge.  A word is valid when every unordered pair of pseudolines
crosses exactly once, which forces the right-edge order to be the full
reversal of the left-edge order.

The marked north cell is the unbounded face above wire 1; the south cell
is the face below wire ``n``.  Simultaneous (vertically aligned) crossings
are not representable: swap positions carry a strict left-to-right order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "WiringDiagram",
    "ValidationReport",
    "InvalidDiagramError",
    "validate",
    "rotate180",
    "commutation_move",
    "parse",
    "serialize",
    "crossing_sequence",
]

_GAPS_PER_LINE = 40  # serialization width


class InvalidDiagramError(ValueError):
    """Raised when a wiring diagram fails validation."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(report.violations) or "invalid diagram")
        self.report = report


@dataclass(frozen=True)
class WiringDiagram:
    """An arrangement given as an ordered swap word.

    ``n`` is the wire count, ``swaps`` the gap index of each crossing in
    left-to-right order.  Construction does not validate; see
    :func:`validate`.  Instances are immutable and hashable.
    """

    n: int
    swaps: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"wire count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "swaps", tuple(self.swaps))

    @property
    def crossings(self) -> int:
        return len(self.swaps)

    def expected_crossings(self) -> int:
        return self.n * (self.n - 1) // 2


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...] = ()


def crossing_sequence(d: WiringDiagram) -> Iterator[tuple[int, int]]:
    """Yield the pseudoline pair crossed by each swap, in word order.

    Pairs are emitted as (upper, lower) occupants just before the swap.
    Raises ValueError on an out-of-range gap; does not check validity.
    """
    perm = list(range(d.n + 1))  # perm[w] = pseudoline on wire w (1-based)
    for i, g in enumerate(d.swaps):
        if not 1 <= g <= d.n - 1:
            raise ValueError(f"swap {i + 1}: gap {g} out of range [1,{d.n - 1}]")
        a, b = perm[g], perm[g + 1]
        yield a, b
        perm[g], perm[g + 1] = b, a


def validate(d: WiringDiagram) -> ValidationReport:
    """Check the wiring-diagram invariants, report-style.

    ok iff the swap count is n(n-1)/2, every gap is in range, no pair of
    pseudolines crosses twice, and the simulation ends in the full
    reversal.  The first offending swap is named in the violations.
    """
    violations = []
    want = d.expected_crossings()
    if len(d.swaps) != want:
        violations.append(f"expected {want} swaps, found {len(d.swaps)}")
    crossed = set()
    perm = list(range(d.n + 1))
    for i, g in enumerate(d.swaps):
        if not 1 <= g <= d.n - 1:
            violations.append(f"gap {g} out of range [1,{d.n - 1}] at swap {i + 1}")
            break
        a, b = perm[g], perm[g + 1]
        pair = (a, b) if a < b else (b, a)
        if pair in crossed:
            violations.append(f"pair {pair} crosses twice at swap {i + 1}")
            break
        crossed.add(pair)
        perm[g], perm[g + 1] = b, a
    else:
        if not violations and perm[1:] != list(range(d.n, 0, -1)):
            # unreachable when the count and no-recross checks pass
            violations.append("simulation does not end in the reversal")
    return ValidationReport(ok=not violations, violations=tuple(violations))


def ensure_valid(d: WiringDiagram) -> WiringDiagram:
    """Return ``d`` unchanged, raising InvalidDiagramError if it fails validation."""
    report = validate(d)
    if not report.ok:
        raise InvalidDiagramError(report)
    return d


def rotate180(d: WiringDiagram) -> WiringDiagram:
    """The diagram of the same arrangement rotated by a half turn.

    Swap order reverses and each gap g becomes n-g; north and south cells
    exchange roles.  Involution; pseudoline ids are preserved (line i ends
    on wire n+1-i, which the rotation sends back to wire i).
    """
    n = d.n
    return WiringDiagram(n, tuple(n - g for g in reversed(d.swaps)))


def commutation_move(d: WiringDiagram, i: int) -> WiringDiagram:
    """Exchange swaps i and i+1 (0-based); the arrangement is unchanged.

    Legal only when the two gaps differ by at least 2 (disjoint wire
    pairs).  Raises ValueError for equal or adjacent gaps.
    """
    if not 0 <= i < len(d.swaps) - 1:
        raise ValueError(f"position {i} out of range [0,{len(d.swaps) - 2}]")
    a, b = d.swaps[i], d.swaps[i + 1]
    if abs(a - b) < 2:
        kind = "equal" if a == b else "adjacent"
        raise ValueError(f"gaps {a} and {b} at positions {i},{i + 1} are {kind}")
    swaps = list(d.swaps)
    swaps[i], swaps[i + 1] = b, a
    return WiringDiagram(d.n, tuple(swaps))


def parse(text: str) -> WiringDiagram:
    """Parse the WD text format and validate eagerly.

    Format: optional '#' comment lines; first non-comment line "WD1 <n>";
    the remaining whitespace-separated integers are the swap gaps.  Raises
    ValueError on malformed input and InvalidDiagramError on a well-formed
    but invalid diagram.
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty input: missing 'WD1 <n>' header")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "WD1":
        raise ValueError(f"malformed header {lines[0].strip()!r}: expected 'WD1 <n>'")
    try:
        n = int(header[1])
    except ValueError:
        raise ValueError(f"malformed header: wire count {header[1]!r} is not an integer") from None
    if n < 1:
        raise ValueError(f"wire count must be positive, got {n}")
    gaps = []
    for tok in " ".join(lines[1:]).split():
        try:
            g = int(tok)
        except ValueError:
            raise ValueError(f"swap token {tok!r} is not an integer") from None
        if not 1 <= g <= n - 1:
            raise ValueError(f"gap {g} out of range [1,{n - 1}]")
        gaps.append(g)
    want = n * (n - 1) // 2
    if len(gaps) != want:
        raise ValueError(f"expected {want} swaps, found {len(gaps)}")
    return ensure_valid(WiringDiagram(n, tuple(gaps)))


def serialize(d: WiringDiagram) -> str:
    """Canonical WD text for a diagram (at most 40 gaps per line)."""
    out = [f"WD1 {d.n}"]
    swaps = d.swaps
    for i in range(0, len(swaps), _GAPS_PER_LINE):
        out.append(" ".join(str(g) for g in swaps[i : i + _GAPS_PER_LINE]))
    return "\n".join(out) + "\n"
