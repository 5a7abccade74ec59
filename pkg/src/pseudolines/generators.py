"""Arrangement families built by sorting layers and stacking.

The stacking operator places one arrangement's wires above another's and
inserts the missing inter-copy crossings as one canonical block, either
before (left) or after (right) both copies' own swaps.  Inside the block
the two bundles simply pass through each other, so the crossing order
along every pseudoline is forced and any other legal interleaving differs
from the canonical one only by commutation moves, i.e. represents the
same marked arrangement.
"""

from __future__ import annotations

from enum import Enum

from .wiring import WiringDiagram, ensure_valid

__all__ = [
    "StackSide",
    "odd_even_arrangement",
    "stack",
    "odd_even_tower",
    "TOWER_BASE_WIRES",
    "bubblesort_arrangement",
    "stacked_lower_bound",
]

TOWER_BASE_WIRES = 20  # base copy size of the tower family


class StackSide(Enum):
    LEFT = "left"
    RIGHT = "right"


def odd_even_arrangement(n: int) -> WiringDiagram:
    """Odd-even transposition sorting network as a wiring diagram.

    n layers; odd layers swap at all odd gaps, even layers at all even
    gaps, top gap first inside a layer.  Consecutive layer pairs cover all
    n-1 gaps, so the word length is n(n-1)/2 and every pair crosses once.
    """
    if n < 1:
        raise ValueError(f"need at least one wire, got {n}")
    word = []
    for layer in range(1, n + 1):
        start = 1 if layer % 2 == 1 else 2
        word.extend(range(start, n, 2))
    return WiringDiagram(n, tuple(word))


def _crossing_block(n_upper: int, n_lower: int) -> list[int]:
    # lower-bundle wire r climbs through the whole upper bundle, r = 1..n_lower
    block = []
    for r in range(1, n_lower + 1):
        block.extend(range(n_upper + r - 1, r - 1, -1))
    return block


def stack(bottom: WiringDiagram, top: WiringDiagram, side: StackSide) -> WiringDiagram:
    """Stack ``top`` above ``bottom`` and insert the missing crossings.

    Top occupies wires 1..n_top in the region holding both copies'
    internal swaps.  side=LEFT emits the inter-copy block before the
    copies (top enters from below at the left edge and climbs through
    bottom); side=RIGHT emits it after (bottom climbs through top at the
    right).  Either block is a full bundle-through-bundle grid, so its
    crossing order along every pseudoline is forced and the realization
    is unique up to commutation moves.
    """
    ensure_valid(bottom)
    ensure_valid(top)
    nt, nb = top.n, bottom.n
    if side is StackSide.LEFT:
        word = _crossing_block(nb, nt) + list(top.swaps) + [g + nt for g in bottom.swaps]
    elif side is StackSide.RIGHT:
        word = list(top.swaps) + [g + nt for g in bottom.swaps] + _crossing_block(nt, nb)
    else:
        raise ValueError(f"unknown stack side {side!r}")
    return WiringDiagram(nt + nb, tuple(word))


def _alternating_side(level: int) -> StackSide:
    # the copy added at an even level goes in on the left
    return StackSide.LEFT if level % 2 == 0 else StackSide.RIGHT


def odd_even_tower(levels: int) -> WiringDiagram:
    """``levels`` stacked copies of the 20-wire odd-even arrangement.

    Level 1 is the base copy; each further copy is stacked on top with the
    missing crossings inserted left at even levels, right at odd ones.
    Word-identical to iterating :func:`stack`, but assembled through a
    piece table so the 108-level instance does not pay quadratic copying.
    """
    if levels < 1:
        raise ValueError(f"need at least one level, got {levels}")
    t = TOWER_BASE_WIRES
    base = odd_even_arrangement(t).swaps
    pieces: list[tuple[int, tuple[int, ...]]] = [(0, base)]
    wires = t
    for level in range(2, levels + 1):
        shifted = [(off + t, chunk) for off, chunk in pieces]
        if _alternating_side(level) is StackSide.LEFT:
            pieces = [(0, tuple(_crossing_block(wires, t))), (0, base)] + shifted
        else:
            pieces = [(0, base)] + shifted + [(0, tuple(_crossing_block(t, wires)))]
        wires += t
    word: list[int] = []
    for off, chunk in pieces:
        word.extend(g + off for g in chunk)
    return ensure_valid(WiringDiagram(wires, tuple(word)))


def bubblesort_arrangement(n: int) -> WiringDiagram:
    """Iterated stacking of single pseudolines with alternating sides."""
    if n < 1:
        raise ValueError(f"need at least one wire, got {n}")
    single = WiringDiagram(1, ())
    result = single
    for level in range(2, n + 1):
        result = stack(result, single, _alternating_side(level))
    return result


def stacked_lower_bound(n: int, base: WiringDiagram) -> WiringDiagram:
    """n-wire arrangement made of floor(n/n0) base copies plus a remainder.

    Copies are stacked with alternating sides; a positive remainder is
    covered by an odd-even arrangement stacked on top last.  The cutpath
    count is at least count(base) ** floor(n/n0).
    """
    if n < 1:
        raise ValueError(f"need at least one wire, got {n}")
    ensure_valid(base)
    n0 = base.n
    copies, rem = divmod(n, n0)
    result = None
    for level in range(1, copies + 1):
        if result is None:
            result = base
        else:
            result = stack(result, base, _alternating_side(level))
    if rem:
        tail = odd_even_arrangement(rem)
        if result is None:
            result = tail
        else:
            result = stack(result, tail, _alternating_side(copies + 1))
    assert result is not None and result.n == n
    return result
