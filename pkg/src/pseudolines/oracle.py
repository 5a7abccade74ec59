"""Exhaustive enumeration of marked arrangements for small wire counts.

Words are treated as elements of the trace monoid where two gaps commute
iff they differ by at least 2.  Each marked arrangement corresponds to one
commutation class of valid words, and each class has a unique
lexicographically minimal representative: a word is that representative
iff it contains no letter that could commute leftward past a larger one,
i.e. no positions p < q with word[q] < word[p] and word[q] commuting with
everything in word[p..q-1].  The enumerator does a DFS over word prefixes
and prunes any prefix whose last letter violates that condition, which
visits exactly the canonical representatives.

A deliberately slow, independent normalizer (extract the smallest
available letter repeatedly) validates the enumerator on tiny cases.
"""

from __future__ import annotations

from typing import Iterator

from .cells import build_complex
from .cutpaths import count_cutpaths
from .wiring import WiringDiagram

__all__ = [
    "ENUMERATION_CUTOFF",
    "MAX_COUNT_CUTOFF",
    "enumerate_arrangements",
    "max_cutpaths_exact",
    "lex_normal_form",
    "all_reduced_words",
]

ENUMERATION_CUTOFF = 8
MAX_COUNT_CUTOFF = 7


def _canonical_with(word: list[int], letter: int) -> bool:
    """Whether word + [letter] is still a prefix of a canonical word."""
    for j in range(len(word) - 1, -1, -1):
        prior = word[j]
        if abs(prior - letter) < 2:
            return True  # blocked: letter cannot move left of position j
        if prior > letter:
            return False  # letter would commute left past a larger one
    return True


def enumerate_arrangements(n: int) -> Iterator[WiringDiagram]:
    """Yield one canonical diagram per marked arrangement of n pseudolines.

    Complete and duplicate-free; outputs are valid by construction and
    arrive in lexicographic word order.  Refuses n beyond the practical
    cutoff.
    """
    if n > ENUMERATION_CUTOFF:
        raise ValueError(f"enumeration cutoff is n <= {ENUMERATION_CUTOFF}, got {n}")
    if n < 1:
        raise ValueError(f"need at least one wire, got {n}")
    target = n * (n - 1) // 2
    word: list[int] = []
    perm = list(range(n + 1))
    crossed = 0  # bitmask over pseudoline pairs
    pair_bit = {}
    bit = 1
    for a in range(1, n + 1):
        for b in range(a + 1, n + 1):
            pair_bit[(a, b)] = bit
            bit <<= 1

    def walk() -> Iterator[WiringDiagram]:
        nonlocal crossed
        if len(word) == target:
            yield WiringDiagram(n, tuple(word))
            return
        for g in range(1, n):
            a, b = perm[g], perm[g + 1]
            key = (a, b) if a < b else (b, a)
            mask = pair_bit[key]
            if crossed & mask or not _canonical_with(word, g):
                continue
            crossed |= mask
            perm[g], perm[g + 1] = b, a
            word.append(g)
            yield from walk()
            word.pop()
            perm[g], perm[g + 1] = a, b
            crossed ^= mask

    yield from walk()


def all_reduced_words(n: int) -> Iterator[WiringDiagram]:
    """Every valid word (all class representatives); slow-oracle use only."""
    target = n * (n - 1) // 2
    word: list[int] = []
    perm = list(range(n + 1))
    crossed: set[tuple[int, int]] = set()

    def walk() -> Iterator[WiringDiagram]:
        if len(word) == target:
            yield WiringDiagram(n, tuple(word))
            return
        for g in range(1, n):
            a, b = perm[g], perm[g + 1]
            key = (a, b) if a < b else (b, a)
            if key in crossed:
                continue
            crossed.add(key)
            perm[g], perm[g + 1] = b, a
            word.append(g)
            yield from walk()
            word.pop()
            perm[g], perm[g + 1] = a, b
            crossed.remove(key)

    yield from walk()


def lex_normal_form(word: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically minimal word of the commutation class.

    Greedy extraction: repeatedly output the smallest letter whose earlier
    non-commuting letters have all been output already.  Quadratic and
    independent of the enumerator's pruning rule.
    """
    remaining = list(word)
    out: list[int] = []
    while remaining:
        best_idx = None
        for idx, letter in enumerate(remaining):
            if all(abs(prior - letter) >= 2 for prior in remaining[:idx]):
                if best_idx is None or letter < remaining[best_idx]:
                    best_idx = idx
        out.append(remaining.pop(best_idx))
    return tuple(out)


def max_cutpaths_exact(n: int) -> tuple[int, WiringDiagram]:
    """Maximum cutpath count over all arrangements of n pseudolines.

    Exhaustive; returns the first maximizing diagram in enumeration order.
    """
    if n > MAX_COUNT_CUTOFF:
        raise ValueError(f"exact maximum cutoff is n <= {MAX_COUNT_CUTOFF}, got {n}")
    best = None
    best_diagram = None
    for d in enumerate_arrangements(n):
        c = count_cutpaths(build_complex(d))
        if best is None or c > best:
            best, best_diagram = c, d
    assert best is not None and best_diagram is not None
    return best, best_diagram
