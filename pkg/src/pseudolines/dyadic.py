"""Directed-rounded dyadic bounds for lg and the binary entropy function.

All certification constants are dyadic rationals bracketing the true
transcendental values from the requested side.  lg bounds come from the
classical bit-extraction loop: normalize x = 2^e * t with t in [1, 2),
then square t repeatedly in W-bit fixed point, emitting one result bit per
squaring.  Rounding every fixed-point operation toward the wanted side
keeps the tracked value on that side of the true trajectory, so the
emitted bits are a certified lower bound; the upper bound adds the
residual lg of the final iterate, which the loop keeps below 4.

Error: with k emitted bits the bounds are within 3 * 2^-k of the truth,
so ``bits`` of requested precision run the loop at k = bits + 4.  Powers
of two are returned exactly in both directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "lg_lower",
    "lg_upper",
    "entropy_lower",
    "entropy_upper",
    "TangentLine",
    "tangent_line",
    "tangent_grid",
    "DEFAULT_BITS",
]

DEFAULT_BITS = 48
_GUARD_BITS = 64


def _as_ratio(x) -> tuple[int, int]:
    f = Fraction(x)
    if f <= 0:
        raise ValueError(f"lg needs a positive argument, got {x}")
    return f.numerator, f.denominator


def _exact_power_of_two(p: int, q: int) -> int | None:
    # p/q == 2^e exactly?
    e = p.bit_length() - q.bit_length()
    if e >= 0:
        return e if p == q << e else None
    return e if p << (-e) == q else None


def _lg_bits(p: int, q: int, k: int, up: bool) -> tuple[int, int]:
    """(e, res) with the k-bit mantissa res of lg(p/q) - e, rounded down.

    The returned res always satisfies (e + res/2^k) <= lg(p/q) when
    rounding down and lg(p/q) <= e + (res+3)/2^k when rounding up.
    """
    w = k + _GUARD_BITS
    e = p.bit_length() - q.bit_length()
    # ensure 2^e <= p/q < 2^(e+1)
    if (p << (-e) if e < 0 else p) < (q << e if e >= 0 else q):
        e -= 1
    if w >= e:
        a, b = p << (w - e), q
    else:
        a, b = p, q << (e - w)
    x = -((-a) // b) if up else a // b
    one = 1 << w
    two = one << 1
    res = 0
    for _ in range(k):
        x = x * x
        x = -((-x) >> w) if up else x >> w
        if x >= two:
            res = (res << 1) | 1
            x = -((-x) >> 1) if up else x >> 1
        else:
            res <<= 1
    return e, res


def lg_lower(x, bits: int = DEFAULT_BITS) -> Fraction:
    """Dyadic L with L <= lg(x) and lg(x) - L <= 2^-bits."""
    p, q = _as_ratio(x)
    e = _exact_power_of_two(p, q)
    if e is not None:
        return Fraction(e)
    k = bits + 4
    e, res = _lg_bits(p, q, k, up=False)
    return Fraction((e << k) + res, 1 << k)


def lg_upper(x, bits: int = DEFAULT_BITS) -> Fraction:
    """Dyadic U with lg(x) <= U and U - lg(x) <= 2^-bits."""
    p, q = _as_ratio(x)
    e = _exact_power_of_two(p, q)
    if e is not None:
        return Fraction(e)
    k = bits + 4
    e, res = _lg_bits(p, q, k, up=True)
    return Fraction((e << k) + res + 3, 1 << k)


def _entropy(x, bits: int, up: bool) -> Fraction:
    f = Fraction(x)
    if not 0 <= f <= 1:
        raise ValueError(f"entropy needs an argument in [0,1], got {x}")
    if f == 0 or f == 1:
        return Fraction(0)
    p, q = f.numerator, f.denominator
    lg = lg_upper if up else lg_lower
    # h(x) = x lg(q/p) + (1-x) lg(q/(q-p)); both terms nonnegative
    return f * lg(Fraction(q, p), bits) + (1 - f) * lg(Fraction(q, q - p), bits)


def entropy_lower(x, bits: int = DEFAULT_BITS) -> Fraction:
    """Dyadic lower bound on the binary entropy, within 2^-bits."""
    return _entropy(x, bits, up=False)


def entropy_upper(x, bits: int = DEFAULT_BITS) -> Fraction:
    """Dyadic upper bound on the binary entropy, within 2^-bits."""
    return _entropy(x, bits, up=True)


@dataclass(frozen=True)
class TangentLine:
    """Outward-rounded tangent of the entropy function at contact point c.

    slope >= h'(c) and intercept >= h(c) - c h'(c), so by concavity
    h(x) <= slope * x + intercept for every x in [0, 1].
    """

    c: Fraction
    slope: Fraction
    intercept: Fraction


def tangent_line(c, bits: int = DEFAULT_BITS) -> TangentLine:
    """Tangent of the entropy function at 0 < c < 1, rounded outward.

    Closed forms are used for both coefficients: the slope is
    lg((1-c)/c) and the intercept -lg(1-c), each replaced by a dyadic
    upper bound.
    """
    f = Fraction(c)
    if not 0 < f < 1:
        raise ValueError(f"tangent contact point must be in (0,1), got {c}")
    p, q = f.numerator, f.denominator
    slope = lg_upper(Fraction(q - p, p), bits)
    intercept = lg_upper(Fraction(q, q - p), bits)
    return TangentLine(c=f, slope=slope, intercept=intercept)


def tangent_grid(step=Fraction(1, 100), bits: int = DEFAULT_BITS) -> list[TangentLine]:
    """Tangents at c = step, 2*step, ... below 1."""
    s = Fraction(step)
    if not 0 < s < 1:
        raise ValueError(f"tangent step must be in (0,1), got {step}")
    out = []
    j = 1
    while j * s < 1:
        out.append(tangent_line(j * s, bits))
        j += 1
    return out
