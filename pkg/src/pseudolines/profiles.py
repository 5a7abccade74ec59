"""Exit-profile bounds: exact per-group bounds and their maxima.

A cutpath's exit profile is the sextuple (m, k, u, m_rot, k_rot, u_rot).
The number of cutpaths sharing a profile is bounded by the encoding bound
C(n-u, k) * (m/(n-u))^k * 2^(n-k-u) read in either direction, and the
total count by n^6 times the maximum over the feasible integer domain of
the smaller of the two directional bounds.

The same quantity, rescaled by 1/n and in the limit, becomes a continuous
objective: the smaller of two expressions of the shape
(1-ups) h(kappa/(1-ups)) + kappa lg(mu/(1-ups)) + 1 - kappa - ups.  This
module evaluates that objective with certified dyadic bounds; the branch
and bound certificate machinery lives in ``certifier``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .dyadic import DEFAULT_BITS, entropy_lower, entropy_upper, lg_lower, lg_upper

__all__ = [
    "encoding_bound",
    "profile_in_domain",
    "max_profile_bound",
    "evaluate_objective",
    "evaluate_objective_bounds",
    "MAX_PROFILE_CUTOFF",
]

MAX_PROFILE_CUTOFF = 24


def encoding_bound(n: int, m: int, k: int, u: int) -> Fraction:
    """C(n-u, k) * (m/(n-u))^k * 2^(n-k-u), with power term 1 when k = 0.

    Requires k <= n-u and k+u <= n (true for any actual cutpath profile).
    """
    if k < 0 or u < 0 or m < 0 or k + u > n or k > n - u:
        raise ValueError(f"profile out of range: n={n} m={m} k={k} u={u}")
    ratio = Fraction(m, n - u) ** k if k else Fraction(1)
    return comb(n - u, k) * ratio * 2 ** (n - k - u)


def profile_in_domain(n: int, profile: tuple[int, int, int, int, int, int]) -> bool:
    """Membership in the feasible integer sextuple domain."""
    m, k, u, m2, k2, u2 = profile
    return (
        min(m, k, u, m2, k2, u2) >= 0
        and k + u <= n
        and k <= m <= n
        and m2 <= n
        and k2 + u2 <= n
        and k2 <= m2
        and k <= u2
        and k2 <= u
        and 2 * (m + m2 - u - u2) <= 3 * n
    )


def _triples(n: int) -> list[tuple[int, int, int]]:
    out = []
    for u in range(n + 1):
        for k in range(n - u + 1):
            for m in range(k, n + 1):
                out.append((m, k, u))
    return out


def max_profile_bound(n: int) -> tuple[Fraction, tuple[int, int, int, int, int, int]]:
    """Exact maximum over the integer domain of the two-sided bound.

    The bound of a sextuple is the min of the two directional encoding
    bounds, so the maximum is found by scanning one-sided triples in
    decreasing bound order and asking whether some already-seen triple is
    a compatible partner; the first hit is the answer.  Partners are
    indexed by their (k, u) pair with the smallest m - u per bucket, which
    is all the coupling constraints look at.
    """
    if n > MAX_PROFILE_CUTOFF:
        raise ValueError(f"profile maximum cutoff is n <= {MAX_PROFILE_CUTOFF}, got {n}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")

    triples = _triples(n)
    bound = {t: encoding_bound(n, *t) for t in triples}
    triples.sort(key=lambda t: (bound[t], t))
    triples.reverse()

    # bucket (k, u) -> (smallest m seen, its triple)
    buckets: dict[tuple[int, int], tuple[int, tuple[int, int, int]]] = {}

    def compatible_partner(t):
        m, k, u = t
        for (k2, u2), (m2_min, t2) in buckets.items():
            if k2 <= u and u2 >= k and 2 * (m + m2_min - u - u2) <= 3 * n:
                return t2
        return None

    i = 0
    while i < len(triples):
        j = i
        while j < len(triples) and bound[triples[j]] == bound[triples[i]]:
            j += 1
        for t in triples[i:j]:
            m, k, u = t
            cur = buckets.get((k, u))
            if cur is None or m < cur[0]:
                buckets[(k, u)] = (m, t)
        best = None
        for t in triples[i:j]:
            t2 = compatible_partner(t)
            if t2 is not None and (best is None or (t, t2) < best):
                best = (t, t2)
        if best is not None:
            t, t2 = best
            profile = (*t, *t2)
            assert profile_in_domain(n, profile)
            return bound[t], profile
        i = j
    raise AssertionError("domain is never empty: (0,0,0,0,0,0) is feasible")


def _side_bounds(
    mu: Fraction, kappa: Fraction, ups: Fraction, bits: int
) -> tuple[Fraction, Fraction]:
    """Certified bounds on (1-ups) h(kappa/(1-ups)) + kappa lg(mu/(1-ups)) + 1-kappa-ups."""
    linear = 1 - kappa - ups
    if kappa == 0:
        # both transcendental terms vanish: h(0) = 0 and the lg term is
        # defined as 0 when no middle exit is ever taken
        return linear, linear
    a = 1 - ups
    x = kappa / a
    r = mu / a
    lo = a * entropy_lower(x, bits) + kappa * lg_lower(r, bits) + linear
    hi = a * entropy_upper(x, bits) + kappa * lg_upper(r, bits) + linear
    return lo, hi


def evaluate_objective_bounds(
    mu, kappa, ups, mu_rot, kappa_rot, ups_rot, bits: int = DEFAULT_BITS
) -> tuple[Fraction, Fraction]:
    """Certified (lower, upper) bounds on the min of the two side expressions.

    Raises ValueError outside the feasible domain of the relaxation.
    """
    mu, kappa, ups = Fraction(mu), Fraction(kappa), Fraction(ups)
    mu_rot, kappa_rot, ups_rot = Fraction(mu_rot), Fraction(kappa_rot), Fraction(ups_rot)
    feasible = (
        min(mu, kappa, ups, mu_rot, kappa_rot, ups_rot) >= 0
        and mu <= 1
        and mu_rot <= 1
        and kappa <= mu
        and kappa_rot <= mu_rot
        and kappa + ups <= 1
        and kappa_rot + ups_rot <= 1
        and kappa <= ups_rot
        and kappa_rot <= ups
        and mu + mu_rot - ups - ups_rot <= Fraction(3, 2)
    )
    if not feasible:
        raise ValueError("infeasible point for the continuous relaxation")
    lo1, hi1 = _side_bounds(mu, kappa, ups, bits)
    lo2, hi2 = _side_bounds(mu_rot, kappa_rot, ups_rot, bits)
    return min(lo1, lo2), min(hi1, hi2)


def evaluate_objective(
    mu, kappa, ups, mu_rot, kappa_rot, ups_rot, bits: int = DEFAULT_BITS
) -> Fraction:
    """Value of the min-of-two-sides objective within 2^-30 absolute error."""
    lo, hi = evaluate_objective_bounds(mu, kappa, ups, mu_rot, kappa_rot, ups_rot, bits)
    assert hi - lo <= Fraction(1, 2**30), "requested precision not met"
    return (lo + hi) / 2
