"""Branch-and-bound certification of the cutpath growth exponent.

The continuous relaxation of the profile bound is parametrized by the two
density ratios mu/(1-ups) and mu_rot/(1-ups_rot).  On a box of those
ratios the relaxation becomes a linear program: the lg of a ratio is
frozen at the box's upper endpoint (outward-rounded), the entropy terms
are replaced by their tangent hull, and the ratio definition relaxes to
two linear inequalities per side.  Every transcendental constant enters
as a dyadic upper bound multiplying a variable that the constraints keep
nonnegative, so each rounding only enlarges the feasible region: box
optima are true upper bounds.

The recursion solves a box, accepts it when the optimum is below the
threshold, and otherwise splits both ratio intervals at their midpoints
into four children.  A finished run is a certificate: the full node tree
with exact rational optima, re-checkable from scratch by an independent
pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json

from .dyadic import DEFAULT_BITS, TangentLine, lg_upper, tangent_grid
from .simplex import LinearProgram, LpSolution, solve_lp

__all__ = [
    "OptBox",
    "ROOT_BOX",
    "DEFAULT_THRESHOLD",
    "VAR_NAMES",
    "build_box_lp",
    "box_start_basis",
    "solve_box",
    "bound_recursive",
    "certify",
    "Certificate",
    "CertNode",
    "verify_certificate",
    "certificate_problems",
    "exponent_report",
    "ExponentReport",
]

DEFAULT_THRESHOLD = Fraction("1.29915")
DEFAULT_DEPTH_CAP = 64

VAR_NAMES = ("X", "y", "y_rot", "mu", "mu_rot", "kappa", "kappa_rot", "ups", "ups_rot")
_X, _Y, _YR, _MU, _MUR, _KA, _KAR, _UP, _UPR = range(9)


@dataclass(frozen=True)
class OptBox:
    """Bounds on the two density ratios: l_lo <= mu/(1-ups) <= l_hi and
    lp_lo <= mu_rot/(1-ups_rot) <= lp_hi (dyadic endpoints)."""

    l_lo: Fraction
    l_hi: Fraction
    lp_lo: Fraction
    lp_hi: Fraction

    def __post_init__(self):
        for name in ("l_lo", "l_hi", "lp_lo", "lp_hi"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not (0 <= self.l_lo < self.l_hi and 0 <= self.lp_lo < self.lp_hi):
            raise ValueError(f"degenerate box {self}")

    def children(self) -> tuple["OptBox", "OptBox", "OptBox", "OptBox"]:
        """Four quadrants at the midpoints, in fixed (lo,lo) (lo,hi)
        (hi,lo) (hi,hi) order."""
        lm = (self.l_lo + self.l_hi) / 2
        rm = (self.lp_lo + self.lp_hi) / 2
        return (
            OptBox(self.l_lo, lm, self.lp_lo, rm),
            OptBox(self.l_lo, lm, rm, self.lp_hi),
            OptBox(lm, self.l_hi, self.lp_lo, rm),
            OptBox(lm, self.l_hi, rm, self.lp_hi),
        )

    def as_strings(self) -> list[str]:
        return [_frac_str(v) for v in (self.l_lo, self.l_hi, self.lp_lo, self.lp_hi)]


ROOT_BOX = OptBox(Fraction(0), Fraction(4), Fraction(0), Fraction(4))


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s)


def _zero_row() -> list[Fraction]:
    return [Fraction(0)] * 9


def _structural_rows() -> tuple[tuple, tuple]:
    """The box-free constraint block: nonnegativity, caps, couplings, zone."""
    rows = []
    rhs = []

    def add(coeffs: dict[int, Fraction], bound) -> None:
        row = _zero_row()
        for j, v in coeffs.items():
            row[j] = Fraction(v)
        rows.append(tuple(row))
        rhs.append(Fraction(bound))

    add({_MU: -1}, 0)
    add({_MUR: -1}, 0)
    add({_KA: -1}, 0)
    add({_KAR: -1}, 0)
    add({_UP: -1}, 0)
    add({_UPR: -1}, 0)
    add({_MU: 1}, 1)
    add({_MUR: 1}, 1)
    add({_KA: 1, _MU: -1}, 0)
    add({_KAR: 1, _MUR: -1}, 0)
    add({_KA: 1, _UP: 1}, 1)
    add({_KAR: 1, _UPR: 1}, 1)
    add({_KA: 1, _UPR: -1}, 0)
    add({_KAR: 1, _UP: -1}, 0)
    add({_MU: 1, _MUR: 1, _UP: -1, _UPR: -1}, Fraction(3, 2))
    return tuple(rows), tuple(rhs)


_STRUCTURAL_ROWS, _STRUCTURAL_RHS = _structural_rows()
# offsets of rows used for the canonical start vertex, within the block
_ROW_NEG_MU, _ROW_NEG_MUR, _ROW_NEG_KA, _ROW_NEG_KAR = 0, 1, 2, 3
_ROW_KA_UP = 10


def _tangent_rows(tangents: tuple[TangentLine, ...]) -> tuple[tuple, tuple]:
    rows = []
    rhs = []
    for var_y, var_k, var_u in ((_Y, _KA, _UP), (_YR, _KAR, _UPR)):
        for t in tangents:
            # y <= slope*kappa + intercept*(1-ups)
            row = _zero_row()
            row[var_y] = Fraction(1)
            row[var_k] = -t.slope
            row[var_u] = t.intercept
            rows.append(tuple(row))
            rhs.append(t.intercept)
    return tuple(rows), tuple(rhs)


_TANGENT_CACHE: dict[tuple, tuple] = {}


def _tangent_block(tangents: tuple[TangentLine, ...]) -> tuple[tuple, tuple]:
    key = tuple((t.c, t.slope, t.intercept) for t in tangents)
    if key not in _TANGENT_CACHE:
        _TANGENT_CACHE[key] = _tangent_rows(tangents)
    return _TANGENT_CACHE[key]


def build_box_lp(
    box: OptBox,
    tangents: tuple[TangentLine, ...] | None = None,
    bits: int = DEFAULT_BITS,
) -> LinearProgram:
    """The box relaxation as an explicit linear program.

    Maximize X subject to: the two objective-linking rows with the frozen
    upper lg of the box's upper ratio endpoints; one tangent row per grid
    point for each entropy hull; nonnegativity and cap constraints; the
    rotation couplings; the zone constraint; and the four box rows tying
    mu to ups through the ratio bounds.
    """
    if tangents is None:
        tangents = tuple(tangent_grid(bits=bits))
    lg_hi = lg_upper(box.l_hi, bits)
    lg_hi_rot = lg_upper(box.lp_hi, bits)

    rows: list[tuple] = []
    rhs: list[Fraction] = []
    # X <= y + kappa*lg_hi + 1 - kappa - ups, both readings
    for var_y, var_k, var_u, lg in ((_Y, _KA, _UP, lg_hi), (_YR, _KAR, _UPR, lg_hi_rot)):
        row = _zero_row()
        row[_X] = Fraction(1)
        row[var_y] = Fraction(-1)
        row[var_k] = 1 - lg
        row[var_u] = Fraction(1)
        rows.append(tuple(row))
        rhs.append(Fraction(1))

    trows, trhs = _tangent_block(tuple(tangents))
    rows.extend(trows)
    rhs.extend(trhs)
    rows.extend(_STRUCTURAL_ROWS)
    rhs.extend(_STRUCTURAL_RHS)

    def box_rows(var_m, var_u, lo, hi):
        # lo*(1-ups) <= mu  and  mu <= hi*(1-ups)
        row = _zero_row()
        row[var_m] = Fraction(-1)
        row[var_u] = -lo
        rows.append(tuple(row))
        rhs.append(-lo)
        row = _zero_row()
        row[var_m] = Fraction(1)
        row[var_u] = hi
        rows.append(tuple(row))
        rhs.append(hi)

    box_rows(_MU, _UP, box.l_lo, box.l_hi)
    box_rows(_MUR, _UPR, box.lp_lo, box.lp_hi)

    return LinearProgram(VAR_NAMES, _objective(), tuple(rows), tuple(rhs))


def _objective() -> tuple[Fraction, ...]:
    obj = _zero_row()
    obj[_X] = Fraction(1)
    return tuple(obj)


def box_start_basis(n_tangents: int) -> tuple[int, ...]:
    """Rows meeting at the always-feasible corner (kappa = mu = 0, ups = 1).

    The corner activates both objective rows, every tangent row, the
    kappa/mu nonnegativity rows and the kappa+ups cap; these nine are
    independent, so they form a start vertex for the active-set solver on
    any box.
    """
    base = 2 + 2 * n_tangents
    return (
        0,
        1,
        2,
        2 + n_tangents,
        base + _ROW_NEG_KA,
        base + _ROW_NEG_KAR,
        base + _ROW_NEG_MU,
        base + _ROW_NEG_MUR,
        base + _ROW_KA_UP,
    )


def _solve_box_full(
    box: OptBox,
    tangents: tuple[TangentLine, ...],
    bits: int,
    warm_basis: tuple[int, ...] | None = None,
) -> LpSolution:
    """Solve the box relaxation, warm-starting from a sibling basis when
    it is still a feasible vertex; falls back to the canonical corner."""
    lp = build_box_lp(box, tangents, bits)
    if warm_basis is not None:
        try:
            return solve_lp(lp, start_basis=warm_basis)
        except ValueError:
            pass  # stale vertex for this box; use the corner
    return solve_lp(lp, start_basis=box_start_basis(len(tangents)))


def solve_box(
    box: OptBox,
    tangents: tuple[TangentLine, ...] | None = None,
    bits: int = DEFAULT_BITS,
) -> Fraction | None:
    """Exact optimum of the box relaxation (None when infeasible)."""
    if tangents is None:
        tangents = tuple(tangent_grid(bits=bits))
    sol = _solve_box_full(box, tuple(tangents), bits)
    if sol.status == "infeasible":
        return None
    if sol.status != "optimal":
        raise RuntimeError(f"box relaxation came back {sol.status}; modeling bug")
    return sol.optimum


@dataclass(frozen=True)
class CertNode:
    id: int
    box: OptBox
    optimum: Fraction | None  # None = infeasible
    status: str  # leaf-pass | split | leaf-fail


@dataclass(frozen=True)
class Certificate:
    threshold: Fraction
    precision_bits: int
    tangent_cs: tuple[Fraction, ...]
    nodes: tuple[CertNode, ...]
    node_count: int
    max_depth: int
    verdict: str

    def to_json(self) -> str:
        payload = {
            "threshold": _frac_str(self.threshold),
            "precision_bits": self.precision_bits,
            "tangent_cs": [_frac_str(c) for c in self.tangent_cs],
            "nodes": [
                {
                    "id": node.id,
                    "box": node.box.as_strings(),
                    "optimum": "infeasible" if node.optimum is None else _frac_str(node.optimum),
                    "status": node.status,
                }
                for node in self.nodes
            ],
            "totals": {"nodes": self.node_count, "max_depth": self.max_depth},
            "verdict": self.verdict,
        }
        return json.dumps(payload, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        payload = json.loads(text)
        nodes = tuple(
            CertNode(
                id=entry["id"],
                box=OptBox(*(_parse_frac(s) for s in entry["box"])),
                optimum=None if entry["optimum"] == "infeasible" else _parse_frac(entry["optimum"]),
                status=entry["status"],
            )
            for entry in payload["nodes"]
        )
        return cls(
            threshold=_parse_frac(payload["threshold"]),
            precision_bits=payload["precision_bits"],
            tangent_cs=tuple(_parse_frac(s) for s in payload["tangent_cs"]),
            nodes=nodes,
            node_count=payload["totals"]["nodes"],
            max_depth=payload["totals"]["max_depth"],
            verdict=payload["verdict"],
        )


def bound_recursive(
    box: OptBox,
    threshold: Fraction = DEFAULT_THRESHOLD,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    tangent_step: Fraction = Fraction(1, 100),
    bits: int = DEFAULT_BITS,
) -> Certificate:
    """Certify max-over-box < threshold by recursive four-way splitting.

    A box whose relaxation optimum is below the threshold (or infeasible)
    is a passing leaf; otherwise both ratio intervals split at their
    midpoints and the four children recurse, preorder, in fixed child
    order.  Hitting the depth cap leaves a failing leaf and makes the
    verdict inconclusive; the verdict is "success" only when every leaf
    passes.
    """
    threshold = Fraction(threshold)
    tangents = tuple(tangent_grid(Fraction(tangent_step), bits))
    nodes: list[CertNode] = []
    max_depth = 0

    def rec(b: OptBox, depth: int, warm: tuple[int, ...] | None) -> bool:
        nonlocal max_depth
        max_depth = max(max_depth, depth)
        node_id = len(nodes)
        nodes.append(None)  # reserve preorder slot
        sol = _solve_box_full(b, tangents, bits, warm)
        if sol.status == "infeasible":
            nodes[node_id] = CertNode(node_id, b, None, "leaf-pass")
            return True
        if sol.status != "optimal":
            raise RuntimeError(f"box relaxation came back {sol.status}; modeling bug")
        opt = sol.optimum
        if opt < threshold:
            nodes[node_id] = CertNode(node_id, b, opt, "leaf-pass")
            return True
        if depth >= depth_cap:
            nodes[node_id] = CertNode(node_id, b, opt, "leaf-fail")
            return False
        nodes[node_id] = CertNode(node_id, b, opt, "split")
        ok = True
        for child in b.children():
            ok = rec(child, depth + 1, sol.basis) and ok
        return ok

    all_pass = rec(box, 0, None)
    return Certificate(
        threshold=threshold,
        precision_bits=bits,
        tangent_cs=tuple(t.c for t in tangents),
        nodes=tuple(nodes),
        node_count=len(nodes),
        max_depth=max_depth,
        verdict="success" if all_pass else "inconclusive",
    )


def certify(
    threshold: Fraction = DEFAULT_THRESHOLD,
    tangent_step: Fraction = Fraction(1, 100),
    bits: int = DEFAULT_BITS,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> Certificate:
    """Run the bounding recursion on the full root box."""
    return bound_recursive(ROOT_BOX, threshold, depth_cap, tangent_step, bits)


def certificate_problems(cert: Certificate, resolve: bool = True) -> list[str]:
    """Structural and numeric defects of a certificate; empty means valid.

    Checks: the node list is a preorder tree rooted at nodes[0] whose
    split nodes have exactly the four midpoint children present, no
    orphan nodes, recorded totals match, every leaf-pass optimum is below
    the threshold, the verdict matches the leaves, and (when ``resolve``)
    each leaf's relaxation re-solves to exactly the recorded optimum.
    """
    problems = []
    if not cert.nodes:
        return ["certificate has no nodes"]
    by_box: dict[tuple, CertNode] = {}
    for node in cert.nodes:
        key = tuple(node.box.as_strings())
        if key in by_box:
            problems.append(f"node {node.id}: duplicate box")
        by_box[key] = node
    if cert.node_count != len(cert.nodes):
        problems.append("recorded node total does not match the node list")

    tangents = tuple(tangent_line_cached(c, cert.precision_bits) for c in cert.tangent_cs)

    visited = 0
    max_depth = 0
    stack = [(cert.nodes[0], 0, None)]
    seen_ids = set()
    while stack:
        node, depth, warm = stack.pop()
        if node.id in seen_ids:
            problems.append(f"node {node.id}: visited twice")
            break
        seen_ids.add(node.id)
        visited += 1
        max_depth = max(max_depth, depth)
        basis = warm
        if resolve:
            sol = _solve_box_full(node.box, tangents, cert.precision_bits, warm)
            opt = None if sol.status == "infeasible" else sol.optimum
            basis = sol.basis
            if opt != node.optimum:
                problems.append(f"node {node.id}: recorded optimum does not re-solve")
        if node.status == "split":
            for child_box in node.box.children():
                child = by_box.get(tuple(child_box.as_strings()))
                if child is None:
                    problems.append(f"node {node.id}: missing child {child_box.as_strings()}")
                else:
                    stack.append((child, depth + 1, basis))
        elif node.status == "leaf-pass":
            if node.optimum is not None and node.optimum >= cert.threshold:
                problems.append(f"node {node.id}: leaf-pass optimum is not below threshold")
        elif node.status != "leaf-fail":
            problems.append(f"node {node.id}: unknown status {node.status!r}")

    if visited != len(cert.nodes):
        problems.append(f"{len(cert.nodes) - visited} orphan node(s) outside the tree")
    if max_depth != cert.max_depth:
        problems.append("recorded max depth does not match the tree")
    all_pass = all(n.status != "leaf-fail" for n in cert.nodes)
    want_verdict = "success" if all_pass else "inconclusive"
    if cert.verdict != want_verdict:
        problems.append(f"verdict {cert.verdict!r} inconsistent with leaves")
    return problems


_TAN_LINE_CACHE: dict[tuple, TangentLine] = {}


def tangent_line_cached(c: Fraction, bits: int) -> TangentLine:
    from .dyadic import tangent_line

    key = (c, bits)
    if key not in _TAN_LINE_CACHE:
        _TAN_LINE_CACHE[key] = tangent_line(c, bits)
    return _TAN_LINE_CACHE[key]


def verify_certificate(cert: Certificate) -> bool:
    """Full independent re-validation; True iff no problems."""
    return not certificate_problems(cert, resolve=True)


def _pow2_leq(alpha: Fraction, bound: Fraction) -> bool:
    """Exact test of 2**alpha <= bound for positive rational arguments."""
    p, q = alpha.numerator, alpha.denominator
    a, b = bound.numerator, bound.denominator
    if a <= 0:
        return False
    return 2**p * b**q <= a**q if p >= 0 else b**q <= 2 ** (-p) * a**q


@dataclass(frozen=True)
class ExponentReport:
    alpha: Fraction
    growth_base_cap: Fraction  # certified: 2**alpha <= this
    growth_base_ok: bool
    count_exponent: Fraction  # alpha / 2
    count_exponent_cap: Fraction
    count_exponent_ok: bool
    previous_best_exponent: Fraction

    def to_json(self) -> str:
        return json.dumps(
            {
                "alpha": _frac_str(self.alpha),
                "growth_base_cap": str(float(self.growth_base_cap)),
                "growth_base_ok": self.growth_base_ok,
                "count_exponent": _frac_str(self.count_exponent),
                "count_exponent_cap": str(float(self.count_exponent_cap)),
                "count_exponent_ok": self.count_exponent_ok,
                "previous_best_exponent": str(float(self.previous_best_exponent)),
            },
            indent=2,
        )


def exponent_report(cert: Certificate) -> ExponentReport:
    """Exponent arithmetic implied by a successful certificate.

    alpha is the certified threshold: the cutpath count of any n-line
    arrangement is at most n^6 * 2^(alpha n), so the per-line growth base
    is at most 2^alpha (compared against 2.461) and the arrangement-count
    exponent is alpha/2 per n^2 (compared against 0.6496, with 0.6572 the
    previous best).  Refuses non-success certificates.
    """
    if cert.verdict != "success":
        raise ValueError("exponent report requires a successful certificate")
    alpha = cert.threshold
    base_cap = Fraction("2.461")
    exp_cap = Fraction("0.6496")
    return ExponentReport(
        alpha=alpha,
        growth_base_cap=base_cap,
        growth_base_ok=_pow2_leq(alpha, base_cap),
        count_exponent=alpha / 2,
        count_exponent_cap=exp_cap,
        count_exponent_ok=alpha / 2 < exp_cap,
        previous_best_exponent=Fraction("0.6572"),
    )
