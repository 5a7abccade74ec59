"""Simple pseudoline arrangements: cutpath counting and certified bounds.

The package has two halves.  The combinatorial half represents marked
simple arrangements as wiring diagrams, builds their face complexes and
dual DAGs, counts and enumerates cutpaths exactly, and constructs the
stacked families whose counts certify the lower bound on the maximum
cutpath count.  The certification half proves the matching upper bound:
an exact-rational branch-and-bound over linear relaxations showing that
the per-line growth exponent stays below the recorded threshold.
"""

from .wiring import (
    WiringDiagram,
    ValidationReport,
    InvalidDiagramError,
    validate,
    rotate180,
    commutation_move,
    parse,
    serialize,
)
from .cells import (
    CellComplex,
    ZoneReport,
    build_complex,
    face_size,
    zone_complexity,
    zone_report,
    topological_order,
    export_dot,
)
from .cutpaths import (
    Cutpath,
    CutpathStats,
    ExitKind,
    count_cutpaths,
    enumerate_cutpaths,
    classify_exits,
    cutpath_stats,
    verify_cutpath_lemmas,
)
from .generators import (
    StackSide,
    odd_even_arrangement,
    stack,
    odd_even_tower,
    bubblesort_arrangement,
    stacked_lower_bound,
)
from .flips import TriangleSite, triangles, flip, greedy_maximize
from .oracle import enumerate_arrangements, max_cutpaths_exact
from .profiles import (
    encoding_bound,
    profile_in_domain,
    max_profile_bound,
    evaluate_objective,
    evaluate_objective_bounds,
)
from .simplex import LinearProgram, LpSolution, solve_lp
from .certifier import (
    OptBox,
    ROOT_BOX,
    Certificate,
    build_box_lp,
    solve_box,
    bound_recursive,
    certify,
    verify_certificate,
    exponent_report,
)

__version__ = "0.1.0"
