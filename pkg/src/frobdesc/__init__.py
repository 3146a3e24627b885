"""frobdesc: exact arithmetic for square-root field towers over F_q(t).

Computes singularity degrees of non-smooth points on regular curves through
iterated square-pullbacks, verifies the sharp rationality bound, constructs
towers attaining it, and checks the geometry of the quartic pencil whose
generic fibre attains the bound at singularity degree 3.
"""

from .combinatorics import (
    AdmissiblePartition,
    BoundReport,
    PPowerRun,
    consecutive_run_of,
    geometric_decomposition,
    separability_bound,
    tau_bruteforce,
    tau_closed,
    v_p,
)
from .constructions import (
    FamilyAParams,
    FamilyBParams,
    build_family_A,
    build_family_B,
    decompose_target,
    sharpness_sweep,
)
from .curve import (
    RatDifferential,
    RationalPrime,
    differential_order,
    differentiate,
    residue,
    valuation,
)
from .fields import (
    BivarPoly,
    BivarRational,
    Fq,
    FqElement,
    PerfectedScalar,
    Poly1,
    Rat1,
    is_pth_power,
    perfected_degree_over_K,
    perfected_root,
)
from .tower import (
    Elaboration,
    ShadowElement,
    TowerLevel,
    TowerSpec,
    TowerTrace,
    analyze,
    delta_constraint_fallback,
    delta_recursion_step,
    genus_drop_check,
    tower_valuation,
    verify_step,
)

__version__ = "0.1.0"
