"""Symbolic engine for the Floer chain complex of a negative line bundle.

Exact-rational bookkeeping of the complex's generators, degrees, actions and
filtration levels; Z/2 Novikov chain arithmetic above action floors; the fiber
differential with its explicit primitive; structural validation of external
higher-differential tables; and the level-descending construction of
primitives for closed chains, verified exactly on every run.
"""

from .bundle import (
    BundleParams,
    CaseTag,
    CritPoint,
    SemiPositivity,
    TheoremCase,
    ValidationReport,
    is_semi_positive,
    minimal_chern_number,
    theorem_case,
    validate,
)
from .chains import (
    AddResult,
    Chain,
    WindowCounts,
    add,
    apply_scalar,
    build_chain,
    canonical_terms,
    chains_equal,
    novikov_window_counts,
    scalar_shift,
    serialize_chain,
    truncate,
    zero_chain,
)
from .differentials import (
    FilteredDifferential,
    HigherDifferentialEntry,
    TableValidationError,
    apply_d0,
    apply_table,
    apply_total,
    check_d_squared_window,
    d0_primitive,
    load_table,
    split_by_level,
    validate_entry,
)
from .generators import (
    Generator,
    InfiniteSliceError,
    ProjectedGenerator,
    action,
    canonical_sort,
    cz_fiber_disk,
    cz_flat_capping,
    enumerate_generators,
    eta,
    grading,
    level,
    project_to_base,
    sphere_class_floor,
)
from .randomized import random_admissible_table, random_boundary, random_chain
from .scenario import Scenario, ScenarioError, load_scenario, parse_scenario
from .vanishing import (
    ClassReport,
    InductionError,
    LevelBound,
    NotClosedError,
    PrimitiveResult,
    find_primitive,
    level_ceiling,
    level_floor,
    verify_primitive,
)

__all__ = [name for name in dir() if not name.startswith("_")]
