"""Certified solving of zero-dimensional integer polynomial systems by
projection along separating linear forms."""

from .dyadic import (
    ComplexBox,
    Dyadic,
    DyadicInterval,
    abs_interval,
    bit_magnitude,
    interval_add,
    interval_mul,
    interval_neg,
)
from .polynomials import (
    Magnitude,
    MultiPoly,
    PolynomialSystem,
    UniPoly,
    format_polynomial,
    multiply,
    parse_polynomial,
    parse_system_text,
    shear,
    homogenize,
    restrict_to_infinity,
    squarefree_part,
    eval_interval,
)
from .isolation import RootSet, cauchy_bound, isolate, mahler_bound, refine
from .gridsep import (
    DiffTable,
    SeparatingInterval,
    build_diff_tables,
    find_separating_block,
    lift,
    preimage_count,
    round_fraction,
    sort_diffs,
)
from .elimination import (
    EliminationResult,
    LinearForm,
    MacaulayMatrix,
    Strongness,
    build_macaulay,
    certify_strong,
    check_no_infinity,
    choose_shear,
    hidden_var_resultant,
)
from .slf import SlfFamily, SlfTree, build_slf_family, build_slf_tree, select_strong_slf
from .solver import (
    InfinityTransform,
    SolutionBox,
    SolveResult,
    classify_and_invert,
    reconstruct,
    remove_infinity,
    solve,
)

__version__ = "0.1.0"
