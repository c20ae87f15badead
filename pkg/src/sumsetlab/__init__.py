"""Exact analysis of sumsets of finite unions of closed intervals.

Everything is computed in rational arithmetic.  The package provides
canonical interval sets on the line and on circles, Minkowski sums,
level decompositions of periodized sets, sharp sumset lower bounds,
excess profiles for near-extremal pairs, explicit extremal
constructions, and a verification pipeline that certifies or refutes
the expected rigid structure of pairs whose sumset is barely larger
than the bound requires.
"""

from .enclosure import Bracket, Verdict, log_bracket
from .harness import (
    CorpusResult,
    Instance,
    InstanceSpec,
    SweepResult,
    generate_instance,
    region_epsilon_cap,
    run_corpus,
    tightness_sweep,
)
from .intervals import (
    Interval,
    IntervalSet,
    diameter,
    difference,
    feasible_translates,
    measure,
    minkowski_sum,
    normalize,
)
from .ruzsa import (
    RHO_0,
    DeepLevelReport,
    DichotomyReport,
    ExcessProfile,
    RatioSplit,
    RefinedBoundReport,
    RuzsaBoundReport,
    deep_level_check,
    dichotomy_bound,
    excess_profile,
    harmonic_number,
    refined_bound_check,
    ruzsa_bound,
    split_ratio,
)
from .structure import (
    ACoverReport,
    AffineMap,
    BCoverReport,
    EqualityStructures,
    HypothesisReport,
    StructureParams,
    StructureReport,
    build_equality_structures,
    build_extremal_family,
    build_floors,
    conclusion_check_a,
    conclusion_check_b,
    extremal_base,
    hypothesis_check,
    normalize_pair,
    verify_main_theorem,
)
from .torus import (
    LevelDecomposition,
    TorusSet,
    arc_hull,
    dilate,
    find_small_dilation,
    level_sets,
    project,
    torus_sum,
)

__version__ = "0.1.0"

__all__ = [
    "ACoverReport",
    "AffineMap",
    "BCoverReport",
    "Bracket",
    "CorpusResult",
    "DeepLevelReport",
    "DichotomyReport",
    "EqualityStructures",
    "ExcessProfile",
    "HypothesisReport",
    "Instance",
    "InstanceSpec",
    "Interval",
    "IntervalSet",
    "LevelDecomposition",
    "RHO_0",
    "RatioSplit",
    "RefinedBoundReport",
    "RuzsaBoundReport",
    "StructureParams",
    "StructureReport",
    "SweepResult",
    "TorusSet",
    "Verdict",
    "arc_hull",
    "build_equality_structures",
    "build_extremal_family",
    "build_floors",
    "conclusion_check_a",
    "conclusion_check_b",
    "deep_level_check",
    "diameter",
    "dichotomy_bound",
    "difference",
    "dilate",
    "excess_profile",
    "extremal_base",
    "feasible_translates",
    "find_small_dilation",
    "generate_instance",
    "harmonic_number",
    "hypothesis_check",
    "level_sets",
    "log_bracket",
    "measure",
    "minkowski_sum",
    "normalize",
    "normalize_pair",
    "project",
    "refined_bound_check",
    "region_epsilon_cap",
    "run_corpus",
    "ruzsa_bound",
    "split_ratio",
    "tightness_sweep",
    "torus_sum",
    "verify_main_theorem",
]
