"""Relative Z- and Q-gradings on multi-pointed Heegaard diagrams."""

from .constructions import (
    connected_sum,
    disjoint_union,
    lens_diagram,
    merge_basepoints,
    s1s2_diagram,
    s3_diagram,
)
from .covering import (
    CheckResult,
    CoverResult,
    CoveringSpec,
    build_cover,
    find_trivializing_cocycle,
    validate_cocycle,
    verify_scaling,
)
from .diagram import (
    Diagram,
    dd_alpha,
    dd_beta,
    enumerate_generators,
    euler_measure,
    generators,
    point_measure,
    validate,
)
from .errors import *  # noqa: F401,F403
from .grading import grading_table, relative_q_grading, relative_z_grading
from .lens_oracle import compare_with_engine, os_absolute_grading, os_relative_step
from .spinc import solve_domain, spinc_partition, torsion_order

__version__ = "0.1.0"
