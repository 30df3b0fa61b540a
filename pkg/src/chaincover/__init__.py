"""Discrete chain homotopy, covering balls and covering-relation extraction
for finite uniform structures."""

from .analysis import AnalysisConfig, ScaleReport, analyze_ladder, critical_scales, render_report, write_report
from .covering import (
    CoveringBall,
    build_covering_ball,
    e_short_join_check,
    estar_pairs,
    extract,
    extract_covering_relation,
    phi_image_check,
    stabilized_component,
)
from .groups import (
    AbelianInvariants,
    GroupSolver,
    Presentation,
    Verdict,
    abelianize,
    equal_in_group,
    is_trivial_group,
    simplify,
    smith_normal_form,
)
from .homotopy import RipsEncoding, chain_to_word, elementary_move, is_echain, presentation, word_to_chain
from .oracle import enumerate_classes, oracle_homotopic
from .rips import rips_graph, spanning_tree
from .space import (
    Entourage,
    FiniteSpace,
    SpaceError,
    ball,
    build_space,
    chain_components,
    entourage_from_diff_intervals,
    entourage_from_pairs,
    entourage_from_scale,
    is_chain_connected,
    is_uniformly_open,
    saturate,
)

__version__ = "0.1.0"
