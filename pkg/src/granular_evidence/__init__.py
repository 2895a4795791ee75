"""Relational (granular) model of Dempster-Shafer evidence.

Exact belief/plausibility, Dempster's rule with explicit conflict, and a
decision procedure for whether two sources share a conflict-free parent
relation.
"""

from .combinability import (
    FeasibilityResult,
    InfeasibilityCertificate,
    JointAssignment,
    SufficientVerdict,
    combinable,
    gale_oracle,
    sufficient_noncombinable,
    verify_parent,
)
from .combination import CombinationResult, Credibility, combine_n, conflict_mass, dempster_combine, discount
from .core import (
    Frame,
    Granule,
    GranularDistribution,
    format_mass,
    intersect,
    is_disjoint,
    make_distribution,
    parse_mass,
    subset_of,
)
from .query import QueryResult, belief, necessity_possibility_rel, plausibility
from .relation import ConflictReport, GranularRelation, conflict_free, project_conflict, summarize

__all__ = [
    "CombinationResult",
    "ConflictReport",
    "Credibility",
    "FeasibilityResult",
    "Frame",
    "Granule",
    "GranularDistribution",
    "GranularRelation",
    "InfeasibilityCertificate",
    "JointAssignment",
    "QueryResult",
    "SufficientVerdict",
    "belief",
    "combinable",
    "combine_n",
    "conflict_free",
    "conflict_mass",
    "dempster_combine",
    "discount",
    "format_mass",
    "gale_oracle",
    "intersect",
    "is_disjoint",
    "make_distribution",
    "necessity_possibility_rel",
    "parse_mass",
    "plausibility",
    "project_conflict",
    "subset_of",
    "sufficient_noncombinable",
    "summarize",
    "verify_parent",
]
