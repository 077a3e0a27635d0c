"""Permutation-bipartition pairs, their Walkup reductions and embedding distributions."""

from .diagram import (build_diagram, diagram_genus_polynomial, diagram_region_distribution,
                      export_dot)
from .embed import (EmbeddingStats, GenusDistribution, RegionDistribution, distributions,
                    embedding_stats, enumerate_bi_rotations, euler_genus_polynomial,
                    region_distribution)
from .errors import *  # noqa: F401,F403
from .family import (PolyMatrix, RecurrenceSpec, builtin_c2, char_poly, expected_genus,
                     transfer_sequence)
from .pair import (PBPair, ThetaMap, canonical_text, format_pair, pair_from_cycles, parse_pair,
                   reduce_constraint, reduce_singleton, validate_pair)
from .perm import Permutation
from .poly import Poly
from .sgraph import Edge, SignedGraph, build_c2_chain, graph_to_pair, parse_signed_graph, switch

__version__ = "0.1.0"
