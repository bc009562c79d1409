"""ilpk: kernelization toolkit for bounded-domain ILP feasibility.

Replaces bounded-treewidth protrusions and totally-unimodular subsystems of
an instance by small equivalent blocking gadgets, solves bounded-treewidth
instances by dynamic programming over nice Gaifman decompositions, checks
TU residuals with an exact rational LP, generates the classic reduction
instances, and ships a brute-force oracle that certifies every replacement.
"""

from .backend import BACKEND_NAME
from .boundary import BoundariedIlp, BoundarySet
from .caps import Caps, DEFAULT_CAPS, caps_from_env
from .core import (Constraint, DomainInterval, FeasibilityResult, Ilp, Rel, Variable,
                   check_assignment, domain_size, normalize, pin_variable,
                   substitute_many, substitute_variable)
from .dp import (DpTable, dp_tables, enumerate_feasible_boundary, solve_dp,
                 solve_with_modulator)
from .gaifman import (GaifmanGraph, NiceGaifmanDecomposition, NiceNode, TreeDecomposition,
                      ValidationReport, build_gaifman, make_nice, td_from_json, td_from_pace,
                      td_to_json, td_to_pace, treewidth_exact, treewidth_heuristic,
                      validate_nice, validate_tree_decomposition)
from .gen import gen_hitting_set, gen_or_composition, gen_random_protrusion, gen_subset_sum
from .lp import LpSystem, lp_feasible
from .oracle import brute_boundary_set, brute_feasible
from .protrusion import (ProtrusionDecomposition, build_blocking_gadget, reduce_instance,
                         reduce_instance_detailed, replace_boundaried_tw,
                         validate_protrusion_decomposition)
from .serialize import canonicalize, parse_instance, serialize_instance
from .tu import (IntMatrix, feasible_boundary_tu, is_tu_bruteforce, is_tu_fastpath,
                 replace_boundaried_tu, tu_boundary_interval)

__version__ = "0.1.0"
