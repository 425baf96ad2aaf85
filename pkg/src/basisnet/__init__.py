"""Non-blockingness of bounded nets via basis reachability graphs.

The package decides whether every reachable marking of a bounded net can
still reach a final-marking set given by linear constraints.  Instead of
the full reachability graph it builds a much smaller basis graph over a
partition of the transitions, then answers the question with one
saturation pass per basis marking and one reverse search.
"""

from .basis import (BasisPartition, PartitionFlags, derive_ci_partition,
                    i_max_marking, implicit_reach, implicit_topo_orders,
                    make_partition, max_ifv, min_explanations,
                    min_explanations_all)
from .brg import BrgEvent, CiBrg, brg_from_dict, build_brg, export_dot
from .caps import Caps
from .errors import (BasisNetError, CapExceeded, DimensionMismatch,
                     FiringError, NetDefinitionError, PartitionError,
                     PnetSyntaxError)
from .net import (FinalSpec, Gmec, Marking, PetriNet, Plant,
                  conflict_transitions, enabled_transitions, fire,
                  fire_vector, increasing_transitions, induced_subnet,
                  is_acyclic, is_dead, is_enabled, is_final)
from .oracle import (RandomPlantParams, ReachGraph, RgVerdict,
                     brute_implicit_reach, brute_min_explanations,
                     brute_terminal_vectors, build_rg, find_firing_sequence,
                     random_plant, rg_nonblocking)
from .pnet import ParsedNet, parse_net, parse_net_file, serialize_net
from .verify import (Verdict, check_nonblocking, coreachable_states,
                     dead_basis_markings, final_basis_set)

__version__ = "0.1.0"

__all__ = [
    "BasisNetError", "BasisPartition", "BrgEvent", "Caps", "CapExceeded",
    "CiBrg", "DimensionMismatch", "FinalSpec", "FiringError", "Gmec",
    "Marking", "NetDefinitionError", "ParsedNet", "PartitionError",
    "PartitionFlags", "PetriNet", "Plant", "PnetSyntaxError",
    "RandomPlantParams", "ReachGraph", "RgVerdict", "Verdict",
    "brg_from_dict", "brute_implicit_reach", "brute_min_explanations",
    "brute_terminal_vectors", "build_brg", "build_rg", "check_nonblocking",
    "conflict_transitions", "coreachable_states", "dead_basis_markings",
    "derive_ci_partition", "enabled_transitions", "export_dot",
    "final_basis_set", "find_firing_sequence", "fire", "fire_vector",
    "i_max_marking", "implicit_reach", "implicit_topo_orders",
    "increasing_transitions", "induced_subnet", "is_acyclic", "is_dead",
    "is_enabled", "is_final", "make_partition", "max_ifv",
    "min_explanations", "min_explanations_all", "parse_net",
    "parse_net_file", "random_plant",
    "rg_nonblocking", "serialize_net",
]
