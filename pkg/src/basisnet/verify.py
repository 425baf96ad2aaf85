"""Non-blockingness decision on top of the basis reachability graph.

The plant is non-blocking iff every basis marking can reach one whose
implicit closure meets the final set.  With a CI partition that closure
test collapses to a membership test on the implicit-saturated marking,
and coreachability is one reverse breadth-first search.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

from .basis import BasisPartition, derive_ci_partition, i_max_marking
from .brg import CiBrg, build_brg
from .caps import Caps, resolve
from .errors import PartitionError
from .net import Marking, Plant, is_dead


@dataclass(frozen=True)
class Verdict:
    """Outcome of a non-blockingness check, with the graph it rests on."""

    nonblocking: bool
    brg: CiBrg
    final_basis: tuple[int, ...]
    dead_end_states: tuple[int, ...]
    blocking_witness: int | None
    timings: dict[str, float]

    def __post_init__(self):
        if self.nonblocking != (self.blocking_witness is None):
            raise ValueError("witness must be present exactly when blocking")

    @property
    def witness_marking(self) -> Marking | None:
        if self.blocking_witness is None:
            return None
        return self.brg.state(self.blocking_witness)

    def stats(self) -> dict:
        return {
            "states": self.brg.num_states,
            "edges": self.brg.num_edges,
            "final_basis": len(self.final_basis),
            "dead_ends": len(self.dead_end_states),
            "timings": dict(self.timings),
        }


def _require_ci(partition: BasisPartition, doing: str):
    f = partition.flags
    if f.ci:
        return
    problems = []
    if not f.non_conflicting:
        problems.append("implicit transitions are in structural conflict")
    if not f.non_increasing:
        problems.append("implicit transitions can increase a final-set count")
    raise PartitionError(f"{doing} needs a CI partition: " + "; ".join(problems))


def _i_max_all(brg: CiBrg, caps: Caps | None) -> list[Marking]:
    part = brg.partition
    return [i_max_marking(part, s, caps) for s in brg.states()]


def final_basis_set(brg: CiBrg, caps: Caps | None = None) -> tuple[int, ...]:
    """States whose implicit closure contains a final marking.

    Implicit firings never raise any constraint count under a CI
    partition, so the closure meets the final set iff the saturated
    marking itself is final.
    """
    _require_ci(brg.partition, "final-set membership per basis marking")
    caps = resolve(caps)
    final = brg.partition.final
    imax = _i_max_all(brg, caps)
    return tuple(i for i, mm in enumerate(imax) if final.is_final(mm))


def dead_basis_markings(brg: CiBrg, caps: Caps | None = None) -> tuple[int, ...]:
    """States whose saturated marking is dead in the whole net.

    Under a CI partition these are exactly the graph's dead ends, and
    their saturated markings are exactly the plant's dead markings.
    Informational: the decision itself never branches on deadlocks.
    """
    _require_ci(brg.partition, "deadlock classification")
    caps = resolve(caps)
    net = brg.partition.net
    imax = _i_max_all(brg, caps)
    return tuple(i for i, mm in enumerate(imax) if is_dead(net, mm))


def coreachable_states(brg: CiBrg, targets: tuple[int, ...]) -> list[bool]:
    """Which states can reach one of ``targets`` along graph edges."""
    mark = [False] * brg.num_states
    queue = deque()
    for i in targets:
        if not mark[i]:
            mark[i] = True
            queue.append(i)
    rev = brg.reverse_adjacency()
    while queue:
        i = queue.popleft()
        for j in rev[i]:
            if not mark[j]:
                mark[j] = True
                queue.append(j)
    return mark


def check_nonblocking(plant: Plant, partition: BasisPartition | None = None,
                      caps: Caps | None = None) -> Verdict:
    """Decide non-blockingness of a bounded plant.

    Derives a CI partition when none is given, builds the basis graph,
    marks the states whose closure meets the final set, and walks the
    reversed graph once; the verdict is "non-blocking" iff that walk
    covers every state.  The reported witness is the non-coreachable
    state with the smallest index, which is deterministic because the
    build order is.
    """
    caps = resolve(caps)
    t0 = time.perf_counter()
    if partition is None:
        partition = derive_ci_partition(plant.net, plant.final)
    _require_ci(partition, "the non-blockingness decision")
    t1 = time.perf_counter()
    brg = build_brg(plant, partition, caps)
    t2 = time.perf_counter()
    final = partition.final
    net = partition.net
    imax = _i_max_all(brg, caps)
    finals = tuple(i for i, mm in enumerate(imax) if final.is_final(mm))
    dead = tuple(i for i, mm in enumerate(imax) if is_dead(net, mm))
    t3 = time.perf_counter()
    mark = coreachable_states(brg, finals)
    witness = next((i for i, ok in enumerate(mark) if not ok), None)
    t4 = time.perf_counter()
    timings = {
        "partition": t1 - t0,
        "brg": t2 - t1,
        "final_basis": t3 - t2,
        "coreach": t4 - t3,
        "total": t4 - t0,
    }
    return Verdict(
        nonblocking=witness is None,
        brg=brg,
        final_basis=finals,
        dead_end_states=dead,
        blocking_witness=witness,
        timings=timings,
    )
