"""Transition-set partitions and the implicit-subnet calculus.

A partition splits the transitions into an explicit part and an implicit
part whose induced subnet must be acyclic.  When the implicit part is in
addition conflict-free and cannot increase any final-set constraint
("CI"), basis reachability decides non-blockingness without enumerating
implicit interleavings: minimal explanations drive the graph build and a
single saturation pass per basis marking answers the final-set and
deadlock questions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .caps import Caps, resolve
from .errors import CapExceeded, PartitionError
from .net import (FinalSpec, Marking, PetriNet, conflict_transitions,
                  increasing_transitions, kahn_transition_order,
                  transitions_on_cycles)


@dataclass(frozen=True)
class PartitionFlags:
    """Structural properties of the implicit transition set."""

    acyclic: bool
    non_conflicting: bool
    non_increasing: bool

    @property
    def ci(self) -> bool:
        return self.non_conflicting and self.non_increasing


class BasisPartition:
    """An explicit/implicit split with the implicit subnet's matrices cached.

    Implicit firing-count vectors used across the package are tuples
    indexed by position in ``implicit`` (ascending transition index).
    """

    __slots__ = ("net", "final", "explicit", "implicit", "flags",
                 "pre_i", "post_i", "c_i", "_topo", "_pos")

    def __init__(self, net: PetriNet, final: FinalSpec,
                 explicit: tuple[int, ...], implicit: tuple[int, ...],
                 flags: PartitionFlags, topo: tuple[int, ...]):
        self.net = net
        self.final = final
        self.explicit = explicit
        self.implicit = implicit
        self.flags = flags
        idx = list(implicit)
        self.pre_i = np.ascontiguousarray(net.pre[:, idx])
        self.post_i = np.ascontiguousarray(net.post[:, idx])
        self.c_i = np.ascontiguousarray(net.incidence[:, idx])
        for a in (self.pre_i, self.post_i, self.c_i):
            a.setflags(write=False)
        self._topo = topo
        self._pos = {t: j for j, t in enumerate(implicit)}

    @property
    def num_implicit(self) -> int:
        return len(self.implicit)

    def explicit_names(self) -> tuple[str, ...]:
        return tuple(self.net.transitions[t] for t in self.explicit)

    def implicit_names(self) -> tuple[str, ...]:
        return tuple(self.net.transitions[t] for t in self.implicit)

    def implicit_position(self, t: int) -> int:
        try:
            return self._pos[t]
        except KeyError:
            raise PartitionError(
                f"transition {self.net.transitions[t]} is not implicit") from None

    def expand_counts(self, y: Sequence[int]) -> tuple[int, ...]:
        """Lift an implicit firing-count vector to all-transition length."""
        if len(y) != self.num_implicit:
            raise PartitionError("firing-count vector length != implicit set size")
        full = [0] * self.net.num_transitions
        for j, t in enumerate(self.implicit):
            full[t] = int(y[j])
        return tuple(full)

    def __repr__(self) -> str:
        return (f"BasisPartition(explicit={list(self.explicit_names())}, "
                f"implicit={list(self.implicit_names())}, flags={self.flags})")


def _build(net: PetriNet, final: FinalSpec, explicit_idx: set[int]) -> BasisPartition:
    explicit = tuple(sorted(explicit_idx))
    implicit = tuple(t for t in range(net.num_transitions) if t not in explicit_idx)
    idx = list(implicit)
    topo = kahn_transition_order(net.pre[:, idx], net.post[:, idx])
    if topo is None:
        names = [net.transitions[t] for t in implicit]
        raise PartitionError(f"implicit subnet over {names} has a directed cycle")
    conf = conflict_transitions(net)
    inc = increasing_transitions(net, final)
    flags = PartitionFlags(
        acyclic=True,
        non_conflicting=not (set(implicit) & conf),
        non_increasing=not (set(implicit) & inc),
    )
    return BasisPartition(net, final, explicit, implicit, flags, topo)


def make_partition(net: PetriNet, final: FinalSpec,
                   explicit: Iterable[int | str]) -> BasisPartition:
    """Build a partition from a user-chosen explicit set.

    The implicit remainder must induce an acyclic subnet; conflict and
    constraint-increase properties are recorded as flags rather than
    enforced, so callers can still build graphs for partitions that only
    support plain reachability.
    """
    return _build(net, final, set(net.resolve_transitions(explicit)))


def derive_ci_partition(net: PetriNet, final: FinalSpec,
                        forced: Iterable[int | str] = ()) -> BasisPartition:
    """Smallest-by-construction explicit set giving a CI partition.

    Starts from the structurally conflicting transitions, those that can
    increase a final-set constraint, and any ``forced`` extras, then
    repairs acyclicity by moving the lowest-indexed cycle transition to
    the explicit side until the remainder is a DAG.  Deterministic for a
    given net.
    """
    explicit = (set(conflict_transitions(net))
                | set(increasing_transitions(net, final))
                | set(net.resolve_transitions(forced)))
    while True:
        candidates = set(range(net.num_transitions)) - explicit
        cyclic = transitions_on_cycles(net, candidates)
        if not cyclic:
            break
        explicit.add(min(cyclic))
    return _build(net, final, explicit)


# ---------------------------------------------------------------------------
# minimal explanations


def min_explanations(partition: BasisPartition, m: Marking, t: int,
                     caps: Caps | None = None) -> tuple[tuple[int, ...], ...]:
    """All minimal implicit firing-count vectors enabling ``t`` from ``m``.

    Layered search on the count vectors: layer k holds the feasible
    vectors of total count k, so the first time a vector's marking covers
    the input places of ``t`` it is minimal, and any later vector
    componentwise above a found one can be dropped.  Returns the vectors
    lexicographically sorted; empty when ``t`` cannot be enabled.
    """
    return min_explanations_all(partition, m, (t,), caps=caps)[int(t)]


def min_explanations_all(partition: BasisPartition, m: Marking,
                         transitions: Sequence[int],
                         caps: Caps | None = None,
                         ) -> dict[int, tuple[tuple[int, ...], ...]]:
    """Minimal explanation sets for several transitions in one search.

    The layered search visits each firing-count vector once and keeps a
    per-target liveness mask: a vector stays live for a target until it
    either enables it (recorded as minimal) or rises above an explanation
    already found for it, and is expanded while live for any target.
    Layer number equals the vector's total count, so vectors never recur
    across layers and same-layer vectors are mutually incomparable.
    """
    caps = resolve(caps)
    net = partition.net
    targets = [int(t) for t in transitions]
    for t in targets:
        if not 0 <= t < net.num_transitions:
            raise IndexError(f"transition index {t} out of range")
    if len(m) != net.num_places:
        raise PartitionError("marking length does not match net")
    if not targets:
        return {}
    if len(targets) == 1:
        what = f"enabling {net.transitions[targets[0]]} from {m}"
    else:
        what = f"enabling {len(targets)} transitions from {m}"
    k = len(targets)
    pre_t = np.ascontiguousarray(net.pre[:, targets].T)
    ni = partition.num_implicit
    m_arr = m.as_array()
    if ni == 0:
        ok = (m_arr[None, :] >= pre_t).all(axis=1)
        return {t: (((),) if ok[j] else ()) for j, t in enumerate(targets)}

    if partition.flags.non_conflicting:
        # Conflict-freeness bounds every feasible firing vector by the
        # saturation vector, so no marking in the implicit closure can
        # hold more than m + Post_I @ y_max tokens anywhere.  Targets
        # needing more than that ceiling can never be enabled.
        order_arr = np.asarray(partition._topo, dtype=np.int64)
        counts, _final, total = kernels.saturate(m_arr, partition.pre_i,
                                                 partition.post_i, order_arr,
                                                 caps.saturation)
        if total > caps.saturation:
            raise CapExceeded("saturation", caps.saturation,
                              f"implicit saturation from {m}")
        ceiling = m_arr + partition.post_i @ counts
        attainable = (ceiling[None, :] >= pre_t).all(axis=1)
        if not attainable.all():
            out = {t: () for j, t in enumerate(targets) if not attainable[j]}
            rest = [t for j, t in enumerate(targets) if attainable[j]]
            if rest:
                out.update(min_explanations_all(partition, m, rest, caps=caps))
            return out

    ex_t, ex_y, explored = kernels.explain_all(m_arr.astype(np.int64),
                                               partition.pre_i,
                                               partition.c_i, pre_t,
                                               caps.explanations)
    if explored > caps.explanations:
        raise CapExceeded("explanations", caps.explanations, what)
    found: list[set[tuple[int, ...]]] = [set() for _ in range(k)]
    for j, row in zip(ex_t, ex_y):
        found[int(j)].add(tuple(int(v) for v in row))
    return {t: tuple(sorted(found[j])) for j, t in enumerate(targets)}


# ---------------------------------------------------------------------------
# implicit saturation


def _require_ci_for_saturation(partition: BasisPartition):
    if not partition.flags.non_conflicting:
        bad = sorted(set(partition.implicit)
                     & conflict_transitions(partition.net))
        names = [partition.net.transitions[t] for t in bad]
        raise PartitionError(
            f"saturation needs a conflict-free implicit set; {names} conflict")


def max_ifv(partition: BasisPartition, m: Marking,
            caps: Caps | None = None,
            order: Sequence[int] | None = None) -> tuple[int, ...]:
    """Largest implicit firing-count vector enabled from ``m``.

    Unique because the implicit subnet is acyclic and conflict-free: each
    transition's attainable count depends only on its feeders, so one
    pass in (any) topological order saturates every transition.  ``order``
    overrides the canonical topological order, positions into the
    implicit tuple; results are order-independent.
    """
    caps = resolve(caps)
    _require_ci_for_saturation(partition)
    net = partition.net
    if len(m) != net.num_places:
        raise PartitionError("marking length does not match net")
    if partition.num_implicit == 0:
        return ()
    if order is None:
        topo = partition._topo
    else:
        topo = tuple(int(j) for j in order)
        if sorted(topo) != list(range(partition.num_implicit)):
            raise PartitionError("order must be a permutation of implicit positions")
    order_arr = np.asarray(topo, dtype=np.int64)
    counts, _final, total = kernels.saturate(m.as_array(), partition.pre_i,
                                             partition.post_i, order_arr,
                                             caps.saturation)
    if total > caps.saturation:
        raise CapExceeded("saturation", caps.saturation,
                          f"implicit saturation from {m}")
    return tuple(int(v) for v in counts)


def i_max_marking(partition: BasisPartition, m: Marking,
                  caps: Caps | None = None) -> Marking:
    """Marking after firing the implicit set as often as possible."""
    caps = resolve(caps)
    _require_ci_for_saturation(partition)
    net = partition.net
    if len(m) != net.num_places:
        raise PartitionError("marking length does not match net")
    if partition.num_implicit == 0:
        return m
    order_arr = np.asarray(partition._topo, dtype=np.int64)
    _counts, final, total = kernels.saturate(m.as_array(), partition.pre_i,
                                             partition.post_i, order_arr,
                                             caps.saturation)
    if total > caps.saturation:
        raise CapExceeded("saturation", caps.saturation,
                          f"implicit saturation from {m}")
    return Marking(tuple(int(v) for v in final))


def implicit_reach(partition: BasisPartition, m: Marking,
                   caps: Caps | None = None) -> tuple[Marking, ...]:
    """Every marking reachable from ``m`` using implicit transitions only.

    Plain breadth-first enumeration on the implicit subnet; exists for
    cross-checks and small nets, not for the decision procedure.
    """
    caps = resolve(caps)
    net = partition.net
    if len(m) != net.num_places:
        raise PartitionError("marking length does not match net")
    start = m.as_array().reshape(1, -1)
    seen = {start.tobytes(): 0}
    markings = [m]
    frontier = start
    while frontier.shape[0]:
        _src, _tcol, children = kernels.expand_all(frontier, partition.pre_i,
                                                   partition.c_i)
        if children.shape[0] == 0:
            break
        fresh_rows = []
        for i in range(children.shape[0]):
            row = children[i]
            key = row.reshape(1, -1).tobytes()
            if key not in seen:
                seen[key] = len(markings)
                markings.append(Marking(tuple(int(v) for v in row)))
                fresh_rows.append(i)
                if len(markings) > caps.implicit_reach:
                    raise CapExceeded("implicit_reach", caps.implicit_reach,
                                      f"implicit closure from {m}")
        if not fresh_rows:
            break
        frontier = children[fresh_rows]
    return tuple(markings)


# ---------------------------------------------------------------------------
# topological-order variants (for order-invariance checks)


def implicit_topo_orders(partition: BasisPartition, want: int = 3,
                         seed: int = 0) -> tuple[tuple[int, ...], ...]:
    """Up to ``want`` distinct topological orders of the implicit subnet.

    Tries the canonical priority, its reverse, then seeded shuffles; a
    chain-like subnet may genuinely admit fewer distinct orders than
    requested.
    """
    ni = partition.num_implicit
    if ni == 0:
        return ((),)
    pre_i, post_i = partition.pre_i, partition.post_i
    orders: list[tuple[int, ...]] = []
    rng = random.Random(seed)
    priorities: list[list[int]] = [list(range(ni)), list(range(ni - 1, -1, -1))]
    for _ in range(32):
        perm = list(range(ni))
        rng.shuffle(perm)
        priorities.append(perm)
    for prio in priorities:
        order = kahn_transition_order(pre_i, post_i, prio)
        if order is None:
            raise PartitionError("implicit subnet has a directed cycle")
        if order not in orders:
            orders.append(order)
        if len(orders) >= want:
            break
    return tuple(orders)
