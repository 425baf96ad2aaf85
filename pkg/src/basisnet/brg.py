"""Basis reachability graph: states are basis markings, events pair an
explicit transition with one minimal implicit explanation.

The graph is deterministic by construction: the target of an event is
``M + C_I.y + C(:,t)``, a function of the source and the event.  Edges
are generated in a canonical order (FIFO over discovered states, then
ascending transition index, then lexicographic explanation), so two
builds of the same plant produce identical arrays.
"""

from __future__ import annotations

import json
from collections import deque
from typing import Iterable, NamedTuple

import numpy as np

from .basis import (BasisPartition, derive_ci_partition, make_partition,
                    min_explanations_all)
from .caps import Caps, resolve
from .errors import CapExceeded, PartitionError
from .net import Marking, Plant


class BrgEvent(NamedTuple):
    """An explicit transition plus the implicit counts fired before it."""

    transition: int
    counts: tuple[int, ...]


class CiBrg:
    """Immutable basis reachability graph, array backed.

    Edges are stored sorted by source state, so the outgoing edges of a
    state form one contiguous slice (``_succ_offset``).
    """

    __slots__ = ("partition", "state_array", "edge_src", "edge_t", "edge_y",
                 "edge_dst", "_succ_offset", "_index", "_markings", "_rev")

    def __init__(self, partition: BasisPartition, state_array: np.ndarray,
                 edge_src: np.ndarray, edge_t: np.ndarray,
                 edge_y: np.ndarray, edge_dst: np.ndarray):
        n_states = state_array.shape[0]
        if state_array.ndim != 2 or state_array.shape[1] != partition.net.num_places:
            raise PartitionError("state array shape does not match net")
        n_edges = edge_src.shape[0]
        if not (edge_t.shape[0] == edge_dst.shape[0] == n_edges
                and edge_y.shape == (n_edges, partition.num_implicit)):
            raise PartitionError("edge arrays have inconsistent shapes")
        if n_edges and ((edge_src.min() < 0) or (edge_src.max() >= n_states)
                        or (edge_dst.min() < 0) or (edge_dst.max() >= n_states)):
            raise PartitionError("edge endpoints out of range")
        if n_edges and (np.diff(edge_src) < 0).any():
            raise PartitionError("edges must be sorted by source state")
        self.partition = partition
        self.state_array = state_array
        self.edge_src = edge_src
        self.edge_t = edge_t
        self.edge_y = edge_y
        self.edge_dst = edge_dst
        for a in (state_array, edge_src, edge_t, edge_y, edge_dst):
            a.setflags(write=False)
        offset = np.zeros(n_states + 1, dtype=np.int64)
        np.add.at(offset, edge_src + 1, 1)
        self._succ_offset = np.cumsum(offset)
        self._index = {state_array[i].tobytes(): i for i in range(n_states)}
        self._markings = tuple(Marking(tuple(int(v) for v in state_array[i]))
                               for i in range(n_states))
        self._rev = None

    # -- structure ----------------------------------------------------

    @property
    def num_states(self) -> int:
        return self.state_array.shape[0]

    @property
    def num_edges(self) -> int:
        return self.edge_src.shape[0]

    @property
    def initial(self) -> int:
        return 0

    def states(self) -> tuple[Marking, ...]:
        return self._markings

    def state(self, i: int) -> Marking:
        return self._markings[i]

    def index_of(self, m: Marking) -> int | None:
        i = self._index.get(m.as_array().tobytes())
        return None if i is None else int(i)

    def successors(self, i: int) -> tuple[tuple[BrgEvent, int], ...]:
        lo, hi = int(self._succ_offset[i]), int(self._succ_offset[i + 1])
        out = []
        for e in range(lo, hi):
            ev = BrgEvent(int(self.edge_t[e]),
                          tuple(int(v) for v in self.edge_y[e]))
            out.append((ev, int(self.edge_dst[e])))
        return tuple(out)

    def edges(self) -> tuple[tuple[int, BrgEvent, int], ...]:
        out = []
        for e in range(self.num_edges):
            ev = BrgEvent(int(self.edge_t[e]),
                          tuple(int(v) for v in self.edge_y[e]))
            out.append((int(self.edge_src[e]), ev, int(self.edge_dst[e])))
        return tuple(out)

    def dead_ends(self) -> tuple[int, ...]:
        """States with no outgoing edge."""
        off = self._succ_offset
        return tuple(int(i) for i in range(self.num_states)
                     if off[i] == off[i + 1])

    def reverse_adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Per state, the sorted distinct predecessor states."""
        if self._rev is None:
            preds: list[set[int]] = [set() for _ in range(self.num_states)]
            for e in range(self.num_edges):
                preds[int(self.edge_dst[e])].add(int(self.edge_src[e]))
            self._rev = tuple(tuple(sorted(s)) for s in preds)
        return self._rev

    def __eq__(self, other) -> bool:
        if not isinstance(other, CiBrg):
            return NotImplemented
        return (self.partition.explicit == other.partition.explicit
                and self.partition.net == other.partition.net
                and np.array_equal(self.state_array, other.state_array)
                and np.array_equal(self.edge_src, other.edge_src)
                and np.array_equal(self.edge_t, other.edge_t)
                and np.array_equal(self.edge_y, other.edge_y)
                and np.array_equal(self.edge_dst, other.edge_dst))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CiBrg({self.num_states} states, {self.num_edges} edges)"

    # -- serialization --------------------------------------------------

    def as_dict(self) -> dict:
        net = self.partition.net
        edges = []
        for e in range(self.num_edges):
            edges.append({
                "src": int(self.edge_src[e]),
                "transition": net.transitions[int(self.edge_t[e])],
                "counts": [int(v) for v in self.edge_y[e]],
                "dst": int(self.edge_dst[e]),
            })
        return {
            "initial": 0,
            "partition": {
                "explicit": list(self.partition.explicit_names()),
                "implicit": list(self.partition.implicit_names()),
            },
            "states": [[int(v) for v in row] for row in self.state_array],
            "edges": edges,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)


def brg_from_dict(d: dict, plant: Plant) -> CiBrg:
    """Rebuild a graph dumped by :meth:`CiBrg.as_dict` against its plant."""
    net = plant.net
    partition = make_partition(net, plant.final, d["partition"]["explicit"])
    if list(partition.implicit_names()) != list(d["partition"]["implicit"]):
        raise PartitionError("implicit transition set does not match dump")
    states = np.asarray(d["states"], dtype=np.int64).reshape(len(d["states"]),
                                                             net.num_places)
    edges = d["edges"]
    edge_src = np.asarray([e["src"] for e in edges], dtype=np.int64)
    edge_t = np.asarray([net.transition_index(e["transition"]) for e in edges],
                        dtype=np.int64)
    edge_dst = np.asarray([e["dst"] for e in edges], dtype=np.int64)
    edge_y = np.asarray([e["counts"] for e in edges],
                        dtype=np.int64).reshape(len(edges), partition.num_implicit)
    return CiBrg(partition, states, edge_src, edge_t, edge_y, edge_dst)


# ---------------------------------------------------------------------------
# construction


def build_brg(plant: Plant, partition: BasisPartition | None = None,
              caps: Caps | None = None) -> CiBrg:
    """Breadth-first build of the basis reachability graph.

    Only acyclicity of the implicit subnet is needed here; the conflict
    and increase flags matter to the non-blockingness decision, not to
    the graph itself.  Raises :class:`CapExceeded` past the state cap.
    """
    caps = resolve(caps)
    if partition is None:
        partition = derive_ci_partition(plant.net, plant.final)
    else:
        if partition.net != plant.net:
            raise PartitionError("partition was built for a different net")
        if partition.final != plant.final:
            raise PartitionError("partition was built for a different final spec")
    net = plant.net
    ni = partition.num_implicit
    c_i = partition.c_i

    state_rows = [plant.m0.as_array()]
    index = {state_rows[0].tobytes(): 0}
    queue = deque([0])
    e_src: list[int] = []
    e_t: list[int] = []
    e_y: list[tuple[int, ...]] = []
    e_dst: list[int] = []

    while queue:
        s = queue.popleft()
        m_arr = state_rows[s]
        m = Marking(tuple(int(v) for v in m_arr))
        explanations = min_explanations_all(partition, m,
                                            partition.explicit, caps)
        for t in partition.explicit:
            for y in explanations[t]:
                if ni:
                    m2 = m_arr + c_i @ np.asarray(y, dtype=np.int64) \
                        + net.incidence[:, t]
                else:
                    m2 = m_arr + net.incidence[:, t]
                key = m2.tobytes()
                child = index.get(key)
                if child is None:
                    child = len(state_rows)
                    if child >= caps.brg_states:
                        raise CapExceeded("brg_states", caps.brg_states,
                                          "basis graph construction")
                    index[key] = child
                    state_rows.append(m2)
                    queue.append(child)
                e_src.append(s)
                e_t.append(t)
                e_y.append(y)
                e_dst.append(child)

    state_array = np.vstack(state_rows).astype(np.int64)
    edge_src = np.asarray(e_src, dtype=np.int64)
    edge_t = np.asarray(e_t, dtype=np.int64)
    edge_dst = np.asarray(e_dst, dtype=np.int64)
    edge_y = (np.asarray(e_y, dtype=np.int64).reshape(len(e_y), ni)
              if e_y else np.zeros((0, ni), dtype=np.int64))
    return CiBrg(partition, state_array, edge_src, edge_t, edge_y, edge_dst)


# ---------------------------------------------------------------------------
# rendering


def export_dot(brg: CiBrg, final_states: Iterable[int] = (),
               dead_states: Iterable[int] | None = None,
               name: str = "brg") -> str:
    """GraphViz text for the graph.

    Final basis markings are drawn as dashed boxes, dead ends filled;
    the initial state gets a bold outline.
    """
    final = set(final_states)
    dead = set(brg.dead_ends() if dead_states is None else dead_states)
    net = brg.partition.net
    lines = [f"digraph {name} {{", "  rankdir=LR;",
             "  node [shape=ellipse];"]
    for i in range(brg.num_states):
        label = f"s{i}\\n{brg.state(i)}"
        attrs = [f'label="{label}"']
        if i in final:
            attrs.append("shape=box")
            attrs.append("style=dashed")
        if i in dead:
            style = "dashed,filled" if i in final else "filled"
            attrs = [a for a in attrs if not a.startswith("style=")]
            attrs.append(f'style="{style}"')
            attrs.append("fillcolor=lightgray")
        if i == brg.initial:
            attrs.append("penwidth=2")
        lines.append(f"  s{i} [{', '.join(attrs)}];")
    for e in range(brg.num_edges):
        t = net.transitions[int(brg.edge_t[e])]
        y = "[" + " ".join(str(int(v)) for v in brg.edge_y[e]) + "]"
        lines.append(f'  s{int(brg.edge_src[e])} -> s{int(brg.edge_dst[e])} '
                     f'[label="{t} / {y}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
