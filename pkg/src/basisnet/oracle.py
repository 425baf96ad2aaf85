"""Ground-truth engines for differential testing.

Everything here is deliberately plain Python over tuples and dicts: an
independent route to the same answers the array/basis machinery gives,
so agreement between the two is meaningful.  The exhaustive graphs only
fit small nets; caps keep them honest.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .basis import BasisPartition
from .caps import resolve
from .errors import CapExceeded
from .net import (FinalSpec, Gmec, Marking, PetriNet, Plant,
                  kahn_transition_order)


def _columns(net: PetriNet, transitions: Sequence[int]):
    """Per transition: sparse input requirements and sparse delta."""
    cols = []
    for t in transitions:
        ins = [(p, int(net.pre[p, t])) for p in range(net.num_places)
               if net.pre[p, t] > 0]
        delta = [(p, int(net.incidence[p, t])) for p in range(net.num_places)
                 if net.incidence[p, t] != 0]
        cols.append((int(t), ins, delta))
    return cols


def _enabled(m: tuple[int, ...], ins) -> bool:
    return all(m[p] >= w for p, w in ins)


def _fire(m: tuple[int, ...], delta) -> tuple[int, ...]:
    out = list(m)
    for p, d in delta:
        out[p] += d
    return tuple(out)


# ---------------------------------------------------------------------------
# exhaustive reachability


class ReachGraph:
    """Every reachable marking, every firing, found by breadth-first closure."""

    def __init__(self, plant: Plant, states: list[tuple[int, ...]],
                 edges: list[tuple[int, int, int]], dead: tuple[int, ...]):
        self.plant = plant
        self.states = states
        self.edges = edges
        self.initial = 0
        self.dead = dead
        self._index = {s: i for i, s in enumerate(states)}

    @property
    def num_states(self) -> int:
        return len(self.states)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def index_of(self, m) -> int | None:
        key = tuple(m.tokens) if isinstance(m, Marking) else tuple(m)
        return self._index.get(key)

    def marking(self, i: int) -> Marking:
        return Marking(self.states[i])

    def __repr__(self) -> str:
        return f"ReachGraph({self.num_states} states, {self.num_edges} edges)"


def build_rg(plant: Plant, cap: int | None = None) -> ReachGraph:
    """Exhaustive breadth-first reachability; errors out past ``cap``.

    A cap hit means the net is too large for the oracle or plain
    unbounded; boundedness is never analysed, only observed.
    """
    if cap is None:
        cap = resolve(None).rg_states
    net = plant.net
    cols = _columns(net, range(net.num_transitions))
    start = tuple(plant.m0.tokens)
    states = [start]
    index = {start: 0}
    edges: list[tuple[int, int, int]] = []
    dead: list[int] = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        m = states[s]
        fired = False
        for t, ins, delta in cols:
            if not _enabled(m, ins):
                continue
            fired = True
            child = _fire(m, delta)
            j = index.get(child)
            if j is None:
                j = len(states)
                if j >= cap:
                    raise CapExceeded("rg_states", cap,
                                      "reachability closure (unbounded net?)")
                index[child] = j
                states.append(child)
                queue.append(j)
            edges.append((s, t, j))
        if not fired:
            dead.append(s)
    return ReachGraph(plant, states, edges, tuple(dead))


@dataclass(frozen=True)
class RgVerdict:
    nonblocking: bool
    witness: int | None
    final_states: tuple[int, ...]

    def witness_marking(self, rg: ReachGraph) -> Marking | None:
        return None if self.witness is None else rg.marking(self.witness)


def rg_nonblocking(rg: ReachGraph, final: FinalSpec) -> RgVerdict:
    """Direct definition of non-blockingness on the full graph.

    Marks the final states, walks the reversed edges from them; the
    plant is non-blocking iff the walk covers everything.  The witness
    is the uncovered state of smallest index.
    """
    finals = tuple(i for i, s in enumerate(rg.states)
                   if final.is_final(Marking(s)))
    preds: list[list[int]] = [[] for _ in range(rg.num_states)]
    for src, _t, dst in rg.edges:
        preds[dst].append(src)
    mark = [False] * rg.num_states
    queue = deque()
    for i in finals:
        mark[i] = True
        queue.append(i)
    while queue:
        i = queue.popleft()
        for j in preds[i]:
            if not mark[j]:
                mark[j] = True
                queue.append(j)
    witness = next((i for i, ok in enumerate(mark) if not ok), None)
    return RgVerdict(nonblocking=witness is None, witness=witness,
                     final_states=finals)


# ---------------------------------------------------------------------------
# brute-force implicit-subnet semantics


def _implicit_cols(partition: BasisPartition):
    return _columns(partition.net, partition.implicit)


def brute_implicit_reach(partition: BasisPartition, m: Marking,
                         cap: int = 100_000) -> frozenset[tuple[int, ...]]:
    """Implicit closure by plain search, for cross-checks."""
    cols = _implicit_cols(partition)
    start = tuple(m.tokens)
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for _t, ins, delta in cols:
            if _enabled(cur, ins):
                child = _fire(cur, delta)
                if child not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded("implicit_reach", cap,
                                          "brute-force implicit closure")
                    seen.add(child)
                    queue.append(child)
    return frozenset(seen)


def brute_min_explanations(partition: BasisPartition, m: Marking, t: int,
                           cap: int = 100_000) -> tuple[tuple[int, ...], ...]:
    """Reference semantics for minimal explanations.

    Enumerates every distinct implicit firing-count vector reachable
    from ``m`` (no pruning), keeps those whose marking enables ``t``,
    then filters to the componentwise-minimal ones.
    """
    net = partition.net
    cols = _implicit_cols(partition)
    ni = partition.num_implicit
    need = [(p, int(net.pre[p, t])) for p in range(net.num_places)
            if net.pre[p, t] > 0]
    start = (tuple(m.tokens), (0,) * ni)
    seen = {start[1]}
    queue = deque([start])
    enabling: list[tuple[int, ...]] = []
    while queue:
        cur, y = queue.popleft()
        if _enabled(cur, need):
            enabling.append(y)
            continue  # extensions of an enabling vector are never minimal
        for j, (_t, ins, delta) in enumerate(cols):
            if _enabled(cur, ins):
                y2 = y[:j] + (y[j] + 1,) + y[j + 1:]
                if y2 not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded("explanations", cap,
                                          "brute-force explanation search")
                    seen.add(y2)
                    queue.append((_fire(cur, delta), y2))
    minimal: list[tuple[int, ...]] = []
    for y in sorted(enabling, key=lambda v: (sum(v), v)):
        if not any(all(a <= b for a, b in zip(kept, y)) for kept in minimal):
            minimal.append(y)
    return tuple(sorted(minimal))


def brute_terminal_vectors(partition: BasisPartition, m: Marking,
                           cap: int = 100_000) -> tuple[tuple[int, ...], ...]:
    """Firing-count vectors of the implicit runs that cannot be extended.

    On a conflict-free acyclic implicit subnet there is exactly one,
    which is what the saturation pass must reproduce.
    """
    cols = _implicit_cols(partition)
    ni = partition.num_implicit
    start = (tuple(m.tokens), (0,) * ni)
    seen = {start[1]}
    queue = deque([start])
    terminal: set[tuple[int, ...]] = set()
    while queue:
        cur, y = queue.popleft()
        extended = False
        for j, (_t, ins, delta) in enumerate(cols):
            if _enabled(cur, ins):
                extended = True
                y2 = y[:j] + (y[j] + 1,) + y[j + 1:]
                if y2 not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded("saturation", cap,
                                          "brute-force terminal vectors")
                    seen.add(y2)
                    queue.append((_fire(cur, delta), y2))
        if not extended:
            terminal.add(y)
    return tuple(sorted(terminal))


def find_firing_sequence(net: PetriNet, m: Marking,
                         y: Sequence[int]) -> list[int] | None:
    """A concrete firing order realizing the count vector ``y``.

    Only valid on acyclic nets, where ``m + C.y >= 0`` guarantees some
    order works and topological order always does.  Returns ``None``
    when the state equation already fails.
    """
    topo = kahn_transition_order(net.pre, net.post)
    if topo is None:
        raise ValueError("firing-order reconstruction needs an acyclic net")
    counts = [int(v) for v in y]
    cols = _columns(net, range(net.num_transitions))
    cur = tuple(m.tokens)
    seq: list[int] = []
    # feasibility via the state equation first
    total = list(cur)
    for t, _ins, delta in cols:
        for p, d in delta:
            total[p] += counts[t] * d
    if any(v < 0 for v in total):
        return None
    for t in topo:
        _t, ins, delta = cols[t]
        for _ in range(counts[t]):
            if not _enabled(cur, ins):
                raise AssertionError(
                    "topological replay got stuck on an acyclic net")
            cur = _fire(cur, delta)
            seq.append(t)
    return seq


# ---------------------------------------------------------------------------
# random plants


@dataclass(frozen=True)
class RandomPlantParams:
    places: int = 8
    transitions: int = 8
    max_weight: int = 2
    max_tokens: int = 4
    gmec_density: float = 0.5
    rg_cap: int = 20_000
    retries: int = 40

    def __post_init__(self):
        for name in ("places", "transitions", "max_weight", "max_tokens",
                     "rg_cap", "retries"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0.0 < self.gmec_density <= 1.0:
            raise ValueError("gmec_density must be in (0, 1]")


def _random_gmec(rng: random.Random, m: int, density: float,
                 tokens: Sequence[int], cols) -> Gmec:
    weights = [0] * m
    for p in range(m):
        if rng.random() < density:
            weights[p] = rng.choice((1, 1, 1, 2, -1))
    if not any(weights):
        weights[rng.randrange(m)] = 1
    # anchor the bound at a marking an actual run can hit
    cur = tuple(tokens)
    for _ in range(rng.randint(0, 8)):
        enabled = [(ins, delta) for _t, ins, delta in cols
                   if _enabled(cur, ins)]
        if not enabled:
            break
        cur = _fire(cur, rng.choice(enabled)[1])
    k = sum(w * v for w, v in zip(weights, cur)) + rng.randint(-1, 1)
    return Gmec(tuple(weights), k)


def random_plant(seed: int,
                 params: RandomPlantParams | None = None) -> Plant:
    """Deterministic plant from a seed, biased toward small bounded nets.

    Every transition consumes at least one token and usually produces no
    more than it consumes, so most draws are bounded; draws whose
    reachability closure overflows ``rg_cap`` are rejected and resampled
    (a bounded number of times).
    """
    if params is None:
        params = RandomPlantParams()
    rng = random.Random(seed)
    last_error: Exception | None = None
    for _attempt in range(params.retries):
        m = rng.randint(2, params.places)
        n = rng.randint(2, params.transitions)
        pre = [[0] * n for _ in range(m)]
        post = [[0] * n for _ in range(m)]
        for t in range(n):
            n_in = rng.choice((1, 1, 2))
            for p in rng.sample(range(m), min(n_in, m)):
                pre[p][t] = rng.randint(1, params.max_weight)
            total_in = sum(pre[p][t] for p in range(m))
            budget = total_in + (1 if rng.random() < 0.15 else 0)
            n_out = rng.choice((0, 1, 1, 2))
            for p in rng.sample(range(m), min(n_out, m)):
                if budget <= 0:
                    break
                w = rng.randint(1, min(params.max_weight, budget))
                post[p][t] = w
                budget -= w
        tokens = [rng.randint(0, params.max_tokens) for _ in range(m)]
        net = PetriNet([f"p{i + 1}" for i in range(m)],
                       [f"t{i + 1}" for i in range(n)], pre, post)
        cols = _columns(net, range(n))
        shape = rng.random()
        if shape < 0.6:
            final = FinalSpec.single(
                _random_gmec(rng, m, params.gmec_density, tokens, cols))
        else:
            pair = (_random_gmec(rng, m, params.gmec_density, tokens, cols),
                    _random_gmec(rng, m, params.gmec_density, tokens, cols))
            final = (FinalSpec.all_of(pair) if shape < 0.8
                     else FinalSpec.any_of(pair))
        plant = Plant(net, net.marking(tokens), final)
        try:
            build_rg(plant, cap=params.rg_cap)
        except CapExceeded as exc:
            last_error = exc
            continue
        return plant
    raise CapExceeded("rg_states", params.rg_cap,
                      f"no bounded plant within {params.retries} draws "
                      f"for seed {seed}") from last_error
