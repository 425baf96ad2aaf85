"""Petri net structure, firing semantics, and linear marking constraints.

Conventions used throughout the package:

* places and transitions are addressed by their 0-based position in the
  net's declared order; helper methods translate names to indices,
* arc weights live in dense ``m x n`` ``pre``/``post`` matrices and the
  incidence matrix is ``post - pre``,
* markings are exact integer token vectors, hashed and compared by value.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, FiringError, NetDefinitionError


def _int_tuple(values: Iterable[int], what: str, minimum: int | None = None) -> tuple[int, ...]:
    out = []
    for v in values:
        iv = int(v)
        if iv != v:
            raise NetDefinitionError(f"{what} must be integers, got {v!r}")
        if minimum is not None and iv < minimum:
            raise NetDefinitionError(f"{what} must be >= {minimum}, got {iv}")
        out.append(iv)
    return tuple(out)


@dataclass(frozen=True)
class Marking:
    """Token counts per place, in the owning net's place order."""

    tokens: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", _int_tuple(self.tokens, "token counts", 0))

    @classmethod
    def of(cls, values: Iterable[int]) -> "Marking":
        return cls(tuple(values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.tokens, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i: int) -> int:
        return self.tokens[i]

    def __str__(self) -> str:
        return "[" + " ".join(str(v) for v in self.tokens) + "]"


class PetriNet:
    """An ordinary weighted place/transition net.

    Immutable after construction; the arc matrices are read-only int64
    arrays shared by every view of the net.
    """

    __slots__ = ("places", "transitions", "pre", "post", "incidence",
                 "_place_index", "_transition_index")

    def __init__(self, places: Sequence[str], transitions: Sequence[str],
                 pre, post):
        places = tuple(str(p) for p in places)
        transitions = tuple(str(t) for t in transitions)
        if len(set(places)) != len(places):
            raise NetDefinitionError("duplicate place identifiers")
        if len(set(transitions)) != len(transitions):
            raise NetDefinitionError("duplicate transition identifiers")
        if set(places) & set(transitions):
            clash = sorted(set(places) & set(transitions))
            raise NetDefinitionError(f"identifiers used as both place and transition: {clash}")
        pre = np.array(pre, dtype=np.int64)
        post = np.array(post, dtype=np.int64)
        shape = (len(places), len(transitions))
        if pre.shape != shape or post.shape != shape:
            raise DimensionMismatch(
                f"arc matrices must be {shape}, got pre {pre.shape}, post {post.shape}")
        if (pre < 0).any() or (post < 0).any():
            raise NetDefinitionError("arc weights must be nonnegative")
        incidence = post - pre
        for a in (pre, post, incidence):
            a.setflags(write=False)
        self.places = places
        self.transitions = transitions
        self.pre = pre
        self.post = post
        self.incidence = incidence
        self._place_index = {p: i for i, p in enumerate(places)}
        self._transition_index = {t: i for i, t in enumerate(transitions)}

    @property
    def num_places(self) -> int:
        return len(self.places)

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    def place_index(self, name: str) -> int:
        try:
            return self._place_index[name]
        except KeyError:
            raise KeyError(f"unknown place {name!r}") from None

    def transition_index(self, name: str) -> int:
        try:
            return self._transition_index[name]
        except KeyError:
            raise KeyError(f"unknown transition {name!r}") from None

    def resolve_transitions(self, tx: Iterable[int | str]) -> tuple[int, ...]:
        """Normalize a mix of indices and names to sorted unique indices."""
        idx = set()
        for t in tx:
            if isinstance(t, str):
                idx.add(self.transition_index(t))
            else:
                i = int(t)
                if not 0 <= i < self.num_transitions:
                    raise IndexError(f"transition index {i} out of range")
                idx.add(i)
        return tuple(sorted(idx))

    def marking(self, tokens: Iterable[int]) -> Marking:
        m = Marking.of(tokens)
        if len(m) != self.num_places:
            raise DimensionMismatch(
                f"marking has {len(m)} entries, net has {self.num_places} places")
        return m

    def __eq__(self, other) -> bool:
        if not isinstance(other, PetriNet):
            return NotImplemented
        return (self.places == other.places
                and self.transitions == other.transitions
                and np.array_equal(self.pre, other.pre)
                and np.array_equal(self.post, other.post))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (f"PetriNet({self.num_places} places, {self.num_transitions} transitions, "
                f"{int((self.pre > 0).sum() + (self.post > 0).sum())} arcs)")


@dataclass(frozen=True)
class Gmec:
    """Linear marking constraint ``weights . M <= bound``.

    Weights may be negative; the satisfying markings form the final set
    (or one clause of it).
    """

    weights: tuple[int, ...]
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "weights", _int_tuple(self.weights, "constraint weights"))
        object.__setattr__(self, "bound", int(self.bound))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=np.int64)

    def satisfied(self, m: Marking) -> bool:
        if len(m) != len(self.weights):
            raise DimensionMismatch("marking and constraint weights differ in length")
        # exact Python-int dot: immune to int64 overflow for any inputs
        return sum(w * v for w, v in zip(self.weights, m.tokens)) <= self.bound


@dataclass(frozen=True)
class FinalSpec:
    """Final-marking set: one constraint, or an and/or combination."""

    combinator: str
    gmecs: tuple[Gmec, ...]

    def __post_init__(self):
        if self.combinator not in ("single", "and", "or"):
            raise NetDefinitionError(f"unknown combinator {self.combinator!r}")
        gmecs = tuple(self.gmecs)
        if not gmecs:
            raise NetDefinitionError("final spec needs at least one constraint")
        if self.combinator == "single" and len(gmecs) != 1:
            raise NetDefinitionError("'single' takes exactly one constraint")
        if len({len(g.weights) for g in gmecs}) != 1:
            raise DimensionMismatch("constraints have inconsistent dimensions")
        object.__setattr__(self, "gmecs", gmecs)

    @classmethod
    def single(cls, gmec: Gmec) -> "FinalSpec":
        return cls("single", (gmec,))

    @classmethod
    def all_of(cls, gmecs: Iterable[Gmec]) -> "FinalSpec":
        return cls("and", tuple(gmecs))

    @classmethod
    def any_of(cls, gmecs: Iterable[Gmec]) -> "FinalSpec":
        return cls("or", tuple(gmecs))

    @property
    def dimension(self) -> int:
        return len(self.gmecs[0].weights)

    def weight_matrix(self) -> np.ndarray:
        """Stacked weight rows, one per constraint (r x m)."""
        return np.asarray([g.weights for g in self.gmecs], dtype=np.int64)

    def bounds(self) -> np.ndarray:
        return np.asarray([g.bound for g in self.gmecs], dtype=np.int64)

    def is_final(self, m: Marking) -> bool:
        if self.combinator == "or":
            return any(g.satisfied(m) for g in self.gmecs)
        return all(g.satisfied(m) for g in self.gmecs)


@dataclass(frozen=True)
class Plant:
    """A marked net together with its final-marking specification."""

    net: PetriNet
    m0: Marking
    final: FinalSpec

    def __post_init__(self):
        if len(self.m0) != self.net.num_places:
            raise DimensionMismatch("initial marking length != number of places")
        if self.final.dimension != self.net.num_places:
            raise DimensionMismatch("final-spec dimension != number of places")


# ---------------------------------------------------------------------------
# firing semantics


def _check_transition(net: PetriNet, t: int) -> int:
    t = int(t)
    if not 0 <= t < net.num_transitions:
        raise IndexError(f"transition index {t} out of range")
    return t


def _check_marking(net: PetriNet, m: Marking) -> Marking:
    if len(m) != net.num_places:
        raise DimensionMismatch("marking length does not match net")
    return m


def is_enabled(net: PetriNet, m: Marking, t: int) -> bool:
    """True iff every input place of ``t`` holds enough tokens."""
    t = _check_transition(net, t)
    _check_marking(net, m)
    col = net.pre[:, t]
    return all(v >= w for v, w in zip(m.tokens, col))

def fire(net: PetriNet, m: Marking, t: int) -> Marking:
    """Fire ``t`` at ``m``; firing a disabled transition is an error."""
    if not is_enabled(net, m, t):
        raise FiringError(f"transition {net.transitions[t]} is disabled at {m}")
    col = net.incidence[:, t]
    return Marking(tuple(v + int(d) for v, d in zip(m.tokens, col)))


def fire_vector(net: PetriNet, m: Marking, y: Sequence[int]) -> Marking | None:
    """Apply a whole firing-count vector through the state equation.

    Returns ``m + C.y`` when nonnegative, else ``None``.  On acyclic nets
    nonnegativity of the result is equivalent to the existence of an
    actual firing sequence with these counts, so this doubles as a
    reachability test there.  Evaluated in exact integer arithmetic.
    """
    _check_marking(net, m)
    y = _int_tuple(y, "firing counts", 0)
    if len(y) != net.num_transitions:
        raise DimensionMismatch("firing vector length != number of transitions")
    out = list(m.tokens)
    for t, count in enumerate(y):
        if count == 0:
            continue
        col = net.incidence[:, t]
        for p in range(net.num_places):
            out[p] += count * int(col[p])
    if any(v < 0 for v in out):
        return None
    return Marking(tuple(out))


def enabled_transitions(net: PetriNet, m: Marking) -> tuple[int, ...]:
    _check_marking(net, m)
    arr = m.as_array()
    mask = (arr[:, None] >= net.pre).all(axis=0)
    return tuple(int(i) for i in np.nonzero(mask)[0])


def is_dead(net: PetriNet, m: Marking) -> bool:
    """True iff no transition is enabled at ``m``."""
    return not enabled_transitions(net, m)


# ---------------------------------------------------------------------------
# structural classifications


def conflict_transitions(net: PetriNet) -> frozenset[int]:
    """Transitions sharing an input place with another transition.

    Depends on ``pre`` only: a transition is in structural conflict iff
    some of its input places has two or more output transitions.
    """
    out_degree = (net.pre > 0).sum(axis=1)
    shared_places = out_degree >= 2
    mask = (net.pre[shared_places, :] > 0).any(axis=0)
    return frozenset(int(t) for t in np.nonzero(mask)[0])


def increasing_transitions(net: PetriNet, final: FinalSpec) -> frozenset[int]:
    """Transitions whose firing strictly increases some constraint's count.

    With several constraints the union of the per-constraint sets is
    taken, so a transition outside the result is non-increasing for every
    weight vector at once.
    """
    if final.dimension != net.num_places:
        raise DimensionMismatch("final-spec dimension != number of places")
    w = final.weight_matrix()
    effect = w @ net.incidence  # r x n
    mask = (effect > 0).any(axis=0)
    return frozenset(int(t) for t in np.nonzero(mask)[0])


def is_final(final: FinalSpec, m: Marking) -> bool:
    return final.is_final(m)


def induced_subnet(net: PetriNet, tx: Iterable[int | str]) -> PetriNet:
    """Restriction of the net to a transition subset (all places kept)."""
    idx = net.resolve_transitions(tx)
    names = tuple(net.transitions[i] for i in idx)
    return PetriNet(net.places, names, net.pre[:, idx], net.post[:, idx])


# ---------------------------------------------------------------------------
# bipartite-digraph topology

def kahn_transition_order(pre: np.ndarray, post: np.ndarray,
                          priority: Sequence[int] | None = None) -> tuple[int, ...] | None:
    """Topological order of the transitions in the place/transition digraph.

    Returns ``None`` when the digraph has a directed cycle.  ``priority``
    reranks transitions for tie-breaking (lower pops first); the default
    is declared order, giving one canonical order.
    """
    m, n = pre.shape
    if priority is None:
        priority = range(n)
    rank = list(priority)
    # node ids: 0..m-1 places, m..m+n-1 transitions
    indegree = [0] * (m + n)
    succ: list[list[int]] = [[] for _ in range(m + n)]
    for p, t in zip(*np.nonzero(pre)):
        succ[p].append(m + t)
        indegree[m + t] += 1
    for p, t in zip(*np.nonzero(post)):
        succ[m + t].append(p)
        indegree[p] += 1
    heap = []
    for p in range(m):
        if indegree[p] == 0:
            heapq.heappush(heap, (0, p, p))
    for t in range(n):
        if indegree[m + t] == 0:
            heapq.heappush(heap, (1, rank[t], m + t))
    order = []
    seen = 0
    while heap:
        _, _, node = heapq.heappop(heap)
        seen += 1
        if node >= m:
            order.append(node - m)
        for nxt in succ[node]:
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                if nxt >= m:
                    heapq.heappush(heap, (1, rank[nxt - m], nxt))
                else:
                    heapq.heappush(heap, (0, nxt, nxt))
    if seen != m + n:
        return None
    return tuple(order)


def is_acyclic(net: PetriNet) -> bool:
    """True iff the bipartite place/transition digraph has no directed cycle."""
    return kahn_transition_order(net.pre, net.post) is not None


def transitions_on_cycles(net: PetriNet, candidates: Iterable[int]) -> frozenset[int]:
    """Transitions of ``candidates`` lying on a directed cycle of the
    subnet they induce."""
    cand = set(candidates)
    m = net.num_places
    place_out: list[list[int]] = [[] for _ in range(m)]
    trans_out: dict[int, list[int]] = {t: [] for t in cand}
    for p, t in zip(*np.nonzero(net.pre)):
        if t in cand:
            place_out[p].append(int(t))
    for p, t in zip(*np.nonzero(net.post)):
        if t in cand:
            trans_out[int(t)].append(int(p))
    cyclic = set()
    for t0 in cand:
        stack = list(trans_out[t0])
        seen_places = set(stack)
        found = False
        while stack and not found:
            p = stack.pop()
            for t in place_out[p]:
                if t == t0:
                    found = True
                    break
                for p2 in trans_out[t]:
                    if p2 not in seen_places:
                        seen_places.add(p2)
                        stack.append(p2)
        if found:
            cyclic.add(t0)
    return frozenset(cyclic)
