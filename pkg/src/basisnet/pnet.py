"""Line-oriented plant files.

Directives, one per line, ``#`` starts a comment:

    place <id> [tokens=<n>]
    trans <id>
    arc <src> -> <dst> [w=<n>]      # place->trans consumes, trans->place produces
    gmec <k> : <c>*<place> [+ <c>*<place> ...]
    final and|or                    # default: single constraint, else "and"
    explicit <id>[,<id> ...]        # forced-explicit partition hint

Declaration order fixes the place/transition indexing.  Arc weights
default to 1, initial tokens to 0; constraint coefficients and bounds
may be negative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PnetSyntaxError
from .net import FinalSpec, Gmec, Marking, PetriNet, Plant


@dataclass(frozen=True)
class ParsedNet:
    """A parsed plant plus the file's optional partition hint."""

    plant: Plant
    explicit: tuple[str, ...] | None


def _parse_int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise PnetSyntaxError(lineno, f"{what} must be an integer, got {text!r}") from None


def _parse_kv(field: str, key: str, lineno: int, minimum: int) -> int:
    if not field.startswith(key + "="):
        raise PnetSyntaxError(lineno, f"expected {key}=<n>, got {field!r}")
    value = _parse_int(field[len(key) + 1:], lineno, key)
    if value < minimum:
        raise PnetSyntaxError(lineno, f"{key} must be >= {minimum}, got {value}")
    return value


def parse_net(text: str) -> ParsedNet:
    """Parse plant text; raises :class:`PnetSyntaxError` with line numbers."""
    places: list[str] = []
    tokens: list[int] = []
    transitions: list[str] = []
    place_set: dict[str, int] = {}
    trans_set: dict[str, int] = {}
    arcs: list[tuple[int, str, str, int]] = []  # lineno, src, dst, weight
    gmec_lines: list[tuple[int, int, list[tuple[int, str]]]] = []
    final_mode: str | None = None
    explicit: list[str] = []
    explicit_lines: dict[str, int] = {}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        directive = fields[0]

        if directive == "place":
            if len(fields) < 2 or len(fields) > 3:
                raise PnetSyntaxError(lineno, "usage: place <id> [tokens=<n>]")
            name = fields[1]
            if name in place_set or name in trans_set:
                raise PnetSyntaxError(lineno, f"duplicate identifier {name!r}")
            count = _parse_kv(fields[2], "tokens", lineno, 0) if len(fields) == 3 else 0
            place_set[name] = len(places)
            places.append(name)
            tokens.append(count)

        elif directive == "trans":
            if len(fields) != 2:
                raise PnetSyntaxError(lineno, "usage: trans <id>")
            name = fields[1]
            if name in place_set or name in trans_set:
                raise PnetSyntaxError(lineno, f"duplicate identifier {name!r}")
            trans_set[name] = len(transitions)
            transitions.append(name)

        elif directive == "arc":
            if len(fields) not in (4, 5) or fields[2] != "->":
                raise PnetSyntaxError(lineno, "usage: arc <src> -> <dst> [w=<n>]")
            weight = _parse_kv(fields[4], "w", lineno, 1) if len(fields) == 5 else 1
            arcs.append((lineno, fields[1], fields[3], weight))

        elif directive == "gmec":
            rest = line[len("gmec"):].strip()
            if ":" not in rest:
                raise PnetSyntaxError(lineno, "usage: gmec <k> : <c>*<place> [+ ...]")
            k_text, terms_text = rest.split(":", 1)
            k = _parse_int(k_text.strip(), lineno, "constraint bound")
            terms: list[tuple[int, str]] = []
            for term in terms_text.split("+"):
                term = term.strip()
                if term.count("*") != 1:
                    raise PnetSyntaxError(lineno, f"term {term!r} must look like <c>*<place>")
                c_text, pname = (s.strip() for s in term.split("*"))
                terms.append((_parse_int(c_text, lineno, "coefficient"), pname))
            if not terms:
                raise PnetSyntaxError(lineno, "constraint needs at least one term")
            gmec_lines.append((lineno, k, terms))

        elif directive == "final":
            if len(fields) != 2 or fields[1] not in ("and", "or"):
                raise PnetSyntaxError(lineno, "usage: final and|or")
            if final_mode is not None:
                raise PnetSyntaxError(lineno, "duplicate final directive")
            final_mode = fields[1]

        elif directive == "explicit":
            rest = line[len("explicit"):].strip()
            names = [s.strip() for s in rest.replace(",", " ").split()]
            if not names:
                raise PnetSyntaxError(lineno, "usage: explicit <id>[,<id> ...]")
            for name in names:
                if name not in explicit_lines:
                    explicit_lines[name] = lineno
                    explicit.append(name)

        else:
            raise PnetSyntaxError(lineno, f"unknown directive {directive!r}")

    # second pass: resolve names now that everything is declared
    m, n = len(places), len(transitions)
    pre = [[0] * n for _ in range(m)]
    post = [[0] * n for _ in range(m)]
    seen_arcs: set[tuple[str, str]] = set()
    for lineno, src, dst, weight in arcs:
        if (src, dst) in seen_arcs:
            raise PnetSyntaxError(lineno, f"duplicate arc {src} -> {dst}")
        seen_arcs.add((src, dst))
        if src in place_set and dst in trans_set:
            pre[place_set[src]][trans_set[dst]] = weight
        elif src in trans_set and dst in place_set:
            post[place_set[dst]][trans_set[src]] = weight
        else:
            for name in (src, dst):
                if name not in place_set and name not in trans_set:
                    raise PnetSyntaxError(lineno, f"unknown identifier {name!r}")
            raise PnetSyntaxError(lineno,
                                  "arc must connect a place and a transition")

    if not gmec_lines:
        raise PnetSyntaxError(max(1, len(text.splitlines())),
                              "file defines no final-marking constraint (gmec)")
    gmecs = []
    for lineno, k, terms in gmec_lines:
        weights = [0] * m
        seen_places: set[str] = set()
        for c, pname in terms:
            if pname not in place_set:
                raise PnetSyntaxError(lineno, f"unknown place {pname!r} in constraint")
            if pname in seen_places:
                raise PnetSyntaxError(lineno, f"place {pname!r} repeated in constraint")
            seen_places.add(pname)
            weights[place_set[pname]] = c
        gmecs.append(Gmec(tuple(weights), k))

    if final_mode is None:
        final = (FinalSpec.single(gmecs[0]) if len(gmecs) == 1
                 else FinalSpec.all_of(gmecs))
    elif final_mode == "and":
        final = FinalSpec.all_of(gmecs)
    else:
        final = FinalSpec.any_of(gmecs)

    for name in explicit:
        if name not in trans_set:
            raise PnetSyntaxError(explicit_lines[name],
                                  f"explicit lists unknown transition {name!r}")

    net = PetriNet(places, transitions, pre, post)
    plant = Plant(net, Marking(tuple(tokens)), final)
    return ParsedNet(plant, tuple(explicit) if explicit else None)


def parse_net_file(path) -> ParsedNet:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_net(fh.read())


def serialize_net(plant: Plant, explicit: tuple[str, ...] | None = None) -> str:
    """Text form of a plant; parsing it back yields an equal plant."""
    net = plant.net
    lines = []
    for i, p in enumerate(net.places):
        count = plant.m0[i]
        lines.append(f"place {p} tokens={count}" if count else f"place {p}")
    for t in net.transitions:
        lines.append(f"trans {t}")
    for p in range(net.num_places):
        for t in range(net.num_transitions):
            w = int(net.pre[p, t])
            if w:
                suffix = f" w={w}" if w != 1 else ""
                lines.append(f"arc {net.places[p]} -> {net.transitions[t]}{suffix}")
    for p in range(net.num_places):
        for t in range(net.num_transitions):
            w = int(net.post[p, t])
            if w:
                suffix = f" w={w}" if w != 1 else ""
                lines.append(f"arc {net.transitions[t]} -> {net.places[p]}{suffix}")
    for g in plant.final.gmecs:
        terms = [f"{int(c)}*{net.places[p]}" for p, c in enumerate(g.weights) if c]
        if not terms:
            terms = [f"0*{net.places[0]}"]
        lines.append(f"gmec {g.bound} : " + " + ".join(terms))
    if plant.final.combinator in ("and", "or"):
        lines.append(f"final {plant.final.combinator}")
    if explicit:
        lines.append("explicit " + ",".join(explicit))
    return "\n".join(lines) + "\n"
