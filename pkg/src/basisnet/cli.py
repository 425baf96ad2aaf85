"""Command-line front end.

Subcommands: ``verify`` (decide non-blockingness), ``brg`` (build and
dump the basis graph), ``rg`` (exhaustive ground-truth check), ``bench``
(scaling table over initial-marking / bound grids).

Exit codes for verify and rg: 0 non-blocking, 1 blocking, 2 error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time

from .basis import derive_ci_partition, make_partition
from .brg import build_brg, export_dot
from .caps import Caps, resolve
from .errors import BasisNetError
from .net import FinalSpec, Gmec, Marking, Plant
from .oracle import build_rg, rg_nonblocking
from .pnet import ParsedNet, parse_net_file
from .verify import Verdict, check_nonblocking, dead_basis_markings, final_basis_set

EXIT_NONBLOCKING = 0
EXIT_BLOCKING = 1
EXIT_ERROR = 2


def _load_caps(args) -> Caps:
    spec = getattr(args, "caps", None)
    if spec:
        return Caps.from_env(spec)
    return resolve(None)


def _read_explicit_file(path: str) -> list[str]:
    names: list[str] = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                names.extend(s for s in line.replace(",", " ").split() if s)
    return names


def _resolve_partition(parsed: ParsedNet, args):
    plant = parsed.plant
    explicit_flag = getattr(args, "explicit", None)
    if explicit_flag:
        names = [s for s in explicit_flag.replace(",", " ").split() if s]
        return make_partition(plant.net, plant.final, names)
    partition_arg = getattr(args, "partition", "auto") or "auto"
    if partition_arg != "auto":
        return make_partition(plant.net, plant.final,
                              _read_explicit_file(partition_arg))
    return derive_ci_partition(plant.net, plant.final,
                               forced=parsed.explicit or ())


def _report_dict(verdict: Verdict) -> dict:
    part = verdict.brg.partition
    report = {
        "verdict": "non-blocking" if verdict.nonblocking else "blocking",
        "partition": {
            "explicit": list(part.explicit_names()),
            "implicit": list(part.implicit_names()),
        },
        "brg": {
            "states": verdict.brg.num_states,
            "edges": verdict.brg.num_edges,
            "final_basis": len(verdict.final_basis),
            "dead_ends": list(verdict.dead_end_states),
        },
    }
    if verdict.blocking_witness is not None:
        report["witness"] = list(verdict.witness_marking.tokens)
    report["timings"] = {k: round(v, 6) for k, v in verdict.timings.items()}
    return report


def _print_verdict(verdict: Verdict):
    part = verdict.brg.partition
    print(f"verdict: {'non-blocking' if verdict.nonblocking else 'blocking'}")
    print("explicit:", " ".join(part.explicit_names()) or "(none)")
    print("implicit:", " ".join(part.implicit_names()) or "(none)")
    print(f"basis markings: {verdict.brg.num_states}, arcs: {verdict.brg.num_edges}, "
          f"final basis: {len(verdict.final_basis)}, "
          f"dead ends: {len(verdict.dead_end_states)}")
    if verdict.blocking_witness is not None:
        print(f"witness: s{verdict.blocking_witness} {verdict.witness_marking}")
    t = verdict.timings
    print(f"time: {t['total']:.3f}s (partition {t['partition']:.3f}, "
          f"brg {t['brg']:.3f}, final {t['final_basis']:.3f}, "
          f"coreach {t['coreach']:.3f})")


def cmd_verify(args) -> int:
    caps = _load_caps(args)
    parsed = parse_net_file(args.file)
    partition = _resolve_partition(parsed, args)
    verdict = check_nonblocking(parsed.plant, partition, caps)
    _print_verdict(verdict)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(_report_dict(verdict), fh, indent=2)
            fh.write("\n")
    return EXIT_NONBLOCKING if verdict.nonblocking else EXIT_BLOCKING


def cmd_brg(args) -> int:
    caps = _load_caps(args)
    parsed = parse_net_file(args.file)
    partition = _resolve_partition(parsed, args)
    brg = build_brg(parsed.plant, partition, caps)
    finals: tuple[int, ...] = ()
    dead: tuple[int, ...] | None = None
    if partition.flags.ci:
        finals = final_basis_set(brg, caps)
        dead = dead_basis_markings(brg, caps)
    print(f"basis markings: {brg.num_states}, arcs: {brg.num_edges}")
    print("explicit:", " ".join(partition.explicit_names()) or "(none)")
    print("implicit:", " ".join(partition.implicit_names()) or "(none)")
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(export_dot(brg, finals, dead))
        print(f"dot written to {args.dot}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(brg.to_json())
            fh.write("\n")
        print(f"json written to {args.json}")
    return EXIT_NONBLOCKING


def cmd_rg(args) -> int:
    caps = _load_caps(args)
    parsed = parse_net_file(args.file)
    cap = args.cap if args.cap else caps.rg_states
    rg = build_rg(parsed.plant, cap)
    verdict = rg_nonblocking(rg, parsed.plant.final)
    print(f"states: {rg.num_states}, edges: {rg.num_edges}, "
          f"dead: {len(rg.dead)}, final: {len(verdict.final_states)}")
    print(f"verdict: {'non-blocking' if verdict.nonblocking else 'blocking'}")
    if verdict.witness is not None:
        print(f"witness: {verdict.witness_marking(rg)}")
    return EXIT_NONBLOCKING if verdict.nonblocking else EXIT_BLOCKING


def _parse_scale(items: list[str]) -> list[tuple[str, list[int]]]:
    out = []
    for item in items:
        name, sep, vals = item.partition("=")
        if not sep or not name:
            raise BasisNetError(f"bad --scale entry {item!r}, expected place=v1,v2,...")
        try:
            values = [int(v) for v in vals.split(",") if v != ""]
        except ValueError:
            raise BasisNetError(f"bad --scale values in {item!r}") from None
        if not values:
            raise BasisNetError(f"--scale entry {item!r} lists no values")
        out.append((name, values))
    return out


def _scaled_plant(plant: Plant, assignment: dict[str, int], k: int | None) -> Plant:
    net = plant.net
    tokens = list(plant.m0.tokens)
    for name, value in assignment.items():
        tokens[net.place_index(name)] = value
    final = plant.final
    if k is not None:
        gmecs = tuple(Gmec(g.weights, k) for g in final.gmecs)
        final = FinalSpec(final.combinator, gmecs)
    return Plant(net, Marking(tuple(tokens)), final)


def cmd_bench(args) -> int:
    caps = _load_caps(args)
    parsed = parse_net_file(args.file)
    scales = _parse_scale(args.scale or [])
    ks: list[int | None]
    if args.k:
        ks = [int(v) for v in args.k.split(",") if v != ""]
    else:
        ks = [None]
    grids = [[(name, v) for v in values] for name, values in scales]
    rows = []
    header = ["params", "k", "verdict", "basis", "arcs", "final", "time(s)"]
    if args.oracle == "on":
        header += ["rg", "ratio", "agree"]
    print("  ".join(header))
    failed = False
    for combo in itertools.product(*grids) if grids else [()]:
        assignment = dict(combo)
        for k in ks:
            label = ",".join(f"{n}={v}" for n, v in combo) or "-"
            k_label = str(k) if k is not None else "-"
            row: dict = {"params": assignment, "k": k}
            try:
                plant = _scaled_plant(parsed.plant, assignment, k)
                partition = derive_ci_partition(plant.net, plant.final,
                                                forced=parsed.explicit or ())
                verdict = check_nonblocking(plant, partition, caps)
                row.update({
                    "verdict": "non-blocking" if verdict.nonblocking else "blocking",
                    "states": verdict.brg.num_states,
                    "edges": verdict.brg.num_edges,
                    "final_basis": len(verdict.final_basis),
                    "time": round(verdict.timings["total"], 6),
                })
                cells = [label, k_label, row["verdict"], str(row["states"]),
                         str(row["edges"]), str(row["final_basis"]),
                         f"{row['time']:.3f}"]
                if args.oracle == "on":
                    t0 = time.perf_counter()
                    rg = build_rg(plant, caps.rg_states)
                    oracle_verdict = rg_nonblocking(rg, plant.final)
                    row.update({
                        "rg_states": rg.num_states,
                        "rg_time": round(time.perf_counter() - t0, 6),
                        "rg_verdict": ("non-blocking" if oracle_verdict.nonblocking
                                       else "blocking"),
                        "ratio": round(verdict.brg.num_states / rg.num_states, 4),
                        "agree": oracle_verdict.nonblocking == verdict.nonblocking,
                    })
                    cells += [str(row["rg_states"]), f"{row['ratio']:.3f}",
                              "yes" if row["agree"] else "NO"]
                print("  ".join(cells))
            except (BasisNetError, KeyError, OSError) as exc:
                failed = True
                row["error"] = str(exc)
                print(f"{label}  {k_label}  error: {exc}")
            rows.append(row)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    return EXIT_ERROR if failed else EXIT_NONBLOCKING


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("file", help="plant description (.pnet)")
    p.add_argument("--caps", default=None,
                   help="cap overrides, e.g. rg_states=50000,brg_states=100000")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="basisnet",
        description="Non-blockingness of bounded nets via basis reachability.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="decide non-blockingness")
    _add_common(p)
    p.add_argument("--partition", default="auto",
                   help="'auto' or a file listing the explicit transitions")
    p.add_argument("--explicit", default=None,
                   help="comma-separated explicit transitions (overrides --partition)")
    p.add_argument("--report", default=None, help="write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brg", help="build the basis reachability graph")
    _add_common(p)
    p.add_argument("--partition", default="auto",
                   help="'auto' or a file listing the explicit transitions")
    p.add_argument("--explicit", default=None,
                   help="comma-separated explicit transitions")
    p.add_argument("--dot", default=None, help="write GraphViz text here")
    p.add_argument("--json", default=None, help="write the graph dump here")
    p.set_defaults(func=cmd_brg)

    p = sub.add_parser("rg", help="exhaustive reachability ground truth")
    _add_common(p)
    p.add_argument("--cap", type=int, default=None,
                   help="state cap for the exhaustive build")
    p.set_defaults(func=cmd_rg)

    p = sub.add_parser("bench", help="scaling table over marking/bound grids")
    _add_common(p)
    p.add_argument("--scale", nargs="*", default=[],
                   metavar="PLACE=V1,V2",
                   help="initial-token grid per place; rows are the product")
    p.add_argument("--k", default=None,
                   help="comma-separated bound values applied to every constraint")
    p.add_argument("--oracle", choices=("on", "off"), default="off",
                   help="also run the exhaustive check per row")
    p.add_argument("--report", default=None, help="write JSON rows here")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BasisNetError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
