"""Acceptance gate: one test per shipped criterion, each printing a
single PASS/FAIL line with the observed values.

The lines bypass pytest's output capture so they always appear in the
run log, pass or fail.
"""

import time

import pytest

from basisnet import (FinalSpec, Gmec, Marking, Plant, brute_implicit_reach,
                      build_brg, build_rg, check_nonblocking,
                      derive_ci_partition, i_max_marking, implicit_topo_orders,
                      is_dead, make_partition, max_ifv, min_explanations,
                      rg_nonblocking)


@pytest.fixture(autouse=True)
def _emit_uncaptured(capfd):
    global _capfd
    _capfd = capfd
    yield
    _capfd = None

EXPECTED_STATES = {
    (1, 1, 0, 0, 0, 0), (1, 0, 0, 1, 0, 0), (1, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 1, 0), (0, 0, 0, 2, 0, 0), (0, 0, 0, 1, 0, 0),
}

EXPECTED_TRIPLES = {
    ((1, 1, 0, 0, 0, 0), "t3", (0, 1, 0, 0), (1, 0, 0, 1, 0, 0)),
    ((1, 1, 0, 0, 0, 0), "t4", (1, 2, 0, 0), (1, 0, 0, 0, 0, 0)),
    ((1, 1, 0, 0, 0, 0), "t6", (1, 2, 0, 0), (0, 0, 0, 0, 1, 0)),
    ((1, 0, 0, 1, 0, 0), "t3", (1, 1, 0, 0), (0, 0, 0, 2, 0, 0)),
    ((1, 0, 0, 1, 0, 0), "t4", (2, 2, 1, 0), (1, 0, 0, 0, 0, 0)),
    ((1, 0, 0, 1, 0, 0), "t6", (2, 2, 1, 0), (0, 0, 0, 0, 1, 0)),
    ((1, 0, 0, 0, 0, 0), "t3", (1, 1, 0, 0), (0, 0, 0, 1, 0, 0)),
    ((0, 0, 0, 2, 0, 0), "t3", (1, 1, 1, 0), (0, 0, 0, 2, 0, 0)),
    ((0, 0, 0, 2, 0, 0), "t4", (2, 2, 2, 0), (1, 0, 0, 0, 0, 0)),
    ((0, 0, 0, 2, 0, 0), "t6", (2, 2, 2, 0), (0, 0, 0, 0, 1, 0)),
    ((0, 0, 0, 1, 0, 0), "t3", (1, 1, 1, 0), (0, 0, 0, 1, 0, 0)),
}


def _emit(num: int, ok: bool, detail: str):
    line = f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    with _capfd.disabled():
        print(line, flush=True)
    assert ok, line


def _with_tokens(plant: Plant, assignment: dict[str, int],
                 k: int | None = None) -> Plant:
    tokens = list(plant.m0.tokens)
    for name, value in assignment.items():
        tokens[plant.net.place_index(name)] = value
    final = plant.final
    if k is not None:
        final = FinalSpec(final.combinator,
                          tuple(Gmec(g.weights, k) for g in final.gmecs))
    return Plant(plant.net, Marking(tuple(tokens)), final)


def test_01_small_cell_graph_golden(workcell):
    t0 = time.perf_counter()
    part = derive_ci_partition(workcell.net, workcell.final)
    brg = build_brg(workcell, part)
    elapsed = time.perf_counter() - t0
    names = workcell.net.transitions
    explicit = tuple(names[t] for t in part.explicit)
    states = {tuple(int(v) for v in m) for m in brg.states()}
    idx = [tuple(int(v) for v in m) for m in brg.states()]
    triples = {(idx[s], names[ev.transition], ev.counts, idx[d])
               for s, ev, d in brg.edges()}
    ok = (explicit == ("t3", "t4", "t6") and brg.num_states == 6
          and states == EXPECTED_STATES and brg.num_edges == 11
          and triples == EXPECTED_TRIPLES and elapsed < 1.0)
    _emit(1, ok, f"explicit={explicit}, {brg.num_states} basis markings, "
                 f"{brg.num_edges} arcs, all golden, {elapsed * 1000:.0f} ms")


def test_02_final_basis_and_witness_golden(workcell):
    t0 = time.perf_counter()
    verdict = check_nonblocking(workcell)
    elapsed = time.perf_counter() - t0
    ok = (sorted(verdict.final_basis) == [0, 1, 2, 4, 5]
          and not verdict.nonblocking
          and verdict.blocking_witness == 3
          and verdict.witness_marking == Marking.of([0, 0, 0, 0, 1, 0])
          and elapsed < 1.0)
    _emit(2, ok, f"final basis {{0,1,2,4,5}}, blocking witness s3="
                 f"{verdict.witness_marking}, {elapsed * 1000:.0f} ms")


def test_03_minimal_explanation_golden(workcell):
    part = derive_ci_partition(workcell.net, workcell.final)
    net = workcell.net
    got = {name: min_explanations(part, workcell.m0,
                                  net.transition_index(name))
           for name in ("t3", "t4", "t6")}
    ok = (got["t3"] == ((0, 1, 0, 0),)
          and got["t4"] == ((1, 2, 0, 0),)
          and got["t6"] == ((1, 2, 0, 0),))
    _emit(3, ok, f"t3 {got['t3']}, t4 {got['t4']}, t6 {got['t6']}")


def test_04_differential_suite_with_structural_properties(suite200):
    t0 = time.perf_counter()
    agree = 0
    prop2 = prop7 = prop8 = 0
    for plant in suite200:
        part = derive_ci_partition(plant.net, plant.final)
        verdict = check_nonblocking(plant, part)
        rg = build_rg(plant)
        truth = rg_nonblocking(rg, plant.final)
        if verdict.nonblocking == truth.nonblocking:
            agree += 1

        closures = [brute_implicit_reach(part, m)
                    for m in verdict.brg.states()]
        union = set().union(*closures)
        if union == set(rg.states):
            prop2 += 1

        good7 = True
        for m, closure in zip(verdict.brg.states(), closures):
            meets = any(plant.final.is_final(Marking(x)) for x in closure)
            if meets != plant.final.is_final(i_max_marking(part, m)):
                good7 = False
                break
        if good7:
            prop7 += 1

        good8 = True
        for s in verdict.brg.dead_ends():
            m = verdict.brg.state(s)
            dead = {x for x in closures[s] if is_dead(plant.net, Marking(x))}
            if dead != {tuple(i_max_marking(part, m).tokens)}:
                good8 = False
                break
        if good8:
            prop8 += 1
    elapsed = time.perf_counter() - t0
    n = len(suite200)
    ok = agree == prop2 == prop7 == prop8 == n and elapsed < 300.0
    _emit(4, ok, f"verdict agreement {agree}/{n}, reach-union {prop2}/{n}, "
                 f"finality-via-saturation {prop7}/{n}, "
                 f"unique-dead-marking {prop8}/{n}, {elapsed:.1f} s")


def test_05_saturation_vector_order_invariant(suite200, workcell,
                                              assembly_parsed,
                                              hospital_parsed):
    bundled = [workcell, assembly_parsed.plant, hospital_parsed.plant]
    plants_checked = 0
    with_three = 0
    ok = True
    for plant in list(suite200) + bundled:
        part = derive_ci_partition(plant.net, plant.final)
        if not part.num_implicit:
            continue
        plants_checked += 1
        orders = implicit_topo_orders(part, want=3)
        if len(orders) >= 3:
            with_three += 1
        probes = [plant.m0]
        if plant.net.num_places <= 8:
            brg = build_brg(plant, part)
            probes += list(brg.states())[:5]
        for m in probes:
            if len({max_ifv(part, m, order=o) for o in orders}) != 1:
                ok = False
    _emit(5, ok, f"{plants_checked} plants with implicit transitions "
                 f"(suite plus the three bundled nets), {with_three} "
                 f"admitting >=3 distinct orders, saturation vector "
                 f"identical across all orders at every probe")


def test_06_assembly_scaling_runs(assembly_parsed):
    plant = assembly_parsed.plant
    runs = [({"p1": 1, "p16": 1}, 4, False),
            ({"p1": 1, "p16": 2}, 4, False),
            ({"p1": 2, "p16": 2}, 4, True)]
    reference = [(1966, 604), (12577, 2145), (76808, 7718)]
    ok = True
    cells = []
    for (assignment, k, expect_blocking), (ref_rg, ref_brg) in zip(runs,
                                                                   reference):
        scaled = _with_tokens(plant, assignment, k)
        verdict = check_nonblocking(scaled)
        rg = build_rg(scaled)
        truth = rg_nonblocking(rg, scaled.final)
        if verdict.nonblocking == expect_blocking:
            ok = False
        if verdict.nonblocking != truth.nonblocking:
            ok = False
        cells.append(f"{'x'.join(str(v) for v in assignment.values())}: "
                     f"{'blocking' if not verdict.nonblocking else 'non-blocking'}"
                     f" agrees, RG={rg.num_states} (ref {ref_rg}), "
                     f"BRG={verdict.brg.num_states} (ref {ref_brg})")
    _emit(6, ok, "verdicts and graph-vs-oracle agreement on all three runs; "
                 "state counts reported, not asserted -- " + "; ".join(cells))


def test_07_admission_flow_bounds(hospital_parsed):
    plant = hospital_parsed.plant
    t0 = time.perf_counter()
    tight = check_nonblocking(plant)  # bound 6 as shipped
    t_build6 = time.perf_counter() - t0
    relaxed_plant = _with_tokens(plant, {}, k=8)
    t0 = time.perf_counter()
    relaxed = check_nonblocking(relaxed_plant)
    t_build8 = time.perf_counter() - t0
    ok = (not tight.nonblocking and relaxed.nonblocking
          and len(relaxed.final_basis) == relaxed.brg.num_states)

    # the full graph overflows the default oracle cap, so the
    # graph-vs-oracle agreement runs at reduced admission counts
    diffs = []
    for tokens in (1, 2):
        scaled = _with_tokens(plant, {p: tokens
                                      for p in ("p1", "p11", "p18", "p19")})
        for k in (6, 8):
            variant = _with_tokens(scaled, {}, k=k)
            mine = check_nonblocking(variant)
            truth = rg_nonblocking(build_rg(variant), variant.final)
            diffs.append(mine.nonblocking == truth.nonblocking)
    ok = ok and all(diffs)
    _emit(7, ok,
          f"bound 6 blocking, bound 8 non-blocking with every basis marking "
          f"final; graph-vs-oracle agreement at reduced admissions "
          f"{sum(diffs)}/{len(diffs)}; reported (not asserted): "
          f"BRG states {tight.brg.num_states} (ref 3863), final basis "
          f"{len(tight.final_basis)} at bound 6 (ref 818) / "
          f"{len(relaxed.final_basis)} at bound 8 (ref 3863), build "
          f"{t_build6:.1f} s and {t_build8:.1f} s (ref 33 s; oracle graph "
          f"reported as over-time in the reference)")


def test_08_all_explicit_degenerates_to_full_graph(suite200):
    checked = 0
    ok = True
    for plant in suite200:
        part = make_partition(plant.net, plant.final,
                              range(plant.net.num_transitions))
        brg = build_brg(plant, part)
        rg = build_rg(plant)
        to_rg = [rg.index_of(m) for m in brg.states()]
        bijection = (brg.num_states == rg.num_states
                     and None not in to_rg
                     and len(set(to_rg)) == rg.num_states
                     and brg.num_edges == rg.num_edges
                     and {(to_rg[s], ev.transition, to_rg[d])
                          for s, ev, d in brg.edges()} == set(rg.edges))
        verdict = check_nonblocking(plant, part)
        truth = rg_nonblocking(rg, plant.final)
        auto = check_nonblocking(plant)
        same = (verdict.nonblocking == truth.nonblocking
                == auto.nonblocking)
        if not (bijection and same):
            ok = False
            break
        checked += 1
    _emit(8, ok, f"state/edge bijection with the exhaustive graph and "
                 f"unchanged verdict on {checked}/{len(suite200)} plants")
