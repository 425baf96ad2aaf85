"""The non-blockingness decision: final basis set, dead ends,
coreachability, and the end-to-end verdict."""

import pytest

from basisnet import (FinalSpec, Gmec, Marking, PartitionError, PetriNet,
                      Plant, build_brg, build_rg, check_nonblocking,
                      coreachable_states, dead_basis_markings,
                      derive_ci_partition, final_basis_set, make_partition,
                      rg_nonblocking)


@pytest.fixture(scope="module")
def wc_verdict(workcell):
    return check_nonblocking(workcell)


class TestWorkcellVerdict:
    def test_blocking_with_expected_witness(self, wc_verdict):
        v = wc_verdict
        assert not v.nonblocking
        assert v.blocking_witness == 3
        assert v.witness_marking == Marking.of([0, 0, 0, 0, 1, 0])

    def test_final_basis_and_dead_ends(self, wc_verdict):
        assert sorted(wc_verdict.final_basis) == [0, 1, 2, 4, 5]
        assert wc_verdict.dead_end_states == (3,)

    def test_timing_keys(self, wc_verdict):
        assert set(wc_verdict.timings) == {"partition", "brg", "final_basis",
                                           "coreach", "total"}
        assert all(t >= 0 for t in wc_verdict.timings.values())

    def test_stats_shape(self, wc_verdict):
        s = wc_verdict.stats()
        assert s["states"] == 6 and s["edges"] == 11
        assert s["final_basis"] == 5 and s["dead_ends"] == 1

    def test_witness_present_iff_blocking(self, wc_verdict):
        from basisnet.verify import Verdict
        with pytest.raises(ValueError, match="witness"):
            Verdict(nonblocking=True, brg=wc_verdict.brg,
                    final_basis=(), dead_end_states=(),
                    blocking_witness=0, timings={})


class TestGraphQueries:
    def test_final_basis_set_definition(self, workcell):
        # a basis marking is in the set iff its saturated closure meets
        # the final set, i.e. the i-max marking satisfies the constraint
        from basisnet import i_max_marking
        brg = build_brg(workcell)
        part = brg.partition
        expected = tuple(i for i, m in enumerate(brg.states())
                         if workcell.final.is_final(i_max_marking(part, m)))
        assert final_basis_set(brg) == expected

    def test_coreachable_states(self, workcell):
        brg = build_brg(workcell)
        reach_final = coreachable_states(brg, final_basis_set(brg))
        assert reach_final == [True, True, True, False, True, True]
        assert coreachable_states(brg, ()) == [False] * 6
        everything = coreachable_states(brg, tuple(range(6)))
        assert everything == [True] * 6

    def test_dead_basis_markings_are_final_check_exempt(self, workcell):
        brg = build_brg(workcell)
        assert dead_basis_markings(brg) == (3,)


class TestPartitionRequirements:
    def test_non_ci_partition_rejected(self):
        # implicit transition u increases the constraint weight on p2
        net = PetriNet(["p1", "p2"], ["u"], [[1], [0]], [[0], [1]])
        final = FinalSpec.single(Gmec((0, 1), 0))
        part = make_partition(net, final, [])
        assert not part.flags.non_increasing
        plant = Plant(net, Marking.of([1, 0]), final)
        with pytest.raises(PartitionError):
            check_nonblocking(plant, part)

    def test_explicit_choice_does_not_change_verdict(self, suite200):
        for plant in suite200[:25]:
            auto = check_nonblocking(plant)
            every = check_nonblocking(
                plant, make_partition(plant.net, plant.final,
                                      range(plant.net.num_transitions)))
            assert auto.nonblocking == every.nonblocking


class TestAgainstOracle:
    def test_small_differential_sample(self, suite200):
        for plant in suite200[:50]:
            ours = check_nonblocking(plant)
            truth = rg_nonblocking(build_rg(plant), plant.final)
            assert ours.nonblocking == truth.nonblocking

    def test_witness_is_truly_blocking(self, workcell):
        # no marking in the witness's implicit closure can reach a final
        # marking: cross-check on the full graph
        v = check_nonblocking(workcell)
        rg = build_rg(workcell)
        truth = rg_nonblocking(rg, workcell.final)
        assert not truth.nonblocking
        i = rg.index_of(v.witness_marking)
        assert i is not None
        mark = [False] * rg.num_states
        for f in truth.final_states:
            mark[f] = True
        import collections
        preds = [[] for _ in range(rg.num_states)]
        for s, _t, d in rg.edges:
            preds[d].append(s)
        queue = collections.deque(truth.final_states)
        while queue:
            x = queue.popleft()
            for p in preds[x]:
                if not mark[p]:
                    mark[p] = True
                    queue.append(p)
        assert not mark[i]
