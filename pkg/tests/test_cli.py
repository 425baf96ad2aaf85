"""Command-line behavior: exit codes, reports, dumps, and the bench grid."""

import json

import pytest

from basisnet import brg_from_dict, build_brg, nets, parse_net, serialize_net
from basisnet.cli import main

DRAIN = """\
place a tokens=1
trans consume
arc a -> consume
gmec 0 : 1*a
"""


@pytest.fixture()
def workcell_file(tmp_path, workcell):
    path = tmp_path / "workcell.pnet"
    path.write_text(serialize_net(workcell), encoding="utf-8")
    return str(path)


@pytest.fixture()
def drain_file(tmp_path):
    path = tmp_path / "drain.pnet"
    path.write_text(DRAIN, encoding="utf-8")
    return str(path)


class TestVerify:
    def test_blocking_exits_1(self, workcell_file, capsys):
        assert main(["verify", workcell_file]) == 1
        out = capsys.readouterr().out
        assert "verdict: blocking" in out
        assert "witness: s3" in out
        assert "basis markings: 6, arcs: 11" in out

    def test_nonblocking_exits_0(self, drain_file, capsys):
        assert main(["verify", drain_file]) == 0
        assert "verdict: non-blocking" in capsys.readouterr().out

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert main(["verify", str(tmp_path / "nope.pnet")]) == 2
        assert "error:" in capsys.readouterr().err

    def test_syntax_error_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.pnet"
        bad.write_text("plonk\n", encoding="utf-8")
        assert main(["verify", str(bad)]) == 2
        assert "line 1" in capsys.readouterr().err

    def test_report_schema(self, workcell_file, tmp_path):
        report = tmp_path / "report.json"
        assert main(["verify", workcell_file, "--report", str(report)]) == 1
        d = json.loads(report.read_text(encoding="utf-8"))
        assert d["verdict"] == "blocking"
        assert d["partition"]["explicit"] == ["t3", "t4", "t6"]
        assert d["partition"]["implicit"] == ["t1", "t2", "t5", "t7"]
        assert d["brg"] == {"states": 6, "edges": 11, "final_basis": 5,
                            "dead_ends": [3]}
        assert d["witness"] == [0, 0, 0, 0, 1, 0]
        assert set(d["timings"]) == {"partition", "brg", "final_basis",
                                     "coreach", "total"}

    def test_witness_absent_when_nonblocking(self, drain_file, tmp_path):
        report = tmp_path / "report.json"
        assert main(["verify", drain_file, "--report", str(report)]) == 0
        d = json.loads(report.read_text(encoding="utf-8"))
        assert "witness" not in d

    def test_reports_identical_modulo_timings(self, workcell_file, tmp_path):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            main(["verify", workcell_file, "--report", str(p)])
        dicts = [json.loads(p.read_text(encoding="utf-8")) for p in paths]
        for d in dicts:
            d.pop("timings")
        assert json.dumps(dicts[0], sort_keys=True) == json.dumps(
            dicts[1], sort_keys=True)

    def test_explicit_flag_overrides_partition(self, workcell_file, capsys):
        code = main(["verify", workcell_file,
                     "--explicit", "t1,t2,t3,t4,t5,t6,t7"])
        assert code == 1
        out = capsys.readouterr().out
        assert "implicit: (none)" in out
        assert "basis markings: 16, arcs: 23" in out  # degenerates to the RG

    def test_partition_file(self, workcell_file, tmp_path, capsys):
        listing = tmp_path / "explicit.txt"
        listing.write_text("t3 t4\nt6  # comment\n", encoding="utf-8")
        assert main(["verify", workcell_file,
                     "--partition", str(listing)]) == 1
        assert "explicit: t3 t4 t6" in capsys.readouterr().out

    def test_caps_flag_exits_2_when_hit(self, workcell_file, capsys):
        assert main(["verify", workcell_file, "--caps", "brg_states=2"]) == 2
        assert "brg_states cap of 2 exceeded" in capsys.readouterr().err

    def test_bad_caps_value_exits_2(self, workcell_file, capsys):
        assert main(["verify", workcell_file, "--caps", "bogus=1"]) == 2
        assert "unknown cap" in capsys.readouterr().err


class TestBrg:
    def test_json_dump_round_trips(self, workcell_file, workcell, tmp_path,
                                   capsys):
        out_json = tmp_path / "graph.json"
        assert main(["brg", workcell_file, "--json", str(out_json)]) == 0
        capsys.readouterr()
        blob = json.loads(out_json.read_text(encoding="utf-8"))
        assert brg_from_dict(blob, workcell) == build_brg(workcell)

    def test_dot_output(self, workcell_file, tmp_path, capsys):
        out_dot = tmp_path / "graph.dot"
        assert main(["brg", workcell_file, "--dot", str(out_dot)]) == 0
        text = out_dot.read_text(encoding="utf-8")
        assert text.startswith("digraph") and text.rstrip().endswith("}")
        assert "t3 / [0 1 0 0]" in text

    def test_summary_line(self, workcell_file, capsys):
        assert main(["brg", workcell_file]) == 0
        out = capsys.readouterr().out
        assert "basis markings: 6, arcs: 11" in out


class TestRg:
    def test_exit_codes_follow_verdict(self, workcell_file, drain_file,
                                       capsys):
        assert main(["rg", workcell_file]) == 1
        out = capsys.readouterr().out
        assert "states: 16, edges: 23" in out
        assert "verdict: blocking" in out
        assert main(["rg", drain_file]) == 0
        assert "verdict: non-blocking" in capsys.readouterr().out

    def test_cap_flag(self, workcell_file, capsys):
        assert main(["rg", workcell_file, "--cap", "4"]) == 2
        assert "rg_states cap of 4 exceeded" in capsys.readouterr().err


class TestBench:
    def test_grid_rows_and_report(self, drain_file, tmp_path, capsys):
        report = tmp_path / "rows.json"
        code = main(["bench", drain_file, "--scale", "a=1,2", "--k", "0,1",
                     "--oracle", "on", "--report", str(report)])
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("non-blocking") == 4
        rows = json.loads(report.read_text(encoding="utf-8"))
        assert len(rows) == 4
        for row in rows:
            assert row["agree"] is True
            assert row["ratio"] <= 1.0
            assert set(row) >= {"params", "k", "verdict", "states", "edges",
                                "final_basis", "time", "rg_states"}

    def test_error_row_reported_and_exit_2(self, drain_file, tmp_path,
                                           capsys):
        report = tmp_path / "rows.json"
        code = main(["bench", drain_file, "--scale", "ghost=1",
                     "--report", str(report)])
        assert code == 2
        assert "error:" in capsys.readouterr().out
        rows = json.loads(report.read_text(encoding="utf-8"))
        assert len(rows) == 1 and "unknown place" in rows[0]["error"]

    def test_verdict_flips_with_scale(self, tmp_path, capsys):
        # two tokens cannot drain through a one-shot path: k=0 unreachable
        text = ("place a tokens=1\nplace b\ntrans go\narc a -> go\n"
                "arc go -> b\ngmec 0 : 1*a + 1*b\n")
        f = tmp_path / "oneshot.pnet"
        f.write_text(text, encoding="utf-8")
        code = main(["bench", str(f), "--scale", "a=0,1", "--oracle", "on"])
        assert code == 0
        out = capsys.readouterr().out
        lines = [ln for ln in out.splitlines() if ln.startswith("a=")]
        assert len(lines) == 2
        assert "non-blocking" in lines[0]
        assert "blocking" in lines[1] and "non-blocking" not in lines[1]


def test_bundled_nets_parse_and_verify_flags(tmp_path):
    # the packaged example files all parse and carry partition hints only
    # where the derivation needs forcing
    for name in nets.names():
        parsed = parse_net(nets.net_text(name))
        assert parsed.plant.net.num_places > 0
