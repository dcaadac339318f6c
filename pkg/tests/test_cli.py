import json
import math

import pytest

from speedscale.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def instance_file(tmp_path):
    path = tmp_path / "two_jobs.jsonl"
    path.write_text('{"id":0,"arrival":1,"value":4.0,"deadline":1}\n'
                    '{"id":1,"arrival":1,"value":4.0,"deadline":"inf"}\n')
    return str(path)


class TestSimulate:
    def test_csv_row(self, capsys, instance_file):
        code, out, _ = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "min-lcr",
                               "--instance", instance_file, "--no-header")
        assert code == 0
        header, row = out.strip().splitlines()
        assert header == "label,alpha,policy,off,alg,ratio,max_lcr"
        cells = row.split(",")
        assert cells[3] == "6" and cells[4] == "4" and cells[5] == "1.5"

    def test_json_has_ledger(self, capsys, instance_file):
        code, out, _ = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "sim-lcr",
                               "--instance", instance_file, "--format", "json")
        assert code == 0
        obj = json.loads(out)
        assert obj["policy"] == "sim-lcr"
        assert obj["per_slot_lcr"][0]["slot"] == 1

    def test_unknown_policy_exits_2(self, capsys, instance_file):
        code, _, err = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "foo",
                               "--instance", instance_file)
        assert code == 2
        assert "min-lcr" in err and "sim-lcr" in err and "greedy" in err

    def test_malformed_line_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id":0,"arrival":1,"value":1.0,"deadline":1}\n{oops\n')
        code, _, err = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "greedy",
                               "--instance", str(bad))
        assert code == 2 and "line 2" in err

    def test_empty_file_ratio_one(self, capsys, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        code, out, _ = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "min-lcr",
                               "--instance", str(empty), "--no-header")
        assert code == 0
        row = out.strip().splitlines()[1].split(",")
        assert row[3] == "0" and row[4] == "0" and row[5] == "1"

    def test_requires_exactly_one_source(self, capsys, instance_file):
        code, _, err = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "greedy")
        assert code == 2 and "--instance or --gen" in err
        code, _, _ = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "greedy",
                             "--instance", instance_file, "--gen", "random:n=3")
        assert code == 2

    def test_generator_specs(self, capsys):
        for gen in ("random:n=6", "heavy-tail:n=6", "alpha2-lb:z=5,k=2"):
            code, out, err = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "greedy",
                                     "--gen", gen, "--no-header")
            assert code == 0, (gen, err)
        code, _, _ = run_cli(capsys, "simulate", "--alpha", "3", "--policy", "greedy",
                             "--gen", "sqrt2-lb:k=1", "--no-header")
        assert code == 0

    def test_bad_generator_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "greedy",
                             "--gen", "alpha2-lb")
        assert code == 2
        code, _, _ = run_cli(capsys, "simulate", "--alpha", "2", "--policy", "greedy",
                             "--gen", "wat:z=1")
        assert code == 2

    def test_alpha_below_one_exits_2(self, capsys, instance_file):
        code, _, _ = run_cli(capsys, "simulate", "--alpha", "0.5", "--policy", "greedy",
                             "--instance", instance_file)
        assert code == 2


class TestLowerbound:
    def test_summary_row_near_phi_plus_1(self, capsys):
        code, out, _ = run_cli(capsys, "lowerbound", "--alpha", "2",
                               "--z-max", "400", "--x-grid", "32", "--no-header")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "alpha,z,x,k_star,value"
        summary = [l for l in lines[1:] if l.split(",")[1] == ""]
        assert len(summary) == 1
        best = float(summary[0].split(",")[4])
        assert abs(best - 2.618033988) < 2e-3

    def test_multiple_alphas_above_sqrt2_bound(self, capsys):
        code, out, _ = run_cli(capsys, "lowerbound", "--alpha", "2.5,3",
                               "--z-max", "40", "--x-grid", "32", "--no-header")
        assert code == 0
        bests = [float(l.split(",")[4]) for l in out.strip().splitlines()[1:]
                 if l.split(",")[1] == ""]
        assert len(bests) == 2
        assert all(b >= math.sqrt(2) + 1 - 1e-6 for b in bests)

    def test_empty_alpha_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, "lowerbound", "--alpha", ",")
        assert code == 2

    def test_alpha_below_two_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, "lowerbound", "--alpha", "1.5")
        assert code == 2

    def test_byte_identical_without_header(self, capsys, tmp_path):
        args = ("lowerbound", "--alpha", "2.5", "--z-max", "20", "--x-grid", "16",
                "--no-header")
        _, out1, _ = run_cli(capsys, *args)
        _, out2, _ = run_cli(capsys, *args)
        assert out1 == out2

    def test_header_line_present_by_default(self, capsys):
        code, out, _ = run_cli(capsys, "lowerbound", "--alpha", "2.5",
                               "--z-max", "5", "--x-grid", "8")
        assert code == 0
        assert out.startswith("# speedscale lowerbound generated=")


class TestVerify:
    def test_mincran_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "mincran")
        assert code == 0 and "[PASS] mincran" in out

    def test_injected_delta_fails_naming_check(self, capsys):
        code, out, err = run_cli(capsys, "verify", "mincran", "--inject-delta", "0.01")
        assert code == 1
        assert "mincran-minimizer" in out + err

    def test_quick_suites(self, capsys):
        for suite, extra in (("hbound", ()), ("alpha2lcr", ()),
                             ("subadd", ("--samples", "60")),
                             ("oracle", ("--samples", "60"))):
            code, out, _ = run_cli(capsys, "verify", suite, *extra)
            assert code == 0, (suite, out)
            assert f"[PASS] {suite}" in out


class TestGame:
    def test_alpha2_prediction_matches(self, capsys):
        code, out, _ = run_cli(capsys, "game", "--alpha", "2", "--z", "50",
                               "--policy", "fixed:31")
        assert code == 0
        fields = dict(l.split(": ") for l in out.strip().splitlines())
        assert fields["slot1_count"] == "31"
        assert fields["ratio"] == fields["predicted"]

    def test_sqrt2_game(self, capsys):
        code, out, _ = run_cli(capsys, "game", "--alpha", "3", "--sqrt2",
                               "--policy", "greedy")
        assert code == 0
        fields = dict(l.split(": ") for l in out.strip().splitlines())
        assert abs(float(fields["ratio"]) - (math.sqrt(2) + 1)) < 1e-9

    def test_sqrt2_at_alpha2_exits_2(self, capsys):
        code, _, _ = run_cli(capsys, "game", "--alpha", "2", "--sqrt2",
                             "--policy", "greedy")
        assert code == 2

    def test_needs_z_or_sqrt2(self, capsys):
        code, _, _ = run_cli(capsys, "game", "--alpha", "2", "--policy", "greedy")
        assert code == 2

    def test_writes_to_file(self, capsys, tmp_path):
        out_path = tmp_path / "game.txt"
        code, _, _ = run_cli(capsys, "game", "--alpha", "2", "--z", "10",
                             "--policy", "min-lcr", "--out", str(out_path))
        assert code == 0
        assert "ratio:" in out_path.read_text()
