import json
import subprocess
import sys

import pytest

from dlsequent.cli import main


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        p = tmp_path / name
        p.write_text(content)
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestProveCommand:
    def test_identity_exit_zero_one_node_proof(self, files, capsys):
        f = files("s.sq", "a : C |- a : C\n")
        code, out, _ = run(capsys, "prove", f)
        assert code == 0
        assert "verdict: proved" in out
        assert out.count("id_c:") == 1

    def test_countermodel_exit_one(self, files, capsys):
        f = files("s.sq", "|- C sub D\n")
        code, out, _ = run(capsys, "prove", f)
        assert code == 1
        assert "verdict: countermodel" in out
        assert "countermodel:" in out

    def test_unknown_exit_two(self, files, capsys):
        f = files("s.sq", "C sub some r C, a : C |-\n")
        code, out, _ = run(capsys, "prove", f, "--budget", "30")
        assert code == 2
        assert "verdict: unknown" in out
        assert "steps=" in out

    def test_parse_error_exit_three(self, files, capsys):
        f = files("s.sq", "a : |- C\n")
        code, _, err = run(capsys, "prove", f)
        assert code == 3 and "error:" in err

    def test_missing_file_exit_three(self, capsys):
        code, _, err = run(capsys, "prove", "no-such-file.sq")
        assert code == 3

    def test_profile_flag(self, files, capsys):
        prof = files("p.prof", "equality\n")
        f = files("s.sq", "|- a = a\n")
        code, out, _ = run(capsys, "prove", f, "--profile", prof)
        assert code == 0

    def test_profile_violation_exit_three(self, files, capsys):
        f = files("s.sq", "|- a = a\n")
        code, _, err = run(capsys, "prove", f)
        assert code == 3 and "equality" in err

    def test_ddr_file_enables_definitions(self, files, capsys):
        ddr = files("d.ddr", "def Sym(r): forall a b . r(a,b) -> r(b,a)\n")
        f = files("s.sq", "Rel[Sym](r), r(a,b) |- r(b,a)\n")
        code, out, _ = run(capsys, "prove", f, "--ddr", ddr)
        assert code == 0

    def test_json_format_shapes(self, files, capsys):
        f = files("s.sq", "|- C sub D\n")
        code, out, _ = run(capsys, "prove", f, "--format", "json", "--oracle", "2")
        assert code == 1
        obj = json.loads(out)
        assert obj["verdict"] == "countermodel"
        assert set(obj["model"]) == {"domain", "concepts", "roles", "individuals"}
        assert obj["oracle"]["countermodel_found"] is True
        assert {"steps", "branches", "max_branch_size"} == set(obj["stats"])

    def test_text_and_json_share_rule_sequence(self, files, capsys):
        f = files("s.sq", "|- (C and D) sub C\n")
        _, text_out, _ = run(capsys, "prove", f, "--emit", "proof")
        _, json_out, _ = run(capsys, "prove", f, "--format", "json",
                             "--emit", "proof")

        def rules_from_json(node):
            yield node["rule"]
            for ch in node["children"]:
                yield from rules_from_json(ch)

        lines = text_out.splitlines()
        tree_lines = lines[lines.index("proof:") + 1:]
        text_rules = [ln.strip().split(":")[0] for ln in tree_lines]
        json_rules = list(rules_from_json(json.loads(json_out)["proof"]))
        assert text_rules == json_rules


INCONSISTENT_KB = "tbox: C sub not C\nabox: a : C\n"


class TestKbCommands:
    def test_inconsistent_kb(self, files, capsys):
        kb = files("k.kb", INCONSISTENT_KB)
        code, out, _ = run(capsys, "consistent", kb)
        assert code == 0
        assert "verdict: inconsistent" in out

    def test_consistent_kb_emits_model(self, files, capsys):
        kb = files("k.kb", "tbox: C sub D\nabox: a : C\n")
        code, out, _ = run(capsys, "consistent", kb, "--format", "json")
        assert code == 1
        obj = json.loads(out)
        assert obj["verdict"] == "consistent"
        assert "model" in obj

    def test_subsumption_countermodel(self, files, capsys):
        kb = files("k.kb", "")
        code, out, _ = run(capsys, "subsumes", kb, "C", "D", "--format", "json")
        assert code == 1
        assert json.loads(out)["verdict"] == "not subsumed"

    def test_subsumption_proved(self, files, capsys):
        kb = files("k.kb", "tbox: C sub D\n")
        code, out, _ = run(capsys, "subsumes", kb, "C", "D")
        assert code == 0
        assert "verdict: subsumed" in out

    def test_instance_check(self, files, capsys):
        kb = files("k.kb", "tbox: C sub D\nabox: a : C\n")
        code, out, _ = run(capsys, "instance", kb, "a", "D")
        assert code == 0
        assert "verdict: entailed" in out
        code, out, _ = run(capsys, "instance", kb, "a", "E")
        assert code == 1


class TestEntryPoint:
    def test_console_script(self, tmp_path):
        f = tmp_path / "s.sq"
        f.write_text("a : C |- a : C\n")
        proc = subprocess.run([sys.executable, "-m", "dlsequent.cli",
                               "prove", str(f)],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "proved" in proc.stdout


class TestExitCodeAgreement:
    def test_exit_code_matches_verdict_on_corpus(self, tmp_path, capsys):
        # exit code and reported verdict must agree on every run
        from dlsequent.gen import corpus
        from dlsequent.syntax import show

        expected = {"proved": 0, "countermodel": 1, "unknown": 2}
        for i, (prof, s) in enumerate(corpus(99, 24)):
            sq = tmp_path / f"s{i}.sq"
            sq.write_text(show(s) + "\n")
            prof_file = tmp_path / f"p{i}.prof"
            prof_file.write_text(
                "\n".join(sorted(prof.flags)
                          + [f"ddr {n}" for n in sorted(prof.ddr_names)]))
            code, out, _ = run(capsys, "prove", str(sq),
                               "--profile", str(prof_file),
                               "--budget", "300", "--format", "json")
            verdict = json.loads(out)["verdict"]
            assert expected[verdict] == code, (verdict, code, show(s))
