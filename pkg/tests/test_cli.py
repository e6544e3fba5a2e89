import json
from fractions import Fraction as F

from askeycg.cgverify import CGBlock, WeightData, cg_block, orthogonality_weights
from askeycg.cli import CHECK_NAMES, main, run_verify_suite
from askeycg.families import FamilyKind, make_instance


def test_verify_exit_zero_and_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "--family", "dual-hahn", "--lambda1", "2",
                 "--lambda2", "3", "--alpha", "1", "--nmax", "4",
                 "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] is True
    assert [c["name"] for c in doc["checks"]] == CHECK_NAMES
    assert doc["params"]["beta"] == "2"


def test_verify_invalid_parameters_exit_two(capsys):
    code = main(["verify", "--family", "hahn", "--alpha", "1", "--beta", "1"])
    assert code == 2
    assert "genericity" in capsys.readouterr().err


def test_verify_missing_family_exit_two(capsys):
    assert main(["verify", "--alpha", "1"]) == 2


def test_verify_unknown_check_exit_two(capsys):
    code = main(["verify", "--family", "krawtchouk", "--p", "1/3",
                 "--checks", "contiguity,nonsense"])
    assert code == 2
    assert "unknown check names" in capsys.readouterr().err


def test_verify_bad_rational_exit_two(capsys):
    assert main(["verify", "--family", "krawtchouk", "--p", "0.5"]) == 2


def test_verify_subset_lists_all_checks(tmp_path):
    out = tmp_path / "r.json"
    code = main(["verify", "--family", "krawtchouk", "--p", "1/3",
                 "--nmax", "3", "--checks", "contiguity,grading",
                 "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert [c["name"] for c in doc["checks"]] == CHECK_NAMES
    ran = {c["name"] for c in doc["checks"] if not c["skipped"]}
    assert ran == {"contiguity", "grading"}
    skipped = {c["name"]: c["reason"] for c in doc["checks"] if c["skipped"]}
    assert skipped["raising"] == "not selected"


def test_verify_q_racah_full_suite():
    inst_args = ["verify", "--family", "q-racah", "--q", "1/4", "--kappa1", "1/2",
                 "--kappa2", "1/3", "--alpha", "1/5", "--beta", "1/7", "--nmax", "4"]
    assert main(inst_args) == 0


def test_verify_report_deterministic(tmp_path):
    args = ["verify", "--family", "krawtchouk", "--p", "1/3", "--nmax", "3",
            "--seed", "5"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--output", str(a)]) == 0
    assert main(args + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("family = krawtchouk\np = 1/3\nnmax = 3\n# comment\n")
    out = tmp_path / "r.json"
    code = main(["verify", "--config", str(cfg), "--p", "1/4",
                 "--output", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["params"]["p"] == "1/4"


def test_missing_config_exit_three(capsys):
    assert main(["verify", "--config", "/nonexistent/x.cfg"]) == 3


def test_malformed_config_exit_three(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("this line has no equals sign\n")
    assert main(["verify", "--config", str(cfg)]) == 3


def test_unwritable_output_exit_three(tmp_path):
    code = main(["verify", "--family", "krawtchouk", "--p", "1/3", "--nmax", "2",
                 "--output", str(tmp_path / "no" / "way.json")])
    assert code == 3


def test_table_text_contains_expected_row(capsys):
    code = main(["table", "--family", "krawtchouk", "--p", "1/3", "--nmax", "2"])
    assert code == 0
    out = capsys.readouterr().out
    assert "N = 1" in out
    assert "-2" in out


def test_table_json_round_trips(tmp_path):
    out = tmp_path / "table.json"
    code = main(["table", "--family", "q-hahn", "--q", "1/4", "--alpha", "1/3",
                 "--beta", "2/5", "--nmax", "3", "--format", "json",
                 "--output", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    inst = make_instance(FamilyKind.Q_HAHN, q=F(1, 4), alpha=F(1, 3),
                         beta=F(2, 5), n_max=3)
    for rec in doc["blocks"]:
        blk = CGBlock.from_doc(rec)
        weights = WeightData.from_doc(rec)
        assert blk == cg_block(inst, blk.N)
        assert weights == orthogonality_weights(inst, blk.N)


def test_coassoc_exit_codes(capsys):
    assert main(["coassoc", "1/2", "1/3", "1/6", "2/5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["constraint_holds"] and doc["operators_equal"]
    assert main(["coassoc", "1/2", "1/2", "1/2", "1/2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert not doc["constraint_holds"] and not doc["operators_equal"]
    assert main(["coassoc", "1/2", "1/3", "1/6", "1/2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert not doc["constraint_holds"] and not doc["operators_equal"]


def test_coassoc_out_of_range_exit_two(capsys):
    assert main(["coassoc", "1/2", "1", "1/2", "1/2"]) == 2
    assert main(["coassoc", "3/2", "1/3", "1/2", "1/2"]) == 2


def test_version(capsys):
    assert main(["version"]) == 0
    assert "askeycg" in capsys.readouterr().out


def test_suite_failure_yields_exit_one(tmp_path, monkeypatch):
    # corrupt one check through the library surface: a doctored suite run
    inst = make_instance(FamilyKind.KRAWTCHOUK, p=F(1, 3), n_max=3)
    rep = run_verify_suite(inst, checks=["contiguity"])
    assert rep.passed
    from askeycg import families
    from askeycg.report import CheckResult

    def broken(inst, data=None):
        from askeycg.report import Report
        out = Report(suite="contiguity")
        out.add(CheckResult.fail("raising-contiguity", "", {"N": 0}, "1", "2"))
        return out

    monkeypatch.setattr("askeycg.cli.check_contiguity", broken)
    code = main(["verify", "--family", "krawtchouk", "--p", "1/3", "--nmax", "3",
                 "--checks", "contiguity", "--output", str(tmp_path / "r.json")])
    assert code == 1
