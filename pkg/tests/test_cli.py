"""The command line interface: argument handling, report output, the RESULT
line grammar, and the corpus replay."""

import re

import pytest

from invarcm.cli import main
from invarcm.registry import definition_text

RESULT_RE = re.compile(
    r"^RESULT name=(\S+) p=(\d+) dim=(\d+) dmax=(\d+) verdict=(true|false) "
    r"mismatch_degree=(\d+|-) estimated=(\d+|-) actual=(\d+|-)$"
)

TENSOR_DEF = """\
group SL2 p=2
module basis(tensor(natural,natural);1,0,0,0;0,0,0,1;0,0,1,-1;0,1,0,0)
"""

TRIVIAL_DEF = """\
group SL2 p=2
labels P
matrix 1
"""


def result_lines(out: str) -> list[str]:
    return [l for l in out.splitlines() if l.startswith("RESULT ")]


# -- run -------------------------------------------------------------------------


def test_run_demo_example(capsys):
    assert main(["run", "--example", "demo"]) == 0
    out = capsys.readouterr().out
    assert (
        "RESULT name=demo p=2 dim=4 dmax=4 verdict=false "
        "mismatch_degree=- estimated=- actual=-" in out
    )
    assert "golden values for demo reproduced" in out
    assert "verdict: false" in out


def test_run_602_example(capsys):
    assert main(["run", "--example", "6.02"]) == 0
    out = capsys.readouterr().out
    assert (
        "RESULT name=6.02 p=2 dim=11 dmax=4 verdict=true "
        "mismatch_degree=4 estimated=33 actual=32" in out
    )
    assert "<-- mismatch" in out
    assert "golden values for 6.02 reproduced" in out


def test_result_line_grammar(capsys):
    for ex in ("demo", "6.02"):
        main(["run", "--example", ex])
    out = capsys.readouterr().out
    lines = result_lines(out)
    assert len(lines) == 2
    for line in lines:
        assert RESULT_RE.match(line), line


def test_run_def_file(tmp_path, capsys):
    f = tmp_path / "pair.def"
    f.write_text("group SL2 p=2\nmodule sum(natural, natural)\noption dmax=2\n")
    assert main(["run", str(f)]) == 0
    out = capsys.readouterr().out
    assert "RESULT name=pair p=2 dim=4 dmax=2 verdict=false" in out


def test_run_dmax_override(capsys):
    assert main(["run", "--example", "demo", "--dmax", "2"]) == 0
    out = capsys.readouterr().out
    assert "dmax=2 verdict=false" in out


def test_run_weights_off_agrees(capsys):
    assert main(["run", "--example", "6.02", "--weights", "off"]) == 0
    out = capsys.readouterr().out
    assert "mismatch_degree=4 estimated=33 actual=32" in out


def test_run_explicit_weight_vector(capsys):
    assert main(["run", "--example", "demo", "--weights", "1,-1,1,-1"]) == 0
    out = capsys.readouterr().out
    assert "verdict=false" in out


def test_run_weight_vector_length_checked(capsys):
    assert main(["run", "--example", "demo", "--weights", "1,-1"]) == 2
    assert "length" in capsys.readouterr().err


def test_run_missing_input(capsys):
    assert main(["run"]) == 2
    assert "definition file or --example" in capsys.readouterr().err


def test_run_unknown_example(capsys):
    assert main(["run", "--example", "6.99"]) == 2
    assert "unknown example" in capsys.readouterr().err


def test_run_missing_file(capsys):
    assert main(["run", "/no/such/file.def"]) == 2
    assert "cannot read" in capsys.readouterr().err


def test_run_parse_error_has_position(tmp_path, capsys):
    f = tmp_path / "broken.def"
    f.write_text("group SL2 p=2\nfrobnicate\n")
    assert main(["run", str(f)]) == 2
    err = capsys.readouterr().err
    assert "broken.def" in err
    assert "line 2" in err


def test_run_without_dmax_anywhere(tmp_path, capsys):
    f = tmp_path / "nodmax.def"
    f.write_text("group SL2 p=2\nmodule natural\n")
    assert main(["run", str(f)]) == 2
    assert "no degree bound" in capsys.readouterr().err


def test_run_budget_exhaustion(capsys):
    assert main(["run", "--example", "6.02", "--budget", "1"]) == 1
    err = capsys.readouterr().err
    assert "budget exhausted" in err
    assert "invariant basis at degree" in err


def test_budget_env_variable(monkeypatch, capsys):
    monkeypatch.setenv("CM_GROEBNER_BUDGET", "1")
    assert main(["run", "--example", "6.02"]) == 1
    assert "budget exhausted" in capsys.readouterr().err


def test_budget_flag_overrides_env(monkeypatch, capsys):
    monkeypatch.setenv("CM_GROEBNER_BUDGET", "1")
    assert main(["run", "--example", "demo", "--budget", "100000"]) == 0
    capsys.readouterr()


# -- invariants --------------------------------------------------------------------


def test_invariants_demo_degree_two(capsys):
    assert main(["invariants", "--example", "demo", "--degree", "2"]) == 0
    assert capsys.readouterr().out == "X1*Y2 + Y1*X2\n"


def test_invariants_degree_zero(capsys):
    assert main(["invariants", "--example", "demo", "--degree", "0"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_invariants_empty_degree(capsys):
    assert main(["invariants", "--example", "demo", "--degree", "1"]) == 0
    assert capsys.readouterr().out == ""


def test_invariants_raw_matrix_module(tmp_path, capsys):
    f = tmp_path / "munupi.def"
    f.write_text(definition_text("munupi"))
    assert main(["invariants", str(f), "--degree", "1"]) == 0
    assert capsys.readouterr().out == "pi\n"


def test_invariants_negative_degree(capsys):
    assert main(["invariants", "--example", "demo", "--degree", "-1"]) == 2
    assert "nonnegative" in capsys.readouterr().err


# -- cocycle -------------------------------------------------------------------------


def test_cocycle_nontrivial_in_characteristic_two(tmp_path, capsys):
    f = tmp_path / "t2.def"
    f.write_text(TENSOR_DEF)
    assert main(["cocycle", str(f)]) == 0
    out = capsys.readouterr().out
    assert out == "cocycle: nontrivial\n"


def test_cocycle_splits_away_from_the_bad_prime(tmp_path, capsys):
    f = tmp_path / "t5.def"
    f.write_text(TENSOR_DEF.replace("p=2", "p=5"))
    assert main(["cocycle", str(f)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("cocycle: trivial\nwitness: ")
    witness = out.splitlines()[1].removeprefix("witness: ")
    assert witness != "0"
    assert all(part.isdigit() for part in witness.split(","))


def test_cocycle_trivial_module_witness_zero(tmp_path, capsys):
    f = tmp_path / "triv.def"
    f.write_text(TRIVIAL_DEF)
    assert main(["cocycle", str(f)]) == 0
    assert capsys.readouterr().out == "cocycle: trivial\nwitness: 0\n"


def test_cocycle_explicit_index(tmp_path, capsys):
    f = tmp_path / "t2.def"
    f.write_text(TENSOR_DEF)
    assert main(["cocycle", str(f), "--invariant-index", "3"]) == 0
    assert capsys.readouterr().out == "cocycle: nontrivial\n"


def test_cocycle_index_must_be_last(tmp_path, capsys):
    f = tmp_path / "t2.def"
    f.write_text(TENSOR_DEF)
    assert main(["cocycle", str(f), "--invariant-index", "1"]) == 2
    assert "come last" in capsys.readouterr().err


def test_cocycle_noninvariant_vector_rejected(tmp_path, capsys):
    f = tmp_path / "nat.def"
    f.write_text("group SL2 p=2\nmodule natural\n")
    assert main(["cocycle", str(f)]) == 2
    assert "not invariant" in capsys.readouterr().err


# -- corpus and list-examples ----------------------------------------------------------


def test_corpus_fast_tier_passes(capsys):
    assert main(["corpus", "--tier", "fast"]) == 0
    out = capsys.readouterr().out
    assert "corpus: 7 passed, 0 failed" in out
    assert out.count("pass") >= 7
    assert "FAIL" not in out
    for line in out.splitlines():
        if "RESULT" in line:
            assert RESULT_RE.match(line[line.index("RESULT") :].split("  (")[0]), line


def test_corpus_parallel_matches_serial(capsys):
    assert main(["corpus", "--tier", "fast", "--jobs", "3"]) == 0
    parallel = capsys.readouterr().out
    assert main(["corpus", "--tier", "fast"]) == 0
    serial = capsys.readouterr().out

    def results(text):
        return [l.split("RESULT", 1)[1] for l in text.splitlines() if "RESULT" in l]

    assert results(parallel) == results(serial)


def test_corpus_empty_tier_passes(monkeypatch, capsys):
    monkeypatch.setattr("invarcm.registry._ORDER", ["demo"])
    assert main(["corpus", "--tier", "long"]) == 0
    assert "nothing to check" in capsys.readouterr().out


def test_corpus_reports_golden_mismatch(monkeypatch, capsys):
    import invarcm.registry as registry

    tampered = dict(registry._EXPECTED)
    tampered["demo"] = ("fast", True, None, None, None)
    monkeypatch.setattr(registry, "_EXPECTED", tampered)
    monkeypatch.setattr(registry, "_ORDER", ["demo"])
    assert main(["corpus", "--tier", "fast"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out
    assert "corpus: 0 passed, 1 failed" in out


def test_corpus_budget_failure(monkeypatch, capsys):
    monkeypatch.setattr("invarcm.registry._ORDER", ["6.02"])
    assert main(["corpus", "--tier", "fast", "--budget", "1"]) == 1
    out = capsys.readouterr().out
    assert "budget exhausted" in out


def test_list_examples(capsys):
    assert main(["list-examples"]) == 0
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert len(lines) == 20
    assert "6.02" in out
    assert "estimated=33 actual=32" in out
    assert "6.12   long" in out
