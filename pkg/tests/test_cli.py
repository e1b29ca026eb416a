from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ttrkit import derivfile as df
from ttrkit import typing_rules as ty
from ttrkit.cli import main

DATA = df.DATA_DIR


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_reduce_t2_church(capsys):
    code, out, _ = run(capsys, "reduce", "(@T2_church) (church 2) f")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "steps: 8 (head normal form)"
    assert lines[-2].split(None, 1) == ["8", "f (@s_church (@s_church (church 0)))"]


def test_reduce_fuel_exhausted(capsys):
    code, out, _ = run(capsys, "reduce", r"(\x. x x) (\x. x x)", "--fuel", "10", "--max-display", "2")
    assert code == 1
    assert "fuel exhausted" in out and "more" in out


def test_normalize_and_equiv(capsys):
    code, out, _ = run(capsys, "normalize", r"(@s_rec) rec 1", "--raw")
    assert code == 0 and out.strip()
    assert run(capsys, "equiv", r"(\z. z) church 3", "church 3")[0] == 0
    assert run(capsys, "equiv", "church 2", "church 3")[0] == 1


def test_parse_error_exits_2(capsys):
    code, _, err = run(capsys, "reduce", "(x")
    assert code == 2 and err.startswith("error:")


def test_classify(capsys):
    nr = "mu N z . !X. (!y. N(y) -> X(s(y))) -> X(0) -> X(z) <x>"
    code, out, _ = run(capsys, "classify", nr, "--sig", "fn 0/0; fn s/1")
    assert code == 0
    assert out.strip() == "arrow type; in Ω⁺; not in Ω⁻; not ⊥-type"


def test_classify_without_arrow(capsys):
    code, out, _ = run(capsys, "classify", "!X X", "-v")
    assert code == 0 and out.startswith("not an arrow type")
    assert "propositional: yes" in out and "predicate variables: X/0" in out


def test_rep_with_witness(capsys):
    code, out, _ = run(capsys, "rep", "mu N . !X. (N -> X) -> X -> X <>", "--witness")
    assert code == 0
    assert "A ⊆ Rep(A): verified" in out and "Rep(A) ⊆ A: verified" in out


def test_godel_negation(capsys):
    code, out, _ = run(capsys, "godel", "!X. X -> X")
    assert code == 0 and out.strip() == "!X. ~X -> ~X"


def test_godel_with_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"X": {"family": ["X1", "X2"], "params": [], "formula": "X1 -> X2 -> _|_"}}))
    code, out, _ = run(capsys, "godel", "!X. X -> X", "--config", str(cfg))
    assert code == 0 and "X1" in out and "X2" in out


def test_erase(capsys):
    code, out, _ = run(capsys, "erase", "mu N z . !X. (!y. N(y) -> X(s(y))) -> X(0) -> X(z) <x>", "--sig", "fn 0/0; fn s/1")
    assert code == 0 and out.strip() == "mu N . !X. (N -> X) -> X -> X <>"
    code, out, _ = run(capsys, "erase", "--file", str(DATA / "t1_rec.json"))
    assert code == 0
    f = df.loads(out)
    assert f.system is ty.System.TTR_DIAMOND and f.signature.predicates == {"N": 0}
    ty.check_typing(f.derivation, system=ty.System.TTR_DIAMOND)


def test_check_typing(capsys):
    code, out, _ = run(capsys, "check-typing", str(DATA / "t2_rec.json"))
    assert code == 0 and out.startswith("verified (TTR): ")


@pytest.mark.parametrize("alias", ["af2", "ttr", "ttr0", "ttrd", "ttrdiamond", "ttrzero"])
def test_check_typing_system_aliases(capsys, alias):
    code, _, _ = run(capsys, "check-typing", str(DATA / "af2_identity.json"), "--system", alias)
    assert code == 0


def test_check_typing_wrong_system_exits_1(capsys):
    code, _, err = run(capsys, "check-typing", str(DATA / "succ_r5.json"), "--system", "ttr0")
    assert code == 1 and "not available" in err


def test_check_typing_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "check-typing", str(tmp_path / "none.json"))
    assert code == 2


def test_check_sub(capsys, tmp_path):
    from ttrkit.fixtures import nr_star_sub_f, SIG

    path = tmp_path / "sub.json"
    df.dump(df.DerivationFile("subtyping", nr_star_sub_f(), "s", signature=SIG), path)
    code, out, _ = run(capsys, "check-sub", str(path))
    assert code == 0 and out.startswith("verified (full)")
    code, _, err = run(capsys, "check-sub", str(path), "--mode", "zero")
    assert code == 1 and "zero mode" in err


def test_lift_godel(capsys):
    code, out, _ = run(capsys, "lift-godel", str(DATA / "zero_rec.json"))
    assert code == 0
    f = df.loads(out)
    assert f.name == "zero_rec_lifted"
    ty.check_typing(f.derivation, system=ty.System.TTR_ZERO)


def test_verify_storage(capsys):
    code, out, _ = run(capsys, "verify-storage", "@T1_rec", "--kind", "rec", "--n", "0..3", "--variants", "5", "--seed", "42")
    assert code == 0 and out.splitlines()[-1] == "@T1_rec [rec]: pass"


def test_verify_storage_counterexample(capsys):
    code, out, _ = run(capsys, "verify-storage", r"\n. \f. f n", "--n", "0..3")
    assert code == 1 and "fail" in out.splitlines()[-1]


def test_verify_storage_open_term(capsys):
    assert run(capsys, "verify-storage", r"\n. g")[0] == 2


def test_verify_storage_output_is_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    run(capsys, "verify-storage", "@T2_church", "--kind", "church", "--n", "0..4", "--seed", "5", "--out", str(a))
    run(capsys, "verify-storage", "@T2_church", "--kind", "church", "--n", "0..4", "--seed", "5", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text().splitlines()[-1])["verdict"] == "pass"


def test_symbolic_verify(capsys, tmp_path):
    out_file = tmp_path / "sym.jsonl"
    code, out, _ = run(capsys, "symbolic-verify", "@T2_rec", "--arity", "4", "--n", "0..3", "--variants", "2", "--out", str(out_file))
    assert code == 0 and out.splitlines()[-1] == "@T2_rec: pass"
    recs = [json.loads(x) for x in out_file.read_text().splitlines()]
    assert [r["tau_value"] for r in recs] == [0, 1, 2, 3]


def test_symbolic_verify_wrong_arity(capsys):
    code, out, _ = run(capsys, "symbolic-verify", "@T2_rec", "--n", "2")
    assert code == 1 and "applied to 4 arguments" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ttrkit.cli", "reduce", r"(\x. x) y"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "steps: 1" in proc.stdout
