import json
import subprocess
import sys

import pytest

from zhukit.cli import UsageError, main, parse_config_text, parse_module
from zhukit.fields import QQ, PrimeField, parse_field
from zhukit.linalg import Matrix


def write(tmp_path, text, name="v.cfg"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip() else None
    return code, report, out.err


def test_describe_virasoro(tmp_path, capsys):
    cfg = write(tmp_path, "family=virasoro\nc=1/2\nfield=Q\ntruncate=8\n")
    code, rep, _ = run(capsys, "describe", "--config", cfg)
    assert code == 0
    assert rep["graded_dims"] == [1, 0, 1, 1, 2, 2, 4, 4, 7]
    assert rep["axioms"]["pass"]


def test_describe_heisenberg(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nrank=1\nfield=F7\ntruncate=5\n")
    code, rep, _ = run(capsys, "describe", "--config", cfg)
    assert code == 0 and rep["graded_dims"] == [1, 1, 2, 3, 5, 7]


@pytest.mark.parametrize("text", [
    "family=heisenberg\nfield=F9\n",
    "family=heisenberg\nfield=F2\n",
    "family=moonshine\n",
    "field=Q\n",
    "family=virasoro\nfield=F3\nc=1\n",
    "family=affine\nk=-2\n",
    "family=heisenberg\nbogus=1\n",
    "family=heisenberg\nno equals sign\n",
])
def test_bad_config_exit_2(tmp_path, capsys, text):
    cfg = write(tmp_path, text)
    code, rep, err = run(capsys, "describe", "--config", cfg)
    assert code == 2 and rep is None and "usage error" in err


def test_bad_command_and_missing_config(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["describe"]) == 2
    assert main(["describe", "--config", "/nonexistent/v.cfg"]) == 2
    capsys.readouterr()


def test_zhu_virasoro(tmp_path, capsys):
    cfg = write(tmp_path, "family=virasoro\nc=1/2\nfield=Q\n")
    code, rep, _ = run(capsys, "zhu", "--config", cfg)
    assert code == 0
    assert rep["checks"]["commutative"]["value"] is True
    assert rep["extra_checks"]["commutator_congruence"]["pass"]
    assert rep["extra_checks"]["generated_by_omega"]["pass"]
    assert rep["stabilized"] and rep["gr_dims"] == [1, 0, 1, 0, 1]
    assert all(isinstance(v, str) for sc in rep["structure_constants"] for v in sc["product"].values())


def test_zhu_level_one(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nfield=F5\n")
    code, rep, _ = run(capsys, "zhu", "--config", cfg, "--n", "1", "--max-degree", "4")
    assert code == 0 and rep["zhu_level"] == 1
    assert rep["extra_checks"]["contained_in_O0"]["pass"]


def test_c2_heisenberg(tmp_path, capsys):
    cfg = write(tmp_path, "family=heis\nrank=2\nfield=F7\n")
    code, rep, _ = run(capsys, "c2", "--config", cfg, "--max-degree", "3")
    assert code == 0 and rep["graded_dims"] == [1, 2, 3, 4]
    assert rep["phi"]["pass"]


def test_endo_fock(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nfield=F5\n")
    code, rep, _ = run(capsys, "endo", "--config", cfg, "--module", "fock:1")
    assert code == 0
    assert rep["endomorphisms"]["commutant_dim"] == 1
    assert rep["absolutely_simple"] is True and rep["endomorphisms"]["absolutely_simple"] is True


def test_endo_field_top(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nfield=F5\n")
    code, rep, _ = run(capsys, "endo", "--config", cfg, "--module", "fock:0 2;1 0")
    assert code == 0
    assert rep["simple"]["simple"] and rep["endomorphisms"]["commutant_dim"] == 2
    assert rep["absolutely_simple"] is False


def test_endo_needs_module(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nfield=F5\n")
    assert run(capsys, "endo", "--config", cfg)[0] == 2
    assert run(capsys, "endo", "--config", cfg, "--module", "verma:1")[0] == 2


def test_extend_ok_and_inseparable(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nfield=F5\ntruncate=8\n")
    code, rep, _ = run(capsys, "extend", "--config", cfg, "--ext", "t^2-2", "--module", "fock:0 2;1 0")
    assert code == 0
    assert rep["zhu_functoriality"]["pass"] and rep["lemma36"]["agree"]
    assert rep["lemma36"]["top_simple_over_K"] is False
    code, rep, err = run(capsys, "extend", "--config", cfg, "--ext", "t^5-2")
    assert code == 3 and "unsupported" in err
    code, _, _ = run(capsys, "extend", "--config", cfg, "--ext", "t^2-1")
    assert code == 2
    assert run(capsys, "extend", "--config", cfg)[0] == 2


def test_out_flag_and_determinism(tmp_path, capsys):
    cfg = write(tmp_path, "family=virasoro\nc=1/2\nfield=F7\ntruncate=8\n")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["zhu", "--config", cfg, "--out", str(a)]) == 0
    assert main(["zhu", "--config", cfg, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


def test_seed_is_hex(tmp_path, capsys):
    cfg = write(tmp_path, "family=heisenberg\nfield=Q\n")
    code, rep, _ = run(capsys, "endo", "--config", cfg, "--module", "fock:1/2", "--seed", "beef")
    assert code == 0 and rep["seed"] == "0xbeef"
    assert main(["endo", "--config", cfg, "--module", "fock:1", "--seed", "xyz"]) == 2
    capsys.readouterr()


def test_parse_config_text():
    cfg = parse_config_text("# comment\nfamily = affine\nk=1/3\nfield=Q\n")
    assert cfg.family == "affine_sl2" and cfg.level == QQ("1/3") and cfg.truncation == 12
    cfg = parse_config_text("family=vir\nc=2\nfield=F5[t]/(t^2-2)\ntruncate=6", truncate=9)
    assert cfg.truncation == 9 and cfg.field == parse_field("F5[t]/(t^2-2)")
    with pytest.raises(UsageError):
        parse_config_text("family=virasoro\nfield=Q\ntruncate=ten\nc=1")


def test_parse_module():
    cfg = parse_config_text("family=heisenberg\nrank=2\nfield=F7")
    mc = parse_module("fock:1,3@6", cfg)
    assert mc.params == (PrimeField(7)(1), PrimeField(7)(3)) and mc.truncation == 6
    mc = parse_module("fock:0 2;1 0|1 0;0 1", cfg)
    assert len(mc.params) == 2 and isinstance(mc.params[0], Matrix)
    assert parse_module("vacuum", cfg).truncation == 4
    with pytest.raises(UsageError):
        parse_module("sheaf:1", cfg)
    with pytest.raises(UsageError):
        parse_module("weyl:two", cfg)


def test_selftest_subprocess_byte_identical():
    cmd = [sys.executable, "-m", "zhukit", "selftest"]
    a = subprocess.run(cmd, capture_output=True, check=True)
    b = subprocess.run(cmd, capture_output=True, check=True)
    assert a.stdout == b.stdout and json.loads(a.stdout)["pass"]
