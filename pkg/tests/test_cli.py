import io
import json

from gatc import cli, gatform
from gatc.theory import stdlib


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, out=out)
    return code, out.getvalue()


GOOD_FILE = """
theory PtSet {
  sym A : () => Type
  sym pt : () => A
}

interp P : Ty0 -> PtSet {
  A0 |-> A;
}

judgment j over PtSet { () |- pt : A }
"""

FORWARD_REF_FILE = """
theory Broken {
  sym M : () => Type
  ax bad : (y : M) => mul(u, y) = y : M
  sym u : () => M
  sym mul : (y1 : M, y2 : M) => M
}
"""


def test_check_good_file(tmp_path):
    p = tmp_path / "good.gat"
    p.write_text(GOOD_FILE)
    code, out = run(["check", str(p)])
    assert code == 0
    assert "theory PtSet: ok" in out
    assert "interp P: ok" in out
    assert "judgment j: ok" in out


def test_check_forward_reference_positioned(tmp_path):
    p = tmp_path / "corrupted.gat"
    p.write_text(FORWARD_REF_FILE)
    code, out = run(["check", str(p)])
    assert code == 1
    assert "ForwardReference" in out
    assert "line 4" in out


def test_parse_error_exit_three(tmp_path):
    p = tmp_path / "bad.gat"
    p.write_text("theory T { sym A0 : ( => Type }")
    code, _ = run(["check", str(p)])
    assert code == 3


def test_eq_command_stdlib_theory():
    code, out = run(
        ["eq", "--theory", "Mon", "--ctx", "(y : Mon)", "--lhs", "mul(u, y)", "--rhs", "y"]
    )
    assert code == 0
    assert "Proved" in out


def test_eq_command_inconclusive_exit_two():
    code, out = run(
        ["eq", "--theory", "Mon", "--ctx", "(a : Mon, b : Mon)", "--lhs", "mul(a, b)", "--rhs", "mul(b, a)"]
    )
    assert code == 2
    assert "Inconclusive" in out


def test_models_count_only():
    code, out = run(["models", "--theory", "Ty0", "--max-size", "2", "--count-only"])
    assert code == 0
    assert "(3)" in out


def test_models_json_tables():
    code, out = run(["models", "--theory", "El0", "--max-size", "1", "--json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "gatc-report/1"
    assert doc["models"][0]["functions"]["e0"] == [{"args": [], "value": 0}]


def test_json_reports_byte_identical():
    argv = ["verify-poly", "--json", "--trace"]
    _, a = run(argv)
    _, b = run(argv)
    assert a == b
    argv2 = ["eq", "--theory", "Mon", "--ctx", "(y : Mon)", "--lhs", "mul(u, y)", "--rhs", "y", "--json", "--trace"]
    _, c = run(argv2)
    _, d = run(argv2)
    assert c == d
    trace = json.loads(c)["items"][-1]["trace"]
    assert any(step["kind"] == "axiom" for step in trace)


def test_verify_poly_exit_codes():
    code, out = run(["verify-poly"])
    assert code == 0
    assert out.count("Proved") == 12
    code, out = run(["verify-poly", "--corrupt-subst"])
    assert code == 1


def test_pushout_command(tmp_path):
    p = tmp_path / "i.gat"
    p.write_text("interp I : Ty0 -> Mon { A0 |-> Mon; }\n")
    code, out = run(["pushout", str(p), "--base", "Ty0", "--total", "El0", "--along", "I"])
    assert code == 0
    assert "sym e0 : () => Mon" in out


def test_coprod_command():
    code, out = run(["coprod", "--left", "Ty0", "--right", "Ty0"])
    assert code == 0
    assert "A0#1" in out and "A0#2" in out


def test_construction_output_is_valid_source(tmp_path):
    # theory payloads printed by the construction commands reparse and check
    for argv in (
        ["coprod", "--left", "Mon", "--right", "Ty0", "--json"],
        ["poly", "--theory", "Cat", "--json"],
    ):
        code, out = run(argv)
        assert code == 0
        text = json.loads(out)["theory"]
        p = tmp_path / "out.gat"
        p.write_text(text)
        code, _ = run(["check", str(p)])
        assert code == 0


def test_coeq_command(tmp_path):
    p = tmp_path / "i.gat"
    p.write_text("interp I : Ty0 -> Mon { A0 |-> Mon; }\n")
    code, out = run(["coeq", str(p), "--left", "I", "--right", "I"])
    assert code == 0
    assert "ax eq_A0" in out


def test_poly_command():
    code, out = run(["poly", "--theory", "Cat"])
    assert code == 0
    assert "sym Ob : (x0 : A0) => Type" in out


def test_present_command_with_reconstruction():
    code, out = run(["present", "--theory", "Mon", "--reconstruct"])
    assert code == 0
    assert "reconstruction: Proved" in out


def test_pi_square_requires_pi_rules():
    code, _ = run(["pi-square"])
    assert code == 3
    code, out = run(["pi-square", "--rules", "pi"])
    assert code == 0
    assert out.count("Proved") == 3


def test_unit_triangles_command():
    code, out = run(["unit-triangles"])
    assert code == 0
    assert "recover-proj: Proved" in out


def test_unknown_subcommand_usage_error():
    code, _ = run(["frobnicate"])
    assert code == 3


def test_duplicate_block_names_rejected(tmp_path):
    p = tmp_path / "dup.gat"
    p.write_text("theory T { sym A : () => Type }\ntheory T { sym B : () => Type }\n")
    code, out = run(["check", str(p)])
    assert code == 1
    assert "duplicate theory name" in out


def test_eq_beta_eta_through_cli():
    code, out = run(
        [
            "eq", "--theory", "STLC", "--rules", "pi",
            "--ctx", "(a : Ty, f : Pi (x : El(a)) El(a), x : El(a))",
            "--lhs", "(lam (y : El(a)) f @ y) @ x",
            "--rhs", "f @ x",
        ]
    )
    assert code == 0
    assert "Proved" in out


def test_fuel_flags_and_env(monkeypatch):
    code, _ = run(["eq", "--theory", "Mon", "--lhs", "u", "--rhs", "mul(u, u)", "--fuel-nodes", "1"])
    assert code == 2
    monkeypatch.setenv("GATC_FUEL_NODES", "1")
    code, _ = run(["eq", "--theory", "Mon", "--lhs", "u", "--rhs", "mul(u, u)"])
    assert code == 2
    monkeypatch.delenv("GATC_FUEL_NODES")
    code, _ = run(["eq", "--theory", "Mon", "--lhs", "u", "--rhs", "mul(u, u)"])
    assert code == 0


def test_stdlib_emit_round_trips(tmp_path):
    emit_dir = tmp_path / "corpus"
    code, _ = run(["stdlib", "--emit", str(emit_dir)])
    assert code == 0
    lib = stdlib()
    for name, t in lib.items():
        text = (emit_dir / f"{name}.gat").read_text()
        assert text == gatform.print_theory(t)
        code, _ = run(["check", str(emit_dir / f"{name}.gat"), "--rules", "pi" if t.pi else "base"])
        assert code == 0, name
    assert (emit_dir / "interpretations.gat").exists()
    code, _ = run(["check", str(emit_dir / "interpretations.gat")])
    assert code == 0
