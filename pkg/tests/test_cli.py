import pytest

from scenbdd.cli import main
from scenbdd.instance import load_instance
from scenbdd.recourse import build_ladder, load_ladder

from conftest import FIXTURES


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def test_ladder_triangle(capsys, data_dir, tmp_path):
    out_file = tmp_path / "t.ladder"
    code, out, _ = run(capsys, "ladder", "--instance", data_dir / "triangle.inst", "--out", out_file)
    assert code == 0
    assert out.splitlines()[0] == "levels 2"
    inst = load_instance(data_dir / "triangle.inst")
    assert load_ladder(out_file.read_text(), inst) == build_ladder(inst)
    assert out_file.read_text() == (data_dir / "triangle.ladder").read_text()


def test_ladder_single_edge(capsys, data_dir):
    code, _, err = run(capsys, "ladder", "--instance", data_dir / "single_edge.inst")
    assert code == 0 and err.splitlines()[0] == "levels 1"


def test_missing_instance(capsys, tmp_path):
    code, _, err = run(capsys, "ladder", "--instance", tmp_path / "nope.inst")
    assert code == 1 and "error" in err


def test_compile_parallel_sizes(capsys, data_dir, tmp_path):
    code, out, _ = run(capsys, "compile", "--instance", data_dir / "parallel.inst", "--out", tmp_path)
    assert code == 0
    rows = [ln.split() for ln in out.splitlines()[2:]]
    assert [int(r[2]) for r in rows] == [3, 4]
    assert sorted(p.name for p in tmp_path.iterdir()) == ["level0.bdd", "level1.bdd"]


def test_compile_or10(capsys, data_dir):
    code, out, _ = run(capsys, "compile", "--instance", data_dir / "or10.inst")
    assert code == 0
    size, width = out.splitlines()[2].split()[2:4]
    assert (size, width) == ("12", "1")


def test_compile_empty_ladder(capsys, data_dir, tmp_path):
    lad = tmp_path / "empty.ladder"
    lad.write_text("[penalty] alpha=120\n")
    code, _, err = run(capsys, "compile", "--instance", data_dir / "triangle.inst", "--ladder", lad)
    assert code == 1 and "no levels" in err


def test_compile_node_cap(capsys, data_dir, monkeypatch):
    code, _, err = run(capsys, "compile", "--instance", data_dir / "snip3x3.inst", "--node-cap", "3")
    assert code == 2 and "node cap" in err
    monkeypatch.setenv("SCENBDD_NODE_CAP", "3")
    assert run(capsys, "compile", "--instance", data_dir / "snip3x3.inst")[0] == 2
    # explicit flag wins over the environment
    assert run(capsys, "compile", "--instance", data_dir / "snip3x3.inst", "--node-cap", "1000")[0] == 0


def test_compile_order_file(capsys, data_dir, tmp_path):
    f = tmp_path / "order.txt"
    f.write_text("3 2 1\n")
    code, out, _ = run(capsys, "compile", "--instance", data_dir / "triangle.inst", "--order", "file", "--order-file", f)
    assert code == 0 and out.splitlines()[0] == "order 3,2,1"
    f.write_text("3 3 1\n")
    assert run(capsys, "compile", "--instance", data_dir / "triangle.inst", "--order", "file", "--order-file", f)[0] == 1


@pytest.mark.parametrize("order", ["occ", "cmk", "id"])
def test_orders_agree_on_value(capsys, data_dir, order):
    code, out, _ = run(capsys, "evaluate", "--instance", data_dir / "grid5.inst", "--x", "10010", "--order", order)
    assert code == 0
    assert float(out.splitlines()[-1].split()[1]) == pytest.approx(8.5397, abs=1e-9)


def test_evaluate_single_edge(capsys, data_dir):
    code, out, _ = run(capsys, "evaluate", "--instance", data_dir / "single_edge.inst", "--x", "0")
    assert code == 0
    assert float(out.splitlines()[-1].split()[1]) == pytest.approx(18.3, abs=1e-12)


def test_evaluate_deterministic_when_p_is_one(capsys, data_dir, tmp_path):
    text = (data_dir / "nondecidable.inst").read_text().replace("0.9 0", "1 0").replace("0.8 0", "1 0")
    f = tmp_path / "sure.inst"
    f.write_text(text)
    code, out, _ = run(capsys, "evaluate", "--instance", f, "--x", "000")
    assert code == 0 and out.splitlines()[-1] == "expected 2.0"


def test_evaluate_bad_x(capsys, data_dir):
    code, _, err = run(capsys, "evaluate", "--instance", data_dir / "single_edge.inst", "--x", "01")
    assert code == 1 and "length" in err


def test_emit_matches_golden(capsys, data_dir):
    code, out, _ = run(capsys, "emit", "--instance", data_dir / "single_edge.inst")
    assert code == 0 and out == (data_dir / "single_edge.lp").read_text()


def test_emit_nondecidable_has_no_binaries(capsys, data_dir):
    code, out, _ = run(capsys, "emit", "--instance", data_dir / "nondecidable.inst")
    assert code == 0 and "Binaries" not in out


@pytest.mark.parametrize("name", FIXTURES)
def test_check_fixtures(capsys, data_dir, name):
    code, out, _ = run(capsys, "check", "--instance", data_dir / f"{name}.inst")
    assert code == 0 and out.splitlines()[-1] == "PASS"


def test_check_corrupt_ladder(capsys, data_dir):
    code, _, err = run(
        capsys, "check", "--instance", data_dir / "triangle.inst",
        "--ladder", data_dir / "triangle_corrupt.ladder",
    )
    assert code == 1 and "minimality violation" in err


def test_check_wrong_values_fail(capsys, data_dir, tmp_path):
    # structurally valid ladder with a wrong critical value
    lad = tmp_path / "wrong.ladder"
    lad.write_text("[level] alpha=3\n110\n[level] alpha=5\n001\n[penalty] alpha=120\n")
    code, out, _ = run(capsys, "check", "--instance", data_dir / "triangle.inst", "--ladder", lad)
    assert code == 3 and "mismatch" in out and out.splitlines()[-1] == "FAIL"


def test_check_oversized(capsys, tmp_path):
    lines = ["[meta] mode=max_flow source=s sink=t", "[nodes]", "s", "t", "[edges]"]
    lines += ["s t 1 0.5 0 1 0"] * 25
    f = tmp_path / "big.inst"
    f.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "check", "--instance", f)
    assert code == 2 and "external ladder" in err


def test_bench_grid(capsys, tmp_path):
    args = ["bench-grid", "--n", "1", "--alpha-factor", "1.1", "--reps", "3", "--seed", "4"]
    code, out, _ = run(capsys, *args)
    assert code == 0
    head, row = out.splitlines()
    assert head.split()[:4] == ["alpha", "n", "arcs", "pairs"]
    assert row.split()[:4] == ["1.1", "1", "5", "18"]
    f = tmp_path / "b.txt"
    assert run(capsys, *args, "--out", f)[0] == 0
    assert f.read_text() == out


def test_bench_grid_desk_scale_guard(capsys):
    code, _, err = run(capsys, "bench-grid", "--n", "6")
    assert code == 1 and "--force" in err
