from __future__ import annotations

import json

from multirec.cli import main
from multirec.figures import _fixture
from multirec.render import read_grid_fixture, to_text

# diagonal block sequence of the derivative example, as published
DIAGONAL_BLOCKS = "[0/1][1/0][1/1][0/1][0/1][0/0][0/1][1/0][0/1][1/0]"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_extract_diagonal_blocks(capsys):
    code, out, _ = run(
        capsys, "extract", "--preset", "surd-not-ssurdo-2x2",
        "--dir", "1,1", "--size", "1x2", "--len", "10",
    )
    assert code == 0
    assert out == DIAGONAL_BLOCKS + "\n"


def test_extract_json_blocks(capsys):
    code, out, _ = run(
        capsys, "extract", "--preset", "surd-not-ssurdo-2x2",
        "--dir", "1,1", "--size", "1x2", "--len", "2", "--json",
    )
    assert code == 0
    assert json.loads(out) == [[[1], [0]], [[0], [1]]]


def test_extract_origin_shift(capsys):
    code, out, _ = run(
        capsys, "extract", "--preset", "surd-not-ssurdo-2x2",
        "--dir", "1,1", "--size", "1x2", "--len", "9", "--origin", "1,1",
    )
    assert code == 0
    assert out.rstrip("\n") == DIAGONAL_BLOCKS[len("[0/1]"):]


def test_generate_text_grid(capsys):
    code, out, _ = run(capsys, "generate", "--preset", "sierpinski", "--box", "8x4")
    assert code == 0
    assert out == (
        "1 0 0 0 1 0 0 0\n"
        "1 1 0 0 1 1 0 0\n"
        "1 0 1 0 1 0 1 0\n"
        "1 1 1 1 1 1 1 1\n"
    )


def test_generate_pbm(capsys):
    code, out, _ = run(
        capsys, "generate", "--preset", "sierpinski", "--box", "4x2",
        "--format", "pbm",
    )
    assert code == 0
    assert out.splitlines()[:2] == ["P1", "4 2"]


def test_generate_iterate_matches_reference_grid(capsys):
    code, out, _ = run(
        capsys, "generate", "--preset", "preimage-3x2", "--iterate", "3",
        "--letter", "1",
    )
    assert code == 0
    rows, _ = read_grid_fixture(_fixture("fig-preimage.txt"))
    assert out.rstrip("\n") == to_text(rows)


def test_generate_flag_conflicts(capsys):
    code, _, err = run(
        capsys, "generate", "--preset", "sierpinski", "--box", "4x4",
        "--iterate", "2",
    )
    assert code == 1
    assert "mutually exclusive" in err
    code, _, err = run(capsys, "generate", "--preset", "sierpinski")
    assert code == 1
    assert "--box" in err


def test_generate_box_dimension_mismatch(capsys):
    code, _, err = run(capsys, "generate", "--word", "thue-morse", "--box", "4x4")
    assert code == 1
    assert "dimension" in err


def test_unknown_word_is_a_usage_error(capsys):
    code, _, err = run(capsys, "generate", "--word", "no-such-word", "--box", "4x4")
    assert code == 1


def test_output_file_matches_stdout(tmp_path, capsys):
    path = tmp_path / "grid.txt"
    code, out, _ = run(capsys, "generate", "--preset", "sierpinski", "--box", "6x3")
    assert code == 0
    code2 = main([
        "generate", "--preset", "sierpinski", "--box", "6x3", "-o", str(path)
    ])
    capsys.readouterr()
    assert code2 == 0
    assert path.read_text() == out


def test_repeated_runs_are_byte_identical(capsys):
    args = ("derive", "--word", "surd-not-ssurdo-2x2", "--size", "1x2",
            "--box", "8x8", "--scheme", "uniform", "--json")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second
    assert first[0] == 0


def test_subgroups_text(capsys):
    code, out, _ = run(capsys, "subgroups", "--s", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "C(5) in dimension 2: 6 subgroups"
    assert len(lines) == 7


def test_subgroups_json(capsys):
    code, out, _ = run(capsys, "subgroups", "--s", "6", "--json")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["subgroups"]) == 12
    assert all(len(g["elements"]) == 6 for g in payload["subgroups"])


def test_classify_surd_preset(capsys):
    code, out, _ = run(capsys, "classify", "--preset", "surd-not-ssurdo-2x2")
    assert code == 0
    assert out == "SURD\n"


def test_classify_witness_line(capsys):
    code, out, _ = run(capsys, "classify", "--preset", "sierpinski")
    assert code == 0
    assert out.startswith("NOT_SURD\n")
    assert "verified=True" in out


def test_classify_rejects_other_shapes(capsys):
    code, _, err = run(capsys, "classify", "--preset", "ssurdo-3x3")
    assert code == 1
    assert "(2, 2)" in err


def test_check_ssurdo_preset_passes(capsys):
    code, out, _ = run(
        capsys, "check", "--preset", "ssurdo-3x3", "--mode", "ssurdo",
        "--budget", "800,2,1,2,64",
    )
    assert code == 0
    assert "BOUNDED_WITNESSED" in out


def test_check_urd_failure_exits_2(capsys):
    code, _, err = run(
        capsys, "check", "--word", "fib-rows", "--mode", "urd",
        "--budget", "1000,2,2,2,64",
    )
    assert code == 2
    assert "urd check failed" in err


def test_check_ur_json(capsys):
    code, out, _ = run(
        capsys, "check", "--word", "toeplitz-rows", "--mode", "ur",
        "--budget", "600,2,2,2,64", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert all(entry["window"] is not None for entry in payload)


def test_bad_budget_string(capsys):
    code, _, err = run(
        capsys, "check", "--preset", "sierpinski", "--budget", "100,2",
    )
    assert code == 1


def test_derive_grid_output(capsys):
    code, out, _ = run(
        capsys, "derive", "--word", "surd-not-ssurdo-2x2", "--size", "1x2",
        "--box", "6x6", "--grid",
    )
    assert code == 0
    rows = out.rstrip("\n").splitlines()
    assert len(rows) == 6
    # bottom row is printed last and starts at the origin's code
    assert rows[-1].split()[0] == "0"


def test_derive_uniform_marks_origin(capsys):
    code, out, _ = run(
        capsys, "derive", "--word", "surd-not-ssurdo-2x2", "--size", "1x2",
        "--box", "4x4", "--scheme", "uniform", "--grid",
    )
    assert code == 0
    assert out.rstrip("\n").splitlines()[-1].split()[0] == "?"


def test_derive_budget_exhaustion_exits_3(capsys):
    code, _, err = run(
        capsys, "derive", "--word", "sierpinski", "--size", "1x1",
        "--box", "4x4",
    )
    assert code == 3
    assert "budget exhausted" in err


def test_verify_figures_all_pass(capsys):
    code, out, _ = run(capsys, "verify-figures")
    assert code == 0
    lines = out.rstrip("\n").splitlines()
    assert len(lines) == 11
    assert all(line.startswith("PASS ") for line in lines)


def test_no_command_is_usage(capsys):
    assert run(capsys, )[0] == 1


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0
