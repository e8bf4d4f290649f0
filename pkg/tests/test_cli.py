"""Command-line front end: dispatch, exit codes, determinism."""

import io
import json

import pytest

from quadmot import cli


def run(argv, stdin_text=None, monkeypatch=None):
    import sys
    buf = io.StringIO()
    real_stdout = sys.stdout
    if stdin_text is not None:
        sys.stdin = io.StringIO(stdin_text)
    sys.stdout = buf
    try:
        code = cli.main(argv)
    finally:
        sys.stdout = real_stdout
        sys.stdin = sys.__stdin__
    return code, buf.getvalue()


EXAMPLE = {
    "dim": 8,
    "splitting_pattern": [1, 1, 2],
    "kahn_dims": {"2": 6},
    "anisotropic": True,
    "chow_mdt": {"components": [["0", "2", "3u", "5"],
                                ["1", "3l", "4", "6"]]},
}

ROW_PROFILE = {
    "dim": 7,
    "splitting_pattern": [1, 2],
    "kahn_dims": {"2": 3},
    "symbols": {"2": "a"},
}


class TestDispatch:
    def test_fgl(self):
        code, out = run(["fgl", "--n", "1", "--truncation", "4"])
        assert code == 0
        assert "log(t) = t + (1/2^1*v)*t^2 + (1/2^2*v^3)*t^4" in out
        assert "[2](t)" in out

    def test_ring(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"dim": 7}))
        code, out = run(["ring", str(path)])
        assert code == 0
        assert "h^4 = " in out and "multiplication table" in out

    def test_diag(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"dim": 8}))
        code, out = run(["diag", str(path)])
        assert code == 0
        assert "sum equals diagonal: True" in out
        assert "mutually orthogonal idempotents: True" in out

    def test_steenrod(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps({"dim": 7}))
        code, out = run(["steenrod", str(path)])
        assert code == 0
        assert "St(l0)" in out and "window report" in out

    def test_mdt_example(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(EXAMPLE))
        code, out = run(["mdt", str(path)])
        assert code == 0
        assert "components: {2 3u}  {3l 4}" in out
        assert "complementary: 0 1 5 6" in out
        assert "round trip restores the Chow diagram: True" in out

    def test_classify(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(ROW_PROFILE))
        code, out = run(["classify-k2", str(path)])
        assert code == 0
        assert "row: odd dim2=3" in out
        assert "R[C0(q)]*L[a](2)" in out

    def test_classify_stdin(self):
        code, out = run(["classify-k2", "-"], stdin_text=json.dumps(ROW_PROFILE))
        assert code == 0
        assert "row: odd dim2=3" in out

    def test_motive_ops(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text(json.dumps({
            "op": "tensor",
            "a": [{"kind": "L", "symbol": ["a"], "twist": 1}],
            "b": [{"kind": "L", "symbol": ["a", "b"], "twist": 2}],
        }))
        code, out = run(["motive", str(path)])
        assert code == 0
        assert out.strip() == "L[b](0)"
        path.write_text(json.dumps({
            "op": "detect", "symbol": ["a"], "twist": 1,
            "a": [{"kind": "L", "symbol": ["a"], "twist": 1},
                  {"kind": "tate", "twist": 1}],
        }))
        code, out = run(["motive", str(path)])
        assert code == 0 and out.strip() == "1"


class TestFormats:
    def test_svg(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(EXAMPLE))
        code, out = run(["mdt", str(path), "--format", "svg"])
        assert code == 0
        assert "<svg" in out and 'stroke="red"' in out

    def test_structured(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(EXAMPLE))
        code, out = run(["mdt", str(path), "--format", "structured-text"])
        assert code == 0
        start = out.index("{")
        block = json.loads(out[start:out.index("height-2")])
        assert block["flavor"] == "chow"

    def test_out_file(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(ROW_PROFILE))
        target = tmp_path / "result.txt"
        code, _ = run(["classify-k2", str(path), "--out", str(target)])
        assert code == 0
        assert "row: odd dim2=3" in target.read_text()


class TestExitCodes:
    def test_parse_failure(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _ = run(["classify-k2", str(path)])
        assert code == 2

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"dim": 7, "mystery": 1}))
        code, _ = run(["classify-k2", str(path)])
        assert code == 2

    def test_validation_failure(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "dim": 6, "splitting_pattern": [1, 2], "i_power": 3,
            "kahn_dims": {"2": 0}, "symbols": {"2": "a"}}))
        code, _ = run(["classify-k2", str(path)])
        assert code == 3

    def test_outer_violation_is_validation_failure(self, tmp_path):
        bad = dict(EXAMPLE)
        bad["chow_mdt"] = {"components": [
            ["0"], ["3u"], ["1", "4"], ["2", "5"], ["3l", "6"]]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        code, _ = run(["mdt", str(path)])
        assert code == 3

    def test_missing_input(self):
        code, _ = run(["ring"])
        assert code == 2


class TestDeterminism:
    def test_byte_identical_runs(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(EXAMPLE))
        outputs = {run(["mdt", str(path)])[1] for _ in range(3)}
        assert len(outputs) == 1
        outputs = {run(["classify-k2", "-"],
                       stdin_text=json.dumps(ROW_PROFILE))[1]
                   for _ in range(3)}
        assert len(outputs) == 1
        outputs = {run(["mdt", str(path), "--format", "svg"])[1]
                   for _ in range(3)}
        assert len(outputs) == 1
