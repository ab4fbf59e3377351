import json
from fractions import Fraction

import pytest

from matbispec.algebra import MatC, MatPoly
from matbispec.cli import main
from matbispec.encoding import dumps, encode_laurent, encode_mat, encode_poly
from matbispec.fixtures import n1_potential, residue_potential


def write(path, obj):
    path.write_text(dumps(obj))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def seed_doc(residue, v0, v1, v212=None, K=None):
    doc = {"residue": encode_mat(residue), "V0": encode_mat(v0), "V1": encode_mat(v1), "V212": v212}
    if K is not None:
        doc["K"] = K
    return doc


def test_solve_scalar(tmp_path, capsys):
    seed = write(tmp_path / "s.json", seed_doc(MatC([[0]]), MatC([[0]]), MatC([[1]])))
    code, out, _ = run(capsys, ["solve", seed, "-K", "7"])
    assert code == 0
    coeffs = json.loads(out)["series"]["coeffs"]
    values = [c["entries"][0][0]["re"] for c in coeffs]
    assert values == ["0", "1", "0", "1/6", "0", "1/30", "0", "17/2520"]


def test_solve_residue_full_with_eval(tmp_path, capsys):
    seed = write(tmp_path / "s.json", seed_doc(MatC.scalar(2, -2), MatC.zeros(2), MatC.zeros(2), K=5))
    code, out, _ = run(capsys, ["solve", seed, "--eval", "1/2"])
    doc = json.loads(out)
    assert code == 0
    assert all(c["entries"] == encode_mat(MatC.zeros(2))["entries"] for c in doc["series"]["coeffs"])
    assert doc["evaluation"]["value"] == encode_mat(MatC.scalar(2, -4))
    # the solver returns a truncated series, so the majorant tail bound applies
    r, K = Fraction(1, 2), 5
    assert Fraction(doc["evaluation"]["tail_bound"]) == Fraction(1, 2 ** (K + 3)) * r ** (K + 1) / (1 - r / 2)


def test_solve_inconsistent_seed(tmp_path, capsys):
    seed = write(tmp_path / "s.json", seed_doc(MatC.diag([-2, 0]), MatC.identity(2), MatC.zeros(2)))
    code, out, err = run(capsys, ["solve", seed])
    assert code == 2 and out == "" and "V_{-1}V0" in err


def test_solve_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    code, _, err = run(capsys, ["solve", str(bad)])
    assert code == 1 and "line 1" in err


def test_solve_eval_at_pole(tmp_path, capsys):
    seed = write(tmp_path / "s.json", seed_doc(MatC([[0]]), MatC([[0]]), MatC([[1]])))
    code, _, err = run(capsys, ["solve", seed, "--eval", "0"])
    assert code == 1 and "pole" in err


def test_membership_member_and_non_member(tmp_path, capsys):
    V = n1_potential()
    pot = write(tmp_path / "v.json", encode_poly(V))
    theta = write(tmp_path / "t.json", encode_poly(V))
    code, out, _ = run(capsys, ["membership", theta, pot])
    assert code == 0 and json.loads(out) == {"member": True, "failed": None, "k": None, "witness": None}

    res = write(tmp_path / "r.json", encode_laurent(residue_potential(2)))
    x = write(tmp_path / "x.json", encode_poly(MatPoly([MatC.zeros(2), MatC.identity(2)])))
    code, out, _ = run(capsys, ["membership", x, res])
    cert = json.loads(out)
    assert code == 3 and cert["member"] is False and cert["failed"] == "ResidueRow"
    assert cert["witness"] is not None


def test_membership_dimension_mismatch(tmp_path, capsys):
    pot = write(tmp_path / "v.json", encode_poly(n1_potential()))
    theta = write(tmp_path / "t.json", encode_poly(MatPoly([MatC.identity(3)])))
    code, _, err = run(capsys, ["membership", theta, pot])
    assert code == 1 and "dimension" in err


def test_membership_non_autonomous_potential(tmp_path, capsys):
    pot = write(tmp_path / "v.json", encode_poly(MatPoly([MatC.zeros(2), MatC.identity(2)])))
    theta = write(tmp_path / "t.json", encode_poly(MatPoly([MatC.identity(2)])))
    code, _, err = run(capsys, ["membership", theta, pot])
    assert code == 2 and "order 3" in err


def test_max_degree_cap(tmp_path, capsys, monkeypatch):
    V = n1_potential()
    pot = write(tmp_path / "v.json", encode_poly(V))
    theta = write(tmp_path / "t.json", encode_poly(V))
    monkeypatch.setenv("BISPECTRAL_MAX_DEGREE", "1")
    code, _, err = run(capsys, ["membership", theta, pot])
    assert code == 1 and "BISPECTRAL_MAX_DEGREE" in err


def test_synthesize_outputs_verified_operator(tmp_path, capsys):
    V = n1_potential()
    pot = write(tmp_path / "v.json", encode_poly(V))
    code, out, _ = run(capsys, ["synthesize", pot, pot, "--verify", "both"])
    doc = json.loads(out)
    assert code == 0 and doc["operator"]["order"] == 1
    assert [r["passed"] for r in doc["verification"]] == [True, True]


def test_synthesize_non_member(tmp_path, capsys):
    res = write(tmp_path / "r.json", encode_laurent(residue_potential(2)))
    x = write(tmp_path / "x.json", encode_poly(MatPoly([MatC.zeros(2), MatC.identity(2)])))
    code, out, _ = run(capsys, ["synthesize", x, res])
    assert code == 3 and json.loads(out)["operator"] is None


def test_output_is_deterministic(tmp_path, capsys):
    V = n1_potential()
    pot = write(tmp_path / "v.json", encode_poly(V))
    outs = []
    for i in range(2):
        target = tmp_path / f"o{i}.json"
        assert main(["synthesize", pot, pot, "--output", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_fixtures_command(capsys):
    code, out, _ = run(capsys, ["fixtures", "--case", "n1", "--case", "residue_full"])
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and [c["name"] for c in doc["cases"]] == ["n1", "residue_full"]
    code, out, _ = run(capsys, ["fixtures", "--all", "--format", "text"])
    assert code == 0 and "[PASS] n3 (report mode)" in out
    code, _, _ = run(capsys, ["fixtures", "--case", "nope"])
    assert code == 1


def test_bad_arguments(capsys):
    assert main(["solve"]) == 1
    assert main(["frobnicate"]) == 1
