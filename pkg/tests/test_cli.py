import json

import pytest

from gnepdeg import instancefile
from gnepdeg.cli import main
from gnepdeg.poly import multidegree


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, doc, name="spec.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def degree_spec(dims, objectives, constraints):
    return {"players": [
        {"dim": n, "objective": {"multidegree": list(d0)},
         "constraints": [{"kind": k, "multidegree": list(d)} for k, d in cs]}
        for n, d0, cs in zip(dims, objectives, constraints)
    ]}


JOINT = degree_spec((3, 3), [(2, 1), (1, 2)], [[("ineq", (1, 1))], [("ineq", (1, 1))]])


def test_degree_human_and_json(tmp_path, capsys):
    path = write(tmp_path, JOINT)
    code, out, _ = run(capsys, "degree", path)
    assert code == 0 and out == "total: 150\n"
    code, out, _ = run(capsys, "degree", path, "--per-active")
    assert out.splitlines()[-1] == "total: 150" and len(out.splitlines()) == 5
    code, out, _ = run(capsys, "degree", path, "--active", "1:{};2:{}")
    assert out.splitlines()[-1] == "total: 20"
    code, out, _ = run(capsys, "degree", path, "--json")
    doc = json.loads(out)
    assert doc["total"] == 150
    assert [r["degree"] for r in doc["breakdown"]] == [20, 34, 34, 62]
    assert [r["active"] for r in doc["breakdown"]] == ["1:{};2:{}", "1:{};2:{1}", "1:{1};2:{}", "1:{1};2:{1}"]


def test_bound_on_bundled_examples(capsys):
    code, out, _ = run(capsys, "bound", "inner_product_gnep")
    assert code == 0
    assert "total: 190" in out.splitlines() and "generic total: 230" in out.splitlines()
    code, out, _ = run(capsys, "bound", "inner_product_gnep", "--json")
    doc = json.loads(out)
    assert (doc["total"], doc["generic_total"]) == (190, 230)
    assert {(c["player"], c["label"]): tuple(c["degree"]) for c in doc["check_degrees"]}[(1, 1)] == (0, 1)
    assert run(capsys, "bound", "three_player_gnep")[1].splitlines()[-2] == "total: 74"
    assert "total: 156" in run(capsys, "bound", "ball_nep")[1].splitlines()


def test_bound_with_explicit_check_degrees(tmp_path, capsys):
    doc = degree_spec((3, 3), [(2, 1), (1, 2)], [[("ineq", (2, 0))], [("ineq", (0, 2))]])
    doc["players"][0]["constraints"][0]["check_degree"] = [1, 0]
    doc["players"][1]["constraints"][0]["check_degree"] = [0, 1]
    code, out, _ = run(capsys, "bound", write(tmp_path, doc), "--json")
    assert code == 0
    assert [r["degree"] for r in json.loads(out)["breakdown"]] == [20, 30, 30, 76]


def test_bound_needs_polynomials_or_check_degrees(tmp_path, capsys):
    code, _, err = run(capsys, "bound", write(tmp_path, JOINT))
    assert code == 2 and "check_degree" in err


def test_nep_degree(capsys, tmp_path):
    code, out, _ = run(capsys, "nep-degree", "unconstrained_nep")
    assert code == 0 and "total: 245" in out.splitlines()
    code, out, _ = run(capsys, "nep-degree", "ball_nep", "--json")
    doc = json.loads(out)
    assert doc["total"] == doc["gnep_path_total"] == 156
    code, _, err = run(capsys, "nep-degree", write(tmp_path, JOINT))
    assert code == 2 and "NEP" in err


def test_active_sets(capsys, tmp_path):
    assert run(capsys, "active-sets", "inner_product_gnep")[1].splitlines()[-1] == "count: 6"
    assert run(capsys, "active-sets", "ball_nep")[1].splitlines()[-1] == "count: 4"
    all_eq = degree_spec((2, 2), [(1, 1)] * 2, [[("eq", (1, 1))], [("eq", (1, 1))]])
    code, out, _ = run(capsys, "active-sets", write(tmp_path, all_eq), "--json")
    assert json.loads(out) == {"command": "active-sets", "count": 1, "active_sets": ["1:{1};2:{1}"]}


def test_generate_is_deterministic_and_generic(tmp_path, capsys):
    src = write(tmp_path, JOINT)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "generate", src, "--seed", "4", "-o", str(a))[0] == 0
    assert run(capsys, "generate", src, "--seed", "4", "-o", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    code, out, _ = run(capsys, "generate", src, "--seed", "5")
    assert out != a.read_text()
    spec = instancefile.load(str(a))
    assert spec.has_polynomials()
    assert multidegree(spec.slots[0][0].polynomial) == (2, 1)
    bound = run(capsys, "bound", str(a), "--json")[1]
    assert json.loads(bound)["total"] == json.loads(bound)["generic_total"] == 150
    assert run(capsys, "generate", src, "--coeff-bound", "0")[0] == 1


def test_export(tmp_path, capsys):
    a, b = tmp_path / "a.m2", tmp_path / "b.m2"
    for out in (a, b):
        assert run(capsys, "export", "ball_nep", "--active", "1:{1};2:{1}", "-o", str(out))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()
    code, out, _ = run(capsys, "export", "ball_nep", "--active", "1:{};2:{}", "--format", "json")
    doc = json.loads(out)
    assert len(doc["generators"]) == 6 and doc["active"] == [[], []]
    code, out, _ = run(capsys, "export", "ball_nep", "--active", "1:{1};2:{1}", "--formulation", "lagrange")
    assert "l1_1, l2_1]" in out
    assert run(capsys, "export", "ball_nep", "--active", "1:{2};2:{}")[0] == 1
    assert run(capsys, "export", "ball_nep", "--active", "nonsense")[0] == 1
    assert run(capsys, "export", write(tmp_path, JOINT), "--active", "1:{};2:{}")[0] == 2


def test_export_every_active_tuple(tmp_path, capsys):
    outdir = tmp_path / "scripts"
    code, out, _ = run(capsys, "export", "ball_nep", "-o", str(outdir))
    assert code == 0
    assert sorted(p.name for p in outdir.iterdir()) == [f"active_0{k}.m2" for k in range(1, 5)]
    assert run(capsys, "export", "ball_nep")[0] == 1


def test_selftest(tmp_path, capsys):
    code, out, _ = run(capsys, "selftest", "--depth", "0")
    assert code == 0
    for total in (245, 156, 150, 190, 296, 74):
        assert f"total {total}" in out
    assert "generating functions" not in out
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "generating functions" in out

    doc = json.loads(instancefile.load_bundled("ball_nep").dumps())
    doc["expected"]["total"] = 157
    code, out, _ = run(capsys, "selftest", "--depth", "0", "--fixture", write(tmp_path, doc))
    assert code == 3 and "FAIL" in out


def test_usage_and_parse_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["degree", "ball_nep", "--bogus"])
    assert info.value.code == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run(capsys, "degree", str(bad))[0] == 1
    assert run(capsys, "degree", str(tmp_path / "missing.json"))[0] == 1


# instance files


@pytest.mark.parametrize("mutate,message", [
    (lambda d: d["players"][0]["objective"].update(polynomial="x1_1^3"), "declared multidegree"),
    (lambda d: d["players"][0]["objective"].clear(), "needs 'multidegree' or 'polynomial'"),
    (lambda d: d["players"][0]["constraints"][0].update(kind="le"), "kind"),
    (lambda d: d["players"][0].update(dim=0), "dim"),
    (lambda d: d["players"][0]["objective"].update(multidegree=[1]), "expected 2 entries"),
    (lambda d: d["players"][0]["objective"].update(polynomial="x3_1"), "unknown variable"),
    (lambda d: d["players"][0]["constraints"][0].update(multidegree=[0, 0]), "zero multi-degree"),
    (lambda d: d.update(players=[]), "players"),
])
def test_instance_file_errors(mutate, message):
    doc = json.loads(json.dumps(JOINT))
    mutate(doc)
    with pytest.raises(instancefile.InstanceFileError, match=message):
        instancefile.parse_instance(doc)


def test_instance_file_mixed_slots_and_round_trip():
    doc = json.loads(json.dumps(JOINT))
    doc["players"][0]["objective"]["polynomial"] = "x1_1^2*x2_3 + x1_2"
    spec = instancefile.parse_instance(doc)
    assert spec.shape.degree(1, 0) == (2, 1)
    assert not spec.has_polynomials()
    assert spec.check_overrides() == {(1, 0): (1, 1)}
    assert instancefile.loads(spec.dumps()) == spec


def test_bundled_examples_listed():
    assert instancefile.bundled_names() == [
        "ball_nep", "inner_product_gnep", "joint_linear_gnep",
        "quadratic_gnep", "three_player_gnep", "unconstrained_nep",
    ]
    with pytest.raises(instancefile.InstanceFileError):
        instancefile.load_bundled("nope")
