import json

import pytest

from conftest import random_algebra
from gcohft import frobenius as fr
from gcohft import orbifold, specs
from gcohft.groups import direct_product, named_group


def roundtrip(A):
    text = json.dumps(specs.algebra_to_json(A))
    return specs.algebra_from_json(json.loads(text))


def same_structure(A, B):
    return fr.check_isomorphism(A, B, [{i: 1} for i in range(A.dim)]) == []


def test_group_ring_roundtrip():
    A = fr.group_ring(named_group("S3"))
    B = roundtrip(A)
    assert B.group.mul_table == A.group.mul_table
    assert same_structure(A, B) and fr.full_report(B).ok


def test_random_model_roundtrip_reorders_by_sector():
    A = random_algebra(named_group("D4"), seed=6)
    B = roundtrip(A)
    assert fr.full_report(B).ok
    assert list(B.module.sector_of) == sorted(A.module.sector_of)


def test_product_group_serialized_as_table():
    Z2, S3 = named_group("Z2"), named_group("S3")
    A = fr.tensor_external_alg(fr.group_ring(Z2), fr.group_ring(S3))
    data = specs.algebra_to_json(A)
    assert isinstance(data["group"], dict)
    B = specs.algebra_from_json(data)
    assert B.group.mul_table == A.group.mul_table and fr.full_report(B).ok


def test_gset_roundtrip():
    X = orbifold.natural(named_group("D4"))
    Y = specs.gset_from_json(json.loads(json.dumps(specs.gset_to_json(X))))
    assert Y.images == X.images


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d.pop("mult"),
        lambda d: d["metric"].append([0, 99, "1"]),
        lambda d: d["unit"].__setitem__(0, [0, "1/0"]),
        lambda d: d["unit"].__setitem__(0, [0, 0.5]),
        lambda d: d.__setitem__("group", "perm 2: (1 2"),
        lambda d: d.__setitem__("group", {"table": [[0, 1], [1, 1]]}),
    ],
)
def test_malformed_specs(mutate):
    data = specs.algebra_to_json(fr.group_ring(named_group("Z2")))
    mutate(data)
    with pytest.raises(ValueError):
        specs.algebra_from_json(data)


def test_builtin_registry():
    assert specs.builtin_model("groupring:S3").dim == 6
    assert specs.builtin_model("fgset:S3-natural").dim == 6
    assert specs.builtin_model("fgset:D4-natural").dim == 8
    assert specs.builtin_model("fgset:point:Q8").mult == fr.group_ring(named_group("Q8")).mult
    assert specs.builtin_model("fgset:regular:Z4").module.sector_dims() == (4, 0, 0, 0)
    assert specs.builtin_model("trivial:2:S3").dim == 12
    assert specs.builtin_model("groupring:symmetric 3").dim == 6
    with pytest.raises(specs.SpecError):
        specs.builtin_model("groupring:")
    with pytest.raises(specs.SpecError):
        specs.builtin_model("fgset:nothing")


def test_load_model_from_file(tmp_path):
    path = tmp_path / "z3.json"
    path.write_text(json.dumps(specs.algebra_to_json(fr.group_ring(named_group("Z3")))))
    assert fr.full_report(specs.load_model(str(path))).ok
    gpath = tmp_path / "x.json"
    gpath.write_text(json.dumps(specs.gset_to_json(orbifold.natural(named_group("S3")))))
    assert specs.load_model(str(gpath)).dim == 6
    with pytest.raises(specs.SpecError):
        specs.load_model(str(tmp_path / "missing.json"))
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(specs.SpecError):
        specs.load_model(str(tmp_path / "bad.json"))


def test_direct_product_table_group_has_generators():
    G = direct_product(named_group("Z2"), named_group("Z2"))
    H = specs.group_from_json({"table": [list(r) for r in G.mul_table]})
    assert H.subgroup_generated(H.generators).order == 4
