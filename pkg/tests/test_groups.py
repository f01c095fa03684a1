import json

import numpy as np
import pytest

from fsalg import groups
from fsalg.groups import CatalogInvalid, FiniteGroupModel, GroupFileError, validate_model

from conftest import ALL_GROUPS


@pytest.mark.parametrize("name", ALL_GROUPS)
def test_bundled_groups_validate(name):
    G = groups.bundled(name)
    rep = validate_model(G.model, G.catalog)
    assert rep.ok, rep.failures
    assert sum(d * d for d in G.catalog.dims) == G.order
    assert G.catalog[0].dim == 1 and np.allclose(G.catalog[0].character, 1)


def test_specific_catalogs():
    Z3 = groups.bundled("Z3")
    w = np.exp(2j * np.pi / 3)
    assert np.allclose(Z3.catalog[1].character, [1, w, w * w])
    S3 = groups.bundled("S3")
    assert S3.catalog.dims == (1, 1, 2)
    assert [r.label for r in S3.catalog] == ["triv", "sgn", "std"]
    assert groups.bundled("D4").catalog.dims == (1, 1, 1, 1, 2)
    assert groups.bundled("Q8").catalog.dims == (1, 1, 1, 1, 2)


def test_s3_standard_basis():
    S3 = groups.bundled("S3")
    std = S3.catalog[S3.catalog.index("std")]
    e1 = np.array([1, -1, 0]) / np.sqrt(2)
    e2 = np.array([1, 1, -2]) / np.sqrt(6)
    B = np.stack([e1, e2], axis=1)
    for g, label in enumerate(S3.model.elements):
        P = np.zeros((3, 3))
        for x in range(3):
            P[int(label[x]), x] = 1
        assert np.allclose(std.matrices[g], B.T @ P @ B)


def test_corrupted_table_reports_associativity():
    G = groups.bundled("S3")
    T = G.model.mult.copy()
    T[1, 2], T[1, 3] = T[1, 3], T[1, 2]
    rep = validate_model(FiniteGroupModel("bad", G.model.elements, T))
    checks = {f.check for f in rep.failures}
    assert "associativity" in checks
    wit = next(f.witness for f in rep.failures if f.check == "associativity")
    g, h, k = wit
    assert T[T[g, h], k] != T[g, T[h, k]]


def test_structural_errors():
    with pytest.raises(GroupFileError):
        FiniteGroupModel("x", ("a", "b"), np.zeros((2, 3), dtype=int))
    with pytest.raises(GroupFileError):
        FiniteGroupModel("x", ("a", "b"), np.array([[0, 1], [1, 2]]))


def test_incomplete_catalog_rejected():
    G = groups.bundled("S3")
    with pytest.raises(CatalogInvalid) as err:
        groups.make_group("S3", G.model.elements, G.model.mult, list(G.catalog)[:2])
    assert any(f.check == "completeness" for f in err.value.report.failures)


def test_non_homomorphism_rejected():
    G = groups.bundled("Z4")
    irreps = list(G.catalog)
    bad = groups.Irrep(1, irreps[1].matrices[::-1].copy(), "bad")
    rep = validate_model(G.model, groups.IrrepCatalog(tuple(irreps[:1] + [bad] + irreps[2:])))
    assert any(f.check == "homomorphism" for f in rep.failures)


@pytest.mark.parametrize("name", ["Z5", "S3", "Q8"])
def test_json_roundtrip(tmp_path, name):
    G = groups.bundled(name)
    path = tmp_path / f"{name}.json"
    groups.dump_group(G, path)
    H = groups.load_group(path)
    assert H.model.elements == G.model.elements
    assert np.array_equal(H.model.mult, G.model.mult)
    for a, b in zip(G.catalog, H.catalog):
        assert np.allclose(a.matrices, b.matrices)


def test_json_errors(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x",\n "order": 2,,}')
    with pytest.raises(GroupFileError, match="line 2"):
        groups.load_group(path)
    data = groups.group_to_json(groups.bundled("Z2"))
    data["irreps"][1]["matrices"] = [[[1.0, 0.0]], [[1.0, 0.0]]]  # duplicate of trivial
    with pytest.raises(CatalogInvalid):
        groups.group_from_json(data)
    del data["mult"]
    with pytest.raises(GroupFileError):
        groups.group_from_json(data)


def test_group_dir_override(tmp_path, monkeypatch):
    G = groups.bundled("Z3")
    data = groups.group_to_json(G)
    data["name"] = "Z3-from-dir"
    (tmp_path / "Z3.json").write_text(json.dumps(data))
    monkeypatch.setenv("FSALG_GROUP_DIR", str(tmp_path))
    assert groups.bundled("Z3").name == "Z3-from-dir"
