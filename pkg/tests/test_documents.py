import json

import pytest
from pydantic import ValidationError

from vlines.complexes import identity_map, same_complex
from vlines.couples import pages
from vlines.errors import DocumentError
from vlines.model.documents import (
    ComplexDocument,
    Loader,
    MapLoader,
    TowerExporter,
    export_tower,
    load_complex,
    load_tower,
    load_tower_map,
)
from vlines.model.util import SchemaVersion, is_comment
from vlines.towers import random_tower

from .base_test import SMALL, BaseTest


class TestTowerDocuments(BaseTest):
    def test_t1(self, t1_path, t1):
        tower = load_tower(t1_path)
        assert tower.S == 1
        assert all(same_complex(a, b) for a, b in zip(tower.levels, t1.levels))

    def test_comments(self, t1_path):
        document = Loader().load(input=t1_path)
        assert "comment" in document.comments()

    @pytest.mark.parametrize(
        "key, expected",
        [("comment", True), ("d2-comment", True), ("source_comment", True), ("comments", False), ("xcomment", False)],
    )
    def test_comment_keys(self, key, expected):
        assert is_comment(key) is expected

    def test_load_equivalence(self, t1_path):
        """Loading from file, dict and string give equal results."""

        raw = t1_path.read_text()
        d1 = Loader().load(input=t1_path)
        d2 = Loader().load(input=json.loads(raw))
        d3 = Loader().load(input=raw)
        assert d1 == d2
        assert d1 == d3

    def test_empty(self, resource_path_root):
        assert load_tower(resource_path_root / "empty.json").is_zero()

    def test_length(self, resource_path_root):
        data = json.loads((resource_path_root / "sphere.json").read_text())
        data["length"] = 2
        tower = Loader().load(input=data).tower()
        assert tower.S == 2
        assert tower.level(1).is_zero()

    def test_degree_mismatch(self, resource_path_root):
        with pytest.raises(ValidationError) as exc_info:
            load_tower(resource_path_root / "malformed_degree.json")
        assert "d(a): b has degree 1, expected 0" in str(exc_info.value)

    def test_filtration_violation(self, resource_path_root):
        with pytest.raises(ValidationError) as exc_info:
            load_tower(resource_path_root / "bad_filtration.json")
        assert "d(a)" in str(exc_info.value)

    def test_d_squared(self, resource_path_root):
        with pytest.raises(ValidationError) as exc_info:
            load_tower(resource_path_root / "d_squared.json")
        assert "d_1 o d_2" in str(exc_info.value)

    def test_composite_prime(self, resource_path_root):
        with pytest.raises(ValidationError):
            load_tower(resource_path_root / "composite_prime.json")

    def test_not_json(self, resource_path_root):
        with pytest.raises(DocumentError) as exc_info:
            load_tower(resource_path_root / "not_json.json")
        assert "malformed JSON" in str(exc_info.value)

    def test_not_an_object(self):
        with pytest.raises(DocumentError):
            load_tower("[1, 2]")

    def test_unknown_field(self):
        with pytest.raises(ValidationError) as exc_info:
            Loader().load(input={"p": 2, "generators": [], "levels": 3})
        assert "levels" in str(exc_info.value)

    def test_duplicate_generator(self):
        data = {"p": 2, "generators": [{"name": "a", "degree": 0, "filtration": 0}] * 2}
        with pytest.raises(ValidationError) as exc_info:
            Loader().load(input=data)
        assert "listed twice" in str(exc_info.value)

    def test_unknown_generator(self):
        data = {
            "p": 2,
            "generators": [{"name": "a", "degree": 1, "filtration": 0}],
            "differential": [{"from": "a", "to": [["z", 1]]}],
        }
        with pytest.raises(ValidationError) as exc_info:
            Loader().load(input=data)
        assert "unknown generator 'z'" in str(exc_info.value)

    @pytest.mark.parametrize("coefficient", [1.7, 1.0, "1", True])
    def test_coefficient_must_be_an_integer(self, coefficient):
        data = {
            "p": 2,
            "generators": [{"name": "a", "degree": 1, "filtration": 0}, {"name": "b", "degree": 0, "filtration": 1}],
            "differential": [{"from": "a", "to": [["b", coefficient]]}],
        }
        with pytest.raises(ValidationError) as exc_info:
            Loader().load(input=data)
        assert "integer" in str(exc_info.value)

    def test_newer_schema_version(self, t1_path):
        data = json.loads(t1_path.read_text())
        data["schema_version"] = "v2.0.0"
        with pytest.raises(DocumentError) as exc_info:
            Loader().load(input=data)
        assert "cannot read" in str(exc_info.value)

    def test_invalid_schema_version(self, t1_path):
        data = json.loads(t1_path.read_text())
        data["schema_version"] = "one"
        with pytest.raises(DocumentError):
            Loader().load(input=data)


class TestExport(BaseTest):
    def test_t1(self, t1):
        text = export_tower(t1)
        assert text.endswith("\n")
        data = json.loads(text)
        assert data["schema_version"] == "v1.0.0"
        assert data["length"] == 1
        assert [g["filtration"] for g in data["generators"]] == [1, 0]

    @pytest.mark.parametrize("seed", range(8))
    def test_round_trip_keeps_pages(self, seed):
        tower = random_tower(seed, SMALL)
        text = export_tower(tower)
        assert text == export_tower(tower)
        loaded = load_tower(text)
        r_max = tower.S + 2
        assert [p.module.dims for p in pages(loaded, r_max)] == [p.module.dims for p in pages(tower, r_max)]

    def test_exporter_checks_its_model(self):
        with pytest.raises(DocumentError):
            TowerExporter().export(input=SchemaVersion.create("v1.0.0"))


class TestComplexDocuments(BaseTest):
    def test_sphere(self, resource_path_root):
        assert load_complex(resource_path_root / "w_sphere.json").betti_numbers() == {0: 1}

    def test_acyclic(self, resource_path_root):
        assert load_complex(resource_path_root / "w_acyclic.json").is_acyclic()

    def test_filtrations_are_ignored(self):
        data = {
            "p": 2,
            "generators": [{"name": "a", "degree": 1, "filtration": 3}, {"name": "b", "degree": 0}],
            "differential": [{"from": "a", "to": [["b", 1]]}],
        }
        assert Loader(model=ComplexDocument).load(input=data).complex().is_acyclic()


class TestMapDocuments(BaseTest):
    def test_identity(self, resource_path_root, t1):
        f = load_tower_map(resource_path_root / "t1_identity.json")
        assert f.S == 1
        for s in range(2):
            assert same_complex(f.source.level(s), t1.level(s))
            assert f.component(s).components == identity_map(f.source.level(s)).components

    def test_sphere_to_t1(self, resource_path_root):
        f = load_tower_map(resource_path_root / "sphere_to_t1.json")
        assert f.source.S == f.target.S == 1
        assert not f.component(0).component(0).is_zero()

    def test_not_a_chain_map(self, resource_path_root):
        with pytest.raises(ValidationError) as exc_info:
            load_tower_map(resource_path_root / "not_a_chain_map.json")
        assert "not a chain map" in str(exc_info.value)

    def test_missing_reference(self, tmp_path):
        document = tmp_path / "map.json"
        document.write_text(json.dumps({"source": "nowhere.json", "target": "nowhere.json", "entries": []}))
        with pytest.raises(DocumentError):
            MapLoader().load(input=document)
