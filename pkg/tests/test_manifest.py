import pytest

from sqorient import config
from sqorient.services.corpus import builtin
from sqorient.services.errors import InvalidInput, ManifestError
from sqorient.services.manifest import dump_manifest, load_manifest, loads_manifest
from sqorient.services.poly import Mode

CP2 = """{
  "schema": 1,
  "name": "CP2",
  "dimension": 4,
  "generators": [{"name": "x", "degree": 2}],
  "relations": ["x^3"]
}"""


def test_load_corpus_manifest():
    loaded = load_manifest(config.CORPUS_DIR / "eiii.json")
    p = loaded.presentation
    assert p.name == "EIII"
    assert p.mode is Mode.INT
    assert p.params == ("a", "b", "c", "d")
    assert p.instantiation("ishitoya") == {"a": 1, "b": 1, "c": 1, "d": 0}
    assert len(loaded.digest) == 64


def test_loads_minimal_manifest():
    loaded = loads_manifest(CP2)
    assert loaded.presentation.dim == 4
    assert loaded.presentation.mode is Mode.GF2
    assert loaded.manifest.assume_smooth is False


def test_missing_file_is_invalid_input(tmp_path):
    with pytest.raises(InvalidInput):
        load_manifest(tmp_path / "absent.json")


def test_json_syntax_error_has_a_position():
    with pytest.raises(ManifestError) as info:
        loads_manifest('{"schema": 1,\n  "name": }')
    assert info.value.line == 2


def test_schema_error_points_at_the_key():
    raw = CP2.replace('"dimension": 4', '"dimension": 0')
    with pytest.raises(ManifestError) as info:
        loads_manifest(raw)
    assert "dimension" in str(info.value)
    assert (info.value.line, info.value.column) == (4, 4)


def test_unsupported_schema_version():
    with pytest.raises(ManifestError):
        loads_manifest(CP2.replace('"schema": 1', '"schema": 2'))


def test_expression_error_points_into_the_relation():
    raw = CP2.replace('"relations": ["x^3"]', '"relations": ["x^3 + z"]')
    with pytest.raises(ManifestError) as info:
        loads_manifest(raw)
    assert "'z'" in str(info.value)
    assert (info.value.line, info.value.column) == (6, 24)


def test_structural_error_points_at_the_relation():
    raw = CP2.replace('"relations": ["x^3"]', '"relations": ["x^3", "x^2 + x"]')
    with pytest.raises(ManifestError) as info:
        loads_manifest(raw)
    assert info.value.line == 6


def test_unknown_field_is_rejected():
    with pytest.raises(ManifestError):
        loads_manifest(CP2.replace('"dimension": 4', '"dimension": 4, "dim": 4'))


@pytest.mark.parametrize("name", ["CP2", "EIII", "EVI"])
def test_dump_round_trip(name):
    p = builtin(name)
    again = loads_manifest(dump_manifest(p)).presentation
    assert again == p
    assert again.instantiations == p.instantiations
