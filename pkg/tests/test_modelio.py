"""JSON document round trips and strict rejection of malformed input."""

import json

import pytest

from contextuality.errors import ModelFormatError, PreconditionError
from contextuality.modelio import (
    document_to_model,
    dump_model,
    dumps_model,
    load_model,
    loads_model,
    model_to_document,
    parse_state_text,
)
from contextuality.pmonoid import StructuredModel
from contextuality.scenario import EmpiricalModel


def test_round_trip_fixtures_byte_stable(mermin, ghz, hardy):
    for bundle, has_structure in ((mermin, True), (ghz, True),
                                  (hardy, False)):
        obj = bundle.structured if has_structure else bundle.model
        text = dumps_model(obj)
        back = loads_model(text)
        assert dumps_model(back) == text
        model = back.model if isinstance(back, StructuredModel) else back
        want = obj.model if isinstance(obj, StructuredModel) else obj
        assert model.scenario.measurements == want.scenario.measurements
        assert model.scenario.contexts == want.scenario.contexts
        assert model.sections == want.sections
        if has_structure:
            assert back.context_ops == obj.context_ops
            assert back.action == obj.action


def test_document_shapes(mermin, hardy):
    doc = model_to_document(mermin.structured)
    assert set(doc) == {"measurements", "outcome_modulus", "contexts",
                        "sections", "partial_monoid"}
    assert doc["outcome_modulus"] == 2
    assert set(doc["partial_monoid"]) == {"contexts", "action"}
    plain = model_to_document(hardy.model)
    assert "partial_monoid" not in plain
    assert sorted(plain["sections"]) == ["0", "1", "2", "3"]


def test_pauli_documents_build_fixtures(mermin, ghz):
    from contextuality.fixtures import MERMIN_GENERATORS

    doc = {"pauli": {"generators": list(MERMIN_GENERATORS)}}
    st = document_to_model(doc)
    assert isinstance(st, StructuredModel)
    assert st.model.sections == mermin.structured.model.sections
    assert st.context_ops == mermin.structured.context_ops

    ghz_gens = sorted({lab for ctx in ghz.model.scenario.contexts
                       for lab in ctx})
    doc2 = {"pauli": {"generators": ghz_gens, "state": "ghz:3"}}
    st2 = document_to_model(doc2)
    assert st2.model.sections == ghz.structured.model.sections


def test_file_round_trip(tmp_path, hardy):
    path = tmp_path / "hardy.json"
    dump_model(hardy.model, path)
    back = load_model(path)
    assert isinstance(back, EmpiricalModel)
    assert back.sections == hardy.model.sections
    raw = json.loads(path.read_text())
    assert raw["outcome_modulus"] == 2


def test_parse_state_text():
    v = parse_state_text("ghz:2", 2)
    assert v.entries == ((1, 0), (0, 0), (0, 0), (1, 0))
    v2 = parse_state_text([[1, 0], [0, -2]], 1)
    assert v2.entries == ((1, 0), (0, -2))
    with pytest.raises(ModelFormatError):
        parse_state_text("ghz:3", 2)
    with pytest.raises(ModelFormatError):
        parse_state_text("w:2", 2)
    with pytest.raises(ModelFormatError):
        parse_state_text([[0, 0], [0, 0]], 1)
    with pytest.raises(ModelFormatError):
        parse_state_text([[1, 0]], 1)


def _hardy_doc(hardy):
    return model_to_document(hardy.model)


def test_malformed_documents_rejected(hardy):
    base = _hardy_doc(hardy)

    doc = dict(base)
    doc["surprise"] = 1
    with pytest.raises(ModelFormatError, match="surprise"):
        document_to_model(doc)

    doc = dict(base)
    del doc["contexts"]
    with pytest.raises(ModelFormatError):
        document_to_model(doc)

    doc = json.loads(json.dumps(base))
    del doc["sections"]["2"]
    with pytest.raises(ModelFormatError):
        document_to_model(doc)

    doc = json.loads(json.dumps(base))
    doc["sections"]["0"][0] = [0]
    with pytest.raises(ModelFormatError):
        document_to_model(doc)

    doc = json.loads(json.dumps(base))
    doc["sections"]["0"][0] = [0, "x"]
    with pytest.raises(ModelFormatError):
        document_to_model(doc)

    doc = {"pauli": {"generators": ["+XX"]}, "extra": True}
    with pytest.raises(ModelFormatError):
        document_to_model(doc)

    doc = {"pauli": {"generators": ["+XX"], "junk": 0}}
    with pytest.raises(ModelFormatError, match="junk"):
        document_to_model(doc)

    with pytest.raises(ModelFormatError):
        document_to_model([1, 2, 3])


def test_malformed_structured_tables(mermin):
    base = json.loads(dumps_model(mermin.structured))
    doc = json.loads(json.dumps(base))
    doc["partial_monoid"]["contexts"][0][0][2] = "nope"
    with pytest.raises(ModelFormatError):
        document_to_model(doc)
    doc2 = json.loads(json.dumps(base))
    doc2["partial_monoid"]["action"]["moduli"] = [2, 2]
    with pytest.raises((ModelFormatError, PreconditionError)):
        document_to_model(doc2)


def test_loads_rejects_bad_json():
    with pytest.raises(ModelFormatError):
        loads_model("{not json")
