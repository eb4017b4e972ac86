"""Scenario and model layer: validation, no-signalling, classification."""

import pytest

from contextuality.errors import PreconditionError
from contextuality.scenario import (
    ContextualityClass,
    EmpiricalModel,
    MeasurementScenario,
    Section,
    check_no_signalling,
    classify,
    global_sections,
    restrict_section,
    section_extends,
    sections_below,
    validate_scenario,
)


def _model(measurements, d, contexts, supports):
    scenario = MeasurementScenario.make(measurements, d, contexts)
    secs = []
    for ctx in scenario.contexts:
        rows = [Section.of(dict(zip(ctx, vals))) for vals in supports[ctx]]
        secs.append(rows)
    return EmpiricalModel.make(scenario, secs)


def _pr_box():
    sup = {
        ("a1", "b1"): [(0, 0), (1, 1)],
        ("a1", "b2"): [(0, 0), (1, 1)],
        ("a2", "b1"): [(0, 0), (1, 1)],
        ("a2", "b2"): [(0, 1), (1, 0)],
    }
    return _model(("a1", "a2", "b1", "b2"), 2,
                  [("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2")],
                  sup)


def _product_model():
    # two contexts sharing x; every outcome allowed
    sup = {
        ("x", "y"): [(i, j) for i in range(2) for j in range(2)],
        ("x", "z"): [(i, j) for i in range(2) for j in range(2)],
    }
    return _model(("x", "y", "z"), 2, [("x", "y"), ("x", "z")], sup)


# --- Section ----------------------------------------------------------------


def test_section_basics():
    s = Section.of({"b": 1, "a": 0})
    assert s.domain == ("a", "b")
    assert s["a"] == 0 and s["b"] == 1
    assert s.values_on(("b", "a")) == (1, 0)
    assert s.restrict(("a",)) == Section.of({"a": 0})
    assert restrict_section(s, ["b"]) == Section.of({"b": 1})
    assert s == Section.of({"a": 0, "b": 1})
    assert len({s, Section.of({"a": 0, "b": 1})}) == 1
    assert s.as_dict() == {"a": 0, "b": 1}


def test_section_restrict_unknown_label():
    s = Section.of({"a": 0})
    with pytest.raises(PreconditionError):
        s.restrict(("c",))


# --- Scenario ----------------------------------------------------------------


def test_scenario_canonicalizes():
    sc = MeasurementScenario.make(("a", "b", "c"), 2, [("c", "a"), ("b", "c")])
    assert all(ctx == sc.sort_labels(ctx) for ctx in sc.contexts)
    assert set(sc.contexts) == {("a", "c"), ("b", "c")}
    assert sc.label_index("b") == 1
    assert sc.is_compatible(("a", "c"))
    assert not sc.is_compatible(("a", "b"))
    assert sc.containing_contexts(("c",)) == (0, 1) or \
        sc.containing_contexts(("c",)) == (1, 0) or \
        len(sc.containing_contexts(("c",))) == 2


def test_scenario_rejections():
    with pytest.raises(PreconditionError):
        MeasurementScenario.make(("a", "a"), 2, [("a",)])
    with pytest.raises(PreconditionError):
        MeasurementScenario.make(("a",), 2, [("a", "b")])
    with pytest.raises(PreconditionError):
        MeasurementScenario.make(("a",), 1, [("a",)])


def test_validate_scenario_violations():
    # covering fails: b in no context
    sc = MeasurementScenario.make(("a", "b"), 2, [("a",)])
    rep = validate_scenario(sc)
    assert not rep.ok and any("b" in v for v in rep.violations)
    # antichain fails: one context inside another
    sc = MeasurementScenario.make(("a", "b"), 2, [("a",), ("a", "b")])
    rep = validate_scenario(sc)
    assert not rep.ok
    # disconnected cover
    sc = MeasurementScenario.make(("a", "b"), 2, [("a",), ("b",)])
    rep = validate_scenario(sc)
    assert not rep.ok and any("connect" in v.lower() for v in rep.violations)
    # a good one
    sc = MeasurementScenario.make(("a", "b", "c"), 2, [("a", "b"), ("b", "c")])
    assert validate_scenario(sc).ok


# --- Model -------------------------------------------------------------------


def test_model_make_checks_sections():
    sc = MeasurementScenario.make(("a", "b"), 2, [("a", "b")])
    with pytest.raises(PreconditionError):
        EmpiricalModel.make(sc, [[Section.of({"a": 0})]])
    with pytest.raises(PreconditionError):
        EmpiricalModel.make(sc, [[Section.of({"a": 0, "b": 2})]])
    with pytest.raises(PreconditionError):
        EmpiricalModel.make(sc, [[]])
    m = EmpiricalModel.make(
        sc, [[Section.of({"a": 1, "b": 0}), Section.of({"a": 0, "b": 0}),
              Section.of({"a": 1, "b": 0})]])
    assert len(m.sections[0]) == 2  # deduped
    assert m.section_index(0, Section.of({"a": 0, "b": 0})) >= 0


def test_no_signalling_detects_violation(hardy):
    assert check_no_signalling(hardy.model).ok
    sup = {
        ("x", "y"): [(0, 0), (1, 1)],
        ("x", "z"): [(0, 0), (0, 1)],  # x=1 possible on the left only
    }
    bad = _model(("x", "y", "z"), 2, [("x", "y"), ("x", "z")], sup)
    rep = check_no_signalling(bad)
    assert not rep.ok and rep.violations


def test_sections_below(hardy):
    below = sections_below(hardy.model, ("a1",))
    assert set(below) == {Section.of({"a1": 0}), Section.of({"a1": 1})}
    # restriction of a two-label context to both labels is the identity
    ctx = hardy.model.scenario.contexts[0]
    assert set(sections_below(hardy.model, ctx)) == set(
        hardy.model.sections[0])


def test_global_sections_product_model():
    m = _product_model()
    gs = global_sections(m)
    assert len(gs) == 8
    for g in gs:
        assert set(g.domain) == {"x", "y", "z"}
        for ci in range(2):
            assert section_extends(m, ci, restrict_section(
                g, m.scenario.contexts[ci]))


def test_classify_three_kinds(mermin, hardy):
    assert classify(_product_model()).kind == "noncontextual"
    assert classify(_pr_box()).kind == "strongly_contextual"
    assert classify(_pr_box()).strongly_contextual
    assert classify(mermin.model).kind == "strongly_contextual"
    cls = classify(hardy.model)
    assert cls.kind == "logically_contextual"
    assert cls.contextual and not cls.strongly_contextual
    assert cls.witnesses == ((0, Section.of({"a1": 0, "b1": 0})),)


def test_hardy_frozen_shape(hardy):
    m = hardy.model
    assert len(m.scenario.measurements) == 4
    assert [len(s) for s in m.sections] == [4, 3, 3, 3]
    assert len(global_sections(m)) == 5
    # the witness section extends nowhere, every other one extends
    for ci in range(4):
        for s in m.sections[ci]:
            expected = (ci, s) not in classify(m).witnesses
            assert section_extends(m, ci, s) == expected


def test_contextuality_class_str():
    assert str(ContextualityClass("noncontextual")) == "noncontextual"
    assert "1" in str(ContextualityClass(
        "logically_contextual",
        ((0, Section.of({"a": 0})),)))
