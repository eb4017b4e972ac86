"""Measurement scenarios and possibilistic empirical models.

A scenario is a finite set of measurement labels, a cover of contexts
(subsets that can be measured jointly), and one outcome ring Z_d shared by
all measurements.  A possibilistic empirical model assigns every context
the set of outcome sections deemed possible.  Classification asks whether
local sections glue: a model is non-contextual when every allowed section
extends to a global assignment, logically contextual when some section
does not extend, and strongly contextual when no global assignment is
compatible with the model at all.

Scenario-law violations (cover not covering, nested contexts, signalling)
are reported as data by the validators rather than raised, so that broken
models can be inspected.  Malformed input (labels not in the scenario,
outcomes out of range) raises ``PreconditionError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PreconditionError


@dataclass(frozen=True, order=True)
class Section:
    """Immutable outcome assignment on a finite set of measurements."""

    items: tuple[tuple[str, int], ...]

    @classmethod
    def of(cls, assignment) -> "Section":
        if isinstance(assignment, Section):
            return assignment
        pairs = tuple(sorted((str(m), int(v)) for m, v in dict(assignment).items()))
        return cls(pairs)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(m for m, _ in self.items)

    def __getitem__(self, label: str) -> int:
        for m, v in self.items:
            if m == label:
                return v
        raise KeyError(label)

    def __contains__(self, label: str) -> bool:
        return any(m == label for m, _ in self.items)

    def as_dict(self) -> dict[str, int]:
        return dict(self.items)

    def restrict(self, labels) -> "Section":
        want = set(labels)
        missing = want - {m for m, _ in self.items}
        if missing:
            raise PreconditionError(
                f"cannot restrict section to labels outside its domain: {sorted(missing)}"
            )
        return Section(tuple((m, v) for m, v in self.items if m in want))

    def values_on(self, labels) -> tuple[int, ...]:
        d = self.as_dict()
        return tuple(d[m] for m in labels)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{m}:{v}" for m, v in self.items) + "}"


def restrict_section(section: Section, labels) -> Section:
    """Restriction of a section to a subset of its domain."""
    return Section.of(section).restrict(labels)


@dataclass(frozen=True)
class MeasurementScenario:
    """Measurement labels, outcome modulus, and a cover of contexts.

    Contexts are stored as tuples ordered by the scenario's measurement
    order, and the cover itself is kept in a fixed deterministic order, so
    every downstream computation is reproducible.
    """

    measurements: tuple[str, ...]
    outcome_modulus: int
    contexts: tuple[tuple[str, ...], ...]

    @classmethod
    def make(cls, measurements, outcome_modulus: int, contexts) -> "MeasurementScenario":
        labels = tuple(str(m) for m in measurements)
        if len(set(labels)) != len(labels):
            raise PreconditionError("duplicate measurement labels")
        if int(outcome_modulus) < 2:
            raise PreconditionError("outcome modulus must be at least 2")
        order = {m: i for i, m in enumerate(labels)}
        normalized = []
        for ctx in contexts:
            ctx = [str(m) for m in ctx]
            unknown = [m for m in ctx if m not in order]
            if unknown:
                raise PreconditionError(f"context uses unknown measurements: {unknown}")
            if len(set(ctx)) != len(ctx):
                raise PreconditionError(f"context lists a measurement twice: {ctx}")
            if not ctx:
                raise PreconditionError("empty context")
            normalized.append(tuple(sorted(ctx, key=order.__getitem__)))
        normalized.sort(key=lambda c: tuple(order[m] for m in c))
        return cls(labels, int(outcome_modulus), tuple(normalized))

    def label_index(self, label: str) -> int:
        try:
            return self.measurements.index(label)
        except ValueError:
            raise PreconditionError(f"unknown measurement {label!r}") from None

    def sort_labels(self, labels) -> tuple[str, ...]:
        order = {m: i for i, m in enumerate(self.measurements)}
        return tuple(sorted(labels, key=order.__getitem__))

    def containing_contexts(self, labels) -> tuple[int, ...]:
        want = set(labels)
        return tuple(i for i, c in enumerate(self.contexts) if want <= set(c))

    def is_compatible(self, labels) -> bool:
        """True when the label set lies beneath some context."""
        return bool(self.containing_contexts(labels))

    def context_index(self, context) -> int:
        ctx = self.sort_labels(context)
        try:
            return self.contexts.index(ctx)
        except ValueError:
            raise PreconditionError(f"not a context of this scenario: {ctx}") from None


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"- {v}" for v in self.violations)


def _cover_connected(contexts) -> bool:
    if not contexts:
        return True
    n = len(contexts)
    seen = {0}
    frontier = [0]
    sets = [set(c) for c in contexts]
    while frontier:
        i = frontier.pop()
        for j in range(n):
            if j not in seen and sets[i] & sets[j]:
                seen.add(j)
                frontier.append(j)
    return len(seen) == n


def validate_scenario(scenario: MeasurementScenario) -> ValidationReport:
    """Check the cover laws: covering, anti-chain, connectedness."""
    violations = []
    covered = set()
    for c in scenario.contexts:
        covered.update(c)
    missing = [m for m in scenario.measurements if m not in covered]
    if missing:
        violations.append(f"measurements not covered by any context: {missing}")
    sets = [set(c) for c in scenario.contexts]
    for i, a in enumerate(sets):
        for j, b in enumerate(sets):
            if i != j and a <= b:
                violations.append(
                    f"cover is not an anti-chain: context {scenario.contexts[i]} "
                    f"is contained in {scenario.contexts[j]}"
                )
    if not _cover_connected(scenario.contexts):
        violations.append("cover is disconnected")
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class EmpiricalModel:
    """Per-context sets of possible sections over a scenario."""

    scenario: MeasurementScenario
    sections: tuple[tuple[Section, ...], ...]

    @classmethod
    def make(cls, scenario: MeasurementScenario, sections_by_context) -> "EmpiricalModel":
        if len(sections_by_context) != len(scenario.contexts):
            raise PreconditionError("need a section set for every context")
        d = scenario.outcome_modulus
        table = []
        for ctx, raw in zip(scenario.contexts, sections_by_context):
            ctx_set = set(ctx)
            cleaned = set()
            for s in raw:
                s = Section.of(s)
                if set(s.domain) != ctx_set:
                    raise PreconditionError(
                        f"section {s} does not have domain exactly {ctx}"
                    )
                if any(not 0 <= v < d for _, v in s.items):
                    raise PreconditionError(f"section {s} has outcomes outside Z_{d}")
                cleaned.add(s)
            if not cleaned:
                raise PreconditionError(f"context {ctx} has an empty section set")
            table.append(tuple(sorted(cleaned, key=lambda s: s.values_on(ctx))))
        return cls(scenario, tuple(table))

    def sections_at(self, context_index: int) -> tuple[Section, ...]:
        return self.sections[context_index]

    def section_index(self, context_index: int, section: Section) -> int:
        try:
            return self.sections[context_index].index(section)
        except ValueError:
            raise PreconditionError(
                f"section {section} is not allowed at context "
                f"{self.scenario.contexts[context_index]}"
            ) from None


def sections_below(model: EmpiricalModel, labels) -> tuple[Section, ...]:
    """Possible sections on a compatible set ``V``: restrictions from a context.

    Computed from the first context containing ``V``; under no-signalling
    every containing context induces the same set.
    """
    scenario = model.scenario
    v = scenario.sort_labels(labels)
    if not v:
        return (Section.of({}),)
    hosts = scenario.containing_contexts(v)
    if not hosts:
        raise PreconditionError(f"{list(v)} is not beneath any context")
    seen = {s.restrict(v) for s in model.sections[hosts[0]]}
    return tuple(sorted(seen, key=lambda s: s.values_on(v)))


def check_no_signalling(model: EmpiricalModel) -> ValidationReport:
    """Restriction sets of every pair of contexts must agree on the overlap.

    Agreement at each maximal overlap forces agreement beneath it, so the
    pairwise check decides flasqueness beneath the cover.
    """
    violations = []
    contexts = model.scenario.contexts
    for i in range(len(contexts)):
        for j in range(i + 1, len(contexts)):
            overlap = tuple(m for m in contexts[i] if m in set(contexts[j]))
            if not overlap:
                continue
            left = {s.restrict(overlap) for s in model.sections[i]}
            right = {s.restrict(overlap) for s in model.sections[j]}
            if left != right:
                only_left = sorted(str(s) for s in left - right)
                only_right = sorted(str(s) for s in right - left)
                violations.append(
                    f"signalling between {contexts[i]} and {contexts[j]} on "
                    f"{overlap}: only-left={only_left} only-right={only_right}"
                )
    return ValidationReport(tuple(violations))


def _measurement_order(model: EmpiricalModel) -> list[str]:
    # decreasing containing-context count, ties by scenario label order
    scenario = model.scenario
    counts = {m: 0 for m in scenario.measurements}
    for c in scenario.contexts:
        for m in c:
            counts[m] += 1
    return sorted(
        scenario.measurements,
        key=lambda m: (-counts[m], scenario.label_index(m)),
    )


def _search_global(model: EmpiricalModel, pinned: dict[str, int], find_all: bool) -> list[Section]:
    """Backtracking over measurements with per-context candidate filtering."""
    scenario = model.scenario
    d = scenario.outcome_modulus
    in_contexts: dict[str, list[int]] = {m: [] for m in scenario.measurements}
    for ci, c in enumerate(scenario.contexts):
        for m in c:
            in_contexts[m].append(ci)
    candidates = []
    for ci, sections in enumerate(model.sections):
        pins = [(m, v) for m, v in pinned.items() if m in set(scenario.contexts[ci])]
        candidates.append([s for s in sections if all(s[m] == v for m, v in pins)])
        if not candidates[ci]:
            return []
    assignment = dict(pinned)
    order = [m for m in _measurement_order(model) if m not in assignment]
    found: list[Section] = []

    def descend(i: int) -> bool:
        if i == len(order):
            found.append(Section.of(assignment))
            return not find_all
        m = order[i]
        for v in range(d):
            touched: dict[int, list[Section]] = {}
            ok = True
            for ci in in_contexts[m]:
                kept = [s for s in candidates[ci] if s[m] == v]
                if not kept:
                    ok = False
                    break
                touched[ci] = kept
            if not ok:
                continue
            saved = {ci: candidates[ci] for ci in touched}
            for ci, kept in touched.items():
                candidates[ci] = kept
            assignment[m] = v
            stop = descend(i + 1)
            del assignment[m]
            for ci, old in saved.items():
                candidates[ci] = old
            if stop:
                return True
        return False

    descend(0)
    return found


def global_sections(model: EmpiricalModel) -> tuple[Section, ...]:
    """All global assignments whose restriction to every context is allowed.

    These are exactly the glueings of compatible families of the model.
    """
    found = _search_global(model, {}, find_all=True)
    return tuple(sorted(found, key=lambda s: s.values_on(model.scenario.measurements)))


def section_extends(model: EmpiricalModel, context_index: int, section: Section) -> bool:
    """Does an allowed context section extend to some global section?"""
    section = Section.of(section)
    model.section_index(context_index, section)  # membership check
    return bool(_search_global(model, section.as_dict(), find_all=False))


@dataclass(frozen=True)
class ContextualityClass:
    """Verdict: "noncontextual", "logically_contextual" or "strongly_contextual".

    For logically contextual models ``witnesses`` lists every pair
    ``(context_index, section)`` whose section admits no global extension.
    """

    kind: str
    witnesses: tuple[tuple[int, Section], ...] = field(default=())

    @property
    def contextual(self) -> bool:
        return self.kind != "noncontextual"

    @property
    def strongly_contextual(self) -> bool:
        return self.kind == "strongly_contextual"

    def __str__(self) -> str:
        if self.kind == "logically_contextual":
            n = len(self.witnesses)
            noun = "section" if n == 1 else "sections"
            return f"logically_contextual ({n} non-extendable {noun})"
        return self.kind


def classify(model: EmpiricalModel) -> ContextualityClass:
    """Possibilistic contextuality class of a model."""
    if not _search_global(model, {}, find_all=False):
        return ContextualityClass("strongly_contextual")
    witnesses = []
    for ci in range(len(model.scenario.contexts)):
        for s in model.sections[ci]:
            if not _search_global(model, s.as_dict(), find_all=False):
                witnesses.append((ci, s))
    if witnesses:
        return ContextualityClass("logically_contextual", tuple(witnesses))
    return ContextualityClass("noncontextual")
