"""Cech-style obstructions over the nerve of a measurement cover.

The free abelian presheaf F assigns to each set of jointly measurable
labels the integer formal sums of its possibilistic sections.  A
section s0 at a context C0 extends to a compatible integer family iff
its class gamma(s0) in the first Cech cohomology of the kernel
presheaf (sums vanishing under restriction into C0) is zero.  The two
equivalent routes implemented:

* family feasibility: an integer linear system pins the C0 component
  to 1*s0 and demands pairwise compatibility everywhere;
* connecting cocycle: lift s0 to a 0-cochain, take its coboundary z,
  and decide whether z bounds inside the kernel presheaf.

Both run a GF(2) refutation first, then an exact integer decision, and
every verdict carries a re-verified witness or separating certificate.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalCheckError, PreconditionError
from .linalg import Gf2AffineSystem, Gf2Echelon, IntegerSystem
from .mcohom import GroupObstructionAnalyzer
from .pmonoid import StructuredModel, glue_contexts
from .scenario import (
    EmpiricalModel,
    Section,
    check_no_signalling,
    global_sections,
    restrict_section,
    sections_below,
)

FormalSum = dict  # Section -> int coefficient


def fs_combine(target: FormalSum, other: FormalSum, scale: int = 1) -> None:
    for s, c in other.items():
        new = target.get(s, 0) + scale * c
        if new:
            target[s] = new
        else:
            target.pop(s, None)


def fs_restrict(fs: FormalSum, labels) -> FormalSum:
    """Push a formal sum along the restriction of its sections."""
    out: FormalSum = {}
    labels = tuple(labels)
    for s, c in fs.items():
        r = restrict_section(s, labels)
        new = out.get(r, 0) + c
        if new:
            out[r] = new
        else:
            out.pop(r, None)
    return out


@dataclass(frozen=True)
class Nerve:
    """Tuples of cover indices with jointly measurable support.

    Degenerate tuples (repeated indices) are retained; each degree
    lists its simplices in lexicographic order.
    """

    simplices: tuple[tuple[tuple[int, ...], ...], ...]
    supports: dict

    def degree(self, q: int) -> tuple[tuple[int, ...], ...]:
        if not 0 <= q < len(self.simplices):
            raise PreconditionError(f"nerve holds degrees 0..{len(self.simplices)-1}")
        return self.simplices[q]


def build_nerve(scenario, max_degree: int = 2) -> Nerve:
    contexts = [set(c) for c in scenario.contexts]
    m = len(contexts)
    levels = []
    supports: dict[tuple[int, ...], tuple[str, ...]] = {}
    prev = [()]
    for q in range(max_degree + 1):
        cur = []
        for stem in prev:
            base = (set.intersection(*(contexts[i] for i in stem))
                    if stem else None)
            for i in range(m):
                supp = contexts[i] if base is None else base & contexts[i]
                if supp:
                    simplex = stem + (i,)
                    cur.append(simplex)
                    supports[simplex] = scenario.sort_labels(supp)
        levels.append(tuple(cur))
        prev = cur
    return Nerve(tuple(levels), supports)


@dataclass(eq=False)
class CechCochain:
    """Presheaf-valued cochain: a formal sum of sections per simplex."""

    degree: int
    values: dict

    def value(self, simplex) -> FormalSum:
        return self.values.get(tuple(simplex), {})


def make_cech_cochain(nerve: Nerve, degree: int, values) -> CechCochain:
    known = set(nerve.degree(degree))
    out = {}
    for simplex, fs in values.items():
        simplex = tuple(simplex)
        if simplex not in known:
            raise PreconditionError(f"{simplex} is not a {degree}-simplex")
        supp = nerve.supports[simplex]
        fs = {s: int(c) for s, c in fs.items() if c}
        for s in fs:
            if set(s.domain) != set(supp):
                raise PreconditionError(
                    f"section {s} does not live on the support of {simplex}")
        if fs:
            out[simplex] = fs
    return CechCochain(degree, out)


def cech_coboundary(nerve: Nerve, cochain: CechCochain) -> CechCochain:
    """Alternating sum of face restrictions, one degree up."""
    q = cochain.degree
    out = {}
    for simplex in nerve.degree(q + 1):
        supp = nerve.supports[simplex]
        total: FormalSum = {}
        for i in range(q + 2):
            face = simplex[:i] + simplex[i + 1:]
            fs = cochain.value(face)
            if fs:
                fs_combine(total, fs_restrict(fs, supp),
                           1 if i % 2 == 0 else -1)
        if total:
            out[simplex] = total
    return CechCochain(q + 1, out)


# --- Decisions ----------------------------------------------------------


@dataclass(eq=False)
class CechCertificate:
    """Separating functional over tagged constraint rows.

    ``kind`` is "parity" for a GF(2) refutation (odd pairing with the
    right-hand side), or "rational"/"integral" from the exact solver.
    Only nonzero coefficients are kept.
    """

    kind: str
    rows: tuple
    coefficients: tuple


@dataclass(eq=False)
class FamilyDecision:
    """Route 1 verdict for one pinned section."""

    context_index: int
    section: Section
    vanishes: bool
    family: dict | None
    certificate: CechCertificate | None


@dataclass(eq=False)
class CocycleDecision:
    """Route 2 verdict: the connecting cocycle and what it bounds."""

    context_index: int
    section: Section
    vanishes: bool
    cocycle: dict
    potential: dict | None
    certificate: CechCertificate | None


class CechAnalyzer:
    """Shared matrices for every obstruction query against one model.

    The unpinned compatibility system is echeloned over GF(2) once;
    each (context, section) query then works in kernel coordinates.
    Exact integer solvers are built lazily per pinned context and only
    when the parity stage fails to refute.
    """

    def __init__(self, model: EmpiricalModel):
        ns = check_no_signalling(model)
        if not ns.ok:
            raise PreconditionError(
                "model is signalling: " + "; ".join(ns.violations[:3]))
        self.model = model
        scenario = model.scenario
        m = len(scenario.contexts)
        self.blocks = []
        offset = 0
        for secs in model.sections:
            self.blocks.append((offset, list(secs)))
            offset += len(secs)
        self.nunknowns = offset
        self.pair_overlaps = {}
        self.rows = []   # sparse {unknown: coeff}
        self.tags = []   # ("pair", i, j, section over the overlap)
        for i in range(m):
            for j in range(i + 1, m):
                overlap = set(scenario.contexts[i]) & set(scenario.contexts[j])
                if not overlap:
                    continue
                labels = scenario.sort_labels(overlap)
                self.pair_overlaps[(i, j)] = labels
                for t in sections_below(model, labels):
                    row = {}
                    off_i, secs_i = self.blocks[i]
                    for u, s in enumerate(secs_i):
                        if restrict_section(s, labels) == t:
                            row[off_i + u] = row.get(off_i + u, 0) + 1
                    off_j, secs_j = self.blocks[j]
                    for u, s in enumerate(secs_j):
                        if restrict_section(s, labels) == t:
                            row[off_j + u] = row.get(off_j + u, 0) - 1
                    row = {k: v for k, v in row.items() if v}
                    self.rows.append(row)
                    self.tags.append(("pair", i, j, t))
        self._gf2 = Gf2Echelon([], self.nunknowns)
        for row in self.rows:
            mask = 0
            for k, v in row.items():
                if v % 2:
                    mask |= 1 << k
            self._gf2.add_row(mask)
        self._kernel = self._gf2.kernel_basis()
        self._globals: list[Section] | None = None
        self._route1_int: dict[int, IntegerSystem] = {}
        self._route2_data: dict[int, tuple] = {}
        self._route2_masks_cache: dict[int, list[int]] = {}

    # -- shared helpers --------------------------------------------------

    def _check_query(self, context_index: int, section: Section) -> None:
        secs = self.model.sections
        if not 0 <= context_index < len(secs):
            raise PreconditionError("context index out of range")
        if section not in secs[context_index]:
            raise PreconditionError(
                f"{section} is not a section of context {context_index}")

    def _global_sections(self) -> list[Section]:
        if self._globals is None:
            self._globals = list(global_sections(self.model))
        return self._globals

    # -- route 1: pinned compatible-family feasibility -------------------

    def family_obstruction(self, context_index: int,
                           section: Section) -> FamilyDecision:
        self._check_query(context_index, section)
        off, secs = self.blocks[context_index]
        s_pos = secs.index(section)
        pin_rhs = [1 if u == s_pos else 0 for u in range(len(secs))]
        # Parity stage in kernel coordinates of the compatibility system.
        tiny = Gf2AffineSystem(len(self._kernel))
        for u in range(len(secs)):
            mask = 0
            for k, vec in enumerate(self._kernel):
                if (vec >> (off + u)) & 1:
                    mask |= 1 << k
            tiny.add(mask, pin_rhs[u])
        _sol, ref = tiny.solve()
        if ref is not None:
            return FamilyDecision(
                context_index, section, False, None,
                self._parity_certificate(context_index, section, ref, off,
                                         secs))
        witness = self._integral_family(context_index, section, off, secs,
                                        s_pos)
        if isinstance(witness, CechCertificate):
            return FamilyDecision(context_index, section, False, None,
                                  witness)
        return FamilyDecision(context_index, section, True, witness, None)

    def _parity_certificate(self, context_index, section, ref, off,
                            secs) -> CechCertificate:
        """Half-integer separating functional from a parity refutation.

        The refuting set phi of pinning rows sums, over GF(2), to a
        vector orthogonal to the kernel of the compatibility matrix,
        hence expressible from its rows; pairing the resulting
        half-integer combination with the pinned right-hand side gives
        1/2, which no integer family can produce.
        """
        vmask = 0
        phi = []
        for u in range(len(secs)):
            if (ref >> u) & 1:
                vmask |= 1 << (off + u)
                phi.append(u)
        track = self._gf2.express(vmask)
        if track is None:
            raise InternalCheckError(
                "parity refuter escaped the compatibility row space")
        rows = []
        coeffs = []
        half = Fraction(1, 2)
        for r in range(len(self.rows)):
            if (track >> r) & 1:
                rows.append(self.tags[r])
                coeffs.append(half)
        for u in phi:
            rows.append(("pin", context_index, secs[u]))
            coeffs.append(half)
        cert = CechCertificate("parity", tuple(rows), tuple(coeffs))
        self._audit_certificate(context_index, section, cert)
        return cert

    def _audit_certificate(self, context_index, section, cert) -> None:
        """Re-verify y^T A integral and y^T b non-integral, sparsely.

        The right-hand side is zero on compatibility rows and the
        indicator of the pinned section on pinning rows.
        """
        acc: dict[int, Fraction] = {}
        rhs = Fraction(0)
        row_by_tag = dict(zip(self.tags, self.rows))
        for tag, coeff in zip(cert.rows, cert.coefficients):
            coeff = Fraction(coeff)
            if tag[0] == "pair":
                row = row_by_tag[tag]
            else:
                _kind, ci, t = tag
                row = {self.blocks[ci][0] + self.blocks[ci][1].index(t): 1}
                if ci == context_index and t == section:
                    rhs += coeff
            for k, v in row.items():
                acc[k] = acc.get(k, Fraction(0)) + coeff * v
        if any(v.denominator != 1 for v in acc.values()):
            raise InternalCheckError(
                "certificate does not clear the coefficient matrix")
        if rhs.denominator == 1:
            raise InternalCheckError(
                "certificate pairs integrally with the right-hand side")

    def _integral_family(self, context_index, section, off, secs, s_pos):
        # deterministic shortcut: a global section through s0 is itself
        # a compatible family with coefficient 1 everywhere.
        for g in self._global_sections():
            if restrict_section(
                    g, self.model.scenario.contexts[context_index]) == section:
                family = {}
                for ci, ctx in enumerate(self.model.scenario.contexts):
                    family[(ci, restrict_section(g, ctx))] = 1
                self._audit_family(context_index, section, family)
                return family
        if context_index not in self._route1_int:
            dense = []
            rhs_len = len(self.rows) + len(secs)
            for row in self.rows:
                dense.append([row.get(k, 0) for k in range(self.nunknowns)])
            for u in range(len(secs)):
                r = [0] * self.nunknowns
                r[off + u] = 1
                dense.append(r)
            self._route1_int[context_index] = IntegerSystem(
                dense, ncols=self.nunknowns)
        rhs = [0] * len(self.rows) + [
            1 if u == s_pos else 0 for u in range(len(secs))]
        res = self._route1_int[context_index].solve(rhs)
        if res.feasible:
            family = {}
            for ci, (o, ss) in enumerate(self.blocks):
                for u, s in enumerate(ss):
                    c = res.witness[o + u]
                    if c:
                        family[(ci, s)] = c
            self._audit_family(context_index, section, family)
            return family
        rows = []
        coeffs = []
        for r, c in enumerate(res.certificate.vector):
            if c:
                if r < len(self.rows):
                    rows.append(self.tags[r])
                else:
                    rows.append(("pin", context_index, secs[r - len(self.rows)]))
                coeffs.append(c)
        return CechCertificate(res.certificate.kind, tuple(rows),
                               tuple(coeffs))

    def _audit_family(self, context_index, section, family) -> None:
        """A claimed family must be pinned, mass-1 and pair-compatible."""
        scenario = self.model.scenario
        per_ctx: list[FormalSum] = [dict() for _ in scenario.contexts]
        for (ci, s), c in family.items():
            if s not in self.model.sections[ci]:
                raise InternalCheckError("family uses an unknown section")
            per_ctx[ci][s] = c
        for ci, fs in enumerate(per_ctx):
            if sum(fs.values()) != 1:
                raise InternalCheckError("family mass differs from 1")
        if per_ctx[context_index] != {section: 1}:
            raise InternalCheckError("family is not pinned to the section")
        for (i, j), labels in self.pair_overlaps.items():
            if fs_restrict(per_ctx[i], labels) != fs_restrict(
                    per_ctx[j], labels):
                raise InternalCheckError("family fails pair compatibility")

    # -- route 2: connecting cocycle --------------------------------------

    def connecting_cocycle(self, context_index: int,
                           section: Section) -> CocycleDecision:
        self._check_query(context_index, section)
        scenario = self.model.scenario
        m = len(scenario.contexts)
        c0_labels = scenario.contexts[context_index]
        lift = []
        for j, ctx in enumerate(scenario.contexts):
            overlap = scenario.sort_labels(set(ctx) & set(c0_labels))
            want = section.restrict(overlap)
            pick = None
            for s in self.model.sections[j]:
                if restrict_section(s, overlap) == want:
                    pick = s
                    break
            if pick is None:
                raise InternalCheckError(
                    "no-signalling model lost a restriction")
            lift.append(pick)
        if lift[context_index] != section:
            raise InternalCheckError("lift failed to fix the pinned section")
        cocycle = {}
        for (i, j), labels in self.pair_overlaps.items():
            z: FormalSum = {}
            fs_combine(z, fs_restrict({lift[j]: 1}, labels), 1)
            fs_combine(z, fs_restrict({lift[i]: 1}, labels), -1)
            into = [x for x in labels if x in set(c0_labels)]
            if fs_restrict(z, into):
                raise InternalCheckError(
                    "connecting cochain leaves the kernel presheaf")
            if z:
                cocycle[(i, j)] = z
        basis, index, row_data = self._route2_rows(context_index)
        rhs = []
        for (i, j), labels, trow in row_data:
            z = cocycle.get((i, j), {})
            rhs.append(z.get(trow, 0))
        sysm = Gf2AffineSystem(len(basis))
        for (_pair, _labels, _t), mask, b in zip(
                row_data, self._route2_masks(context_index), rhs):
            sysm.add(mask, b & 1)
        _sol, ref = sysm.solve()
        if ref is not None:
            rows = []
            coeffs = []
            for r in range(len(row_data)):
                if (ref >> r) & 1:
                    (i, j), _labels, t = row_data[r]
                    rows.append(("pair", i, j, t))
                    coeffs.append(1)
            cert = CechCertificate("parity", tuple(rows), tuple(coeffs))
            self._audit_route2_refutation(context_index, cocycle, cert)
            return CocycleDecision(context_index, section, False, cocycle,
                                   None, cert)
        potential = self._route2_potential(context_index, section, lift,
                                           cocycle, basis, index, row_data)
        if isinstance(potential, CechCertificate):
            return CocycleDecision(context_index, section, False, cocycle,
                                   None, potential)
        return CocycleDecision(context_index, section, True, cocycle,
                               potential, None)

    def _route2_rows(self, context_index: int):
        """Kernel-presheaf basis and constraint rows for one pin."""
        if context_index in self._route2_data:
            return self._route2_data[context_index]
        scenario = self.model.scenario
        c0 = set(scenario.contexts[context_index])
        basis = []   # (context j, section s, class representative)
        index = {}
        for j, ctx in enumerate(scenario.contexts):
            overlap = scenario.sort_labels(set(ctx) & c0)
            classes: dict[Section, Section] = {}
            for s in self.model.sections[j]:
                key = restrict_section(s, overlap)
                rep = classes.setdefault(key, s)
                if s != rep:
                    index[(j, s)] = len(basis)
                    basis.append((j, s, rep))
        row_data = []
        for (i, j), labels in self.pair_overlaps.items():
            for t in sections_below(self.model, labels):
                row_data.append(((i, j), labels, t))
        masks = []
        for (i, j), labels, t in row_data:
            mask = 0
            for (jj, sign) in ((j, 1), (i, -1)):
                for s in self.model.sections[jj]:
                    k = index.get((jj, s))
                    if k is None:
                        continue
                    _j, _s, rep = basis[k]
                    hit = (restrict_section(s, labels) == t) != (
                        restrict_section(rep, labels) == t)
                    if hit:
                        mask ^= 1 << k
            masks.append(mask)
        data = (basis, index, row_data)
        self._route2_data[context_index] = data
        self._route2_masks_cache[context_index] = masks
        return data

    def _route2_masks(self, context_index: int):
        self._route2_rows(context_index)
        return self._route2_masks_cache[context_index]

    def _route2_potential(self, context_index, section, lift, cocycle,
                          basis, index, row_data):
        """Integer potential via the global-section shortcut, else the
        exact solver on the kernel-coordinate system."""
        scenario = self.model.scenario
        for g in self._global_sections():
            if restrict_section(
                    g, scenario.contexts[context_index]) == section:
                potential = {}
                for j, ctx in enumerate(scenario.contexts):
                    fs: FormalSum = {}
                    fs_combine(fs, {lift[j]: 1}, 1)
                    fs_combine(fs, {restrict_section(g, ctx): 1}, -1)
                    if fs:
                        potential[j] = fs
                self._audit_potential(context_index, cocycle, potential)
                return potential
        rows = []
        for ((i, j), labels, t), mask in zip(
                row_data, self._route2_masks(context_index)):
            row = [0] * len(basis)
            for (jj, sign) in ((j, 1), (i, -1)):
                for s in self.model.sections[jj]:
                    k = index.get((jj, s))
                    if k is None:
                        continue
                    _j, _s, rep = basis[k]
                    coeff = sign * (
                        (restrict_section(s, labels) == t)
                        - (restrict_section(rep, labels) == t))
                    if coeff:
                        row[k] += coeff
            rows.append(row)
        rhs = [cocycle.get(pair, {}).get(t, 0)
               for (pair, labels, t) in row_data]
        res = IntegerSystem(rows, ncols=len(basis)).solve(rhs)
        if not res.feasible:
            tags = []
            coeffs = []
            for r, c in enumerate(res.certificate.vector):
                if c:
                    (i, j), _labels, t = row_data[r]
                    tags.append(("pair", i, j, t))
                    coeffs.append(c)
            return CechCertificate(res.certificate.kind, tuple(tags),
                                   tuple(coeffs))
        potential = {}
        for k, (j, s, rep) in enumerate(basis):
            c = res.witness[k]
            if c:
                fs = potential.setdefault(j, {})
                fs_combine(fs, {s: 1, rep: -1}, c)
        potential = {j: fs for j, fs in potential.items() if fs}
        self._audit_potential(context_index, cocycle, potential)
        return potential

    def _audit_potential(self, context_index, cocycle, potential) -> None:
        """potential must live in the kernel presheaf and bound z."""
        scenario = self.model.scenario
        c0 = set(scenario.contexts[context_index])
        for j, fs in potential.items():
            overlap = [x for x in scenario.contexts[j] if x in c0]
            if fs_restrict(fs, overlap):
                raise InternalCheckError(
                    "potential leaves the kernel presheaf")
        for (i, j), labels in self.pair_overlaps.items():
            want = dict(cocycle.get((i, j), {}))
            got: FormalSum = {}
            fs_combine(got, fs_restrict(potential.get(j, {}), labels), 1)
            fs_combine(got, fs_restrict(potential.get(i, {}), labels), -1)
            if got != want:
                raise InternalCheckError("potential does not bound the cocycle")

    def _audit_route2_refutation(self, context_index, cocycle, cert) -> None:
        """The parity refuter must annihilate rows and pair oddly with z."""
        basis, index, _row_data = self._route2_rows(context_index)
        acc = 0
        pairing = 0
        lookup = {}
        for (pair, labels, t), mask in zip(
                self._route2_data[context_index][2],
                self._route2_masks(context_index)):
            lookup[(pair, t)] = mask
        for tag, coeff in zip(cert.rows, cert.coefficients):
            _k, i, j, t = tag
            acc ^= lookup[((i, j), t)]
            pairing ^= cocycle.get((i, j), {}).get(t, 0) & 1
        if acc != 0 or pairing != 1:
            raise InternalCheckError("route-2 parity certificate failed audit")


@functools.lru_cache(maxsize=8)
def _analyzer(model: EmpiricalModel) -> CechAnalyzer:
    return CechAnalyzer(model)


def cech_obstruction_vanishes(model: EmpiricalModel, context_index: int,
                              section: Section) -> FamilyDecision:
    """Route 1: does gamma(1*s0) vanish, i.e. does a pinned compatible
    integer family exist?"""
    return _analyzer(model).family_obstruction(context_index, section)


def connecting_cocycle(model: EmpiricalModel, context_index: int,
                       section: Section) -> CocycleDecision:
    """Route 2: the connecting cocycle of s0 and whether it bounds."""
    return _analyzer(model).connecting_cocycle(context_index, section)


def collapse_family(model: EmpiricalModel, family) -> dict:
    """Weighted outcome sum g(x) = sum_s r_C(s) s(x) of a mass-1 family.

    Pair compatibility makes the value independent of the context used
    to read it off, which is re-checked here; the result is reduced
    modulo the outcome group order.
    """
    scenario = model.scenario
    d = scenario.outcome_modulus
    per_ctx: list[FormalSum] = [dict() for _ in scenario.contexts]
    for (ci, s), c in family.items():
        if not 0 <= ci < len(per_ctx):
            raise PreconditionError("family context index out of range")
        if s not in model.sections[ci]:
            raise PreconditionError(f"{s} is not a section of context {ci}")
        if c:
            per_ctx[ci][s] = c
    for ci, fs in enumerate(per_ctx):
        if sum(fs.values()) != 1:
            raise PreconditionError(
                f"family mass at context {ci} differs from 1")
    out: dict[str, int] = {}
    for ci, ctx in enumerate(scenario.contexts):
        for x in ctx:
            val = sum(c * s[x] for s, c in per_ctx[ci].items()) % d
            if x in out and out[x] != val:
                raise InternalCheckError(
                    f"collapse disagrees across contexts at {x!r}")
            out[x] = val
    return out


# --- Cross-checking the two obstruction theories ------------------------


@dataclass(eq=False)
class CrossCheckRow:
    context_index: int
    section: Section
    cech_vanishes: bool
    group_vanishes: bool


@dataclass(eq=False)
class CrossCheckReport:
    """Per-section verdicts from both theories, with the implication
    'Cech vanishing forces group vanishing' enforced along the way."""

    rows: tuple

    @property
    def consistent(self) -> bool:
        return all(not r.cech_vanishes or r.group_vanishes
                   for r in self.rows)


def cross_check_obstructions(structured: StructuredModel) -> CrossCheckReport:
    """Run both routes and the group obstruction on every section.

    Raises an internal check error if the two Cech routes ever
    disagree, if a vanishing Cech obstruction fails to produce (via
    family collapse) a global splitting extending the section, or if
    it coexists with a non-vanishing group obstruction.
    """
    model = structured.model
    cech = _analyzer(model)
    group = GroupObstructionAnalyzer(structured)
    monoid = group.monoid
    rows = []
    for ci, ctx in enumerate(model.scenario.contexts):
        for s in model.sections[ci]:
            r1 = cech.family_obstruction(ci, s)
            r2 = cech.connecting_cocycle(ci, s)
            if r1.vanishes != r2.vanishes:
                raise InternalCheckError(
                    f"Cech routes disagree at context {ci}, section {s}")
            g = group.analyze(ci, s)
            if r1.vanishes and not g.vanishes:
                raise InternalCheckError(
                    f"vanishing Cech obstruction with non-vanishing group "
                    f"obstruction at context {ci}, section {s}")
            if r1.vanishes:
                collapsed = collapse_family(model, r1.family)
                for x in ctx:
                    if collapsed[x] != s[x]:
                        raise InternalCheckError(
                            "collapse does not extend the pinned section")
                _check_splitting(monoid, structured, collapsed)
            rows.append(CrossCheckRow(ci, s, r1.vanishes, g.vanishes))
    return CrossCheckReport(tuple(rows))


def _check_splitting(monoid, structured: StructuredModel, values) -> None:
    """The collapsed assignment must be a homomorphism killing no sign."""
    d = structured.action.moduli[0]
    images = structured.action.embedding(monoid)
    for x, y in monoid.composable_pairs():
        if (values[x] + values[y] - values[monoid.add(x, y)]) % d:
            raise InternalCheckError(
                f"collapse is not a homomorphism at ({x!r}, {y!r})")
    for a, img in images.items():
        if values[img] != a[0] % d:
            raise InternalCheckError(
                f"collapse does not retract the embedding at i({a})")
