"""Exact n-qubit Pauli operators and the models they generate.

An operator is stored as i^phase * W(x, z) where W(x, z) is the
canonical word i^(z.x) X^x Z^z; x and z are bitmasks with qubit 1 in
the most significant bit, matching the letter order of labels like
"+XZ".  With this convention W(1,0) = X, W(0,1) = Z, W(1,1) = Y, and
all phase bookkeeping is integer arithmetic mod 4.

Sign operators (phase 0 or 2) square to the identity and model sharp
two-outcome measurements.  Sets of them that are closed under products
of commuting members carve out measurement scenarios: the contexts are
the maximal pairwise-commuting subsets, and the possibilistic table at
each context consists of the group homomorphisms to Z_2 sending -I to
1.  State vectors over the Gaussian integers make the Born-rule
support test exact.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .graphs import maximal_cliques
from .pmonoid import CoefficientAction, StructuredModel
from .scenario import EmpiricalModel, MeasurementScenario, Section

_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}


@dataclass(frozen=True, order=True)
class PauliOperator:
    """i^phase * W(x, z) on n qubits; the field order gives a canonical
    sort with +P immediately before -P."""

    n: int
    x: int
    z: int
    phase: int

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("need at least one qubit")
        top = 1 << self.n
        if not (0 <= self.x < top and 0 <= self.z < top):
            raise PreconditionError("bitmask out of range")
        if not 0 <= self.phase < 4:
            raise PreconditionError("phase must be reduced mod 4")

    @property
    def word(self) -> str:
        return "".join(
            _LETTERS[((self.x >> k) & 1, (self.z >> k) & 1)]
            for k in range(self.n - 1, -1, -1))

    @property
    def is_sign_operator(self) -> bool:
        return self.phase % 2 == 0

    def label(self) -> str:
        """Measurement label, e.g. "-YY".  Defined for sign operators."""
        if not self.is_sign_operator:
            raise PreconditionError(f"{self} has no +/- label")
        return ("+" if self.phase == 0 else "-") + self.word

    def __str__(self) -> str:
        return ("", "i*", "-", "-i*")[self.phase] + self.word


def parse_pauli(text: str) -> PauliOperator:
    """Parse a signed Pauli word such as "XZI", "+XX" or "-YY"."""
    if not text:
        raise PreconditionError("empty operator text")
    phase = 0
    if text[0] in "+-":
        phase = 0 if text[0] == "+" else 2
        text = text[1:]
    if not text or any(c not in "IXZY" for c in text):
        raise PreconditionError(f"bad Pauli word {text!r}")
    x = z = 0
    for c in text:
        xb, zb = _BITS[c]
        x = (x << 1) | xb
        z = (z << 1) | zb
    return PauliOperator(len(text), x, z, phase)


def identity(n: int) -> PauliOperator:
    return PauliOperator(n, 0, 0, 0)


def negate(p: PauliOperator) -> PauliOperator:
    return PauliOperator(p.n, p.x, p.z, (p.phase + 2) % 4)


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact operator product, tracking the i^phase prefactor."""
    if p.n != q.n:
        raise PreconditionError("qubit counts differ")
    x3 = p.x ^ q.x
    z3 = p.z ^ q.z
    phase = (p.phase + q.phase
             + (p.z & p.x).bit_count() + (q.z & q.x).bit_count()
             + 2 * (p.z & q.x).bit_count()
             - (z3 & x3).bit_count()) % 4
    return PauliOperator(p.n, x3, z3, phase)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    if p.n != q.n:
        raise PreconditionError("qubit counts differ")
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def close_under_commuting_products(ops) -> tuple[PauliOperator, ...]:
    """Smallest superset closed under products of commuting members.

    pre: all operators are sign operators on the same qubit count.
    """
    pool = set(ops)
    if not pool:
        raise PreconditionError("need at least one operator")
    sizes = {p.n for p in pool}
    if len(sizes) != 1:
        raise PreconditionError("qubit counts differ")
    for p in pool:
        if not p.is_sign_operator:
            raise PreconditionError(f"{p} is not a sign operator")
    frontier = set(pool)
    while frontier:
        fresh = set()
        for p in frontier:
            for q in pool:
                if commutes(p, q):
                    r = multiply(p, q)
                    if r not in pool and r not in fresh:
                        fresh.add(r)
        pool |= fresh
        frontier = fresh
    return tuple(sorted(pool, key=lambda p: (p.word, p.phase)))


def maximal_contexts(ops) -> list[tuple[PauliOperator, ...]]:
    """Maximal pairwise-commuting subsets of a product-closed set."""
    ops = tuple(ops)
    cliques = maximal_cliques(
        len(ops), lambda i, j: commutes(ops[i], ops[j]))
    return [tuple(ops[i] for i in cl) for cl in cliques]


# --- Exact state vectors ----------------------------------------------


@dataclass(frozen=True)
class GaussianStateVector:
    """Unnormalised n-qubit state with Gaussian-integer amplitudes.

    ``entries[c]`` is the (real, imaginary) pair at basis index c,
    where qubit 1 is the most significant bit of c.
    """

    n: int
    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.entries) != 1 << self.n:
            raise PreconditionError("amplitude count must be 2**n")

    @property
    def is_zero(self) -> bool:
        return all(a == 0 and b == 0 for a, b in self.entries)


def ghz_state(n: int) -> GaussianStateVector:
    """|0...0> + |1...1>, unnormalised."""
    if n < 1:
        raise PreconditionError("need at least one qubit")
    entries = [(0, 0)] * (1 << n)
    entries[0] = (1, 0)
    entries[-1] = (1, 0)
    return GaussianStateVector(n, tuple(entries))


def _times_i_power(pair: tuple[int, int], k: int) -> tuple[int, int]:
    a, b = pair
    k %= 4
    if k == 0:
        return (a, b)
    if k == 1:
        return (-b, a)
    if k == 2:
        return (-a, -b)
    return (b, -a)


def apply_pauli(p: PauliOperator,
                v: GaussianStateVector) -> GaussianStateVector:
    """The vector p|v>, computed exactly.

    W(x, z)|b> = i^(z.x) (-1)^(z.b) |b xor x| up to the stored phase.
    """
    if p.n != v.n:
        raise PreconditionError("qubit counts differ")
    k = p.phase + (p.z & p.x).bit_count()
    out = []
    for c in range(1 << v.n):
        b = c ^ p.x
        amp = _times_i_power(v.entries[b], k)
        if (p.z & b).bit_count() % 2:
            amp = (-amp[0], -amp[1])
        out.append(amp)
    return GaussianStateVector(v.n, tuple(out))


def born_consistent(assignment, state: GaussianStateVector) -> bool:
    """Can these commuting sign measurements jointly yield these values?

    ``assignment`` maps operators to outcomes in {0, 1}.  The joint
    outcome has nonzero probability iff the product of the projectors
    (I + (-1)^a M)/2 does not annihilate the state; the factor 2 is
    dropped since only support matters.
    """
    items = list(assignment.items() if hasattr(assignment, "items")
                 else assignment)
    for p, a in items:
        if not p.is_sign_operator:
            raise PreconditionError(f"{p} is not a sign operator")
        if a not in (0, 1):
            raise PreconditionError("outcomes must be 0 or 1")
    for i, (p, _) in enumerate(items):
        for q, _ in items[i + 1:]:
            if not commutes(p, q):
                raise PreconditionError(
                    f"{p} and {q} do not commute")
    vec = state
    for p, a in items:
        moved = apply_pauli(p, vec)
        sign = -1 if a else 1
        vec = GaussianStateVector(vec.n, tuple(
            (u[0] + sign * w[0], u[1] + sign * w[1])
            for u, w in zip(vec.entries, moved.entries)))
        if vec.is_zero:
            return False
    return True


def determined_outcomes(ops, state: GaussianStateVector):
    """Operators whose outcome the state fixes exactly: M|v> = +/-|v>.

    Returns a dict from each such operator to its forced outcome.
    """
    forced = {}
    for p in ops:
        if not p.is_sign_operator:
            raise PreconditionError(f"{p} is not a sign operator")
        moved = apply_pauli(p, state)
        if moved == state:
            forced[p] = 0
        elif moved.entries == tuple(
                (-a, -b) for a, b in state.entries):
            forced[p] = 1
    return forced


# --- Contexts as elementary abelian 2-groups --------------------------


def context_splittings(context) -> list[dict[PauliOperator, int]]:
    """All admissible joint-outcome assignments on a closed context.

    The context must be a pairwise-commuting, product-closed set of
    sign operators containing the identity.  Assignments are the group
    homomorphisms to Z_2; when -I is present only those sending it to
    1 survive (quantum mechanics forbids the rest, and so does the
    algebra of eigenvalues).
    """
    ops = sorted(set(context), key=lambda p: (p.word, p.phase))
    if not ops:
        raise PreconditionError("empty context")
    n = ops[0].n
    ident = identity(n)
    if ident not in ops:
        raise PreconditionError("context must contain the identity")
    members = set(ops)
    for i, p in enumerate(ops):
        for q in ops[i:]:
            if not commutes(p, q):
                raise PreconditionError(f"{p} and {q} do not commute")
            if multiply(p, q) not in members:
                raise PreconditionError(
                    f"context not product-closed at {p}, {q}")
    # Greedy basis; every sign operator squares to +I, so the context
    # is an elementary abelian 2-group.
    coords: dict[PauliOperator, int] = {ident: 0}
    basis: list[PauliOperator] = []
    for p in ops:
        if p in coords:
            continue
        bit = 1 << len(basis)
        for q, mask in list(coords.items()):
            coords[multiply(p, q)] = mask | bit
        basis.append(p)
    if len(coords) != len(ops):
        raise PreconditionError("context is not a subgroup")
    minus = negate(ident)
    out = []
    for hom in range(1 << len(basis)):
        s = {p: (hom & mask).bit_count() % 2 for p, mask in coords.items()}
        if minus in s and s[minus] != 1:
            continue
        out.append(s)
    return out


# --- Model builders ----------------------------------------------------


def _scenario_from_closure(closure):
    ops = tuple(closure)
    n = ops[0].n
    minus = negate(identity(n))
    if identity(n) not in ops or minus not in ops:
        raise PreconditionError("closure must contain +I...I and -I...I")
    by_label = {p.label(): p for p in ops}
    contexts = [tuple(p.label() for p in ctx) for ctx in maximal_contexts(ops)]
    scenario = MeasurementScenario.make(
        tuple(by_label), 2, contexts)
    return scenario, by_label


def _context_tables(scenario, by_label):
    tables = []
    for ctx in scenario.contexts:
        ops = {lab: by_label[lab] for lab in ctx}
        tables.append({
            (a, b): multiply(ops[a], ops[b]).label()
            for a in ctx for b in ctx})
    return tuple(tables)


def _sections_for(scenario, by_label, keep=None):
    sections = []
    for ctx in scenario.contexts:
        ops = [by_label[lab] for lab in ctx]
        rows = []
        for s in context_splittings(ops):
            if keep is not None and not keep(s):
                continue
            rows.append(Section.of({p.label(): v for p, v in s.items()}))
        sections.append(tuple(rows))
    return tuple(sections)


def build_state_independent_model(generators) -> StructuredModel:
    """Scenario, possibilistic table and monoid structure from sign
    operators; every admissible assignment is allowed at each context."""
    closure = close_under_commuting_products(generators)
    scenario, by_label = _scenario_from_closure(closure)
    sections = _sections_for(scenario, by_label)
    model = EmpiricalModel.make(scenario, sections)
    n = closure[0].n
    action = CoefficientAction((2,), (negate(identity(n)).label(),))
    return StructuredModel(model, _context_tables(scenario, by_label), action)


def build_state_dependent_model(generators,
                                state: GaussianStateVector) -> StructuredModel:
    """Like the state-independent build, but a context assignment
    survives only if the state gives its joint outcome nonzero
    probability (exact Born-rule support test)."""
    closure = close_under_commuting_products(generators)
    if closure[0].n != state.n:
        raise PreconditionError("state and operators disagree on qubits")
    if state.is_zero:
        raise PreconditionError("state vector must be nonzero")
    scenario, by_label = _scenario_from_closure(closure)
    sections = _sections_for(
        scenario, by_label, keep=lambda s: born_consistent(s, state))
    model = EmpiricalModel.make(scenario, sections)
    action = CoefficientAction((2,), (negate(identity(state.n)).label(),))
    return StructuredModel(model, _context_tables(scenario, by_label), action)
