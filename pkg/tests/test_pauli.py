"""Pauli arithmetic against a dense complex-matrix oracle.

The oracle builds each operator as an explicit tensor product with
numpy, so multiplication, commutation, state action and Born supports
are all cross-checked by a second, independent implementation.
"""

import itertools
import random

import numpy as np
import pytest

from contextuality.errors import PreconditionError
from contextuality.pauli import (
    GaussianStateVector,
    PauliOperator,
    apply_pauli,
    born_consistent,
    close_under_commuting_products,
    context_splittings,
    determined_outcomes,
    ghz_state,
    identity,
    maximal_contexts,
    multiply,
    negate,
    parse_pauli,
)
from contextuality.fixtures import MERMIN_GENERATORS

from _oracles import all_ops, op_matrix, state_vector

_I = np.eye(2, dtype=complex)


def test_multiply_matches_matrices_exhaustively():
    for n in (1, 2):
        ops = all_ops(n)
        mats = {p: op_matrix(p) for p in ops}
        for p in ops:
            for q in ops:
                r = multiply(p, q)
                assert np.allclose(mats[p] @ mats[q], op_matrix(r))


def test_commutes_matches_matrices_exhaustively():
    from contextuality.pauli import commutes

    for n in (1, 2):
        ops = all_ops(n)
        mats = {p: op_matrix(p) for p in ops}
        for p in ops:
            for q in ops:
                want = np.allclose(mats[p] @ mats[q], mats[q] @ mats[p])
                assert commutes(p, q) == want
                assert (multiply(p, q) == multiply(q, p)) == want


def test_labels_round_trip():
    for n in (1, 2, 3):
        for x in range(1 << n):
            for z in range(1 << n):
                for ph in (0, 2):
                    p = PauliOperator(n, x, z, ph)
                    assert parse_pauli(p.label()) == p
    assert parse_pauli("XZI") == parse_pauli("+XZI")
    assert parse_pauli("-YY").phase == 2
    assert parse_pauli("+Y") == PauliOperator(1, 1, 1, 1 * 0)
    assert parse_pauli("Y").word == "Y"


def test_parse_rejections():
    for bad in ("", "+", "AB", "+XQ", "i"):
        with pytest.raises(PreconditionError):
            parse_pauli(bad)


def test_sign_operators_square_to_identity():
    for n in (1, 2):
        for p in all_ops(n):
            if p.is_sign_operator:
                assert multiply(p, p) == identity(n)


def test_apply_pauli_matches_matrices():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 3)
        p = PauliOperator(n, rng.getrandbits(n), rng.getrandbits(n),
                          rng.randrange(4))
        entries = tuple((rng.randint(-3, 3), rng.randint(-3, 3))
                        for _ in range(1 << n))
        v = GaussianStateVector(n, entries)
        got = state_vector(apply_pauli(p, v))
        want = op_matrix(p) @ state_vector(v)
        assert np.allclose(got, want)


def test_ghz_state_vector():
    v = ghz_state(3)
    arr = state_vector(v)
    want = np.zeros(8, dtype=complex)
    want[0] = want[7] = 1
    assert np.allclose(arr, want)
    assert not v.is_zero
    assert GaussianStateVector(1, ((0, 0), (0, 0))).is_zero


def test_born_consistent_matches_projectors():
    rng = random.Random(9)
    checked = 0
    for _ in range(250):
        n = rng.randint(1, 3)
        # random commuting set of sign operators
        ops = []
        pool = [p for p in all_ops(n) if p.is_sign_operator]
        rng.shuffle(pool)
        for p in pool:
            if all(multiply(p, q) == multiply(q, p) for q in ops):
                ops.append(p)
            if len(ops) == rng.randint(1, 4):
                break
        state = ghz_state(n)
        assign = {p: rng.randrange(2) for p in ops}
        got = born_consistent(assign, state)
        proj = np.eye(1 << n, dtype=complex)
        for p, a in assign.items():
            proj = proj @ (np.eye(1 << n) + ((-1) ** a) * op_matrix(p)) / 2
        want = bool(np.linalg.norm(proj @ state_vector(state)) > 1e-9)
        assert got == want
        checked += 1
    assert checked == 250


def test_born_consistent_preconditions():
    state = ghz_state(2)
    with pytest.raises(PreconditionError):
        born_consistent({parse_pauli("XI"): 0, parse_pauli("ZI"): 0}, state)
    ybad = PauliOperator(2, 2, 2, 1)  # phase i: not a sign operator
    with pytest.raises(PreconditionError):
        born_consistent({ybad: 0}, state)


def test_determined_outcomes_ghz():
    state = ghz_state(3)
    ops = [parse_pauli(s) for s in
           ("+XXX", "+XYY", "+YXY", "+YYX", "+ZZI", "+ZIZ", "+IZZ")]
    out = determined_outcomes(ops, state)
    want = {"+XXX": 0, "+XYY": 1, "+YXY": 1, "+YYX": 1,
            "+ZZI": 0, "+ZIZ": 0, "+IZZ": 0}
    assert {p.label(): v for p, v in out.items()} == want
    neg = determined_outcomes([negate(p) for p in ops], state)
    assert {p.label(): v for p, v in neg.items()} == {
        "-" + k[1:]: 1 - v for k, v in want.items()}
    # XX.. alone is undetermined on the 2-qubit GHZ pair
    free = determined_outcomes([parse_pauli("+XI")], ghz_state(2))
    assert free == {}


def test_closure_sizes_frozen():
    mermin = close_under_commuting_products(
        [parse_pauli(s) for s in MERMIN_GENERATORS])
    assert len(mermin) == 20
    words = {p.label() for p in mermin}
    assert "+II" in words and "-II" in words and "+YY" in words
    # every signed word over {X, Y, I}: z-bits only where x-bits sit
    gens = [p for p in all_ops(3) if p.is_sign_operator
            and (p.z & ~p.x) == 0]
    closure = close_under_commuting_products(gens)
    assert len(closure) == 72
    again = close_under_commuting_products(closure)
    assert set(again) == set(closure)
    # every member has an even number of Z-letters in its word
    assert all(sum(ch == "Z" for ch in p.word) % 2 == 0 for p in closure)


def test_maximal_contexts_mermin():
    closure = close_under_commuting_products(
        [parse_pauli(s) for s in MERMIN_GENERATORS])
    ctxs = maximal_contexts(closure)
    assert len(ctxs) == 6 and all(len(c) == 8 for c in ctxs)
    members = set(closure)
    for ctx in ctxs:
        for p, q in itertools.combinations(ctx, 2):
            assert multiply(p, q) == multiply(q, p)
            assert multiply(p, q) in members
        outside = [p for p in closure if p not in set(ctx)]
        for p in outside:
            assert not all(
                multiply(p, q) == multiply(q, p) for q in ctx)


def _brute_splittings(ctx):
    ops = sorted(set(ctx), key=lambda p: (p.word, p.phase))
    minus = negate(identity(ops[0].n))
    out = []
    for vals in itertools.product(range(2), repeat=len(ops)):
        s = dict(zip(ops, vals))
        if any(s[multiply(p, q)] != (s[p] + s[q]) % 2
               for p in ops for q in ops):
            continue
        if minus in s and s[minus] != 1:
            continue
        out.append(s)
    return out


def test_context_splittings_vs_brute_force():
    closure = close_under_commuting_products(
        [parse_pauli(s) for s in MERMIN_GENERATORS])
    for ctx in maximal_contexts(closure):
        got = context_splittings(list(ctx))
        brute = _brute_splittings(ctx)
        key = lambda s: tuple(sorted((p.label(), v) for p, v in s.items()))
        assert sorted(map(key, got)) == sorted(map(key, brute))
        assert len(got) == 4


def test_context_splittings_preconditions():
    with pytest.raises(PreconditionError):
        context_splittings([])
    with pytest.raises(PreconditionError):
        context_splittings([parse_pauli("+XX")])  # no identity
    with pytest.raises(PreconditionError):
        context_splittings(
            [identity(2), parse_pauli("+XI"), parse_pauli("+ZI")])
