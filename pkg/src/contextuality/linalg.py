"""Exact integer and modular linear algebra with verifiable certificates.

All matrices are dense lists of Python ints, so nothing here ever rounds.
The solvers share one reporting convention:

* a witness is an assignment satisfying the system exactly;
* an infeasibility certificate is a vector ``y`` that provably separates
  the right-hand side from the reachable set.  For integer systems ``y``
  is rational with ``y^T A`` integral but ``y^T b`` non-integral (kind
  ``"integral"``), or ``y^T A = 0`` with ``y^T b != 0`` when the system is
  already infeasible over the rationals (kind ``"rational"``).  For
  modular systems ``y^T A = 0 (mod d)`` while ``y^T b != 0 (mod d)``.

Every witness and certificate is re-verified by substitution before it is
returned; a failed re-verification raises ``InternalCheckError``.

Integer feasibility is decided through a row-style Hermite normal form of
the transposed system (a basis of the column lattice), with a cheap GF(2)
refutation tried first.  Modular systems are solved locally at each prime
power by elimination with valuation-minimal pivoting, then recombined by
the Chinese remainder theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InternalCheckError, PreconditionError

Matrix = list  # list[list[int]]


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------


def hermite_normal_form(mat: Matrix) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U * mat == H``, ``U`` unimodular, ``H`` in row
    echelon form with positive pivots and entries above each pivot reduced
    to ``[0, pivot)``.  Zero rows sit at the bottom.
    """
    h = [list(map(int, row)) for row in mat]
    m = len(h)
    n = len(h[0]) if m else 0
    if any(len(row) != n for row in h):
        raise PreconditionError("ragged matrix")
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    t = 0
    for j in range(n):
        if t >= m:
            break
        # gcd-eliminate column j below row t
        while True:
            nz = [i for i in range(t, m) if h[i][j] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: (abs(h[i][j]), i))
            if best != t:
                h[t], h[best] = h[best], h[t]
                u[t], u[best] = u[best], u[t]
            done = True
            piv = h[t][j]
            for i in range(t + 1, m):
                if h[i][j]:
                    q = h[i][j] // piv
                    if q:
                        hi, ht = h[i], h[t]
                        h[i] = [a - q * b for a, b in zip(hi, ht)]
                        ui, ut = u[i], u[t]
                        u[i] = [a - q * b for a, b in zip(ui, ut)]
                    if h[i][j]:
                        done = False
            if done:
                break
        if t < m and h[t][j] != 0:
            if h[t][j] < 0:
                h[t] = [-a for a in h[t]]
                u[t] = [-a for a in u[t]]
            piv = h[t][j]
            for i in range(t):
                q = h[i][j] // piv  # floor: leaves 0 <= entry < pivot
                if q:
                    hi, ht = h[i], h[t]
                    h[i] = [a - q * b for a, b in zip(hi, ht)]
                    ui, ut = u[i], u[t]
                    u[i] = [a - q * b for a, b in zip(ui, ut)]
            t += 1
    return h, u


# ---------------------------------------------------------------------------
# GF(2) echelon with row tracking
# ---------------------------------------------------------------------------


class Gf2Echelon:
    """Reduced row echelon of an integer matrix over GF(2), rows as bitmasks.

    Tracks every reduced row as a combination of the original rows, which
    is what turns a refutation into a checkable certificate.  ``pivots``
    maps a column index to ``(rowmask, trackmask)``; rows that reduce to
    zero contribute their track to the left kernel.
    """

    def __init__(self, rows: Matrix, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, tuple[int, int]] = {}
        self._pivot_mask = 0
        self.zero_tracks: list[int] = []
        self.nrows = 0
        for row in rows:
            mask = 0
            for j, a in enumerate(row):
                if a & 1:
                    mask |= 1 << j
            self.add_row(mask)

    def add_row(self, mask: int) -> None:
        track = 1 << self.nrows
        self.nrows += 1
        mask, track = self._reduce(mask, track)
        if mask == 0:
            self.zero_tracks.append(track)
            return
        col = mask.bit_length() - 1
        # keep the form reduced: clear this column from existing pivot rows.
        # pivot rows never contain other pivot columns, so each row of the
        # form has support {own pivot} + free columns only.
        bit = 1 << col
        for c, (m, tr) in list(self.pivots.items()):
            if m & bit:
                self.pivots[c] = (m ^ mask, tr ^ track)
        self.pivots[col] = (mask, track)
        self._pivot_mask |= bit

    def _reduce(self, mask: int, track: int) -> tuple[int, int]:
        # each step clears one pivot column and cannot set another
        hits = mask & self._pivot_mask
        while hits:
            col = hits.bit_length() - 1
            m, tr = self.pivots[col]
            mask ^= m
            track ^= tr
            hits = mask & self._pivot_mask
        return mask, track

    def express(self, mask: int) -> int | None:
        """Track mask writing ``mask`` as a sum of original rows, or None."""
        mask, track = self._reduce(mask, 0)
        return track if mask == 0 else None

    def refute(self, rhs_mask: int) -> int | None:
        """Row combination ``y`` with ``y^T A = 0`` and ``y . b`` odd, or None."""
        for tr in self.zero_tracks:
            if (tr & rhs_mask).bit_count() & 1:
                return tr
        return None

    def kernel_basis(self) -> list[int]:
        """Masks over columns spanning ``{x : A x = 0 (mod 2)}``."""
        pivot_cols = set(self.pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivot_cols:
                continue
            vec = 1 << f
            for c, (m, _tr) in self.pivots.items():
                if (m >> f) & 1:
                    vec |= 1 << c
            basis.append(vec)
        return basis


def _parity_mask(vec: list[int]) -> int:
    mask = 0
    for i, a in enumerate(vec):
        if a & 1:
            mask |= 1 << i
    return mask


class Gf2AffineSystem:
    """Incremental solver for ``A x = b`` over GF(2).

    Rows arrive as (column bitmask, rhs bit).  Internally the right-hand
    side is stored at bit 0 and column j at bit j+1, so the echelon's
    highest-bit pivoting never chooses the rhs column unless a row has
    reduced to ``0 = 1``; that row's track is then a refuting left
    combination.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._ech = Gf2Echelon([], ncols + 1)

    def add(self, row_mask: int, rhs_bit: int) -> None:
        self._ech.add_row((row_mask << 1) | (rhs_bit & 1))

    def solve(self) -> tuple[int | None, int | None]:
        """``(solution_mask, None)`` if feasible else ``(None, refuter)``.

        The refuter is a bitmask over added rows whose GF(2) sum is the
        contradictory equation 0 = 1.  Free variables are set to 0.
        """
        piv = self._ech.pivots.get(0)
        if piv is not None:
            mask, track = piv
            if mask != 1:  # cannot happen: bit 0 is the lowest column
                raise InternalCheckError("rhs pivot row carries unknowns")
            return None, track
        sol = 0
        for col, (mask, _tr) in self._ech.pivots.items():
            if mask & 1:
                sol |= 1 << (col - 1)
        return sol, None


# ---------------------------------------------------------------------------
# Integer feasibility
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Separating functional: kind "rational" or "integral" (see module doc)."""

    kind: str
    vector: tuple[Fraction, ...]


@dataclass(frozen=True)
class IntSolveResult:
    feasible: bool
    witness: tuple[int, ...] | None = None
    certificate: InfeasibilityCertificate | None = None


def _dot_frac(y, col) -> Fraction:
    s = Fraction(0)
    for a, b in zip(y, col):
        if a and b:
            s += a * b
    return s


def verify_integer_result(rows: Matrix, rhs: list[int], result: IntSolveResult) -> bool:
    """Substitution check for a witness or certificate against A x = b."""
    n = len(rows[0]) if rows else (len(result.witness) if result.witness else 0)
    if result.feasible:
        x = result.witness
        if x is None or len(x) != n:
            return False
        for row, b in zip(rows, rhs):
            if sum(a * v for a, v in zip(row, x)) != b:
                return False
        return True
    cert = result.certificate
    if cert is None or len(cert.vector) != len(rows):
        return False
    y = cert.vector
    yb = _dot_frac(y, rhs)
    for j in range(n):
        yj = _dot_frac(y, [row[j] for row in rows])
        if cert.kind == "rational":
            if yj != 0:
                return False
        else:
            if yj.denominator != 1:
                return False
    return yb != 0 if cert.kind == "rational" else yb.denominator != 1


class IntegerSystem:
    """Reusable exact solver for ``A x = b`` over the integers.

    Precomputes a GF(2) echelon (fast refutations) and, lazily, a Hermite
    basis of the column lattice of ``A`` (full decisions), so that many
    right-hand sides can be decided against one matrix.
    """

    def __init__(self, rows: Matrix, ncols: int | None = None):
        if not rows and ncols is None:
            raise PreconditionError("empty system needs an explicit column count")
        self.rows = [list(map(int, r)) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else int(ncols)
        if any(len(r) != self.ncols for r in self.rows):
            raise PreconditionError("ragged matrix")
        self._gf2 = Gf2Echelon(self.rows, self.ncols)
        self._lattice: tuple | None = None

    # lattice of reachable right-hand sides, in constraint-index space
    def _lattice_data(self):
        if self._lattice is None:
            transpose = [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
            h, u = hermite_normal_form(transpose)
            basis, pivots, urows = [], [], []
            for k, row in enumerate(h):
                lead = next((j for j, a in enumerate(row) if a), None)
                if lead is None:
                    continue
                basis.append(row)
                pivots.append(lead)
                urows.append(u[k])
            self._lattice = (basis, pivots, urows)
        return self._lattice

    def solve(self, rhs: list[int]) -> IntSolveResult:
        if len(rhs) != self.nrows:
            raise PreconditionError("right-hand side length mismatch")
        track = self._gf2.refute(_parity_mask(rhs))
        if track is not None:
            y = tuple(
                Fraction(1, 2) if (track >> i) & 1 else Fraction(0) for i in range(self.nrows)
            )
            return self._checked(rhs, IntSolveResult(
                False, None, InfeasibilityCertificate("integral", y)))
        basis, pivots, urows = self._lattice_data()
        # greedy expansion of rhs in the echelon basis, exactly over Q
        num = list(rhs)
        den = 1
        coeffs: list[Fraction] = []
        for brow, pcol in zip(basis, pivots):
            v = num[pcol]
            p = brow[pcol]
            coeffs.append(Fraction(v, den * p))
            if v == 0:
                continue
            if p == 1:
                num = [a - v * hb for a, hb in zip(num, brow)]
            else:
                num = [p * a - v * hb for a, hb in zip(num, brow)]
                den *= p
                g = den
                for a in num:
                    if a:
                        g = gcd(g, a)
                        if g == 1:
                            break
                if g > 1:
                    den //= g
                    num = [a // g for a in num]
        if any(num):
            q = next(i for i, a in enumerate(num) if a)
            y = self._orthogonal_dual(q)
            return self._checked(rhs, IntSolveResult(
                False, None, InfeasibilityCertificate("rational", tuple(y))))
        bad = next((k for k, c in enumerate(coeffs) if c.denominator != 1), None)
        if bad is not None:
            y = self._pivot_dual(bad)
            return self._checked(rhs, IntSolveResult(
                False, None, InfeasibilityCertificate("integral", tuple(y))))
        x = [0] * self.ncols
        for c, urow in zip(coeffs, urows):
            if c:
                ci = int(c)
                for j in range(self.ncols):
                    if urow[j]:
                        x[j] += ci * urow[j]
        return self._checked(rhs, IntSolveResult(True, tuple(x), None))

    def _pivot_dual(self, k: int) -> list[Fraction]:
        """y supported on pivot coordinates with y . h_j = delta_{jk}."""
        basis, pivots, _ = self._lattice_data()
        r = len(basis)
        alpha = [Fraction(0)] * r
        for j in range(r - 1, -1, -1):
            s = Fraction(1 if j == k else 0)
            for l in range(j + 1, r):
                if basis[j][pivots[l]]:
                    s -= alpha[l] * basis[j][pivots[l]]
            alpha[j] = s / basis[j][pivots[j]]
        y = [Fraction(0)] * self.nrows
        for l in range(r):
            y[pivots[l]] = alpha[l]
        return y

    def _orthogonal_dual(self, q: int) -> list[Fraction]:
        """y with y . h_j = 0 for all j and y_q = 1 (q not a pivot column)."""
        basis, pivots, _ = self._lattice_data()
        r = len(basis)
        alpha = [Fraction(0)] * r
        for j in range(r - 1, -1, -1):
            s = Fraction(-basis[j][q])
            for l in range(j + 1, r):
                if basis[j][pivots[l]]:
                    s -= alpha[l] * basis[j][pivots[l]]
            alpha[j] = s / basis[j][pivots[j]]
        y = [Fraction(0)] * self.nrows
        y[q] = Fraction(1)
        for l in range(r):
            y[pivots[l]] = alpha[l]
        return y

    def _checked(self, rhs: list[int], result: IntSolveResult) -> IntSolveResult:
        if not verify_integer_result(self.rows, rhs, result):
            raise InternalCheckError("integer solver produced an unverifiable answer")
        return result


def solve_integer(rows: Matrix, rhs: list[int], ncols: int | None = None) -> IntSolveResult:
    """Decide ``A x = b`` over the integers; witness or certificate."""
    return IntegerSystem(rows, ncols).solve(rhs)


# ---------------------------------------------------------------------------
# Modular systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModSolveResult:
    feasible: bool
    witness: tuple[int, ...] | None = None
    certificate: tuple[int, ...] | None = None


def verify_mod_result(rows: Matrix, rhs: list[int], modulus: int, result: ModSolveResult) -> bool:
    n = len(rows[0]) if rows else (len(result.witness) if result.witness else 0)
    if result.feasible:
        x = result.witness
        if x is None or len(x) != n:
            return False
        return all(
            sum(a * v for a, v in zip(row, x)) % modulus == b % modulus
            for row, b in zip(rows, rhs)
        )
    y = result.certificate
    if y is None or len(y) != len(rows):
        return False
    for j in range(n):
        if sum(y[i] * rows[i][j] for i in range(len(rows))) % modulus:
            return False
    return sum(a * b for a, b in zip(y, rhs)) % modulus != 0


def _factor(n: int) -> list[tuple[int, int]]:
    """Prime-power factorization by trial division (desk-size moduli)."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _val(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


class _PrimePowerSystem:
    """Elimination over Z_{p^e} with valuation-minimal pivoting.

    Pivots are chosen globally by increasing p-valuation, so every entry
    remaining to the right of (or below) a pivot has valuation at least
    the pivot's.  That makes back-substitution with zeroed free variables
    complete: a division failure genuinely certifies infeasibility.
    """

    def __init__(self, rows: Matrix, ncols: int, p: int, e: int):
        self.p, self.e, self.q = p, e, p**e
        self.ncols = ncols
        q = self.q
        self.mat = [[a % q for a in row] for row in rows]
        m = len(self.mat)
        self.track = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
        self.pivots: list[tuple[int, int, int]] = []  # (row, col, valuation)
        self._eliminate()

    def _eliminate(self) -> None:
        p, q = self.p, self.q
        m = len(self.mat)
        used_cols: set[int] = set()
        r = 0
        while r < m:
            best = None  # (valuation, col, row)
            for i in range(r, m):
                row = self.mat[i]
                for j in range(self.ncols):
                    if j in used_cols or row[j] == 0:
                        continue
                    v = _val(row[j], p)
                    if best is None or (v, j, i) < best:
                        best = (v, j, i)
                if best is not None and best[0] == 0:
                    break  # unit pivot is as good as it gets
            if best is None:
                break
            v, j, i = best
            self.mat[r], self.mat[i] = self.mat[i], self.mat[r]
            self.track[r], self.track[i] = self.track[i], self.track[r]
            unit = self.mat[r][j] // (p**v)
            inv = pow(unit, -1, q)
            self.mat[r] = [(a * inv) % q for a in self.mat[r]]
            self.track[r] = [(a * inv) % q for a in self.track[r]]
            pv = p**v
            for i2 in range(r + 1, m):
                a = self.mat[i2][j]
                if a:
                    f = a // pv  # exact: every remaining entry has valuation >= v
                    row2, rowr = self.mat[i2], self.mat[r]
                    self.mat[i2] = [(x - f * y) % q for x, y in zip(row2, rowr)]
                    t2, tr = self.track[i2], self.track[r]
                    self.track[i2] = [(x - f * y) % q for x, y in zip(t2, tr)]
            self.pivots.append((r, j, v))
            used_cols.add(j)
            r += 1
        self.rank = r

    def _apply_track(self, rhs: list[int]) -> list[int]:
        q = self.q
        return [sum(t * b for t, b in zip(trow, rhs)) % q for trow in self.track]

    def solve(self, rhs: list[int]) -> tuple[tuple[int, ...] | None, tuple[int, ...] | None]:
        """(witness mod q, None) or (None, certificate mod q)."""
        p, q, e = self.p, self.q, self.e
        c = self._apply_track(rhs)
        for i in range(self.rank, len(self.mat)):
            if c[i] % q:
                return None, tuple(self.track[i])
        x = [0] * self.ncols
        for r, j, v in reversed(self.pivots):
            residual = (c[r] - sum(self.mat[r][t] * x[t] for t in range(self.ncols) if x[t])) % q
            pv = p**v
            if residual % pv:
                scale = q // pv
                cert = tuple((scale * t) % q for t in self.track[r])
                return None, cert
            x[j] = (residual // pv) % (q // pv)
        return tuple(x), None

    def kernel(self) -> list[list[int]]:
        """Generating set of ``{x : A x = 0 (mod p^e)}``."""
        p, q = self.p, self.q
        pivot_cols = {j for _, j, _ in self.pivots}
        gens = []
        for f in range(self.ncols):
            if f in pivot_cols:
                continue
            x = [0] * self.ncols
            x[f] = 1
            self._back_substitute_homogeneous(x)
            gens.append(x)
        for r, j, v in self.pivots:
            if v == 0:
                continue
            x = [0] * self.ncols
            x[j] = p ** (self.e - v)
            self._back_substitute_homogeneous(x, skip_row=r)
            gens.append(x)
        return gens

    def _back_substitute_homogeneous(self, x: list[int], skip_row: int = -1) -> None:
        p, q = self.p, self.q
        for r, j, v in reversed(self.pivots):
            if r == skip_row:
                continue
            residual = (-sum(self.mat[r][t] * x[t] for t in range(self.ncols) if x[t])) % q
            pv = p**v
            if residual % pv:
                raise InternalCheckError("homogeneous back-substitution hit a non-divisible residual")
            x[j] = (residual // pv) % (q // pv)


class ModSystem:
    """Reusable solver for ``A x = b (mod d)``: CRT over prime-power locals."""

    def __init__(self, rows: Matrix, modulus: int, ncols: int | None = None):
        if modulus < 2:
            raise PreconditionError("modulus must be at least 2")
        if not rows and ncols is None:
            raise PreconditionError("empty system needs an explicit column count")
        self.rows = [list(map(int, r)) for r in rows]
        self.modulus = modulus
        self.ncols = len(self.rows[0]) if self.rows else int(ncols)
        if any(len(r) != self.ncols for r in self.rows):
            raise PreconditionError("ragged matrix")
        self.locals = [
            (p, e, _PrimePowerSystem(self.rows, self.ncols, p, e)) for p, e in _factor(modulus)
        ]

    def solve(self, rhs: list[int]) -> ModSolveResult:
        if len(rhs) != len(self.rows):
            raise PreconditionError("right-hand side length mismatch")
        d = self.modulus
        parts = []
        for p, e, system in self.locals:
            witness, cert = system.solve(rhs)
            if witness is None:
                q = p**e
                scale = d // q
                y = tuple((scale * int(c)) % d for c in cert)
                return self._checked(rhs, ModSolveResult(False, None, y))
            parts.append((p**e, witness))
        x = [_crt([(q, w[j]) for q, w in parts]) for j in range(self.ncols)]
        return self._checked(rhs, ModSolveResult(True, tuple(v % d for v in x), None))

    def kernel(self) -> list[tuple[int, ...]]:
        """Generating set of the solution module of ``A x = 0 (mod d)``."""
        d = self.modulus
        gens: list[tuple[int, ...]] = []
        for p, e, system in self.locals:
            q = p**e
            rest = d // q
            for g in system.kernel():
                # lift: equal to g mod q, zero mod d/q
                lifted = tuple(_crt([(q, gj), (rest, 0)]) % d if rest > 1 else gj % d for gj in g)
                if any(lifted):
                    gens.append(lifted)
        return gens

    def _checked(self, rhs: list[int], result: ModSolveResult) -> ModSolveResult:
        if not verify_mod_result(self.rows, rhs, self.modulus, result):
            raise InternalCheckError("modular solver produced an unverifiable answer")
        return result


def _crt(parts: list[tuple[int, int]]) -> int:
    """x with x = r (mod q) for each (q, r); moduli pairwise coprime."""
    x, m = 0, 1
    for q, r in parts:
        if q == 1:
            continue
        inv = pow(m % q, -1, q)
        x = x + m * ((r - x) % q * inv % q)
        m *= q
    return x % m if m > 1 else 0


def solve_mod(rows: Matrix, rhs: list[int], modulus: int, ncols: int | None = None) -> ModSolveResult:
    """Decide ``A x = b (mod d)``; witness or annihilating certificate."""
    return ModSystem(rows, modulus, ncols).solve(rhs)


def kernel_mod(rows: Matrix, modulus: int, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Generating set of ``{x : A x = 0 (mod d)}``."""
    if not rows:
        if ncols is None:
            raise PreconditionError("empty kernel query needs an explicit column count")
        return [tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols)]
    return ModSystem(rows, modulus, ncols).kernel()


def affine_annihilator(points: Matrix, modulus: int) -> list[tuple[tuple[int, ...], int]]:
    """All affine relations ``r . s = a (mod d)`` satisfied by every point.

    Returns a generating set of pairs ``(r, a)``: the kernel of the matrix
    of differences against the first point, each paired with its induced
    constant.  For a single point the spanning relations are the
    coordinate evaluations.
    """
    if not points:
        raise PreconditionError("need at least one point")
    base = points[0]
    diffs = [[(s[j] - base[j]) % modulus for j in range(len(base))] for s in points[1:]]
    gens = kernel_mod(diffs, modulus, ncols=len(base))
    out = []
    for r in gens:
        a = sum(x * y for x, y in zip(r, base)) % modulus
        out.append((tuple(v % modulus for v in r), a))
    return out
