"""Exact integer and rational linear algebra.

Smith and Hermite normal forms over the integers, lattice membership and
saturation, and invariant factors of finitely generated abelian groups.
All arithmetic is arbitrary precision; no floating point is used anywhere.
Pivot selection is pinned (smallest absolute value, ties broken by row then
column order) so every result is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd


class SingularMatrix(ValueError):
    """A nonsingular square matrix was required."""


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match rows*cols")
        for e in self.entries:
            if not isinstance(e, int) or isinstance(e, bool):
                raise ValueError("matrix entries must be plain ints")

    @classmethod
    def from_rows(cls, rows, cols=None):
        rows = [tuple(r) for r in rows]
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and width != cols:
                raise ValueError("declared column count does not match rows")
        else:
            width = 0 if cols is None else cols
        return cls(len(rows), width, tuple(e for r in rows for e in r))

    @classmethod
    def identity(cls, n):
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, (0,) * (rows * cols))

    def at(self, i, j):
        return self.entries[i * self.cols + j]

    def row(self, i):
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.at(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError("incompatible shapes for multiplication")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other.at(k, j) for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def mul_vector(self, vec):
        if len(vec) != self.cols:
            raise ValueError("vector length does not match column count")
        return [sum(self.at(i, k) * vec[k] for k in range(self.cols)) for i in range(self.rows)]

    @property
    def is_square(self):
        return self.rows == self.cols

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
                if pivot is None:
                    return 0
                m[k], m[pivot] = m[pivot], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __str__(self):
        return "\n".join(" ".join(str(e) for e in self.row(i)) for i in range(self.rows))


@dataclass(frozen=True)
class RatVector:
    """Rational vector held as integer numerators over one positive denominator.

    Normalised so that gcd(numerators, denominator) = 1.
    """

    numerators: tuple
    denominator: int

    def __post_init__(self):
        nums = tuple(int(n) for n in self.numerators)
        den = int(self.denominator)
        if den == 0:
            raise ValueError("zero denominator")
        if den < 0:
            nums = tuple(-n for n in nums)
            den = -den
        g = den
        for n in nums:
            g = gcd(g, n)
        if g > 1:
            nums = tuple(n // g for n in nums)
            den //= g
        object.__setattr__(self, "numerators", nums)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def from_fractions(cls, fracs):
        fracs = [Fraction(f) for f in fracs]
        den = 1
        for f in fracs:
            den = den * f.denominator // gcd(den, f.denominator)
        return cls(tuple(int(f * den) for f in fracs), den)

    @classmethod
    def integers(cls, values):
        return cls(tuple(int(v) for v in values), 1)

    @classmethod
    def zero(cls, n):
        return cls((0,) * n, 1)

    def __len__(self):
        return len(self.numerators)

    def fractions(self):
        return tuple(Fraction(n, self.denominator) for n in self.numerators)

    @property
    def is_zero(self):
        return all(n == 0 for n in self.numerators)

    def negated(self):
        return RatVector(tuple(-n for n in self.numerators), self.denominator)

    def mod1(self):
        """Reduce every coordinate into [0, 1)."""
        return RatVector(tuple(n % self.denominator for n in self.numerators), self.denominator)


@dataclass(frozen=True)
class AbelianInvariants:
    """Free rank plus invariant factors d_1 | d_2 | ... (each >= 2)."""

    free_rank: int
    torsion: tuple

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        tor = tuple(int(d) for d in self.torsion)
        for d in tor:
            if d < 2:
                raise ValueError("torsion factors must be >= 2")
        for a, b in zip(tor, tor[1:]):
            if b % a != 0:
                raise ValueError("torsion factors must form a divisibility chain")
        object.__setattr__(self, "torsion", tor)

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    @property
    def is_cyclic(self):
        return self.free_rank == 0 and len(self.torsion) <= 1

    def order(self):
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "1"


@dataclass(frozen=True)
class SnfResult:
    """Diagonalisation U*A*V = D with U, V unimodular and d_i | d_{i+1}."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    def diagonal(self):
        return tuple(self.d.at(i, i) for i in range(min(self.d.rows, self.d.cols)))


def _min_pivot(m, t, rows, cols):
    best = None
    where = None
    for i in range(t, rows):
        mi = m[i]
        for j in range(t, cols):
            e = mi[j]
            if e:
                a = -e if e < 0 else e
                if best is None or a < best:
                    best = a
                    where = (i, j)
    return where


def _snf_core(rows_in):
    """Smith form on a list of rows; returns (m, u, v, vinv, rank)."""
    r = len(rows_in)
    c = len(rows_in[0]) if r else 0
    m = [list(row) for row in rows_in]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    vinv = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    t = 0
    while t < min(r, c):
        where = _min_pivot(m, t, r, c)
        if where is None:
            break
        while True:
            i, j = where
            if i != t:
                m[t], m[i] = m[i], m[t]
                u[t], u[i] = u[i], u[t]
            if j != t:
                for row in m:
                    row[t], row[j] = row[j], row[t]
                for row in v:
                    row[t], row[j] = row[j], row[t]
                vinv[t], vinv[j] = vinv[j], vinv[t]
            if m[t][t] < 0:
                m[t] = [-e for e in m[t]]
                u[t] = [-e for e in u[t]]
            pivot = m[t][t]
            clean = True
            for i2 in range(t + 1, r):
                q = m[i2][t] // pivot
                if q:
                    m[i2] = [a - q * b for a, b in zip(m[i2], m[t])]
                    u[i2] = [a - q * b for a, b in zip(u[i2], u[t])]
                if m[i2][t]:
                    clean = False
            for j2 in range(t + 1, c):
                q = m[t][j2] // pivot
                if q:
                    for row in m:
                        row[j2] -= q * row[t]
                    for row in v:
                        row[j2] -= q * row[t]
                    vinv[t] = [a + q * b for a, b in zip(vinv[t], vinv[j2])]
                if m[t][j2]:
                    clean = False
            if not clean:
                where = _min_pivot(m, t, r, c)
                continue
            offender = None
            for i2 in range(t + 1, r):
                for j2 in range(t + 1, c):
                    if m[i2][j2] % pivot:
                        offender = i2
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            m[t] = [a + b for a, b in zip(m[t], m[offender])]
            u[t] = [a + b for a, b in zip(u[t], u[offender])]
            where = _min_pivot(m, t, r, c)
        t += 1
    return m, u, v, vinv, t


def smith_normal_form(a: IntMatrix) -> SnfResult:
    """Compute U*A*V = D with diagonal D, d_i >= 0 and d_i | d_{i+1}."""
    m, u, v, _vinv, _rank = _snf_core(a.to_rows())
    return SnfResult(
        IntMatrix.from_rows(m, cols=a.cols),
        IntMatrix.from_rows(u, cols=a.rows),
        IntMatrix.from_rows(v, cols=a.cols),
    )


def cokernel_invariants(a: IntMatrix, ambient_rank: int) -> AbelianInvariants:
    """Invariants of Z^ambient_rank modulo the row span of ``a``."""
    if a.cols != ambient_rank:
        raise ValueError("rows of a must live in Z^ambient_rank")
    if a.rows == 0:
        return AbelianInvariants(ambient_rank, ())
    m, _u, _v, _vinv, rank = _snf_core(a.to_rows())
    diag = [m[i][i] for i in range(rank)]
    return AbelianInvariants(ambient_rank - rank, tuple(d for d in diag if d > 1))


def hermite_normal_form(a: IntMatrix) -> IntMatrix:
    """Row-style Hermite form: echelon, positive pivots, reduced above, zero rows dropped."""
    m = a.to_rows()
    nrows = len(m)
    r = 0
    for col in range(a.cols):
        while True:
            best = None
            where = None
            for i in range(r, nrows):
                e = m[i][col]
                if e:
                    v = -e if e < 0 else e
                    if best is None or v < best:
                        best = v
                        where = i
            if where is None:
                break
            if where != r:
                m[r], m[where] = m[where], m[r]
            if m[r][col] < 0:
                m[r] = [-e for e in m[r]]
            done = True
            for i in range(r + 1, nrows):
                q = m[i][col] // m[r][col]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
                if m[i][col]:
                    done = False
            if done:
                break
        if where is not None:
            for i in range(r):
                q = m[i][col] // m[r][col]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[r])]
            r += 1
    return IntMatrix.from_rows(m[:r], cols=a.cols)


def lattice_contains(lattice: IntMatrix, vector) -> bool:
    """Is ``vector`` in the integer row span of ``lattice``?"""
    vec = [int(x) for x in vector]
    if len(vec) != lattice.cols:
        raise ValueError("vector length does not match lattice ambient rank")
    h = hermite_normal_form(lattice)
    for i in range(h.rows):
        row = h.row(i)
        pc = next(j for j, e in enumerate(row) if e)
        if vec[pc] % row[pc]:
            return False
        q = vec[pc] // row[pc]
        if q:
            vec = [x - q * y for x, y in zip(vec, row)]
    return all(x == 0 for x in vec)


def membership(t: RatVector, a: IntMatrix, lam: IntMatrix) -> bool:
    """Decide t in (rational column span of a) + (integer row span of lam).

    Exact: the rational column space is split off with a Smith form, and the
    residual question becomes plain lattice membership decided by Hermite
    reduction.
    """
    n = len(t)
    if a.rows != n:
        raise ValueError("a must have one row per coordinate of t")
    if lam.cols != n:
        raise ValueError("lam rows must live in the same ambient space as t")
    _m, u, _v, _vinv, rank = _snf_core(a.to_rows())
    den = t.denominator
    t_img = [sum(u[i][k] * t.numerators[k] for k in range(n)) for i in range(n)]
    free = range(rank, n)
    target = [t_img[i] for i in free]
    if not target:
        return True
    rows = []
    for idx in range(lam.rows):
        ell = lam.row(idx)
        img = [sum(u[i][k] * den * ell[k] for k in range(n)) for i in range(n)]
        rows.append([img[i] for i in free])
    return lattice_contains(IntMatrix.from_rows(rows, cols=len(target)), target)


def saturation(a: IntMatrix) -> IntMatrix:
    """Basis of { v : k*v in rowspan(a) for some k >= 1 }, in Hermite form."""
    if a.rows == 0:
        return IntMatrix.zeros(0, a.cols)
    _m, _u, _v, vinv, rank = _snf_core(a.to_rows())
    if rank == 0:
        return IntMatrix.zeros(0, a.cols)
    return hermite_normal_form(IntMatrix.from_rows(vinv[:rank], cols=a.cols))


def solve_in_rowspace(rows: IntMatrix, target) -> "list[Fraction] | None":
    """Solve x * rows = target over the rationals; None when inconsistent.

    ``rows`` is expected to have independent rows (a lattice basis); with
    dependent rows any one solution is returned.
    """
    k = rows.rows
    n = rows.cols
    if len(target) != n:
        raise ValueError("target length does not match ambient rank")
    # Augmented system rows^T * x^T = target^T over Fraction.
    aug = [[Fraction(rows.at(j, i)) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for col in range(k):
        piv = next((i for i in range(r, n) if aug[i][col] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [e * inv for e in aug[r]]
        for i in range(n):
            if i != r and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [e - f * g for e, g in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
    for i in range(r, n):
        if aug[i][k] != 0:
            return None
    x = [Fraction(0)] * k
    for idx, col in enumerate(pivots):
        x[col] = aug[idx][k]
    return x


def solve_integral(rows: IntMatrix, target) -> "list[int] | None":
    """Integer coordinates of ``target`` in the row basis, or None."""
    x = solve_in_rowspace(rows, target)
    if x is None or any(f.denominator != 1 for f in x):
        return None
    return [int(f) for f in x]
