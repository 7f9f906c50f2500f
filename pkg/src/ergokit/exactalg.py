"""Exact arithmetic over Q and Z: kernels, lattice saturation, modular inverses.

Everything in this module is integer/rational exact; no floating point.
Integer lattices are kept in a row-echelon Hermite-style canonical form
(positive pivots, entries above a pivot reduced into [0, pivot)), so lattice
equality is plain structural equality of bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]
IntVec = tuple[int, ...]


def _frac_row(row: Sequence) -> Vec:
    return tuple(Fraction(x) for x in row)


@dataclass(frozen=True)
class RatMatrix:
    """Dense rational matrix, row-major entries."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entry count does not match rows*cols")

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "RatMatrix":
        data = [_frac_row(r) for r in rows]
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged rows")
        return RatMatrix(len(data), ncols, tuple(x for r in data for x in r))

    @staticmethod
    def empty(cols: int) -> "RatMatrix":
        return RatMatrix(0, cols, ())

    def at(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vec:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def mul_vec(self, v: Sequence) -> Vec:
        vv = _frac_row(v)
        if len(vv) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((self.at(i, j) * vv[j] for j in range(self.cols)), Fraction(0)) for i in range(self.rows))


def _rref(a: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place reduced row echelon form; returns the pivot columns."""
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pr = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = Fraction(1) / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    return pivots


def rational_kernel(m: RatMatrix | Sequence[Sequence]) -> list[Vec]:
    """Basis of the right kernel {v : M v = 0} over Q; empty iff M is injective."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix.from_rows(m)
    a = m.to_rows()
    pivots = _rref(a, m.cols)
    pivot_set = set(pivots)
    basis: list[Vec] = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        basis.append(tuple(v))
    return basis


def rational_rank(rows: Sequence[Sequence]) -> int:
    data = [list(_frac_row(r)) for r in rows]
    if not data:
        return 0
    return len(_rref(data, len(data[0])))


def solve_rational(a_rows: Sequence[Sequence], b: Sequence) -> Optional[Vec]:
    """One solution x of A x = b over Q, or None if inconsistent."""
    data = [list(_frac_row(r)) for r in a_rows]
    bb = list(_frac_row(b))
    if len(data) != len(bb):
        raise ValueError("dimension mismatch")
    ncols = len(data[0]) if data else 0
    aug = [row + [bb[i]] for i, row in enumerate(data)]
    pivots = _rref(aug, ncols)  # never pivots on the augmented column
    for row in aug:
        if all(x == 0 for x in row[:ncols]) and row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = aug[i][ncols]
    return tuple(x)


def solve_in_qspan(gens: Sequence[Sequence], v: Sequence) -> Optional[Vec]:
    """Coefficients x with sum_i x_i * gens[i] = v over Q, or None."""
    gg = [_frac_row(g) for g in gens]
    vv = _frac_row(v)
    if not gg:
        return () if all(x == 0 for x in vv) else None
    # transpose: columns are the generators
    a_rows = [[g[j] for g in gg] for j in range(len(vv))]
    return solve_rational(a_rows, vv)


def primitive_int_vector(v: Sequence) -> IntVec:
    """Clear denominators and divide by the content; preserves direction."""
    vv = _frac_row(v)
    if all(x == 0 for x in vv):
        return tuple(0 for _ in vv)
    den = math.lcm(*[x.denominator for x in vv])
    ints = [int(x * den) for x in vv]
    g = math.gcd(*[abs(x) for x in ints])
    return tuple(x // g for x in ints)


def hnf_rows(rows: Iterable[Sequence[int]], ambient_dim: int) -> tuple[IntVec, ...]:
    """Row-style Hermite normal form; zero rows dropped, pivots positive,
    entries above each pivot reduced into [0, pivot)."""
    work = [list(map(int, r)) for r in rows if any(x != 0 for x in r)]
    out: list[list[int]] = []
    col = 0
    while work and col < ambient_dim:
        sel = [row for row in work if row[col] != 0]
        rest = [row for row in work if row[col] == 0]
        while len(sel) > 1:
            sel.sort(key=lambda row: abs(row[col]))
            p = sel[0]
            nxt = [p]
            for row in sel[1:]:
                q = row[col] // p[col]
                red = [x - q * y for x, y in zip(row, p)]
                if red[col] != 0:
                    nxt.append(red)
                elif any(red):
                    rest.append(red)
            if len(nxt) == 1:
                sel = nxt
                break
            sel = nxt
        if sel:
            pivot = sel[0]
            if pivot[col] < 0:
                pivot = [-x for x in pivot]
            out.append(pivot)
        work = rest
        col += 1
    for i in range(len(out) - 1, -1, -1):
        pc = next(j for j, x in enumerate(out[i]) if x != 0)
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return tuple(tuple(r) for r in out)


def integer_kernel(rows: Sequence[Sequence[int]], ambient_dim: int) -> tuple[IntVec, ...]:
    """Z-basis of {v in Z^m : A v = 0}, in HNF; saturated by construction.

    Column-reduction on the stacked matrix [A; I_m]: unimodular column
    operations preserve integer combinations, and columns whose A-part
    vanishes read off kernel vectors from the identity part.
    """
    k = len(rows)
    cols: list[list[int]] = []
    for j in range(ambient_dim):
        top = [int(rows[i][j]) for i in range(k)]
        bot = [1 if t == j else 0 for t in range(ambient_dim)]
        cols.append(top + bot)
    fixed = 0
    for i in range(k):
        while True:
            nz = [c for c in range(fixed, len(cols)) if cols[c][i] != 0]
            if not nz:
                break
            if len(nz) == 1:
                c = nz[0]
                cols[fixed], cols[c] = cols[c], cols[fixed]
                fixed += 1
                break
            c0 = min(nz, key=lambda c: abs(cols[c][i]))
            for c in nz:
                if c == c0:
                    continue
                q = cols[c][i] // cols[c0][i]
                if q:
                    cols[c] = [x - q * y for x, y in zip(cols[c], cols[c0])]
    kernel = [tuple(col[k:]) for col in cols[fixed:]]
    return hnf_rows(kernel, ambient_dim)


def dual_covectors(basis: Sequence[Sequence[int]], ambient_dim: int) -> list[IntVec]:
    """Integer covectors z_i with z_i . basis_j = delta_ij.

    Exists exactly when the basis spans a saturated (direct-summand) lattice,
    which is the only case this toolkit produces.
    """
    k = len(basis)
    # column-reduce B (k x m) while tracking the unimodular transform V (m x m)
    b = [list(map(int, row)) for row in basis]
    v = [[1 if i == j else 0 for j in range(ambient_dim)] for i in range(ambient_dim)]

    def col_op(ci: int, cj: int, q: int) -> None:  # col_ci -= q * col_cj
        for row in b:
            row[ci] -= q * row[cj]
        for row in v:
            row[ci] -= q * row[cj]

    def col_swap(ci: int, cj: int) -> None:
        for row in b:
            row[ci], row[cj] = row[cj], row[ci]
        for row in v:
            row[ci], row[cj] = row[cj], row[ci]

    fixed = 0
    for i in range(k):
        while True:
            nz = [c for c in range(fixed, ambient_dim) if b[i][c] != 0]
            if not nz:
                raise ValueError("basis rows are not Z-independent")
            if len(nz) == 1:
                if nz[0] != fixed:
                    col_swap(nz[0], fixed)
                fixed += 1
                break
            c0 = min(nz, key=lambda c: abs(b[i][c]))
            for c in nz:
                if c != c0:
                    col_op(c, c0, b[i][c] // b[i][c0])
    # now B*V = [H | 0] with H lower-triangular k x k; saturated => |det H| = 1
    h = [[Fraction(b[i][j]) for j in range(k)] for i in range(k)]
    out: list[IntVec] = []
    for i in range(k):
        e = [Fraction(1) if t == i else Fraction(0) for t in range(k)]
        y = solve_rational(h, e)
        if y is None or any(c.denominator != 1 for c in y):
            raise ValueError("basis does not span a saturated lattice")
        z = [sum(v[r][j] * int(y[j]) for j in range(k)) for r in range(ambient_dim)]
        out.append(tuple(z))
    return out


@dataclass(frozen=True)
class IntLattice:
    """Saturated integer lattice given by an HNF basis."""

    ambient_dim: int
    basis: tuple[IntVec, ...]

    def __post_init__(self) -> None:
        for row in self.basis:
            if len(row) != self.ambient_dim:
                raise ValueError("basis vector of wrong length")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def qspan_contains(self, v: Sequence) -> bool:
        return solve_in_qspan(self.basis, v) is not None

    def contains(self, v: Sequence[int]) -> bool:
        """Membership: integer vector lying in the Q-span (lattice is saturated)."""
        if any(Fraction(x).denominator != 1 for x in v):
            return False
        return self.qspan_contains(v)

    def combination_of_basis(self, v: Sequence[int]) -> Optional[IntVec]:
        x = solve_in_qspan(self.basis, v)
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return tuple(int(c) for c in x)


def full_lattice(ambient_dim: int) -> IntLattice:
    basis = tuple(tuple(1 if j == i else 0 for j in range(ambient_dim)) for i in range(ambient_dim))
    return IntLattice(ambient_dim, basis)


def saturate(vectors: Sequence[Sequence], ambient_dim: int) -> IntLattice:
    """(Q-span of vectors) intersected with Z^m, as a canonical IntLattice."""
    vecs = [_frac_row(v) for v in vectors]
    for v in vecs:
        if len(v) != ambient_dim:
            raise ValueError("vector of wrong length")
    vecs = [v for v in vecs if any(x != 0 for x in v)]
    if not vecs:
        return IntLattice(ambient_dim, ())
    ker = rational_kernel(RatMatrix.from_rows(vecs))
    if not ker:
        return full_lattice(ambient_dim)
    nrows = [primitive_int_vector(v) for v in ker]
    return IntLattice(ambient_dim, integer_kernel(nrows, ambient_dim))


@dataclass(frozen=True)
class ModInversePair:
    """a_star in [1,|b|-1] with a*a_star = 1 mod |b|, and symmetrically b_star.

    A unit modulus (|b| = 1 resp. |a| = 1) has no inverse in the stated range;
    the value is reported as 0 with the matching degenerate flag set.
    """

    a_star: int
    b_star: int
    a_star_degenerate: bool
    b_star_degenerate: bool


def mod_inverse_pair(a: int, b: int) -> ModInversePair:
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a},{b}) != 1")
    aa, bb = abs(a), abs(b)
    a_star = pow(a, -1, bb) if bb > 1 else 0
    b_star = pow(b, -1, aa) if aa > 1 else 0
    return ModInversePair(a_star, b_star, bb == 1, aa == 1)


def bezout_pair(a: int, b: int) -> tuple[int, int]:
    """(m1, m2) with m1*a + m2*b = gcd(a, b) > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t
