"""Structural analysis of polynomial families.

Q-dependence lattices, the ring-restricted irrational-or-zero dependence
search, the constructive Type-B extraction for pairs, and orbit membership in
the relation subtorus.

The dependence search is complete only within the coefficient ring it
searches: Q[declared symbols] extended by a few fresh symbols, with fresh
degree at most one. A `None` answer is therefore a certificate of independence
*within that ring*, and every verdict built on it carries this caveat.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactalg import IntLattice, rational_kernel
from .rpoly import RPoly, is_integer_valued, relation_lattice, reparametrize
from .symreal import Monomial, ScalarKind, SymbolicReal, _mono_key


@dataclass(frozen=True)
class Subtorus:
    """Subtorus of T^m cut out by an integer relation lattice."""

    ambient_dim: int
    relations: IntLattice

    def __post_init__(self) -> None:
        if self.relations.ambient_dim != self.ambient_dim:
            raise ValueError("relation lattice has wrong ambient dimension")

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.relations.rank


class WitnessKind(enum.Enum):
    RATIONAL = "rational"
    IRRATIONAL_OR_ZERO = "irrational_or_zero"


@dataclass(frozen=True)
class DependenceWitness:
    """Coefficients c_i with sum c_i p_i = target; self-verified on build."""

    polys: tuple[RPoly, ...]
    coefficients: tuple[SymbolicReal, ...]
    target: RPoly
    kind: WitnessKind

    def __post_init__(self) -> None:
        table = self.target.table
        acc = RPoly.zero(table)
        for c, p in zip(self.coefficients, self.polys):
            acc = acc + p.scale(c)
        if acc != self.target:
            raise ValueError("witness does not recombine to its target")
        if not self.target.is_rational_plus_real():
            raise ValueError("witness target is not in Q[x]+R")
        if self.kind is WitnessKind.IRRATIONAL_OR_ZERO:
            kinds = [c.kind() for c in self.coefficients]
            if all(k is ScalarKind.ZERO for k in kinds):
                raise ValueError("witness coefficients are all zero")
            if any(k is ScalarKind.NONZERO_RATIONAL for k in kinds):
                raise ValueError("witness has a nonzero rational coefficient")

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coefficients) if not c.is_zero())

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "coefficients": [c.to_string() for c in self.coefficients],
            "target": self.target.to_string(),
        }


@dataclass(frozen=True)
class TypeBCertificate:
    """p1 = u1 (f + c g), p2 = u2 (f + (c+d) g) with rational f, g vanishing at 0."""

    p1: RPoly
    p2: RPoly
    f: RPoly
    g: RPoly
    c: SymbolicReal
    d: Fraction
    u1: int
    u2: int
    f_not_multiple_of_g: bool
    dg_integer_valued: bool

    def __post_init__(self) -> None:
        if self.g.is_zero():
            raise ValueError("g must be nonzero")
        if self.d == 0:
            raise ValueError("d must be nonzero")
        if self.c.kind() is not ScalarKind.IRRATIONAL:
            raise ValueError("c must be irrational")
        if not (self.f.is_rational() and self.g.is_rational()):
            raise ValueError("f and g must be rational polynomials")
        if not (self.f.constant_term().is_zero() and self.g.constant_term().is_zero()):
            raise ValueError("f and g must vanish at 0")
        lhs1 = (self.f + self.g.scale(self.c)).scale(Fraction(self.u1))
        cd = self.c + Fraction(self.d)
        lhs2 = (self.f + self.g.scale(cd)).scale(Fraction(self.u2))
        if lhs1 != self.p1 or lhs2 != self.p2:
            raise ValueError("certificate does not reconstruct the pair")

    def to_json(self) -> dict:
        return {
            "f": self.f.to_string(),
            "g": self.g.to_string(),
            "c": self.c.to_string(),
            "d": str(self.d),
            "u1": self.u1,
            "u2": self.u2,
            "f_not_multiple_of_g": self.f_not_multiple_of_g,
            "dg_integer_valued": self.dg_integer_valued,
        }


def rational_dependencies(polys: Sequence[RPoly], constant_free: bool = False) -> IntLattice:
    """Saturated lattice of integer k with sum k_i p_i in Q[x].

    With constant_free=True the constant term is left unconstrained (the
    Q[x]+R variant used by V-independence)."""
    return relation_lattice(polys, constant_free=constant_free)


def subtorus_of(polys: Sequence[RPoly]) -> Subtorus:
    return Subtorus(len(polys), rational_dependencies(polys, constant_free=False))


def is_multiple_of(f: RPoly, g: RPoly) -> Optional[Fraction]:
    """s with f = s*g over Q, or None. The zero polynomial is 0*g."""
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if f.is_zero():
        return Fraction(0)
    fc = f.rational_coefficients()
    gc = g.rational_coefficients()
    if len(fc) != len(gc):
        return None
    j = next(i for i, x in enumerate(gc) if x != 0)
    if fc[j] == 0:
        return None
    s = fc[j] / gc[j]
    ok = all(fx == s * gx for fx, gx in zip(fc, gc))
    return s if ok else None


# -- irrational-or-zero dependence search ---------------------------------------


def _existing_monomials(table, polys: Sequence[RPoly], max_deg: int) -> list[Monomial]:
    syms: set[int] = set()
    for p in polys:
        for c in p.coeffs:
            syms.update(c.symbols_used())
    syms_sorted = sorted(syms)
    monos: set[Monomial] = {()}
    frontier: set[Monomial] = {()}
    for _ in range(max_deg):
        nxt: set[Monomial] = set()
        for m in frontier:
            for s in syms_sorted:
                mm = list(m) + [0] * max(0, s + 1 - len(m))
                mm[s] += 1
                t = tuple(mm)
                while t and t[-1] == 0:
                    t = t[:-1]
                nxt.add(t)
        monos |= nxt
        frontier = nxt
    return sorted(monos, key=_mono_key)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    n = max(len(a), len(b))
    t = tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))
    while t and t[-1] == 0:
        t = t[:-1]
    return t


def irrational_or_zero_dependence(
    polys: Sequence[RPoly], extra_symbols: int = 1
) -> Optional[DependenceWitness]:
    """Search for c_1..c_l, each irrational or zero and not all zero, with
    sum c_i p_i in Q[x]+R.

    The c_i are sought in the ring generated by the input's symbols plus
    `extra_symbols` fresh symbols (fresh degree at most 1). Zero patterns are
    enumerated smallest-support first; within a support the candidate monomial
    degree grows from 1, so returned witnesses are support- then
    degree-minimal. Returns None when no witness exists in the searched ring.
    """
    ell = len(polys)
    if ell == 0 or ell > 4:
        raise ValueError("search supports 1 <= l <= 4 polynomials")
    table = polys[0].table
    fresh = [table.fresh("t") for _ in range(extra_symbols)]
    fresh_monos = [SymbolicReal.symbol(table, f).monomials()[0] for f in fresh]

    deg_in_inputs = max(
        (sum(m) for p in polys for c in p.coeffs for m in c.monomials()), default=0
    )
    max_deg = max(1, deg_in_inputs)
    maxpow = max((p.degree for p in polys), default=-1)

    for size in range(1, ell + 1):
        for support in itertools.combinations(range(ell), size):
            for cap in range(1, max_deg + 1):
                base = _existing_monomials(table, polys, cap)
                cand: list[Monomial] = list(base)
                for fm in fresh_monos:
                    cand.extend(_mono_mul(b, fm) for b in base)
                witness = _solve_support(table, polys, support, cand, maxpow)
                if witness is not None:
                    return witness
    return None


def _solve_support(table, polys, support, cand, maxpow) -> Optional[DependenceWitness]:
    unknowns = [(i, b) for i in support for b in cand]
    # linear constraints: for each power j >= 1, every nonconstant monomial of
    # sum c_i a_ij must cancel (the constant term of the combination is free)
    rows: list[list[Fraction]] = []
    row_index: dict[tuple[int, Monomial], int] = {}
    for j in range(1, maxpow + 1):
        for col, (i, b) in enumerate(unknowns):
            prod = SymbolicReal(table, {b: Fraction(1)}) * polys[i].coefficient(j)
            for m, q in prod.terms:
                if m == ():
                    continue
                key = (j, m)
                if key not in row_index:
                    row_index[key] = len(rows)
                    rows.append([Fraction(0)] * len(unknowns))
                rows[row_index[key]][col] += q
    space = rational_kernel(rows) if rows else [
        tuple(Fraction(1 if t == s else 0) for t in range(len(unknowns))) for s in range(len(unknowns))
    ]
    if not space:
        return None
    # indices of unknowns contributing a nonconstant monomial to c_i
    proj = {i: [k for k, (ii, b) in enumerate(unknowns) if ii == i and b != ()] for i in support}
    for i in support:
        if all(all(v[k] == 0 for k in proj[i]) for v in space):
            return None  # every solution makes c_i rational: reject this support
    # deterministic generic point avoiding the finitely many bad subspaces
    for t in range(1, 200):
        x = [Fraction(0)] * len(unknowns)
        for s, v in enumerate(space):
            w = Fraction(t) ** s
            for k in range(len(unknowns)):
                x[k] += w * v[k]
        if all(any(x[k] != 0 for k in proj[i]) for i in support):
            break
    else:  # pragma: no cover - Vandermonde argument guarantees success
        return None
    coeffs = []
    for i in range(len(polys)):
        if i not in support:
            coeffs.append(SymbolicReal.zero(table))
            continue
        d = {}
        for k, (ii, b) in enumerate(unknowns):
            if ii == i and x[k] != 0:
                d[b] = d.get(b, Fraction(0)) + x[k]
        coeffs.append(SymbolicReal(table, d))
    target = RPoly.zero(table)
    for c, p in zip(coeffs, polys):
        target = target + p.scale(c)
    return DependenceWitness(tuple(polys), tuple(coeffs), target, WitnessKind.IRRATIONAL_OR_ZERO)


def searched_ring_description(polys: Sequence[RPoly], extra_symbols: int = 1) -> str:
    syms: set[int] = set()
    table = polys[0].table
    for p in polys:
        for c in p.coeffs:
            syms.update(c.symbols_used())
    names = [table.names[i] for i in sorted(syms)]
    return (
        f"coefficients searched in Q[{', '.join(names) if names else ''}] "
        f"extended by {extra_symbols} fresh symbol(s), fresh degree <= 1"
    )


# -- Type-B extraction ------------------------------------------------------------


def type_b_extract(p1: RPoly, p2: RPoly, witness: Optional[DependenceWitness] = None) -> Optional[TypeBCertificate]:
    """Constructive Type-B decomposition of a pair, when one exists.

    Requires p1(0) = p2(0) = 0 and both polynomials irrational. Returns None
    when the pair has no rational dependence, or when the determinant of the
    (irrational, rational) dependence pair fails to be a nonzero rational.
    The returned certificate is normalized so that u2 > 0.
    """
    for p in (p1, p2):
        if not p.constant_term().is_zero():
            raise ValueError("polynomials must vanish at 0")
        if p.is_rational():
            raise ValueError("polynomials must not lie in Q[x]")
    lat = rational_dependencies([p1, p2], constant_free=False)
    if lat.rank == 0:
        return None
    if lat.rank != 1:
        raise AssertionError("rank-2 relation lattice forces rational polynomials")
    d1, d2 = lat.basis[0]
    if d1 == 0 or d2 == 0:
        raise AssertionError("one-sided rational dependence forces a rational polynomial")
    qprime = p1.scale(Fraction(d1)) + p2.scale(Fraction(d2))
    if witness is None:
        witness = irrational_or_zero_dependence([p1, p2])
    if witness is None:
        return None
    c1, c2 = witness.coefficients
    q = witness.target
    r = c1.scale(Fraction(d2)) - c2.scale(Fraction(d1))
    rq = r.rational_value()
    if rq is None or rq == 0:
        return None
    f = q.scale(Fraction(-1) / rq)
    g = qprime.scale(Fraction(1) / (Fraction(d1) * rq))
    if g.is_zero():
        raise AssertionError("q' vanished; contradicts the rational-dependence structure")
    u1, u2 = -d2, d1
    c = c1 - Fraction(rq) / d2
    d = Fraction(rq) / d2
    dg_iv = is_integer_valued(g.scale(d))
    fmult = is_multiple_of(f, g)
    return TypeBCertificate(
        p1=p1,
        p2=p2,
        f=f,
        g=g,
        c=c,
        d=d,
        u1=u1,
        u2=u2,
        f_not_multiple_of_g=fmult is None,
        dg_integer_valued=dg_iv,
    )


# -- orbit membership ---------------------------------------------------------------


def orbit_in_subtorus(polys: Sequence[RPoly], y: Subtorus, w: int) -> bool:
    """True iff the step-w orbit of fractional parts lies in the subtorus:
    every basis relation applied to the reparametrized family is integer
    valued. Callers following the W!-scheme pass w = W!."""
    if w <= 0:
        raise ValueError("W must be positive")
    for p in polys:
        if not p.constant_term().is_zero():
            raise ValueError("polynomials must vanish at 0")
    expected = rational_dependencies(polys, constant_free=False)
    if y.relations != expected or y.ambient_dim != len(polys):
        raise ValueError("subtorus does not match the polynomial family")
    table = polys[0].table
    for k in y.relations.basis:
        combo = RPoly.zero(table)
        for ki, p in zip(k, polys):
            combo = combo + p.scale(Fraction(ki))
        if not is_integer_valued(reparametrize(combo, w, 0)):
            return False
    return True
