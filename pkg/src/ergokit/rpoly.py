"""Polynomials p(n) with SymbolicReal coefficients.

Covers reparametrization along arithmetic progressions, the integer-valuedness
test in the binomial basis, the per-irrational-direction rational
decomposition, and the Q(k) / W0 integrality search over relation lattices.
Also hosts the shared textual parser ("n^3 + (c/4)*n^2", "(2*c + 1)/3").
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exactalg import IntLattice, full_lattice, rational_kernel, saturate
from .symreal import Monomial, ScalarKind, SymbolTable, SymbolicReal, _mono_key


class RPoly:
    """Polynomial in one variable n; coefficient i multiplies n^i."""

    __slots__ = ("table", "coeffs")

    def __init__(self, table: SymbolTable, coeffs: Sequence[SymbolicReal]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero():
            cs.pop()
        for c in cs:
            if c.table is not table:
                raise ValueError("coefficient over a different symbol table")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *a):
        raise AttributeError("RPoly is immutable")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(table: SymbolTable) -> "RPoly":
        return RPoly(table, ())

    @staticmethod
    def from_fractions(table: SymbolTable, coeffs: Sequence) -> "RPoly":
        return RPoly(table, [SymbolicReal.rational(table, q) for q in coeffs])

    # -- basics ---------------------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, j: int) -> SymbolicReal:
        if 0 <= j < len(self.coeffs):
            return self.coeffs[j]
        return SymbolicReal.zero(self.table)

    def constant_term(self) -> SymbolicReal:
        return self.coefficient(0)

    def is_rational(self) -> bool:
        """All coefficients rational, i.e. the polynomial lies in Q[x]."""
        return all(c.kind() is not ScalarKind.IRRATIONAL for c in self.coeffs)

    def is_rational_plus_real(self) -> bool:
        """Nonconstant coefficients rational, i.e. the polynomial lies in Q[x]+R."""
        return all(c.kind() is not ScalarKind.IRRATIONAL for c in self.coeffs[1:])

    def rational_coefficients(self) -> list[Fraction]:
        out = []
        for c in self.coeffs:
            q = c.rational_value()
            if q is None:
                raise ValueError("polynomial has an irrational coefficient")
            out.append(q)
        return out

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "RPoly":
        if isinstance(other, RPoly):
            if other.table is not self.table:
                raise ValueError("symbol-table mismatch")
            return other
        raise TypeError(type(other))

    def __add__(self, other) -> "RPoly":
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return RPoly(self.table, [self.coefficient(i) + o.coefficient(i) for i in range(n)])

    def __sub__(self, other) -> "RPoly":
        return self + (-self._coerce(other))

    def __neg__(self) -> "RPoly":
        return RPoly(self.table, [-c for c in self.coeffs])

    def __mul__(self, other) -> "RPoly":
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return RPoly.zero(self.table)
        out = [SymbolicReal.zero(self.table) for _ in range(len(self.coeffs) + len(o.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return RPoly(self.table, out)

    def scale(self, q) -> "RPoly":
        """Multiply every coefficient by a rational or a SymbolicReal."""
        if isinstance(q, SymbolicReal):
            return RPoly(self.table, [c * q for c in self.coeffs])
        return RPoly(self.table, [c.scale(q) for c in self.coeffs])

    def __call__(self, n) -> SymbolicReal:
        x = Fraction(n)
        acc = SymbolicReal.zero(self.table)
        for c in reversed(self.coeffs):
            acc = acc.scale(x) + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, RPoly):
            return NotImplemented
        return self.table is other.table and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- printing ----------------------------------------------------------------

    def to_string(self, var: str = "n") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coefficient(j)
            if c.is_zero():
                continue
            s = c.to_string()
            if j == 0:
                parts.append(s if " " not in s else f"({s})")
                continue
            pw = var if j == 1 else f"{var}^{j}"
            if s == "1":
                parts.append(pw)
            elif s == "-1":
                parts.append(f"-{pw}")
            elif " " in s or "/" in s or "*" in s:
                parts.append(f"({s})*{pw}")
            else:
                parts.append(f"{s}*{pw}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self) -> str:
        return f"<poly {self.to_string()}>"


# -- reparametrization -------------------------------------------------------------


def reparametrize(p: RPoly, w: int, r_off: int) -> RPoly:
    """Exact composition n |-> p(W*n + r_off)."""
    if w <= 0:
        raise ValueError("W must be a positive integer")
    table = p.table
    out = [SymbolicReal.zero(table) for _ in range(len(p.coeffs))]
    for k, a in enumerate(p.coeffs):
        # (W n + r)^k expanded by the binomial theorem
        for j in range(k + 1):
            q = Fraction(math.comb(k, j) * (w**j) * (r_off ** (k - j)))
            out[j] = out[j] + a.scale(q)
    return RPoly(table, out)


# -- integer-valuedness --------------------------------------------------------------


def is_integer_valued(q: RPoly) -> bool:
    """True iff q(Z) is a subset of Z; exact, via forward differences at 0
    (equivalently, integrality of the coefficients in the binomial basis)."""
    vals = [qq for qq in _values_0_to_deg(q)]
    while vals:
        if vals[0].denominator != 1:
            return False
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return True


def _values_0_to_deg(q: RPoly) -> list[Fraction]:
    coeffs = q.rational_coefficients()
    d = len(coeffs) - 1
    out = []
    for n in range(max(d, 0) + 1):
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * n + c
        out.append(acc)
    return out


# -- rational decomposition ------------------------------------------------------------


@dataclass(frozen=True)
class RationalDecomposition:
    """p = rational_part + sum over nonconstant monomials m of m * parts[m]."""

    table: SymbolTable
    rational_part: RPoly
    parts: tuple[tuple[Monomial, RPoly], ...]

    def recombine(self) -> RPoly:
        out = self.rational_part
        for mono, poly in self.parts:
            out = out + poly.scale(SymbolicReal(self.table, {mono: Fraction(1)}))
        return out


def decompose_rational(p: RPoly) -> RationalDecomposition:
    table = p.table
    monos = sorted({m for c in p.coeffs for m in c.monomials() if m != ()}, key=_mono_key)
    rat = RPoly(table, [SymbolicReal.rational(table, c.constant_term()) for c in p.coeffs])
    parts = []
    for m in monos:
        part = RPoly(table, [SymbolicReal.rational(table, c.coefficient(m)) for c in p.coeffs])
        parts.append((m, part))
    return RationalDecomposition(table, rat, tuple(parts))


# -- relation lattices (shared by structure.rational_dependencies and w0) ---------------


def relation_lattice(polys: Sequence[RPoly], constant_free: bool = False) -> IntLattice:
    """Saturated lattice of integer k with sum k_i p_i in Q[x] (constant_free=False)
    or in Q[x]+R (constant_free=True, the constant term unconstrained)."""
    ell = len(polys)
    if ell == 0:
        return IntLattice(0, ())
    table = polys[0].table
    rows = []
    maxdeg = max((p.degree for p in polys), default=-1)
    start = 1 if constant_free else 0
    for j in range(start, maxdeg + 1):
        monos = sorted({m for p in polys for m in p.coefficient(j).monomials() if m != ()}, key=_mono_key)
        for m in monos:
            rows.append([p.coefficient(j).coefficient(m) for p in polys])
    if not rows:
        return full_lattice(ell)
    ker = rational_kernel(rows)
    return saturate(ker, ell)


# -- Q(k) and the W0 bound ----------------------------------------------------------------


def q_of_k(k: Sequence[int], polys: Sequence[RPoly]) -> int:
    """Least Q >= 1 such that g(Q! n)/gcd(k) is integer valued, g = sum k_i p_i."""
    kv = [int(x) for x in k]
    if all(x == 0 for x in kv):
        raise ValueError("k must be nonzero")
    if len(kv) != len(polys):
        raise ValueError("length mismatch")
    table = polys[0].table
    g = RPoly.zero(table)
    for ki, p in zip(kv, polys):
        g = g + p.scale(Fraction(ki))
    if not g.is_rational():
        raise ValueError("k . p is not a rational polynomial")
    gdiv = math.gcd(*[abs(x) for x in kv])
    coeffs = [c / gdiv for c in g.rational_coefficients()]
    if not coeffs:
        return 1
    # cap: once gcd * all denominators divide Q!, integrality is automatic
    need = gdiv * math.lcm(*[c.denominator for c in coeffs])
    q, fact = 1, 1
    cap = None
    while True:
        if cap is None and fact % need == 0:
            cap = q
        scaled = RPoly.from_fractions(table, [c * Fraction(fact) ** j for j, c in enumerate(coeffs)])
        if is_integer_valued(scaled):
            return q
        if cap is not None and q >= cap:
            raise ValueError("no Q makes g(Q! n)/gcd(k) integer valued (nonintegral constant term)")
        q += 1
        fact *= q


def w0_upper_bound(p1: RPoly, p2: RPoly, p3: RPoly) -> int:
    """Max of q_of_k over the canonical saturated basis of the relation lattice.

    This is an upper bound for the min-over-bases quantity it tracks; any W at
    least this large keeps the W!-orbit inside the subtorus, which is all the
    downstream machinery needs.
    """
    polys = [p1, p2, p3]
    for p in polys:
        if not p.constant_term().is_zero():
            raise ValueError("polynomials must vanish at 0")
    lat = relation_lattice(polys, constant_free=False)
    if lat.rank == 0:
        return 1
    return max(q_of_k(k, polys) for k in lat.basis)


# -- parsing -----------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+\.\d+|\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*/^]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ValueError(f"parse error at position {pos}: {text[pos:pos+10]!r}")
        if m.group(1):
            out.append(("num", m.group(1)))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            out.append(("op", m.group(3)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, table: SymbolTable, auto_register: bool):
        self.toks = tokens
        self.i = 0
        self.table = table
        self.auto = auto_register

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ValueError(f"expected {op!r}, got {val!r}")

    def parse(self) -> RPoly:
        e = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input from token {self.i}")
        return e

    def expr(self) -> RPoly:
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            t = self.term()
            acc = t if val == "+" else -t
        else:
            acc = self.term()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> RPoly:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                f = self.factor()
                if val == "*":
                    acc = acc * f
                else:
                    if f.degree > 0:
                        raise ValueError("division by a polynomial in n")
                    q = f.constant_term().rational_value()
                    if q is None:
                        raise ValueError("division by an irrational scalar")
                    if q == 0:
                        raise ZeroDivisionError("division by zero")
                    acc = acc.scale(Fraction(1) / q)
            else:
                return acc

    def factor(self) -> RPoly:
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            f = self.factor()
            return f if val == "+" else -f
        base = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k2, v2 = self.take()
            if k2 != "num" or "." in v2:
                raise ValueError("exponent must be a nonnegative integer")
            e = int(v2)
            out = RPoly.from_fractions(self.table, [1])
            for _ in range(e):
                out = out * base
            return out
        return base

    def atom(self) -> RPoly:
        kind, val = self.take()
        if kind == "num":
            return RPoly.from_fractions(self.table, [Fraction(val)])
        if kind == "name":
            if val == "n":
                return RPoly.from_fractions(self.table, [0, 1])
            if val not in self.table:
                if not self.auto:
                    raise ValueError(f"unknown symbol {val!r}")
                self.table.add(val)
            return RPoly(self.table, [SymbolicReal.symbol(self.table, val)])
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        raise ValueError(f"unexpected token {val!r}")


def parse_poly(text: str, table: SymbolTable, auto_register: bool = True) -> RPoly:
    """Parse textual polynomial syntax, e.g. "n^3 + (c/4)*n^2"."""
    return _Parser(_tokenize(text), table, auto_register).parse()


def parse_scalar(text: str, table: SymbolTable, auto_register: bool = True) -> SymbolicReal:
    """Parse textual scalar syntax, e.g. "(2*c + 1)/3"."""
    p = parse_poly(text, table, auto_register)
    if p.degree > 0:
        raise ValueError("expected a scalar, got a polynomial in n")
    return p.constant_term()
