"""Exact model of the real scalars in play: the ring Q[c1,...,cm] over declared
symbolic irrationals, assumed algebraically independent over Q.

Under that independence assumption every membership test (in Q, in Z, in R\\Q)
is decided by coefficient inspection, which is what makes the classifier's
verdicts exact. A numeric embedding (mpmath, 128-bit mantissa by default)
bridges to the floating-point verification engine.
"""

from __future__ import annotations

import enum
import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from mpmath import mp

Monomial = tuple[int, ...]  # exponents by symbol index, trailing zeros stripped

_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


class ErgokitNumericWarning(UserWarning):
    pass


class ScalarKind(enum.Enum):
    ZERO = "zero"
    NONZERO_RATIONAL = "nonzero_rational"
    IRRATIONAL = "irrational"


class SymbolTable:
    """Append-only registry of symbol names shared by a family of scalars.

    Symbols may carry a declared reciprocal relation (name = 1/expr), which the
    numeric embedding honours; the symbolic ring itself never uses it.
    """

    def __init__(self, names: Iterable[str] = ()) -> None:
        self._names: list[str] = []
        self._index: dict[str, int] = {}
        self.reciprocal_relations: dict[str, "SymbolicReal"] = {}
        for n in names:
            self.add(n)

    def add(self, name: str) -> int:
        if not _IDENT.match(name):
            raise ValueError(f"invalid symbol name: {name!r}")
        if name == "n":
            raise ValueError("'n' is reserved for the polynomial variable")
        if name in self._index:
            raise ValueError(f"duplicate symbol: {name}")
        self._index[name] = len(self._names)
        self._names.append(name)
        return self._index[name]

    def ensure(self, name: str) -> int:
        return self._index[name] if name in self._index else self.add(name)

    def index(self, name: str) -> int:
        return self._index[name]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._names)

    def fresh(self, prefix: str = "t") -> str:
        k = 1
        while f"{prefix}{k}" in self._index:
            k += 1
        name = f"{prefix}{k}"
        self.add(name)
        return name

    def declare_reciprocal(self, name: str, of: "SymbolicReal") -> None:
        """Record that `name` denotes 1/of for every numeric assignment."""
        if name not in self._index:
            raise KeyError(name)
        self.reciprocal_relations[name] = of

    def __repr__(self) -> str:
        return f"SymbolTable({self._names!r})"


def _strip(mono: Sequence[int]) -> Monomial:
    m = tuple(mono)
    while m and m[-1] == 0:
        m = m[:-1]
    return m


def _mono_key(m: Monomial) -> tuple:
    return (sum(m), m)


class SymbolicReal:
    """Element of Q[c1,...,cm]: finite map monomial -> rational coefficient."""

    __slots__ = ("table", "terms")

    def __init__(self, table: SymbolTable, terms: dict[Monomial, Fraction] | Sequence):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        clean = {m: q for m, q in ((_strip(m), Fraction(q)) for m, q in items) if q != 0}
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "terms", tuple(sorted(clean.items(), key=lambda t: _mono_key(t[0]))))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("SymbolicReal is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def rational(table: SymbolTable, q) -> "SymbolicReal":
        return SymbolicReal(table, {(): Fraction(q)})

    @staticmethod
    def zero(table: SymbolTable) -> "SymbolicReal":
        return SymbolicReal(table, {})

    @staticmethod
    def symbol(table: SymbolTable, name: str) -> "SymbolicReal":
        i = table.index(name)
        mono = tuple(0 for _ in range(i)) + (1,)
        return SymbolicReal(table, {mono: Fraction(1)})

    # -- ring structure ------------------------------------------------------

    def _tdict(self) -> dict[Monomial, Fraction]:
        return dict(self.terms)

    def _coerce(self, other) -> "SymbolicReal":
        if isinstance(other, SymbolicReal):
            if other.table is not self.table:
                raise ValueError("symbol-table mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return SymbolicReal.rational(self.table, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other) -> "SymbolicReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self._tdict()
        for m, q in o.terms:
            d[m] = d.get(m, Fraction(0)) + q
        return SymbolicReal(self.table, d)

    __radd__ = __add__

    def __neg__(self) -> "SymbolicReal":
        return SymbolicReal(self.table, {m: -q for m, q in self.terms})

    def __sub__(self, other) -> "SymbolicReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other) -> "SymbolicReal":
        return (-self) + other

    def __mul__(self, other) -> "SymbolicReal":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d: dict[Monomial, Fraction] = {}
        for m1, q1 in self.terms:
            for m2, q2 in o.terms:
                n = max(len(m1), len(m2))
                mm = _strip(tuple((m1[i] if i < len(m1) else 0) + (m2[i] if i < len(m2) else 0) for i in range(n)))
                d[mm] = d.get(mm, Fraction(0)) + q1 * q2
        return SymbolicReal(self.table, d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SymbolicReal":
        if isinstance(other, SymbolicReal):
            q = other.rational_value()
            if q is None:
                raise ValueError("division by an irrational scalar is not a ring operation")
            other = q
        q = Fraction(other)
        if q == 0:
            raise ZeroDivisionError("division by zero")
        return self.scale(Fraction(1) / q)

    def scale(self, q) -> "SymbolicReal":
        q = Fraction(q)
        return SymbolicReal(self.table, {m: c * q for m, c in self.terms})

    def __pow__(self, k: int) -> "SymbolicReal":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = SymbolicReal.rational(self.table, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- classification ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def kind(self) -> ScalarKind:
        if not self.terms:
            return ScalarKind.ZERO
        if any(m != () for m, _ in self.terms):
            return ScalarKind.IRRATIONAL
        return ScalarKind.NONZERO_RATIONAL

    def rational_value(self) -> Optional[Fraction]:
        """The value as a Fraction when the scalar is rational, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and self.terms[0][0] == ():
            return self.terms[0][1]
        return None

    def is_integer(self) -> bool:
        q = self.rational_value()
        return q is not None and q.denominator == 1

    def constant_term(self) -> Fraction:
        for m, q in self.terms:
            if m == ():
                return q
        return Fraction(0)

    def nonconstant(self) -> "SymbolicReal":
        return SymbolicReal(self.table, {m: q for m, q in self.terms if m != ()})

    def coefficient(self, mono: Monomial) -> Fraction:
        mono = _strip(mono)
        for m, q in self.terms:
            if m == mono:
                return q
        return Fraction(0)

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(m for m, _ in self.terms)

    def symbols_used(self) -> tuple[int, ...]:
        used: set[int] = set()
        for m, _ in self.terms:
            used.update(i for i, e in enumerate(m) if e != 0)
        return tuple(sorted(used))

    # -- equality / ordering ---------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = SymbolicReal.rational(self.table, other)
        if not isinstance(other, SymbolicReal):
            return NotImplemented
        return self.table is other.table and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def sort_key(self) -> tuple:
        return tuple((_mono_key(m), q) for m, q in self.terms)

    # -- numerics --------------------------------------------------------------

    def evaluate(self, assignment: "NumericAssignment"):
        """High-precision numeric value at the assignment (mpmath mpf)."""
        if assignment.table is not self.table:
            raise ValueError("assignment is for a different symbol table")
        with mp.workprec(assignment.prec + 20):
            total = mp.mpf(0)
            for m, q in self.terms:
                v = mp.mpf(q.numerator) / q.denominator
                for i, e in enumerate(m):
                    if e:
                        v *= assignment.value(self.table.names[i]) ** e
                total += v
            return +total

    # -- printing ---------------------------------------------------------------

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m, q in self.terms:
            mono = "*".join(
                (self.table.names[i] if e == 1 else f"{self.table.names[i]}^{e}")
                for i, e in enumerate(m)
                if e != 0
            )
            if not mono:
                chunk = _frac_str(q)
            elif q == 1:
                chunk = mono
            elif q == -1:
                chunk = f"-{mono}"
            else:
                chunk = f"{_frac_str(q)}*{mono}"
            parts.append(chunk)
        out = parts[0]
        for chunk in parts[1:]:
            out += f" - {chunk[1:]}" if chunk.startswith("-") else f" + {chunk}"
        return out

    def __repr__(self) -> str:
        return f"<{self.to_string()}>"


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def classify_scalar(x: SymbolicReal) -> ScalarKind:
    return x.kind()


def express_over_rationals(x: SymbolicReal, gens: Sequence[SymbolicReal]) -> Optional[tuple[Fraction, ...]]:
    """Rational coordinates of x in span_Q(gens), or None if x is outside.

    Works coefficient-wise over the monomial coordinates, so it is exact under
    the declared algebraic independence.
    """
    from .exactalg import solve_in_qspan

    monos = sorted({m for g in gens for m in g.monomials()} | set(x.monomials()), key=_mono_key)
    gvecs = [[g.coefficient(m) for m in monos] for g in gens]
    xvec = [x.coefficient(m) for m in monos]
    return solve_in_qspan(gvecs, xvec)


# -- numeric assignments --------------------------------------------------------

NAMED_CONSTANTS = {
    "sqrt2": lambda: mp.sqrt(2),
    "sqrt3": lambda: mp.sqrt(3),
    "sqrt5": lambda: mp.sqrt(5),
    "golden": lambda: (1 + mp.sqrt(5)) / 2,
    "e": lambda: mp.e,
    "pi": lambda: mp.pi,
}


@dataclass
class NumericAssignment:
    """Per-symbol high-precision values (>= 80-bit mantissa; default 128).

    Symbols with a declared reciprocal relation need no direct value; they are
    derived as 1/value(expr) on demand.
    """

    table: SymbolTable
    values: dict = field(default_factory=dict)
    prec: int = 128

    @staticmethod
    def build(table: SymbolTable, spec: dict, prec: int = 128) -> "NumericAssignment":
        vals = {}
        with mp.workprec(prec + 20):
            for name, raw in spec.items():
                if name not in table:
                    raise KeyError(f"unknown symbol {name!r}")
                if isinstance(raw, str) and raw in NAMED_CONSTANTS:
                    vals[name] = +NAMED_CONSTANTS[raw]()
                elif isinstance(raw, str):
                    vals[name] = mp.mpf(raw)
                elif isinstance(raw, Fraction):
                    vals[name] = mp.mpf(raw.numerator) / raw.denominator
                else:
                    vals[name] = mp.mpf(raw)
        return NumericAssignment(table, vals, prec)

    def value(self, name: str):
        if name in self.values:
            return self.values[name]
        rel = self.table.reciprocal_relations.get(name)
        if rel is not None:
            with mp.workprec(self.prec + 20):
                return 1 / rel.evaluate(self)
        raise KeyError(f"no numeric value for symbol {name!r}")

    def covers(self, x: SymbolicReal) -> bool:
        try:
            for i in x.symbols_used():
                self.value(self.table.names[i])
        except KeyError:
            return False
        return True


def warn_if_numerically_rational(x: SymbolicReal, assignment: NumericAssignment, tol: float = 1e-12, max_den: int = 10**6) -> bool:
    """Warn when an Irrational-classified scalar is numerically within tol of a
    small-denominator rational: the assignment likely violates the declared
    algebraic independence and would silently corrupt verification fixtures."""
    if x.kind() is not ScalarKind.IRRATIONAL:
        return False
    v = float(x.evaluate(assignment))
    approx = Fraction(v).limit_denominator(max_den)
    if abs(v - float(approx)) < tol:
        warnings.warn(
            f"scalar {x.to_string()} classifies Irrational but evaluates within {tol} of {approx}; "
            "the numeric assignment may violate the declared independence",
            ErgokitNumericWarning,
            stacklevel=2,
        )
        return True
    return False
