"""Exact closed forms: geometric-sum kernels, subtorus integrals over T^2 and
T^3 with their nonvanishing predicates, the limit formulas for the two special
pair shapes, and the explicit example values.

Values are exact formal products

    (a + bi) * (1/(2*pi*i))^k * e(phase) * prod (e(th)-1) / prod (e(th')-1) / prod s

with rational a, b, SymbolicReal phases th and real nonzero scalar divisors s.
Zero/nonzero decisions are made only from exact membership conditions, never
from numeric magnitude; the numeric embedding exists solely so the Weyl engine
can audit every value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from mpmath import mp

from .exactalg import bezout_pair, mod_inverse_pair
from .structure import TypeBCertificate
from .rpoly import RPoly, is_integer_valued, reparametrize
from .symreal import NumericAssignment, ScalarKind, SymbolTable, SymbolicReal, express_over_rationals


@dataclass(frozen=True)
class Undetermined:
    """First-class 'the proved formulas do not cover this configuration'."""

    reason: str


# -- membership conditions -----------------------------------------------------


@dataclass(frozen=True)
class MembershipCondition:
    """Decidable condition of one of the shapes
    'x not in (Z/s)\\Z', 'x not in Z*', or 'x not in (Z/t)*'."""

    kind: str  # "z_over_s_minus_z" | "z_star" | "z_over_t_star"
    scalar: SymbolicReal
    s: Optional[int] = None
    t: Optional[SymbolicReal] = None

    def holds(self) -> bool:
        x = self.scalar
        if self.kind == "z_star":
            q = x.rational_value()
            return not (q is not None and q != 0 and q.denominator == 1)
        if self.kind == "z_over_s_minus_z":
            q = x.rational_value()
            if q is None:
                return True  # irrational: not in Z/s at all
            in_z_over_s = (q * self.s).denominator == 1
            in_z = q.denominator == 1
            return not (in_z_over_s and not in_z)
        if self.kind == "z_over_t_star":
            if x.is_zero():
                return True
            xt = x * self.t
            return not xt.is_integer()
        raise ValueError(self.kind)

    def describe(self) -> str:
        if self.kind == "z_star":
            return f"{self.scalar.to_string()} not in Z*"
        if self.kind == "z_over_s_minus_z":
            return f"{self.scalar.to_string()} not in (Z/{self.s})\\Z"
        return f"{self.scalar.to_string()} not in (Z/({self.t.to_string()}))*"


@dataclass(frozen=True)
class IntegralConditions:
    conditions: tuple[MembershipCondition, ...]

    def all_hold(self) -> bool:
        return all(c.holds() for c in self.conditions)

    def to_json(self) -> list[dict]:
        return [{"condition": c.describe(), "holds": c.holds()} for c in self.conditions]


# -- exact complex values --------------------------------------------------------

_GAUSS_QUARTERS = {
    Fraction(1, 4): (Fraction(-1), Fraction(1)),   # e(1/4)-1 = -1+i
    Fraction(1, 2): (Fraction(-2), Fraction(0)),   # e(1/2)-1 = -2
    Fraction(3, 4): (Fraction(-1), Fraction(-1)),  # e(3/4)-1 = -1-i
}


def _g_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _g_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _phase_canonical(theta: SymbolicReal) -> SymbolicReal:
    shift = math.floor(theta.constant_term())
    return theta - Fraction(shift)


class ComplexExact:
    """Exact complex value in formal product form; see module docstring."""

    __slots__ = ("table", "coeff", "two_pi_i_pow", "phase", "num_diffs", "den_diffs", "scalar_dens", "exact_zero")

    def __init__(
        self,
        table: SymbolTable,
        coeff: tuple[Fraction, Fraction],
        two_pi_i_pow: int,
        phase: SymbolicReal,
        num_diffs: Sequence[SymbolicReal],
        den_diffs: Sequence[SymbolicReal],
        scalar_dens: Sequence[SymbolicReal],
        exact_zero: bool,
    ):
        set_ = object.__setattr__
        if exact_zero or coeff == (Fraction(0), Fraction(0)):
            set_(self, "table", table)
            set_(self, "coeff", (Fraction(0), Fraction(0)))
            set_(self, "two_pi_i_pow", 0)
            set_(self, "phase", SymbolicReal.zero(table))
            set_(self, "num_diffs", ())
            set_(self, "den_diffs", ())
            set_(self, "scalar_dens", ())
            set_(self, "exact_zero", True)
            return
        co = coeff
        nd: list[SymbolicReal] = []
        for th in num_diffs:
            th = _phase_canonical(th)
            q = th.rational_value()
            if q is not None and q in _GAUSS_QUARTERS:
                co = _g_mul(co, _GAUSS_QUARTERS[q])
            elif q is not None and q == 0:
                # e(integer) - 1 = 0
                self.__init__(table, (Fraction(0), Fraction(0)), 0, SymbolicReal.zero(table), (), (), (), True)
                return
            else:
                nd.append(th)
        dd: list[SymbolicReal] = []
        for th in den_diffs:
            th = _phase_canonical(th)
            q = th.rational_value()
            if q is not None and q == 0:
                raise ZeroDivisionError("denominator factor e(theta)-1 with integer theta")
            if q is not None and q in _GAUSS_QUARTERS:
                g = _GAUSS_QUARTERS[q]
                n2 = g[0] * g[0] + g[1] * g[1]
                co = _g_mul(co, (g[0] / n2, -g[1] / n2))
            else:
                dd.append(th)
        sd = []
        for s in scalar_dens:
            if s.is_zero():
                raise ZeroDivisionError("zero scalar denominator")
            q = s.rational_value()
            if q is not None:
                co = (co[0] / q, co[1] / q)
            else:
                sd.append(s)
        set_(self, "table", table)
        set_(self, "coeff", co)
        set_(self, "two_pi_i_pow", two_pi_i_pow)
        set_(self, "phase", _phase_canonical(phase))
        set_(self, "num_diffs", tuple(sorted(nd, key=lambda x: x.sort_key())))
        set_(self, "den_diffs", tuple(sorted(dd, key=lambda x: x.sort_key())))
        set_(self, "scalar_dens", tuple(sorted(sd, key=lambda x: x.sort_key())))
        set_(self, "exact_zero", co == (Fraction(0), Fraction(0)))

    def __setattr__(self, *a):
        raise AttributeError("ComplexExact is immutable")

    # -- constructors ------------------------------------------------------------

    @staticmethod
    def one(table: SymbolTable) -> "ComplexExact":
        return ComplexExact(table, (Fraction(1), Fraction(0)), 0, SymbolicReal.zero(table), (), (), (), False)

    @staticmethod
    def zero(table: SymbolTable) -> "ComplexExact":
        return ComplexExact(table, (Fraction(0), Fraction(0)), 0, SymbolicReal.zero(table), (), (), (), True)

    @staticmethod
    def from_phase(table: SymbolTable, theta: SymbolicReal) -> "ComplexExact":
        return ComplexExact(table, (Fraction(1), Fraction(0)), 0, theta, (), (), (), False)

    # -- algebra -------------------------------------------------------------------

    def __mul__(self, other: "ComplexExact") -> "ComplexExact":
        if self.exact_zero or other.exact_zero:
            return ComplexExact.zero(self.table)
        return ComplexExact(
            self.table,
            _g_mul(self.coeff, other.coeff),
            self.two_pi_i_pow + other.two_pi_i_pow,
            self.phase + other.phase,
            self.num_diffs + other.num_diffs,
            self.den_diffs + other.den_diffs,
            self.scalar_dens + other.scalar_dens,
            False,
        )

    def times_gauss(self, re, im=0) -> "ComplexExact":
        return self * ComplexExact(self.table, (Fraction(re), Fraction(im)), 0, SymbolicReal.zero(self.table), (), (), (), False)

    def times_phase(self, theta: SymbolicReal) -> "ComplexExact":
        return self * ComplexExact.from_phase(self.table, theta)

    # -- canonical expansion ---------------------------------------------------------

    def expanded_terms(self) -> tuple[tuple[tuple, tuple[Fraction, Fraction]], ...]:
        """Numerator expanded as sum coeff * e(theta); keys are canonical
        phase term tuples. Denominator factors are not expanded."""
        if self.exact_zero:
            return ()
        terms: dict = { _phase_canonical(self.phase).terms: self.coeff }
        for th in self.num_diffs:
            nxt: dict = {}
            for key, co in terms.items():
                base = SymbolicReal(self.table, dict(key))
                k1 = _phase_canonical(base + th).terms
                nxt[k1] = _g_add(nxt.get(k1, (Fraction(0), Fraction(0))), co)
                k0 = _phase_canonical(base).terms
                nxt[k0] = _g_add(nxt.get(k0, (Fraction(0), Fraction(0))), (-co[0], -co[1]))
            terms = {k: v for k, v in nxt.items() if v != (Fraction(0), Fraction(0))}
        return tuple(sorted(terms.items()))

    def _canonical_key(self):
        if self.exact_zero:
            return ("zero",)
        return (
            self.two_pi_i_pow,
            self.expanded_terms(),
            tuple(d.terms for d in self.den_diffs),
            tuple(s.terms for s in self.scalar_dens),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexExact):
            return NotImplemented
        return self._canonical_key() == other._canonical_key()

    def __hash__(self) -> int:
        return hash(str(self._canonical_key()))

    # -- numerics -----------------------------------------------------------------------

    def numeric(self, assignment: NumericAssignment) -> complex:
        if self.exact_zero:
            return 0j
        with mp.workprec(assignment.prec + 20):
            val = mp.mpc(_mpf_of(self.coeff[0]), _mpf_of(self.coeff[1]))
            if self.two_pi_i_pow:
                val *= (2 * mp.pi * mp.mpc(0, 1)) ** self.two_pi_i_pow
            val *= mp.expjpi(2 * self.phase.evaluate(assignment))
            for th in self.num_diffs:
                val *= mp.expjpi(2 * th.evaluate(assignment)) - 1
            for th in self.den_diffs:
                val /= mp.expjpi(2 * th.evaluate(assignment)) - 1
            for s in self.scalar_dens:
                val /= s.evaluate(assignment)
            return complex(val)

    # -- reporting ------------------------------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"exact_zero": self.exact_zero, "terms": []}
        if self.exact_zero:
            return out
        over = self.two_pi_i_pow != 0
        for key, (re, im) in self.expanded_terms():
            co = (re, im)
            if over:  # fold 1/(2 pi i)^k = (-i)^k / (2 pi)^k, k = -pow
                for _ in range(-self.two_pi_i_pow):
                    co = _g_mul(co, (Fraction(0), Fraction(-1)))
            out["terms"].append(
                {
                    "coeff_re": str(co[0]),
                    "coeff_im": str(co[1]),
                    "over_two_pi": over,
                    "phase": SymbolicReal(self.table, dict(key)).to_string(),
                }
            )
        if self.den_diffs:
            out["denominator_factors"] = [f"e({d.to_string()}) - 1" for d in self.den_diffs]
        if self.scalar_dens:
            out["scalar_denominators"] = [s.to_string() for s in self.scalar_dens]
        return out

    def describe(self) -> str:
        if self.exact_zero:
            return "0"
        bits = []
        co = self.coeff
        bits.append(f"({co[0]}{'+' if co[1] >= 0 else ''}{co[1]}i)")
        if self.two_pi_i_pow:
            bits.append(f"(2*pi*i)^{self.two_pi_i_pow}")
        if not self.phase.is_zero():
            bits.append(f"e({self.phase.to_string()})")
        for th in self.num_diffs:
            bits.append(f"(e({th.to_string()})-1)")
        for th in self.den_diffs:
            bits.append(f"/(e({th.to_string()})-1)")
        for s in self.scalar_dens:
            bits.append(f"/({s.to_string()})")
        return " * ".join(bits)

    def __repr__(self) -> str:
        return f"<ComplexExact {self.describe()}>"


def _mpf_of(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


Scalar = Union[SymbolicReal, Fraction, int]


def _lift(table: SymbolTable, x: Scalar) -> SymbolicReal:
    if isinstance(x, SymbolicReal):
        return x
    return SymbolicReal.rational(table, x)


# -- star-ratio kernels -------------------------------------------------------------------


def star_ratio_sum(alpha: Scalar, n: int, table: Optional[SymbolTable] = None) -> ComplexExact:
    """(1/N) sum_{k=0}^{N-1} e(alpha k) = ((e(alpha N)-1) / (N (e(alpha)-1)))_*.

    Exactly zero iff alpha in (Z/N)\\Z; exactly 1 for integer alpha."""
    if n < 1:
        raise ValueError("N must be positive")
    if table is None:
        if not isinstance(alpha, SymbolicReal):
            raise ValueError("need a symbol table for non-symbolic input")
        table = alpha.table
    a = _lift(table, alpha)
    if a.is_integer():
        return ComplexExact.one(table)
    q = a.rational_value()
    if q is not None and (q * n).denominator == 1:
        return ComplexExact.zero(table)
    return ComplexExact(
        table, (Fraction(1, n), Fraction(0)), 0, SymbolicReal.zero(table),
        (a.scale(n),), (a,), (), False,
    )


def star_ratio_integral(alpha: Scalar, t: Scalar, table: Optional[SymbolTable] = None) -> ComplexExact:
    """(1/t) int_0^t e(alpha x) dx = ((e(alpha t)-1) / (2 pi i alpha t))_*.

    Exactly zero iff alpha in (Z/t)*; exactly 1 for alpha = 0."""
    if table is None:
        if not isinstance(alpha, SymbolicReal):
            raise ValueError("need a symbol table for non-symbolic input")
        table = alpha.table
    a = _lift(table, alpha)
    tt = _lift(table, t)
    if tt.is_zero():
        raise ValueError("t must be nonzero")
    if a.is_zero():
        return ComplexExact.one(table)
    x = a * tt
    if x.is_integer():
        return ComplexExact.zero(table)
    return ComplexExact(
        table, (Fraction(1), Fraction(0)), -1, SymbolicReal.zero(table),
        (x,), (), (x,), False,
    )


# internal star factor ((e(x)-1) / (k (e(x/k)-1)))_* for integer k >= 1
def _star_factor(table: SymbolTable, x: SymbolicReal, k: int) -> ComplexExact:
    xk = x / k
    if xk.is_integer():
        return ComplexExact.one(table)  # numerator vanishes with the denominator
    if x.is_integer():
        return ComplexExact.zero(table)
    return ComplexExact(table, (Fraction(1, k), Fraction(0)), 0, SymbolicReal.zero(table), (x,), (xk,), (), False)


# internal integral factor ((e(y)-1)/(2 pi i y))_*
def _integral_factor(table: SymbolTable, y: SymbolicReal) -> ComplexExact:
    if y.is_zero():
        return ComplexExact.one(table)
    if y.is_integer():
        return ComplexExact.zero(table)
    return ComplexExact(table, (Fraction(1), Fraction(0)), -1, SymbolicReal.zero(table), (y,), (), (y,), False)


# -- subtorus integrals ------------------------------------------------------------------


def subtorus_integral_2d(
    alpha: Scalar, beta: Scalar, a: int, b: int, table: Optional[SymbolTable] = None
) -> tuple[ComplexExact, IntegralConditions]:
    """Integral of e(alpha x + beta y) over the subtorus {a x + b y = 0} of T^2.

    Returns the exact value (for any sign pattern of a, b; negative signs are
    removed by exact phase-flip identities on the fractional parts) and the
    three nonvanishing conditions. The value is exactly zero iff a condition
    fails."""
    if a == 0 or b == 0:
        raise ValueError("a and b must be nonzero")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a},{b}) != 1")
    if table is None:
        for cand in (alpha, beta):
            if isinstance(cand, SymbolicReal):
                table = cand.table
                break
        else:
            raise ValueError("need a symbol table for non-symbolic input")
    al = _lift(table, alpha)
    be = _lift(table, beta)
    conds = IntegralConditions(
        (
            MembershipCondition("z_over_s_minus_z", al / a, s=abs(a)),
            MembershipCondition("z_over_s_minus_z", be / b, s=abs(b)),
            MembershipCondition("z_star", al / a - be / b),
        )
    )
    value = _v2(table, a, b, al, be)
    assert value.exact_zero == (not conds.all_hold()), "value/predicate mismatch"
    return value, conds


def _v2(table, a: int, b: int, al: SymbolicReal, be: SymbolicReal) -> ComplexExact:
    # V2(a,b;al,be) = int_0^1 e(al {b t} + be {-a t}) dt
    if b < 0:  # {bt} = 1 - {|b|t} a.e.
        return ComplexExact.from_phase(table, al) * _v2(table, a, -b, -al, be)
    if a < 0:  # {-at} = 1 - {-|a|t} a.e.
        return ComplexExact.from_phase(table, be) * _v2(table, -a, b, al, -be)
    core = _star_factor(table, al, a) * _star_factor(table, -be, b)
    tail = _integral_factor(table, al / a - be / b)
    return ComplexExact.from_phase(table, be) * core * tail


def subtorus_integral_3d(
    alpha: Scalar,
    beta: Scalar,
    w: int,
    a: int,
    b: int,
    r_rel: int,
    table: Optional[SymbolTable] = None,
) -> tuple[ComplexExact, IntegralConditions]:
    """Integral of e(alpha x + beta y + w z) over {a x + b y = r x + b z = 0} in T^3.

    Same contract as the 2d form: exact value for any signs, conditions
    computed on the sign-canonical (all-positive) parameters, value exactly
    zero iff a condition fails."""
    if a == 0 or b == 0 or r_rel == 0:
        raise ValueError("a, b, r must be nonzero")
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a},{b}) != 1")
    if not isinstance(w, int):
        raise ValueError("w must be an integer")
    if table is None:
        for cand in (alpha, beta):
            if isinstance(cand, SymbolicReal):
                table = cand.table
                break
        else:
            raise ValueError("need a symbol table for non-symbolic input")
    al = _lift(table, alpha)
    be = _lift(table, beta)
    value, conds = _v3(table, a, b, r_rel, w, al, be)
    assert value.exact_zero == (not conds.all_hold()), "value/predicate mismatch"
    return value, conds


def _v3(table, a: int, b: int, r: int, w: int, al: SymbolicReal, be: SymbolicReal):
    # V3 = int_0^1 e(al {-b t} + be {a t} + w {r t}) dt
    if b < 0:  # {-bt} = 1 - {-|b|t} a.e.
        v, c = _v3(table, a, -b, r, w, -al, be)
        return ComplexExact.from_phase(table, al) * v, c
    if a < 0:  # {at} = 1 - {|a|t} a.e.
        v, c = _v3(table, -a, b, r, w, al, -be)
        return ComplexExact.from_phase(table, be) * v, c
    if r < 0:  # {rt} = 1 - {|r|t} a.e. and w integral: e(w) = 1
        return _v3(table, a, b, -r, -w, al, be)
    inv = mod_inverse_pair(a, b)
    big_l = -al / a + be / b + Fraction(r * w, a * b)
    arg1 = -al + Fraction(r * w * inv.b_star)
    arg2 = be + Fraction(r * w * inv.a_star)
    conds = IntegralConditions(
        (
            MembershipCondition("z_star", big_l),
            MembershipCondition("z_over_s_minus_z", arg1 / a, s=a),
            MembershipCondition("z_over_s_minus_z", arg2 / b, s=b),
        )
    )
    value = (
        _integral_factor(table, big_l)
        * ComplexExact.from_phase(table, -al)
        * _star_factor(table, arg1, a)
        * _star_factor(table, arg2, b)
    )
    return value, conds


# -- limit formulas for the two special pair shapes ------------------------------------------


def _kind_irrational_or_integer(t: SymbolicReal) -> None:
    if t.kind() is ScalarKind.IRRATIONAL or t.is_integer():
        return
    raise ValueError(f"{t.to_string()} must be irrational or an integer")


def limit_case1(cert: TypeBCertificate, t1: SymbolicReal, t2: SymbolicReal) -> Union[ComplexExact, Undetermined]:
    """Limit of (1/N) sum e(t1 [p1(n)] + t2 [p2(n)]) for a Type-B pair with f
    not a multiple of g, along progressions whose orbit stays in the relation
    subtorus (the caller's responsibility).

    Trichotomy on t1 u1 + t2 u2: irrational -> 0; integer with t2 outside
    Q + Qc -> 0; integer with t2 = a c + b -> value of the 3d subtorus
    integral when a u2 d is an integer, else Undetermined."""
    table = cert.c.table
    _kind_irrational_or_integer(t1)
    _kind_irrational_or_integer(t2)
    if t1.is_integer() and t2.is_integer():
        raise ValueError("t1, t2 must not both be integers")
    if not cert.f_not_multiple_of_g:
        raise ValueError("limit_case1 needs f not a multiple of g; use limit_case2")
    u1, u2, d = cert.u1, cert.u2, cert.d
    s0 = t1.scale(u1) + t2.scale(u2)
    if s0.kind() is ScalarKind.IRRATIONAL:
        return ComplexExact.zero(table)
    if not s0.is_integer():
        return Undetermined("t1 u1 + t2 u2 is rational but not an integer; outside the spectrum trichotomy")
    k = int(s0.rational_value())
    m1, m2 = bezout_pair(u1, u2)
    t1s = t1 - Fraction(k * m1)
    t2s = t2 - Fraction(k * m2)
    one = SymbolicReal.rational(table, 1)
    coords = express_over_rationals(t2s, [one, cert.c])
    if coords is None:
        return ComplexExact.zero(table)  # t2, c, 1 rationally independent
    _, a_ = coords
    aud = a_ * u2 * d
    if aud.denominator != 1:
        return Undetermined("a u2 d is not an integer; the paper only provides an estimate in this configuration")
    if aud == 0:
        raise AssertionError("a = 0 contradicts the not-both-integers precondition")
    value, _ = subtorus_integral_3d(-t1s, -t2s, w=1, a=u2, b=-u1, r_rel=int(aud), table=table)
    return value


def limit_case2(
    g: RPoly,
    c: SymbolicReal,
    d: Fraction,
    u1: int,
    u2: int,
    t1: SymbolicReal,
    t2: SymbolicReal,
    s: Optional[Fraction] = None,
    t: Optional[SymbolicReal] = None,
) -> Union[ComplexExact, Undetermined]:
    """Limit of (1/N) sum e(t1 [p1(n)] + t2 [p2(n)]) for p1 = u1 c g,
    p2 = u2 (c+d) g, along orbit-respecting progressions.

    Case split on the combination t1 u1 c + t2 u2 (c+d): rationally
    independent from c, 1 -> 0; equal to s c + t with integer s != 0 -> the 3d
    subtorus integral; s outside Z (or s = 0, which degenerates the proved
    integral shape) -> Undetermined."""
    table = c.table
    if g.is_zero() or not g.is_rational() or not g.constant_term().is_zero():
        raise ValueError("g must be a nonzero rational polynomial vanishing at 0")
    if c.kind() is not ScalarKind.IRRATIONAL:
        raise ValueError("c must be irrational")
    d = Fraction(d)
    if d == 0 or u1 == 0 or u2 == 0 or math.gcd(u1, u2) != 1:
        raise ValueError("need d != 0 and coprime nonzero u1, u2")
    if t1.is_integer() and t2.is_integer():
        raise ValueError("t1, t2 must not both be integers")
    combo = t1.scale(u1) * c + t2.scale(u2) * (c + d)
    one = SymbolicReal.rational(table, 1)
    coords = express_over_rationals(combo, [one, c])
    if s is not None or t is not None:
        # caller-supplied relation must match exactly
        want = c.scale(Fraction(s)) + (_lift(table, t) if t is not None else SymbolicReal.zero(table))
        if combo != want:
            raise ValueError("supplied (s, t) do not satisfy t1 u1 c + t2 u2 (c+d) = s c + t")
    if coords is None:
        return ComplexExact.zero(table)
    t_, s_ = coords
    if s_.denominator != 1:
        return Undetermined("s is not an integer; the paper only provides an estimate when s is integral")
    if s_ == 0:
        return Undetermined("s = 0 degenerates the three-dimensional integral shape the formula relies on")
    value, _ = subtorus_integral_3d(-t1, -t2, w=1, a=-u2, b=u1, r_rel=-int(s_), table=table)
    return value


# -- the explicit progression value of the unit-coefficient counterexample -------------------


def _frac(q: Fraction) -> Fraction:
    return q - math.floor(q)


def find_case22_progression(f: RPoly, dg: RPoly, r_off: int) -> int:
    """Least W >= 1 with f(Wn+r)-f(r) and dg(Wn+r)-dg(r) integer valued."""
    table = f.table
    dens = [c.denominator for c in f.rational_coefficients()] + [c.denominator for c in dg.rational_coefficients()]
    cap = math.lcm(*dens) if dens else 1
    w = 1
    while True:
        fs = reparametrize(f, w, r_off) - RPoly.from_fractions(table, [f(r_off).rational_value()])
        gs = reparametrize(dg, w, r_off) - RPoly.from_fractions(table, [dg(r_off).rational_value()])
        if is_integer_valued(fs) and is_integer_valued(gs):
            return w
        if w >= cap:
            raise AssertionError("denominator-clearing W failed; unreachable for rational inputs")
        w += 1


def case22_value(
    f: RPoly,
    g: RPoly,
    c_over_d: SymbolicReal,
    u2_sign: int,
    r_off: int,
    d: Fraction = Fraction(1),
) -> ComplexExact:
    """Exact nonzero progression value for the unit-coefficient pair with dg
    not integer valued at r_off:

        (e(c/d)-1)/(2 pi i) * e(-{f(r)} - (c/d) {dg(r)}) * (1 - e(-{dg(r)})),

    multiplied by -e(c/d) when u2 = -1."""
    table = c_over_d.table
    if u2_sign not in (1, -1):
        raise ValueError("u2_sign must be +1 or -1")
    if c_over_d.kind() is not ScalarKind.IRRATIONAL:
        raise ValueError("c/d must be irrational")
    if not (f.is_rational() and g.is_rational()):
        raise ValueError("f and g must be rational polynomials")
    dg = g.scale(Fraction(d))
    val = dg(r_off).rational_value()
    if val.denominator == 1:
        raise ValueError(f"dg({r_off}) is an integer; the construction does not apply")
    fr = _frac(f(r_off).rational_value())
    dgr = _frac(val)
    chi = c_over_d
    phase = -chi.scale(dgr) - fr
    out = ComplexExact(
        table,
        (Fraction(-1), Fraction(0)),  # (1 - e(-dgr)) = -(e(-dgr) - 1)
        -1,
        phase,
        (chi, SymbolicReal.rational(table, -dgr)),
        (),
        (),
        False,
    )
    if u2_sign == -1:
        out = out.times_gauss(-1).times_phase(chi)
    return out


# -- explicit example values -------------------------------------------------------------------


def appendix_values(which: str, c: SymbolicReal) -> ComplexExact:
    """The two explicit nonzero example values:
    'apd'  -> (1+i)/(2 pi i) (e(c)-1)
    'apd2' -> (1+i)/(2 pi i) e(-c/4) (e(c)-1)"""
    if c.kind() is not ScalarKind.IRRATIONAL:
        raise ValueError("c must be irrational")
    table = c.table
    base = ComplexExact(table, (Fraction(1), Fraction(1)), -1, SymbolicReal.zero(table), (c,), (), (), False)
    if which == "apd":
        return base
    if which == "apd2":
        return base.times_phase(c.scale(Fraction(-1, 4)))
    raise ValueError("which must be 'apd' or 'apd2'")
