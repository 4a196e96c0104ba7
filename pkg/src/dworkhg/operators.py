"""Rational functions in t with poles only at 0 and 1, and operators in D = t d/dt.

Polynomials are tuples of Fractions, lowest degree first, with no trailing
zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .padic import as_fraction, format_rational, parse_rational
from .series import TruncSeries

Poly = tuple


# ---------------------------------------------------------------------------
# dense polynomial helpers


def _trim(c: Sequence[Fraction]) -> Poly:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly(coeffs: Sequence) -> Poly:
    return _trim(as_fraction(x) for x in coeffs)


def padd(a: Poly, b: Poly) -> Poly:
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def pscale(a: Poly, c) -> Poly:
    return _trim(c * x for x in a)


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pshift(a: Poly, k: int) -> Poly:
    return (Fraction(0),) * k + a if a else ()


def ptheta(a: Poly) -> Poly:
    """t * a'(t)."""
    return _trim(i * x for i, x in enumerate(a))


def ppow_one_minus_t(k: int) -> Poly:
    return tuple(Fraction((-1) ** i * comb(k, i)) for i in range(k + 1))


def peval(a: Poly, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _div_one_minus_t(a: Poly) -> Poly:
    """Exact quotient a / (1 - t), assuming a(1) = 0."""
    # a = (t - 1) q  =>  a / (1 - t) = -q; synthetic division by t - 1
    n = len(a) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc + a[i]
        q[i - 1] = acc
    return _trim(-x for x in q)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalFunction:
    """num(t) * t^t_exp * (1 - t)^omt_exp in canonical form.

    Canonical means num(0) != 0 and num(1) != 0, so the representation of
    each function is unique.  The zero function has num = () and both
    exponents 0.
    """

    num: Poly
    t_exp: int = 0
    omt_exp: int = 0

    def __post_init__(self):
        num, j, k = tuple(self.num), self.t_exp, self.omt_exp
        num = _trim(num)
        if not num:
            j = k = 0
        else:
            while num[0] == 0:
                num = num[1:]
                j += 1
            while peval(num, 1) == 0:
                num = _div_one_minus_t(num)
                k += 1
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "t_exp", j)
        object.__setattr__(self, "omt_exp", k)

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c) -> "RationalFunction":
        return cls(poly([c]))

    @classmethod
    def t(cls) -> "RationalFunction":
        return cls((Fraction(1),), 1, 0)

    @classmethod
    def one_minus_t(cls) -> "RationalFunction":
        return cls((Fraction(1),), 0, 1)

    @classmethod
    def from_poly(cls, coeffs: Sequence) -> "RationalFunction":
        return cls(poly(coeffs))

    # predicates -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return not self.is_zero()

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "RationalFunction":
        if not _is_scalar_like(other):
            return NotImplemented
        other = _rf(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        j = min(self.t_exp, other.t_exp)
        k = min(self.omt_exp, other.omt_exp)
        n1 = pmul(pshift(self.num, self.t_exp - j), ppow_one_minus_t(self.omt_exp - k))
        n2 = pmul(pshift(other.num, other.t_exp - j), ppow_one_minus_t(other.omt_exp - k))
        return RationalFunction(padd(n1, n2), j, k)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(pscale(self.num, -1), self.t_exp, self.omt_exp)

    def __sub__(self, other) -> "RationalFunction":
        if not _is_scalar_like(other):
            return NotImplemented
        return self + (-_rf(other))

    def __rsub__(self, other) -> "RationalFunction":
        if not _is_scalar_like(other):
            return NotImplemented
        return _rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        if not _is_scalar_like(other):
            return NotImplemented
        other = _rf(other)
        if self.is_zero() or other.is_zero():
            return RationalFunction(())
        return RationalFunction(
            pmul(self.num, other.num), self.t_exp + other.t_exp, self.omt_exp + other.omt_exp
        )

    __rmul__ = __mul__

    def theta(self) -> "RationalFunction":
        """D(r) = t r'(t)."""
        if self.is_zero():
            return self
        n, j, k = self.num, self.t_exp, self.omt_exp
        # D(n t^j (1-t)^k) = t^j (1-t)^(k-1) [ (D n + j n)(1-t) - k t n ]
        inner = padd(ptheta(n), pscale(n, j))
        body = padd(pmul(inner, ppow_one_minus_t(1)), pscale(pshift(n, 1), -k))
        return RationalFunction(body, j, k - 1)

    def series(self, T: int) -> TruncSeries:
        """Expansion at t = 0 modulo t^T over Q."""
        if self.t_exp < 0:
            raise ValueError("rational function has a pole at t = 0")
        out = [Fraction(0)] * T
        if self.is_zero():
            return TruncSeries.rational(out)
        k = self.omt_exp
        if k >= 0:
            fac = ppow_one_minus_t(k)
        else:
            fac = tuple(Fraction(comb(-k + i - 1, i)) for i in range(T))
        body = pmul(self.num, fac)
        for i, c in enumerate(body):
            if i + self.t_exp < T:
                out[i + self.t_exp] = c
        return TruncSeries.rational(out)

    def __call__(self, x):
        x = as_fraction(x)
        return peval(self.num, x) * x**self.t_exp * (1 - x) ** self.omt_exp

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        n = " + ".join(f"{format_rational(c)}*t^{i}" for i, c in enumerate(self.num) if c)
        return f"({n})*t^{self.t_exp}*(1-t)^{self.omt_exp}"

    def to_dict(self) -> dict:
        return {"num": [format_rational(c) for c in self.num], "t_exp": self.t_exp, "omt_exp": self.omt_exp}

    @classmethod
    def from_dict(cls, d: dict) -> "RationalFunction":
        return cls(tuple(parse_rational(c) for c in d["num"]), int(d["t_exp"]), int(d["omt_exp"]))


def _rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction.const(x)


def _is_scalar_like(x) -> bool:
    return isinstance(x, (RationalFunction, int, Fraction))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DifferentialOperator:
    """Sum of r_k * D^k with rational-function coefficients r_k.

    Coefficients are stored left of the D powers, so the operator acts on f
    as sum_k r_k * D^k(f).  The top coefficient is nonzero; the zero
    operator has no coefficients.
    """

    coeffs: tuple

    def __post_init__(self):
        c = [_rf(x) for x in self.coeffs]
        while c and c[-1].is_zero():
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def D(cls) -> "DifferentialOperator":
        return cls((RationalFunction(()), RationalFunction.const(1)))

    @classmethod
    def multiplication(cls, r) -> "DifferentialOperator":
        return cls((_rf(r),))

    @classmethod
    def from_constant_polynomial(cls, coeffs: Sequence) -> "DifferentialOperator":
        """The constant-coefficient operator sum_k coeffs[k] D^k."""
        return cls(tuple(RationalFunction.const(c) for c in coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> "DifferentialOperator":
        other = _op(other)
        n = max(len(self.coeffs), len(other.coeffs))
        zero = RationalFunction(())
        a = self.coeffs + (zero,) * (n - len(self.coeffs))
        b = other.coeffs + (zero,) * (n - len(other.coeffs))
        return DifferentialOperator(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> "DifferentialOperator":
        return DifferentialOperator(tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "DifferentialOperator":
        return self + (-_op(other))

    def __rsub__(self, other) -> "DifferentialOperator":
        return _op(other) - self

    def __mul__(self, other) -> "DifferentialOperator":
        return operator_mul(self, _op(other))

    def __rmul__(self, other) -> "DifferentialOperator":
        return operator_mul(_op(other), self)

    def __pow__(self, k: int) -> "DifferentialOperator":
        out = DifferentialOperator.multiplication(1)
        for _ in range(k):
            out = out * self
        return out

    def apply(self, f: TruncSeries) -> TruncSeries:
        return apply_operator(self, f)

    def __repr__(self) -> str:
        return " + ".join(f"[{r}]*D^{k}" for k, r in enumerate(self.coeffs) if r) or "0"

    def to_dict(self) -> dict:
        return {"coeffs": [r.to_dict() for r in self.coeffs]}

    @classmethod
    def from_dict(cls, d: dict) -> "DifferentialOperator":
        return cls(tuple(RationalFunction.from_dict(r) for r in d["coeffs"]))


def _op(x) -> DifferentialOperator:
    return x if isinstance(x, DifferentialOperator) else DifferentialOperator.multiplication(x)


def operator_mul(P: DifferentialOperator, Q: DifferentialOperator) -> DifferentialOperator:
    """Composition P * Q, using D^i * s = sum_l C(i, l) D^l(s) D^(i-l)."""
    if P.is_zero() or Q.is_zero():
        return DifferentialOperator(())
    out = [RationalFunction(())] * (P.order + Q.order + 1)
    for j, s in enumerate(Q.coeffs):
        if s.is_zero():
            continue
        derivs = [s]
        for _ in range(P.order):
            derivs.append(derivs[-1].theta())
        for i, r in enumerate(P.coeffs):
            if r.is_zero():
                continue
            for l in range(i + 1):
                if derivs[l].is_zero():
                    continue
                out[i - l + j] = out[i - l + j] + comb(i, l) * r * derivs[l]
    return DifferentialOperator(tuple(out))


def apply_operator(P: DifferentialOperator, f: TruncSeries) -> TruncSeries:
    """Sum of r_k * D^k(f) modulo t^T.

    Every coefficient r_k must be regular at t = 0 (no negative power of
    t); poles at t = 1 are expanded as geometric series.  In the p-adic
    domain the rational expansions are reduced modulo p^N first.
    """
    T = f.T
    out = None
    g = f
    for r in P.coeffs:
        if not r.is_zero():
            rs = r.series(T)
            if f.is_padic:
                rs = rs.to_padic(f.prime, f.max_prec)
            term = rs * g
            out = term if out is None else out + term
        g = g.theta()
    if out is None:
        return f.scale(0)
    return out
