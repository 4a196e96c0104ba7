"""Precision-tracked arithmetic in Z_p and the scalar special functions.

Elements of Z_p are stored as a residue modulo p^N together with the
absolute precision N.  Rationals are plain :class:`fractions.Fraction`
objects; the helpers here decide p-integrality and reduce them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import NoStabilization, NonIntegral, NotOrdinary, UnitRequired

RationalLike = int | Fraction


def as_fraction(x: RationalLike | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(s: str) -> Fraction:
    """Parse ``"num/den"`` (or an integer string) into a Fraction."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(q: RationalLike) -> str:
    q = as_fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def ord_p(n: int, p: int) -> int:
    """Valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation_q(q: RationalLike, p: int) -> float | int:
    q = as_fraction(q)
    if q == 0:
        return math.inf
    return ord_p(q.numerator, p) - ord_p(q.denominator, p)


def is_p_integral(q: RationalLike, p: int) -> bool:
    return as_fraction(q).denominator % p != 0


@dataclass(frozen=True)
class PadicNumber:
    """An element of Z_p known modulo p^precision."""

    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        if self.precision < 0:
            raise ValueError("precision must be non-negative")
        m = self.prime ** self.precision
        if not 0 <= self.residue < m:
            object.__setattr__(self, "residue", self.residue % m)

    # construction helpers -------------------------------------------------
    @classmethod
    def from_int(cls, n: int, p: int, N: int) -> "PadicNumber":
        return cls(p, N, n % p**N)

    @property
    def modulus(self) -> int:
        return self.prime ** self.precision

    def valuation(self) -> int:
        """ord_p of the residue, capped at the precision ("≥ N" for zero)."""
        if self.residue == 0:
            return self.precision
        return min(ord_p(self.residue, self.prime), self.precision)

    def is_zero(self) -> bool:
        return self.residue == 0

    def is_unit(self) -> bool:
        return self.precision > 0 and self.residue % self.prime != 0

    def digits(self) -> list[int]:
        out, r = [], self.residue
        for _ in range(self.precision):
            r, d = divmod(r, self.prime)
            out.append(d)
        return out

    def reduce_to(self, N: int) -> "PadicNumber":
        if N > self.precision:
            raise ValueError(f"cannot raise precision {self.precision} to {N}")
        return PadicNumber(self.prime, N, self.residue % self.prime**N)

    def agrees(self, other: "PadicNumber", N: int | None = None) -> bool:
        """Compare modulo p^N (default: the smaller precision)."""
        self._check(other)
        if N is None:
            N = min(self.precision, other.precision)
        if N > min(self.precision, other.precision):
            raise ValueError("comparison beyond known precision")
        m = self.prime**N
        return (self.residue - other.residue) % m == 0

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "PadicNumber") -> None:
        if other.prime != self.prime:
            raise ValueError("mixing different primes")

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return reduce(other, self.prime, self.precision)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = min(self.precision, other.precision)
        return PadicNumber(self.prime, N, (self.residue + other.residue) % self.prime**N)

    __radd__ = __add__

    def __neg__(self):
        return PadicNumber(self.prime, self.precision, -self.residue % self.modulus)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = min(self.precision, other.precision)
        return PadicNumber(self.prime, N, (self.residue * other.residue) % self.prime**N)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return PadicNumber(self.prime, self.precision, pow(self.residue, k, self.modulus))

    def inverse(self) -> "PadicNumber":
        if not self.is_unit():
            raise UnitRequired(f"{self} is not a unit")
        return PadicNumber(self.prime, self.precision, pow(self.residue, -1, self.modulus))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def divide_by_p(self, k: int = 1) -> "PadicNumber":
        """Exact division by p^k; the result loses k digits of precision."""
        if k > self.precision:
            raise ValueError("not enough precision to divide")
        pk = self.prime**k
        if self.residue % pk:
            raise NonIntegral(f"{self} is not divisible by {self.prime}^{k}")
        return PadicNumber(self.prime, self.precision - k, self.residue // pk)

    def __int__(self) -> int:
        return self.residue

    def signed(self) -> int:
        """Representative in (-p^N/2, p^N/2]."""
        m = self.modulus
        r = self.residue
        return r - m if r > m // 2 else r

    def __repr__(self) -> str:
        return f"{self.residue} + O({self.prime}^{self.precision})"

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        return {"p": self.prime, "precision": self.precision, "digits": self.digits()}

    @classmethod
    def from_dict(cls, d: dict) -> "PadicNumber":
        p = int(d["p"])
        digits = [int(x) for x in d["digits"]]
        if any(not 0 <= x < p for x in digits):
            raise ValueError("digits must lie in [0, p)")
        N = int(d.get("precision", len(digits)))
        if N != len(digits):
            raise ValueError("precision does not match number of digits")
        residue = sum(x * p**i for i, x in enumerate(digits))
        return cls(p, N, residue)


# ---------------------------------------------------------------------------
# rationals and reduction


def reduce(q: RationalLike, p: int, N: int) -> PadicNumber:
    """Image of a p-integral rational in Z/p^N."""
    q = as_fraction(q)
    if q.denominator % p == 0:
        raise NonIntegral(f"{q} is not {p}-integral")
    m = p**N
    return PadicNumber(p, N, q.numerator * pow(q.denominator, -1, m) % m if m > 1 else 0)


def dwork_prime(a: RationalLike, p: int) -> Fraction:
    """The Dwork prime a' = (a + k)/p with 0 <= k < p and a + k ≡ 0 mod p."""
    a = as_fraction(a)
    if a.denominator % p == 0:
        raise NonIntegral(f"{a} is not {p}-integral")
    k = (-a.numerator * pow(a.denominator, -1, p)) % p
    return (a + k) / p


def dwork_orbit(a_tuple: Sequence[RationalLike], p: int) -> tuple[list[tuple[Fraction, ...]], int]:
    """Orbit of a parameter tuple under the Dwork prime and its length m."""
    start = tuple(as_fraction(x) for x in a_tuple)
    orbit = [start]
    cur = start
    seen = {start: 0}
    for _ in range(100_000):
        cur = tuple(dwork_prime(x, p) for x in cur)
        if cur == start:
            return orbit, len(orbit)
        if cur in seen:
            raise ValueError(f"{start} is not purely periodic under the Dwork prime at p={p}")
        seen[cur] = len(orbit)
        orbit.append(cur)
    raise ValueError("Dwork orbit did not close")


# ---------------------------------------------------------------------------
# Teichmüller lift and Iwasawa logarithm


def teichmuller(u: RationalLike, p: int, N: int) -> PadicNumber:
    """The (p-1)-st root of unity congruent to u mod p."""
    u = as_fraction(u)
    if u.denominator % p == 0 or u.numerator % p == 0:
        raise UnitRequired(f"{u} is not a {p}-adic unit")
    m = p**N
    x = reduce(u, p, N).residue
    for _ in range(N + 1):
        y = pow(x, p, m)
        if y == x:
            break
        x = y
    return PadicNumber(p, N, x)


def _log_one_plus(x: int, p: int, N: int) -> int:
    """log(1 + x) mod p^N for an integer x divisible by p."""
    # terms x^k/k have valuation >= k - ord_p(k); find where they drop below N
    K = N
    while K - math.log(K, p) < N + 1:
        K += 1
    extra = int(math.log(K, p)) + 1
    W = N + extra
    mW = p**W
    mN = p**N
    X = x % mW
    total = 0
    power = 1
    for k in range(1, K + 1):
        power = power * X % mW
        v = 0
        kk = k
        while kk % p == 0:
            kk //= p
            v += 1
        term = (power // p**v) * pow(kk, -1, mN)
        total += term if k % 2 else -term
    return total % mN


def iwasawa_log(c: PadicNumber) -> PadicNumber:
    """Iwasawa logarithm of a unit: log(c / ω(c)) by the Mercator series."""
    if not c.is_unit():
        raise UnitRequired(f"{c} is not a unit")
    p, N = c.prime, c.precision
    w = teichmuller(c.residue % p, p, N)
    u = c * w.inverse()
    return PadicNumber(p, N, _log_one_plus(u.residue - 1, p, N))


# ---------------------------------------------------------------------------
# psi_tilde


_PSI_TABLE_LIMIT = 2_000_000


@lru_cache(maxsize=32)
def _harmonic_prefix(p: int, N: int) -> np.ndarray:
    """S[r] = sum_{1<=k<r, p∤k} 1/k mod p^N for 0 <= r <= p^N."""
    m = p**N
    inv = np.zeros(m + 1, dtype=np.int64)
    for k in range(1, m):
        if k % p:
            inv[k + 1] = pow(k, -1, m)
    out = np.cumsum(inv) if m < 2**62 // (m + 1) else None
    if out is None:
        acc, vals = 0, []
        for x in inv.tolist():
            acc = (acc + x) % m
            vals.append(acc)
        return np.array(vals, dtype=object)
    return out % m


def _partial_harmonic(n: int, p: int, N: int) -> int:
    """sum_{1<=k<n, p∤k} 1/k mod p^N for a positive integer n."""
    m = p**N
    if m <= _PSI_TABLE_LIMIT:
        table = _harmonic_prefix(p, N)
        q, r = divmod(n, m)
        # 1/(k + j p^N) ≡ 1/k mod p^N, so each full block contributes table[m]
        return (q * int(table[m]) + int(table[r])) % m
    total = 0
    for k in range(1, n):
        if k % p:
            total += pow(k, -1, m)
    return total % m


def psi_tilde(a: RationalLike, p: int, N: int) -> PadicNumber:
    """p-adic digamma analogue lim_{n→a} sum_{1<=k<n, p∤k} 1/k, modulo p^N.

    The limit is taken over the least positive integers n_M ≡ a mod p^M for
    M = N+2, N+3, N+5, ... until two successive levels agree mod p^N.
    """
    a = as_fraction(a)
    if a.denominator % p == 0:
        raise NonIntegral(f"{a} is not {p}-integral")
    if p < 3:
        raise ValueError("psi_tilde is implemented for odd primes only")
    if a.denominator == 1 and a.numerator >= 1:
        return PadicNumber(p, N, _partial_harmonic(a.numerator, p, N))

    def level(M: int) -> int:
        mM = p**M
        n = reduce(a, p, M).residue or mM
        return _partial_harmonic(n, p, N)

    M, step = N + 2, 1
    prev = level(M)
    for _ in range(8):
        M += step
        step *= 2
        cur = level(M)
        if cur == prev:
            return PadicNumber(p, N, cur)
        prev = cur
    raise NoStabilization(f"psi_tilde({a}) at p={p}, N={N} did not stabilize")


# ---------------------------------------------------------------------------
# Hensel lifting and rational reconstruction


def hensel_quadratic(trace: int, norm: int, p: int, N: int) -> PadicNumber:
    """Unit root u of u^2 - trace*u + norm, assuming p | norm and p ∤ trace."""
    if trace % p == 0:
        raise NotOrdinary(f"p={p} divides the trace {trace}")
    if norm % p:
        raise ValueError("norm must be divisible by p")
    m = p**N
    u = trace % p
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        mk = p**prec
        f = (u * u - trace * u + norm) % mk
        df = (2 * u - trace) % mk
        u = (u - f * pow(df, -1, mk)) % mk
    return PadicNumber(p, N, u % m)


def rational_reconstruct(x: PadicNumber, H: int) -> Fraction | None:
    """Find n/d with |n|, d <= H and n ≡ d*x mod p^N, if one exists.

    Uniqueness needs 2*H^2 <= p^N.  A larger H is clamped down to the
    largest bound with that property, so the answer is never ambiguous.
    """
    m = x.modulus
    H = min(H, math.isqrt(m // 2))
    r0, r1 = m, x.residue
    t0, t1 = 0, 1
    while r1 > H:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    n, d = r1, t1
    if d < 0:
        n, d = -n, -d
    if d == 0 or d > H or abs(n) > H:
        return None
    if math.gcd(n, d) != 1 or d % x.prime == 0:
        return None
    if (n - d * x.residue) % m:
        return None
    return Fraction(n, d)


def padic_sum(values: Iterable[PadicNumber]) -> PadicNumber:
    it = iter(values)
    total = next(it)
    for v in it:
        total = total + v
    return total
