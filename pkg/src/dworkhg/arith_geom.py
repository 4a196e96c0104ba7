"""Brute-force point counts over small finite fields.

Elements of F_q, q = p^m, are encoded as integers 0..q-1 through their
base-p digit vectors in F_p[x]/(g) for a fixed irreducible g.  The field
is tabulated once (exp/log tables), after which all counting is done with
numpy array lookups.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import BadReduction, BudgetExceeded, NotOrdinary
from .padic import PadicNumber, as_fraction, hensel_quadratic, is_p_integral, reduce

MAX_FIELD = 10**6
MAX_WORK = 5 * 10**7


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % k for k in range(2, math.isqrt(n) + 1))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            m = 0
            r = q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1 or not _is_prime(p):
                break
            return p, m
    raise ValueError(f"{q} is not a prime power")


class FiniteField:
    """F_q with log/antilog tables.

    ``exp[i]`` is the code of g^i for a fixed generator g, ``log[x]`` its
    inverse on nonzero codes (``log[0] = -1``).
    """

    def __init__(self, p: int, m: int = 1):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        q = p**m
        if q > MAX_FIELD:
            raise BudgetExceeded(f"q = {q} exceeds the brute-force budget {MAX_FIELD}")
        self.p, self.m, self.q = p, m, q
        self.modulus = _find_irreducible(p, m)
        self.exp, self.log = _build_tables(p, m, self.modulus)
        digits = np.zeros((q, m), dtype=np.int64)
        codes = np.arange(q)
        for j in range(m):
            digits[:, j] = (codes // p**j) % p
        self._digits = digits
        self._weights = p ** np.arange(m, dtype=np.int64)

    # element encoding -------------------------------------------------------
    def from_int(self, k: int) -> int:
        """Image of the integer k in the prime field."""
        return k % self.p

    def from_rational(self, x) -> int:
        x = as_fraction(x)
        return reduce(x, self.p, 1).residue

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # vectorized arithmetic on code arrays ---------------------------------
    def add(self, x, y):
        dx = self._digits[np.asarray(x)]
        dy = self._digits[np.asarray(y)]
        return ((dx + dy) % self.p) @ self._weights

    def neg(self, x):
        return ((-self._digits[np.asarray(x)]) % self.p) @ self._weights

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        x = np.asarray(x)
        y = np.asarray(y)
        lx = self.log[x]
        ly = self.log[y]
        res = self.exp[(lx + ly) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, res)

    def power(self, x, n: int):
        x = np.asarray(x)
        res = self.exp[(self.log[x] * n) % (self.q - 1)]
        if n == 0:
            return np.ones_like(x)
        return np.where(x == 0, 0, res)

    def inv(self, x):
        x = np.asarray(x)
        if np.any(x == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[x]) % (self.q - 1)]

    def nth_root_count(self, v, n: int):
        """Number of y in F_q with y^n = v, elementwise."""
        v = np.asarray(v)
        g = math.gcd(n, self.q - 1)
        nonzero = np.where(self.log[v] % g == 0, g, 0)
        return np.where(v == 0, 1, nonzero)

    def square_count(self, v):
        return self.nth_root_count(v, 2)


def _poly_mulmod(a: list[int], b: list[int], g: list[int], p: int) -> list[int]:
    m = len(g) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    # reduce by monic g
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for j in range(m + 1):
                prod[k - m + j] = (prod[k - m + j] - c * g[j]) % p
    return (prod + [0] * m)[:m]


@lru_cache(maxsize=None)
def _find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """A monic irreducible polynomial of degree m over F_p (lowest degree first)."""
    if m == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=m):
        g = list(tail) + [1]
        if g[0] == 0:
            continue
        if not any(_has_factor_of_degree(g, k, p) for k in range(1, m // 2 + 1)):
            return tuple(g)
    raise RuntimeError("no irreducible polynomial found")


def _has_factor_of_degree(g: list[int], k: int, p: int) -> bool:
    # every monic polynomial of degree k; adequate at desk scale (q <= 10^6)
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if _poly_divides(f, g, p):
            return True
    return False


def _poly_divides(f: list[int], g: list[int], p: int) -> bool:
    r = list(g)
    df = len(f) - 1
    for k in range(len(r) - 1, df - 1, -1):
        c = r[k]
        if c:
            for j in range(df + 1):
                r[k - df + j] = (r[k - df + j] - c * f[j]) % p
    return not any(r[:df])


@lru_cache(maxsize=None)
def _build_tables(p: int, m: int, g: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    q = p**m
    weights = [p**j for j in range(m)]

    def encode(v):
        return sum(c * w for c, w in zip(v, weights))

    for cand in range(2, q) if q > 2 else [1]:
        v = [(cand // p**j) % p for j in range(m)]
        exp = np.zeros(q - 1, dtype=np.int64)
        x = [1] + [0] * (m - 1)
        seen = set()
        ok = True
        for i in range(q - 1):
            code = encode(x)
            if code in seen:
                ok = False
                break
            seen.add(code)
            exp[i] = code
            x = _poly_mulmod(x, v, list(g), p) if m > 1 else [x[0] * v[0] % p]
        if ok:
            log = np.full(q, -1, dtype=np.int64)
            log[exp] = np.arange(q - 1)
            exp.setflags(write=False)
            log.setflags(write=False)
            return exp, log
    raise RuntimeError("no generator found")


@lru_cache(maxsize=32)
def field(p: int, m: int = 1) -> FiniteField:
    return FiniteField(p, m)


def field_of_size(q: int) -> FiniteField:
    p, m = _prime_power(q)
    return field(p, m)


# ---------------------------------------------------------------------------
# hypergeometric fibers


def count_hg_fiber(n_list: Sequence[int], alpha, q: int) -> int:
    """#{x in F_q^{d+1} : (1 - x_0^{n_0}) ... (1 - x_d^{n_d}) = alpha}.

    Histograms of v_k(x) = 1 - x^{n_k} are combined multiplicatively over
    the first d coordinates; the last coordinate is finished by lookup.
    """
    F = field_of_size(q)
    if math.gcd(q, math.prod(n_list)) != 1:
        raise ValueError("q must be prime to every n_k")
    target = F.from_rational(alpha) if not isinstance(alpha, (int, np.integer)) else F.from_int(int(alpha))
    one = np.ones(q, dtype=np.int64)
    hists = []
    for n in n_list:
        v = F.sub(one, F.power(F.elements(), n))
        hists.append(np.bincount(v, minlength=q).astype(object))
    work = sum(int(np.count_nonzero(h)) for h in hists) * q
    if work > MAX_WORK:
        raise BudgetExceeded(f"estimated work {work} exceeds budget")
    dist = hists[0]
    for h in hists[1:-1]:
        dist = _mult_convolve(F, dist, h)
    last = hists[-1]
    if len(n_list) == 1:
        return int(dist[target])
    # sum over y of dist[y] * last[target / y]
    total = 0
    ys = np.nonzero(dist)[0]
    if target == 0:
        zero_dist = int(dist[0])
        zero_last = int(last[0])
        nz = int(sum(dist[y] for y in ys if y != 0))
        return zero_dist * q + nz * zero_last
    for y in ys:
        if y == 0:
            continue
        z = int(F.mul(target, F.inv(int(y))))
        total += int(dist[y]) * int(last[z])
    return total


def _mult_convolve(F: FiniteField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(F.q, dtype=object)
    za, zb = int(a[0]), int(b[0])
    sa = int(sum(a)) - za
    out[0] = za * int(sum(b)) + zb * sa
    ya = np.nonzero(a[1:])[0] + 1
    yb = np.nonzero(b[1:])[0] + 1
    for y in yb:
        prods = F.mul(ya, np.full(len(ya), y))
        np.add.at(out, prods, a[ya] * int(b[y]))
    return out


# ---------------------------------------------------------------------------
# curves


def count_gauss_curve(n: int, i0: int, i1: int, t_val, q: int) -> int:
    """Affine count of y^n = x^{n-i0} (1-x)^{n-i1} (1-(1-t)x)^{i1} over F_q."""
    if not (0 < i0 < n and 0 < i1 < n):
        raise ValueError("need 0 < i0, i1 < n")
    F = field_of_size(q)
    if math.gcd(q, n) != 1:
        raise ValueError("q must be prime to n")
    t = F.from_rational(t_val)
    if t in (0, 1):
        raise ValueError("t must not be 0 or 1")
    if q * 4 > MAX_WORK:
        raise BudgetExceeded("field too large")
    x = F.elements()
    one = np.ones(q, dtype=np.int64)
    omx = F.sub(one, x)
    s = F.sub(1, t)
    third = F.sub(one, F.mul(np.full(q, s), x))
    rhs = F.mul(F.mul(F.power(x, n - i0), F.power(omx, n - i1)), F.power(third, i1))
    return int(F.nth_root_count(rhs, n).sum())


@dataclass(frozen=True)
class EllipticModel:
    """y^2 * lead = x (x^2 + 2x - b) with b = a/(1-a), or the Gauss curve.

    ``kind`` is "E" (lead = 1), "E_twist" (lead = 1 - a) or "gauss"
    (y^2 = x(1-x)(1-(1-t)x) at t = a).
    """

    kind: str
    a: Fraction

    @property
    def name(self) -> str:
        from .padic import format_rational

        return f"{self.kind}[{format_rational(self.a)}]"

    def check_good(self, p: int) -> None:
        a = self.a
        if p == 2:
            raise BadReduction("p = 2")
        if self.kind == "gauss":
            if not is_p_integral(a, p) or reduce(a, p, 1).residue in (0, 1):
                raise BadReduction(f"t = {a} is singular mod {p}")
            return
        if a == 1 or not is_p_integral(a, p):
            raise BadReduction(f"a = {a} not {p}-integral")
        b = a / (1 - a)
        for x in (b, 1 + b):
            if x == 0 or not is_p_integral(x, p) or not is_p_integral(1 / x, p):
                raise BadReduction(f"bad reduction of {self.name} at {p}")

    def affine_count(self, p: int, m: int = 1) -> int:
        self.check_good(p)
        F = field(p, m)
        x = F.elements()
        if self.kind == "gauss":
            return count_gauss_curve(2, 1, 1, self.a, F.q)
        b = F.from_rational(self.a / (1 - self.a))
        x2 = F.mul(x, x)
        quad = F.add(F.add(x2, F.add(x, x)), F.neg(np.full(F.q, b)))
        rhs = F.mul(x, quad)
        if self.kind == "E_twist":
            lead = F.from_rational(1 - self.a)
            rhs = F.mul(rhs, np.full(F.q, int(F.inv(lead))))
        elif self.kind != "E":
            raise ValueError(f"unknown curve kind {self.kind!r}")
        return int(F.square_count(rhs).sum())


def elliptic_curve(kind: str, a) -> EllipticModel:
    return EllipticModel(kind, as_fraction(a))


@dataclass(frozen=True)
class CurveCountReport:
    curve: str
    p: int
    q: int
    count: int
    completed: int
    a_p: int
    ordinary: bool

    def to_dict(self) -> dict:
        return {
            "curve": self.curve,
            "p": self.p,
            "q": self.q,
            "count": self.completed,
            "affine": self.count,
            "a_p": self.a_p,
            "ordinary": self.ordinary,
        }


def elliptic_trace(curve: EllipticModel, p: int, m: int = 1) -> CurveCountReport:
    """Trace of Frobenius a_q = q + 1 - #E(F_q), one point at infinity."""
    q = p**m
    aff = curve.affine_count(p, m)
    completed = aff + 1
    a = q + 1 - completed
    if a * a > 4 * q:
        raise AssertionError(f"Weil bound violated for {curve.name} over F_{q}")
    return CurveCountReport(curve.name, p, q, aff, completed, a, a % p != 0)


def unit_root_from_counts(report: CurveCountReport | int, p: int, N: int, weight: int = 1) -> PadicNumber:
    """Unit root of T^2 - a_p T + p^weight."""
    a_p = report.a_p if isinstance(report, CurveCountReport) else int(report)
    if a_p % p == 0:
        raise NotOrdinary(f"p = {p} divides a_p = {a_p}")
    return hensel_quadratic(a_p, p**weight, p, N)


def quadratic_character(x, p: int) -> int:
    """Legendre symbol of the p-integral rational x modulo p."""
    r = reduce(x, p, 1).residue
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1
