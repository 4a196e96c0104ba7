"""Eta-product newforms of weight 3, their quadratic twists and unit roots."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import NonIntegralPrefactor, NotModular, NotOrdinary
from .padic import PadicNumber, as_fraction, format_rational, hensel_quadratic


@dataclass(frozen=True)
class QExpansion:
    """Integer q-series; ``coeffs[n]`` is the coefficient of q^n for n < len."""

    coeffs: tuple
    name: str = ""

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def ap(self, p: int) -> int:
        return self.coeffs[p]

    def to_dict(self, primes: Sequence[int] = ()) -> dict:
        return {"form": self.name, "ap": {str(p): self.coeffs[p] for p in primes}}


# ---------------------------------------------------------------------------
# (q; q)_infinity^e


def _mul(a: Sequence[int], b: Sequence[int], T: int) -> list[int]:
    out = [0] * T
    nzb = [(j, y) for j, y in enumerate(b[:T]) if y]
    for i, x in enumerate(a[:T]):
        if x:
            for j, y in nzb:
                if i + j >= T:
                    break
                out[i + j] += x * y
    return out


def eta_power_direct(e: int, T: int) -> list[int]:
    """prod_{n>=1} (1 - q^n)^e modulo q^T by repeated multiplication."""
    out = np.zeros(T, dtype=object)
    out[0] = 1
    for n in range(1, T):
        for _ in range(e):
            out[n:] = out[n:] - out[:-n].copy()
    return [int(c) for c in out]


def pentagonal(T: int) -> list[int]:
    """Euler: prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k over Z."""
    out = [0] * T
    k = 0
    while True:
        hit = False
        for j in ((k, -k) if k else (0,)):
            e = j * (3 * j - 1) // 2
            if e < T:
                out[e] += (-1) ** (k % 2)
                hit = True
        if not hit:
            break
        k += 1
    return out


def jacobi_cube(T: int) -> list[int]:
    """Jacobi: prod (1 - q^n)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}."""
    out = [0] * T
    k = 0
    while k * (k + 1) // 2 < T:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


@lru_cache(maxsize=64)
def _eta_power_sparse(e: int, T: int) -> tuple:
    # binary decomposition of e into cubes and single factors
    cubes, ones = divmod(e, 3)
    out = [1] + [0] * (T - 1)
    c = jacobi_cube(T)
    for _ in range(cubes):
        out = _mul(out, c, T)
    s = pentagonal(T)
    for _ in range(ones):
        out = _mul(out, s, T)
    return tuple(out)


def eta_power(e: int, T: int, method: str = "sparse") -> list[int]:
    """Coefficients of prod (1 - q^n)^e modulo q^T.

    ``method="sparse"`` multiplies Jacobi cubes and pentagonal series;
    ``method="direct"`` multiplies out the factors one at a time.
    """
    if e < 1:
        raise ValueError("e must be positive")
    if T > 10**5:
        raise ValueError("T too large")
    if method == "direct":
        return eta_power_direct(e, T)
    if method == "sparse":
        return list(_eta_power_sparse(e, T))
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# eta products


@dataclass(frozen=True)
class EtaProduct:
    """prod_j eta(m_j z)^{e_j}, given as ((m_1, e_1), ...)."""

    factors: tuple
    name: str = ""

    @property
    def prefactor(self) -> Fraction:
        return Fraction(sum(m * e for m, e in self.factors), 24)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(e for _, e in self.factors), 2)


ETA_FORMS = {
    "A": EtaProduct(((4, 6),), "A"),
    "B": EtaProduct(((1, 2), (2, 1), (4, 1), (8, 2)), "B"),
    "C": EtaProduct(((2, 3), (6, 3)), "C"),
    "D": EtaProduct(((1, 3), (7, 3)), "D"),
}

LEVELS = {"A": 16, "B": 8, "C": 12, "D": 7}


def eta_product_expansion(spec: EtaProduct | str, T: int) -> QExpansion:
    """q^{prefactor} prod_j prod_n (1 - q^{m_j n})^{e_j} modulo q^T."""
    if isinstance(spec, str):
        spec = ETA_FORMS[spec]
    pre = spec.prefactor
    if pre.denominator != 1:
        raise NonIntegralPrefactor(f"prefactor {pre} is not an integer")
    shift = int(pre)
    L = max(T - shift, 0)
    out = [1] + [0] * (L - 1) if L else []
    for m, e in spec.factors:
        base = eta_power(e, (L - 1) // m + 1 if L else 1)
        sub = [0] * L
        for k, c in enumerate(base):
            if k * m < L:
                sub[k * m] = c
        out = _mul(out, sub, L)
    return QExpansion(tuple([0] * min(shift, T) + out)[:T], spec.name)


def kronecker(D: int, n: int) -> int:
    """Kronecker symbol (D/n)."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    # factor out 2
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd n
    a = D % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def twist(f: QExpansion, D: int) -> QExpansion:
    """a_n -> chi_D(n) a_n."""
    name = f"{f.name}(x)chi_{D}" if f.name else ""
    return QExpansion(tuple(kronecker(D, n) * c for n, c in enumerate(f.coeffs)), name)


# parameter -> (form, twist discriminant or None)
MODULAR_TABLE = {
    Fraction(-1): ("B", -4),
    Fraction(4): ("C", None),
    Fraction(1, 4): ("C", -4),
    Fraction(-8): ("A", None),
    Fraction(-1, 8): ("A", 8),
    Fraction(64): ("D", None),
    Fraction(1, 64): ("D", -4),
}


def form_label(a) -> str:
    a = as_fraction(a)
    if a not in MODULAR_TABLE:
        raise NotModular(f"a = {format_rational(a)} is not in the modular list")
    name, D = MODULAR_TABLE[a]
    return name if D is None else f"{name}(x)chi_{D}"


def form_for_parameter(a, T: int = 100) -> QExpansion:
    """The weight-3 eigenform attached to the singular fiber parameter a."""
    a = as_fraction(a)
    if a not in MODULAR_TABLE:
        raise NotModular(f"a = {format_rational(a)} is not in the modular list")
    name, D = MODULAR_TABLE[a]
    f = eta_product_expansion(name, T)
    return f if D is None else twist(f, D)


def modular_unit_root(f: QExpansion, p: int, N: int) -> PadicNumber:
    """Unit root of T^2 - a_p T + p^2."""
    ap = f.ap(p)
    if ap % p == 0:
        raise NotOrdinary(f"a_{p} = {ap} is divisible by {p}")
    return hensel_quadratic(ap, p * p, p, N)
