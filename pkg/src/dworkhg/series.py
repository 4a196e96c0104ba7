"""Truncated power series over exact rationals or over Z_p.

A :class:`TruncSeries` holds the coefficients c_0, ..., c_{T-1} of a power
series known modulo t^T.  Two coefficient domains are supported:

``"rational"``
    exact :class:`~fractions.Fraction` coefficients; used as the reference
    oracle for formal identities.
``"padic"``
    residues modulo p^{N_k} with a per-coefficient absolute precision N_k,
    stored as numpy arrays.  Arithmetic on long series is done modulo a
    common power of p with numpy convolutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadFrobeniusConstant,
    NonIntegral,
    NonzeroConstantTerm,
    NotInvertible,
    TruncationExceeded,
)
from .padic import PadicNumber, as_fraction, format_rational, ord_p, parse_rational, reduce

_INT64_SAFE = 2**62


# ---------------------------------------------------------------------------
# modular convolution kernels


def _as_mod_array(values, m: int) -> np.ndarray:
    if m < _INT64_SAFE:
        return np.asarray(values, dtype=np.int64) % m
    return np.array([int(v) % m for v in values], dtype=object)


def convolve_mod(a: np.ndarray, b: np.ndarray, m: int, T: int) -> np.ndarray:
    """First T coefficients of a*b modulo m (entries of a, b in [0, m))."""
    a = a[:T]
    b = b[:T]
    obj = m >= 2**31 or a.dtype == object or b.dtype == object
    out = np.zeros(T, dtype=object if obj else np.int64)
    if len(a) == 0 or len(b) == 0:
        return out
    if obj:
        res = np.convolve(a.astype(object), b.astype(object))[:T] % m
        out[: len(res)] = res
        return out
    L = min(len(a), len(b))
    if L * (m - 1) ** 2 < 2**63 - 1:
        res = np.convolve(a, b)[:T] % m
        out[: len(res)] = res
        return out
    # split b into limbs small enough that each partial convolution fits
    bits = int(math.log2((2**63 - 1) // (L * (m - 1))))
    base = 1 << bits
    rest = b.copy()
    shift = 1
    acc = np.zeros(min(T, len(a) + len(b) - 1), dtype=np.int64)
    while rest.any():
        limb = rest & (base - 1)
        rest = rest >> bits
        part = np.convolve(a, limb)[: len(acc)] % m
        acc = (acc + part * shift) % m
        shift = shift * base % m
    out[: len(acc)] = acc
    return out


def inverse_mod(g: np.ndarray, m: int, T: int) -> np.ndarray:
    """Power-series inverse of g modulo (m, t^T) by Newton iteration."""
    g0 = int(g[0])
    try:
        h0 = pow(g0, -1, m)
    except ValueError:
        raise NotInvertible("constant term is not a unit") from None
    dtype = object if m >= 2**31 else np.int64
    h = np.array([h0], dtype=dtype)
    n = 1
    while n < T:
        n = min(2 * n, T)
        e = convolve_mod(g[:n], h, m, n)
        e = (-e) % m
        e[0] = (e[0] + 2) % m
        h = convolve_mod(h, e, m, n)
    return h[:T]


def _pad(arr: np.ndarray, T: int) -> np.ndarray:
    if len(arr) >= T:
        return arr[:T]
    out = np.zeros(T, dtype=arr.dtype)
    out[: len(arr)] = arr
    return out


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TruncSeries:
    """A power series modulo t^T over Q or Z_p.

    Use :meth:`rational` or :meth:`padic` to construct.  For the p-adic
    domain ``prec[k]`` is the absolute precision of coefficient k and the
    residue is reduced into [0, p^prec[k]).
    """

    domain: str
    coeffs: tuple | np.ndarray
    prime: int | None = None
    prec: np.ndarray | None = None

    # construction ---------------------------------------------------------
    @classmethod
    def rational(cls, coeffs: Iterable) -> "TruncSeries":
        return cls("rational", tuple(as_fraction(c) for c in coeffs))

    @classmethod
    def padic(cls, residues, p: int, prec) -> "TruncSeries":
        residues = list(residues) if not isinstance(residues, np.ndarray) else residues
        T = len(residues)
        if np.isscalar(prec):
            prec_arr = np.full(T, int(prec), dtype=np.int64)
        else:
            prec_arr = np.asarray(prec, dtype=np.int64).copy()
            if len(prec_arr) != T:
                raise ValueError("precision array length mismatch")
        if T and prec_arr.min() < 0:
            raise ValueError("negative precision")
        top = int(prec_arr.max()) if T else 0
        m = p**top
        arr = _as_mod_array(residues, m) if T else np.zeros(0, dtype=np.int64)
        arr = _reduce_each(arr, p, prec_arr)
        arr.setflags(write=False)
        prec_arr.setflags(write=False)
        return cls("padic", arr, p, prec_arr)

    @classmethod
    def from_padic_numbers(cls, values: Sequence[PadicNumber]) -> "TruncSeries":
        p = values[0].prime
        return cls.padic([v.residue for v in values], p, [v.precision for v in values])

    @classmethod
    def one(cls, T: int, domain: str = "rational", p: int | None = None, N: int = 0) -> "TruncSeries":
        c = [1] + [0] * (T - 1)
        return cls.rational(c) if domain == "rational" else cls.padic(c, p, N)

    # basic properties -----------------------------------------------------
    @property
    def T(self) -> int:
        return len(self.coeffs)

    def __len__(self) -> int:
        return self.T

    @property
    def is_padic(self) -> bool:
        return self.domain == "padic"

    @property
    def max_prec(self) -> int:
        return int(self.prec.max()) if self.T else 0

    @property
    def min_prec(self) -> int:
        return int(self.prec.min()) if self.T else 0

    def __getitem__(self, k: int):
        if self.is_padic:
            return PadicNumber(self.prime, int(self.prec[k]), int(self.coeffs[k]))
        return self.coeffs[k]

    def residues(self) -> list[int]:
        return [int(x) for x in self.coeffs]

    def __repr__(self) -> str:
        head = ", ".join(str(self[k]) for k in range(min(self.T, 6)))
        more = ", ..." if self.T > 6 else ""
        return f"TruncSeries[{self.domain}, T={self.T}]({head}{more})"

    # domain conversion ----------------------------------------------------
    def to_padic(self, p: int, N: int) -> "TruncSeries":
        """Reduce an exact-rational series modulo p^N."""
        if self.is_padic:
            if self.prime != p:
                raise ValueError("prime mismatch")
            return self.reduce_prec(N)
        return TruncSeries.padic([reduce(c, p, N).residue for c in self.coeffs], p, N)

    def reduce_prec(self, N: int) -> "TruncSeries":
        """Lower every coefficient's precision to at most N."""
        self._need_padic()
        prec = np.minimum(self.prec, N)
        return TruncSeries.padic(self.coeffs, self.prime, prec)

    # helpers ----------------------------------------------------------------
    def _need_padic(self) -> None:
        if not self.is_padic:
            raise TypeError("operation requires the p-adic domain")

    def _same_domain(self, other: "TruncSeries") -> None:
        if self.domain != other.domain:
            raise TypeError(f"cannot combine {self.domain} and {other.domain} series")
        if self.is_padic and self.prime != other.prime:
            raise ValueError("prime mismatch")

    def _work_modulus(self, *others: "TruncSeries") -> int:
        return self.prime ** max([self.max_prec] + [o.max_prec for o in others])

    # ring operations ------------------------------------------------------
    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._same_domain(other)
        T = min(self.T, other.T)
        if not self.is_padic:
            return TruncSeries.rational(x + y for x, y in zip(self.coeffs[:T], other.coeffs[:T]))
        m = self._work_modulus(other)
        res = (self.coeffs[:T].astype(_dt(m)) + other.coeffs[:T].astype(_dt(m))) % m
        return TruncSeries.padic(res, self.prime, np.minimum(self.prec[:T], other.prec[:T]))

    def __neg__(self) -> "TruncSeries":
        if not self.is_padic:
            return TruncSeries.rational(-x for x in self.coeffs)
        m = self._work_modulus()
        return TruncSeries.padic((-self.coeffs.astype(_dt(m))) % m, self.prime, self.prec)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return self.scale(other)
        self._same_domain(other)
        T = min(self.T, other.T)
        if not self.is_padic:
            return TruncSeries.rational(_rational_mul(self.coeffs, other.coeffs, T))
        m = self._work_modulus(other)
        a = self.coeffs[:T].astype(_dt(m))
        b = other.coeffs[:T].astype(_dt(m))
        res = convolve_mod(a, b, m, T)
        prec = np.minimum(
            np.minimum.accumulate(self.prec[:T]), np.minimum.accumulate(other.prec[:T])
        )
        return TruncSeries.padic(res, self.prime, prec)

    __rmul__ = __mul__

    def scale(self, c) -> "TruncSeries":
        if not self.is_padic:
            c = as_fraction(c)
            return TruncSeries.rational(c * x for x in self.coeffs)
        if not isinstance(c, PadicNumber):
            c = reduce(c, self.prime, self.max_prec)
        m = self._work_modulus()
        cm = c.residue % m
        res = _scalar_mul(self.coeffs, cm, m)
        return TruncSeries.padic(res, self.prime, np.minimum(self.prec, c.precision))

    def invert(self) -> "TruncSeries":
        """1/f modulo t^T; the constant term must be a unit."""
        T = self.T
        if not self.is_padic:
            c0 = self.coeffs[0]
            if c0 == 0:
                raise NotInvertible("constant term is zero")
            return TruncSeries.rational(_rational_inv(self.coeffs, T))
        if int(self.coeffs[0]) % self.prime == 0 or self.prec[0] == 0:
            raise NotInvertible("constant term is not a p-adic unit")
        m = self._work_modulus()
        res = inverse_mod(self.coeffs.astype(_dt(m)), m, T)
        return TruncSeries.padic(res, self.prime, np.minimum.accumulate(self.prec))

    def __truediv__(self, other: "TruncSeries") -> "TruncSeries":
        return self * other.invert()

    # structure maps ---------------------------------------------------------
    def truncate_below(self, k: int) -> "TruncSeries":
        """The polynomial [f]_{<k}, returned as a series of length k."""
        if k > self.T:
            raise TruncationExceeded(f"need {k} coefficients, have {self.T}")
        if not self.is_padic:
            return TruncSeries.rational(self.coeffs[:k])
        return TruncSeries.padic(self.coeffs[:k], self.prime, self.prec[:k])

    def extend(self, T: int) -> "TruncSeries":
        """View a polynomial (exact past its length) as a series modulo t^T."""
        if T <= self.T:
            return self.truncate_below(T)
        pad = T - self.T
        if not self.is_padic:
            return TruncSeries.rational(list(self.coeffs) + [Fraction(0)] * pad)
        res = _pad(np.asarray(self.coeffs), T)
        prec = np.concatenate([self.prec, np.full(pad, self.max_prec, dtype=np.int64)])
        return TruncSeries.padic(res, self.prime, prec)

    def frobenius_substitute(self, c, p: int, T: int | None = None) -> "TruncSeries":
        """f(c t^p) modulo t^T (default: the same truncation order).

        f modulo t^T' determines f(ct^p) modulo t^(pT'); asking for more
        is an error.
        """
        T = self.T if T is None else T
        if T > p * self.T:
            raise TruncationExceeded(f"f(ct^p) known only below degree {p * self.T}")
        n = (T - 1) // p + 1
        if not self.is_padic:
            c = as_fraction(c)
            out = [Fraction(0)] * T
            ck = Fraction(1)
            for k in range(min(n, self.T)):
                out[p * k] = ck * self.coeffs[k]
                ck *= c
            return TruncSeries.rational(out)
        if p != self.prime:
            raise ValueError("Frobenius prime must match the series prime")
        if not isinstance(c, PadicNumber):
            c = reduce(c, p, self.max_prec)
        if c.residue % p != 1 % p:
            raise BadFrobeniusConstant(f"c = {c} is not ≡ 1 mod {p}")
        m = self._work_modulus()
        n = min(n, self.T)
        powers = _powers_mod(c.residue % m, n, m)
        vals = _scalar_mul_vec(self.coeffs[:n], powers, m)
        out = np.zeros(T, dtype=_dt(m))
        out[0 : p * n : p] = vals
        prec = np.full(T, self.max_prec, dtype=np.int64)
        prec[0 : p * n : p] = np.minimum(self.prec[:n], c.precision)
        return TruncSeries.padic(out, p, prec)

    def theta(self) -> "TruncSeries":
        """D f = t f'(t)."""
        if not self.is_padic:
            return TruncSeries.rational(k * c for k, c in enumerate(self.coeffs))
        m = self._work_modulus()
        ks = np.arange(self.T, dtype=np.int64) % m if m < 2**31 else np.arange(self.T).astype(object)
        return TruncSeries.padic(_scalar_mul_vec(self.coeffs, ks, m), self.prime, self.prec)

    def derivative(self) -> "TruncSeries":
        """d/dt; the result has one fewer coefficient."""
        if not self.is_padic:
            return TruncSeries.rational(k * c for k, c in enumerate(self.coeffs) if k > 0)
        d = self.theta()
        return TruncSeries.padic(d.coeffs[1:], self.prime, d.prec[1:])

    def dlog_integral(self) -> "TruncSeries":
        """∫_0^t f(s) ds/s, i.e. c_k -> c_k / k; requires c_0 = 0.

        In the p-adic domain coefficient k loses ord_p(k) digits, and a
        coefficient that is not divisible by p^{ord_p(k)} raises NonIntegral.
        """
        if self.T == 0:
            return self
        if not self.is_padic:
            if self.coeffs[0] != 0:
                raise NonzeroConstantTerm("dlog integral needs zero constant term")
            return TruncSeries.rational([Fraction(0)] + [c / k for k, c in enumerate(self.coeffs) if k])
        if int(self.coeffs[0]) != 0:
            raise NonzeroConstantTerm("dlog integral needs zero constant term")
        p = self.prime
        out = [0]
        prec = [int(self.prec[0])]
        for k in range(1, self.T):
            v = ord_p(k, p)
            ck = int(self.coeffs[k])
            pk = int(self.prec[k])
            if v > pk:
                raise NonIntegral(f"coefficient {k} known only mod {p}^{pk}")
            if ck % p**v:
                raise NonIntegral(f"coefficient {k} not divisible by {p}^{v}")
            newp = pk - v
            kk = k // p**v
            mk = p**newp
            out.append((ck // p**v) * pow(kk, -1, mk) % mk if mk > 1 else 0)
            prec.append(newp)
        return TruncSeries.padic(out, p, prec)

    def evaluate(self, x):
        """Horner evaluation of the stored polynomial at a p-adic point."""
        self._need_padic()
        if not isinstance(x, PadicNumber):
            x = reduce(x, self.prime, self.max_prec)
        N = min(self.min_prec, x.precision)
        m = self.prime**N
        xr = x.residue % m
        acc = 0
        for c in reversed(self.residues()):
            acc = (acc * xr + c) % m
        return PadicNumber(self.prime, N, acc)

    # comparison -----------------------------------------------------------
    def equals(self, other: "TruncSeries") -> bool:
        """Exact equality for rational series; residue+precision equality for p-adic ones."""
        if self.domain != other.domain or self.T != other.T:
            return False
        if not self.is_padic:
            return self.coeffs == other.coeffs
        return bool(
            self.prime == other.prime
            and np.array_equal(self.prec, other.prec)
            and all(int(x) == int(y) for x, y in zip(self.coeffs, other.coeffs))
        )

    def agrees_with(self, other: "TruncSeries", N: int, upto: int | None = None) -> bool:
        """True iff coefficients agree mod p^N on degrees < upto."""
        return self.first_disagreement(other, N, upto) is None

    def first_disagreement(self, other: "TruncSeries", N: int, upto: int | None = None) -> int | None:
        self._need_padic()
        other._need_padic()
        upto = min(self.T, other.T) if upto is None else upto
        if upto > min(self.T, other.T):
            raise TruncationExceeded("comparison window exceeds truncation")
        if upto and (self.prec[:upto].min() < N or other.prec[:upto].min() < N):
            raise ValueError(f"coefficients not known to precision {N}")
        m = self.prime**N
        a = np.asarray(self.coeffs[:upto]) % m
        b = np.asarray(other.coeffs[:upto]) % m
        diff = np.nonzero(a != b)[0]
        return int(diff[0]) if len(diff) else None

    def is_zero(self) -> bool:
        if not self.is_padic:
            return all(c == 0 for c in self.coeffs)
        return not any(int(x) for x in self.coeffs)

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        if not self.is_padic:
            return {"domain": "rational", "T": self.T, "coeffs": [format_rational(c) for c in self.coeffs]}
        return {"domain": "padic", "T": self.T, "coeffs": [self[k].to_dict() for k in range(self.T)]}

    @classmethod
    def from_dict(cls, d: dict) -> "TruncSeries":
        if d["domain"] == "rational":
            s = cls.rational(parse_rational(c) for c in d["coeffs"])
        elif d["domain"] == "padic":
            s = cls.from_padic_numbers([PadicNumber.from_dict(c) for c in d["coeffs"]])
        else:
            raise ValueError(f"unknown domain {d['domain']!r}")
        if s.T != int(d["T"]):
            raise ValueError("T does not match number of coefficients")
        return s


# ---------------------------------------------------------------------------
# small helpers


def _dt(m: int):
    return np.int64 if m < 2**31 else object


def _reduce_each(arr: np.ndarray, p: int, prec: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return arr
    top = int(prec.max())
    if p**top < _INT64_SAFE and arr.dtype != object:
        mods = np.power(np.int64(p), prec.astype(np.int64))
        return arr % mods
    return np.array([int(x) % p ** int(k) for x, k in zip(arr, prec)], dtype=object)


def _scalar_mul(arr: np.ndarray, c: int, m: int) -> np.ndarray:
    if m < 2**31:
        return arr.astype(np.int64) * c % m
    return np.array([int(x) * c % m for x in arr], dtype=object)


def _scalar_mul_vec(arr: np.ndarray, vec: np.ndarray, m: int) -> np.ndarray:
    if m < 2**31:
        return arr.astype(np.int64) * np.asarray(vec, dtype=np.int64) % m
    return np.array([int(x) * int(y) % m for x, y in zip(arr, vec)], dtype=object)


def _powers_mod(c: int, n: int, m: int) -> np.ndarray:
    out = []
    x = 1 % m
    for _ in range(n):
        out.append(x)
        x = x * c % m
    return np.array(out, dtype=_dt(m))


def _rational_mul(a: Sequence[Fraction], b: Sequence[Fraction], T: int) -> list[Fraction]:
    out = [Fraction(0)] * T
    bnz = [(j, y) for j, y in enumerate(b[:T]) if y]
    for i, x in enumerate(a[:T]):
        if not x:
            continue
        for j, y in bnz:
            if i + j >= T:
                break
            out[i + j] += x * y
    return out


def _rational_inv(a: Sequence[Fraction], T: int) -> list[Fraction]:
    inv0 = 1 / a[0]
    out = [inv0]
    nz = [(j, y) for j, y in enumerate(a) if y and j]
    for k in range(1, T):
        s = Fraction(0)
        for j, y in nz:
            if j > k:
                break
            s += y * out[k - j]
        out.append(-s * inv0)
    return out


def geometric(T: int) -> TruncSeries:
    """1/(1 - t) over Q."""
    return TruncSeries.rational([1] * T)


def polynomial(coeffs: Sequence, T: int) -> TruncSeries:
    """Exact polynomial padded to a rational series of length T."""
    out = [as_fraction(c) for c in coeffs[:T]]
    return TruncSeries.rational(out + [Fraction(0)] * (T - len(out)))
