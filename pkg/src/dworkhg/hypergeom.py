"""Hypergeometric series and Dwork-type p-adic hypergeometric functions.

Everything p-adic here is computed from truncations:

* Dwork's function F_a(t) / F_{a'}(t^sigma) is, modulo p^n, the quotient of
  the two truncations below degree p^n.
* The logarithmic-type function G(t) / F_a(t) is, modulo p^n, the quotient
  [G]_{<p^n} / [F_a]_{<p^n}, where
  G(t) = sum psi_p(a_i) - log(c)/p + int_0^t (F_a(s) - F_{a'}(c s^p)) ds/s.

The quotients are genuine power series, so "level n" results can be
expanded past degree p^n; :func:`dwork_ratio_expansion` and
:func:`log_hg_expansion` do that and are what the congruence checks compare.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadFiber,
    BadFrobeniusConstant,
    BadHasse,
    NonIntegral,
    PrecisionWindowExceeded,
    SmallPrime,
)
from .operators import DifferentialOperator, RationalFunction
from .padic import (
    PadicNumber,
    as_fraction,
    dwork_orbit,
    dwork_prime,
    format_rational,
    iwasawa_log,
    is_p_integral,
    ord_p,
    psi_tilde,
    reduce,
)
from .series import TruncSeries, convolve_mod, inverse_mod

# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class HGParams:
    """The parameter tuple a = (a_0, ..., a_d)."""

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(as_fraction(x) for x in self.a))
        if not self.a:
            raise ValueError("need at least one parameter")

    @classmethod
    def coerce(cls, a) -> "HGParams":
        return a if isinstance(a, HGParams) else cls(tuple(a))

    @classmethod
    def from_scheme(cls, i_list: Sequence[int], n_list: Sequence[int]) -> "HGParams":
        """a_k = 1 - i_k/n_k for the eigenspace labelled (i_0, ..., i_d)."""
        if len(i_list) != len(n_list):
            raise ValueError("index and exponent lists differ in length")
        for i, n in zip(i_list, n_list):
            if not 0 < i < n:
                raise ValueError(f"need 0 < i < n, got i={i}, n={n}")
        return cls(tuple(1 - Fraction(i, n) for i, n in zip(i_list, n_list)))

    @property
    def d(self) -> int:
        return len(self.a) - 1

    @property
    def dual(self) -> "HGParams":
        return HGParams(tuple(1 - x for x in self.a))

    def check_integral(self, p: int) -> None:
        for x in self.a:
            if not is_p_integral(x, p):
                raise NonIntegral(f"{x} is not {p}-integral")

    def dwork_prime(self, p: int) -> "HGParams":
        self.check_integral(p)
        return HGParams(tuple(dwork_prime(x, p) for x in self.a))

    def orbit(self, p: int) -> list["HGParams"]:
        self.check_integral(p)
        orb, _ = dwork_orbit(self.a, p)
        return [HGParams(o) for o in orb]

    def orbit_length(self, p: int) -> int:
        return len(self.orbit(p))

    def __iter__(self):
        return iter(self.a)

    def __len__(self) -> int:
        return len(self.a)

    def __str__(self) -> str:
        return "(" + ",".join(format_rational(x) for x in self.a) + ")"

    def to_list(self) -> list[str]:
        return [format_rational(x) for x in self.a]


@dataclass(frozen=True)
class FrobeniusSpec:
    """sigma(t) = c * t^p with a rational constant c ≡ 1 mod p."""

    p: int
    c: Fraction = Fraction(1)
    tag: str = "c = 1"

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        if self.p < 3:
            raise SmallPrime("p = 2 is not supported")
        if not is_p_integral(self.c, self.p) or reduce(self.c, self.p, 1).residue != 1:
            raise BadFrobeniusConstant(f"c = {self.c} is not ≡ 1 mod {self.p}")

    @classmethod
    def standard(cls, p: int) -> "FrobeniusSpec":
        return cls(p, Fraction(1), "c = 1")

    @classmethod
    def for_fiber(cls, alpha, p: int) -> "FrobeniusSpec":
        """c = alpha^(1-p), the Frobenius fixing the Teichmüller point over alpha."""
        alpha = as_fraction(alpha)
        if alpha == 0 or not is_p_integral(alpha, p) or not is_p_integral(1 / alpha, p):
            raise BadFiber(f"alpha = {alpha} is not a {p}-adic unit")
        return cls(p, alpha ** (1 - p), "c = alpha^(1-p)")

    def c_padic(self, N: int) -> PadicNumber:
        return reduce(self.c, self.p, N)

    def to_dict(self) -> dict:
        return {"p": self.p, "c": format_rational(self.c), "tag": self.tag}


def _params(a) -> HGParams:
    return HGParams.coerce(a)


def _fs(fs, p=None) -> FrobeniusSpec:
    if isinstance(fs, FrobeniusSpec):
        return fs
    return FrobeniusSpec(p, as_fraction(fs), "custom")


# ---------------------------------------------------------------------------
# the series F_a


def pochhammer(alpha, n: int) -> Fraction:
    """(alpha)_n = alpha (alpha+1) ... (alpha+n-1)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    alpha = as_fraction(alpha)
    out = Fraction(1)
    for k in range(n):
        out *= alpha + k
    return out


def hg_series(a, T: int) -> TruncSeries:
    """F_a(t) = sum_n prod_k (a_k)_n / n! t^n over Q, modulo t^T."""
    a = _params(a)
    if T < 1:
        raise ValueError("T must be at least 1")
    out = [Fraction(1)]
    c = Fraction(1)
    for n in range(T - 1):
        for x in a:
            c *= (x + n) / (n + 1)
        out.append(c)
    return TruncSeries.rational(out)


@lru_cache(maxsize=256)
def _hg_mod_cached(a: tuple, p: int, M: int, T: int) -> np.ndarray:
    # track A_n = p^v * u exactly in valuation and modulo p^M in the unit part
    m = p**M
    out = np.zeros(T, dtype=np.int64 if m < 2**62 else object)
    if T == 0:
        return out
    nums = [(x.numerator, x.denominator) for x in a]
    v = 0
    u = 1
    out[0] = 1 % m
    for n in range(T - 1):
        step_num = 1
        step_den = 1
        for num, den in nums:
            f = num + n * den
            if f == 0:
                out.setflags(write=False)
                return out
            step_num *= f
            step_den *= den * (n + 1)
        w = ord_p(step_num, p) - ord_p(step_den, p)
        step_num //= p ** ord_p(step_num, p)
        step_den //= p ** ord_p(step_den, p)
        v += w
        u = u * (step_num % m) * pow(step_den % m, -1, m) % m
        if v < 0:
            raise NonIntegral("hypergeometric coefficient is not p-integral")
        out[n + 1] = u * p**v % m if v < M else 0
    out.setflags(write=False)
    return out


def hg_coefficients_mod(a, p: int, M: int, T: int) -> np.ndarray:
    """Coefficients of F_a modulo p^M, degrees < T, as a read-only array."""
    a = _params(a)
    a.check_integral(p)
    return _hg_mod_cached(a.a, p, M, T)


def hg_series_padic(a, p: int, M: int, T: int) -> TruncSeries:
    return TruncSeries.padic(hg_coefficients_mod(a, p, M, T), p, M)


def hg_operator(a) -> DifferentialOperator:
    """P = D^(d+1) - t (D + a_0) ... (D + a_d)."""
    a = _params(a)
    prod = _d_poly(a.a)
    t = RationalFunction.t()
    coeffs = [-c * t for c in prod]
    coeffs[-1] = coeffs[-1] + 1
    return DifferentialOperator(tuple(coeffs))


def _d_poly(a: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients (lowest first) of (X + a_0) ... (X + a_d)."""
    prod = [Fraction(1)]
    for x in a:
        new = [Fraction(0)] * (len(prod) + 1)
        for i, c in enumerate(prod):
            new[i] += x * c
            new[i + 1] += c
        prod = new
    return prod


def elementary_symmetric(a: Sequence) -> list[Fraction]:
    """[s_1, ..., s_{d+1}] with (X+a_0)...(X+a_d) = X^{d+1} + s_1 X^d + ... ."""
    prod = _d_poly([as_fraction(x) for x in a])
    return list(reversed(prod[:-1]))


def h_polynomial(a, p: int) -> np.ndarray:
    """Product over the Dwork orbit of [F_b]_{<p} reduced mod p."""
    a = _params(a)
    out = np.array([1], dtype=np.int64)
    for b in a.orbit(p):
        f = np.asarray(hg_coefficients_mod(b, p, 1, p), dtype=np.int64)
        out = np.convolve(out, f) % p
    return np.trim_zeros(out, "b")


def eval_poly_mod(coeffs: Iterable[int], x: int, m: int) -> int:
    acc = 0
    for c in reversed(list(coeffs)):
        acc = (acc * x + int(c)) % m
    return acc


def hasse_value(a, p: int, alpha) -> int:
    """h_a(alpha) mod p."""
    x = reduce(alpha, p, 1).residue
    return eval_poly_mod(h_polynomial(a, p), x, p)


# ---------------------------------------------------------------------------
# Dwork's function


def _frob_poly_mod(a: HGParams, fs: FrobeniusSpec, M: int, L: int) -> np.ndarray:
    """[F_a(c t^p)]_{<L} modulo p^M as an array of length L."""
    p = fs.p
    n = (L - 1) // p + 1 if L > 0 else 0
    coeffs = hg_coefficients_mod(a, p, M, n)
    s = TruncSeries.padic(coeffs, p, M).frobenius_substitute(fs.c_padic(M), p, L)
    return np.asarray(s.coeffs)


def _ratio_mod(num: np.ndarray, den: np.ndarray, m: int, T: int) -> np.ndarray:
    dtype = np.int64 if m < 2**31 else object
    num = np.asarray(num).astype(dtype)
    den = np.asarray(den).astype(dtype)
    num = _pad(num, T)
    den = _pad(den, T)
    return convolve_mod(num, inverse_mod(den, m, T), m, T)


def _pad(arr: np.ndarray, T: int) -> np.ndarray:
    if len(arr) >= T:
        return arr[:T]
    out = np.zeros(T, dtype=arr.dtype)
    out[: len(arr)] = arr
    return out


def dwork_ratio_expansion(a, fs, n: int, T: int) -> TruncSeries:
    """Level-n quotient [F_a]_{<p^n} / [F_{a'}(c t^p)]_{<p^n} mod p^n, expanded to t^T.

    The quotient of the two polynomials is a power series; no window
    restriction applies here.  See :func:`dwork_ratio` for the checked
    version.
    """
    a = _params(a)
    fs = _fs(fs)
    if n < 1:
        raise ValueError("level n must be at least 1")
    p = fs.p
    L = p**n
    num = hg_coefficients_mod(a, p, n, L)
    den = _frob_poly_mod(a.dwork_prime(p), fs, n, L)
    return TruncSeries.padic(_ratio_mod(num, den, p**n, T), p, n)


def dwork_ratio(a, fs, n: int, T: int | None = None) -> TruncSeries:
    """Dwork's function F_a(t)/F_{a'}(t^sigma) modulo p^n on degrees < T <= p^n."""
    fs = _fs(fs)
    T = fs.p**n if T is None else T
    if T > fs.p**n:
        raise PrecisionWindowExceeded(f"T = {T} exceeds p^n = {fs.p ** n}")
    return dwork_ratio_expansion(a, fs, n, T)


# ---------------------------------------------------------------------------
# logarithmic type


def log_constant(a, fs, N: int) -> PadicNumber:
    """sum psi_p(a_i) - log(c)/p, modulo p^N."""
    a = _params(a)
    fs = _fs(fs)
    p = fs.p
    total = PadicNumber(p, N, 0)
    for x in a:
        total = total + psi_tilde(x, p, N)
    logc = iwasawa_log(fs.c_padic(N + 1))
    return total - logc.divide_by_p(1)


def g_sigma(a, fs, N: int, T: int) -> TruncSeries:
    """G(t) modulo p^N on degrees < T.

    Coefficient k of the integrand is needed modulo p^(N + ord_p(k)); the
    division by k then leaves exactly N digits everywhere.
    """
    a = _params(a)
    fs = _fs(fs)
    p = fs.p
    if T < 1:
        raise ValueError("T must be at least 1")
    extra = 0
    while p ** (extra + 1) <= T - 1:
        extra += 1
    M = N + extra
    f = TruncSeries.padic(hg_coefficients_mod(a, p, M, T), p, M)
    g = TruncSeries.padic(_frob_poly_mod(a.dwork_prime(p), fs, M, T), p, M)
    integral = (f - g).dlog_integral().reduce_prec(N)
    res = np.asarray(integral.coeffs).copy()
    res[0] = log_constant(a, fs, N).residue
    return TruncSeries.padic(res, p, N)


def log_hg_expansion(a, fs, n: int, T: int) -> TruncSeries:
    """Level-n quotient [G]_{<p^n} / [F_a]_{<p^n} mod p^n, expanded to t^T."""
    a = _params(a)
    fs = _fs(fs)
    p = fs.p
    if p < 3:
        raise SmallPrime("p = 2 is not supported")
    L = p**n
    G = g_sigma(a, fs, n, L)
    F = hg_coefficients_mod(a, p, n, L)
    return TruncSeries.padic(_ratio_mod(np.asarray(G.coeffs), F, p**n, T), p, n)


def log_hg(a, fs, n: int) -> TruncSeries:
    """The logarithmic-type function G/F_a modulo p^n on degrees < p^n."""
    fs = _fs(fs)
    return log_hg_expansion(a, fs, n, fs.p**n)


def log_hg_parts(a, fs, n: int) -> tuple[TruncSeries, TruncSeries]:
    """The polynomials ([G]_{<p^n}, [F_a]_{<p^n}) modulo p^n."""
    a = _params(a)
    fs = _fs(fs)
    p = fs.p
    L = p**n
    return g_sigma(a, fs, n, L), TruncSeries.padic(hg_coefficients_mod(a, p, n, L), p, n)


def check_fiber(a, alpha, p: int, allow_one: bool = False) -> None:
    """Raise unless alpha is a good evaluation point for a at p."""
    a = _params(a)
    if p < 3 or p <= a.d + 1:
        raise SmallPrime(f"need p > d+1 = {a.d + 1} and p >= 3, got p = {p}")
    alpha = as_fraction(alpha)
    if not is_p_integral(alpha, p):
        raise BadFiber(f"alpha = {alpha} is not {p}-integral")
    r = reduce(alpha, p, 1).residue
    if r == 0 or (r == 1 and not allow_one):
        raise BadFiber(f"alpha = {alpha} ≡ {r} mod {p}")
    for b in a.orbit(p):
        if hasse_value(b, p, alpha) == 0:
            raise BadHasse(f"h_{b}({alpha}) ≡ 0 mod {p}")


def eval_log_hg(a, alpha, p: int, n: int, fs: FrobeniusSpec | None = None, allow_one: bool = False) -> PadicNumber:
    """Value of G/F_a at t = alpha modulo p^n.

    The default Frobenius is sigma(t) = alpha^(1-p) t^p.  The value is the
    rational function [G]_{<p^n}(alpha) / [F_a]_{<p^n}(alpha); the
    denominator is a unit exactly when the Hasse condition holds.
    ``allow_one`` admits alpha ≡ 1 mod p (used with sigma(t) = t^p at t = 1).
    """
    a = _params(a)
    check_fiber(a, alpha, p, allow_one=allow_one)
    fs = FrobeniusSpec.for_fiber(alpha, p) if fs is None else fs
    G, F = log_hg_parts(a, fs, n)
    x = reduce(alpha, p, n)
    num = G.evaluate(x)
    den = F.evaluate(x)
    if not den.is_unit():
        raise BadHasse(f"[F_a](alpha) is not a unit mod {p}")
    return num / den


def eval_dwork_ratio(a, alpha, p: int, n: int, fs: FrobeniusSpec | None = None) -> PadicNumber:
    """Value of Dwork's function at t = alpha modulo p^n (rational-function evaluation)."""
    a = _params(a)
    check_fiber(a, alpha, p)
    fs = FrobeniusSpec.standard(p) if fs is None else fs
    L = p**n
    x = reduce(alpha, p, n)
    num = TruncSeries.padic(hg_coefficients_mod(a, p, n, L), p, n).evaluate(x)
    den = TruncSeries.padic(_frob_poly_mod(a.dwork_prime(p), fs, n, L), p, n).evaluate(x)
    return num / den


# ---------------------------------------------------------------------------
# exact-rational references


def exact_dwork_quotient(a, c, p: int, T: int) -> TruncSeries:
    """F_a(t) / F_{a'}(c t^p) over Q, modulo t^T."""
    a = _params(a)
    f = hg_series(a, T)
    g = hg_series(a.dwork_prime(p), (T - 1) // p + 1).frobenius_substitute(as_fraction(c), p, T)
    return f / g


def exact_log_integral(a, c, p: int, T: int) -> TruncSeries:
    """int_0^t (F_a - F_{a'}(c s^p)) ds/s over Q, modulo t^T (no constant)."""
    a = _params(a)
    f = hg_series(a, T)
    g = hg_series(a.dwork_prime(p), (T - 1) // p + 1).frobenius_substitute(as_fraction(c), p, T)
    return (f - g).dlog_integral()


def derivative_ratio_mod(a, p: int, n: int, j: int, T: int, truncated: bool) -> TruncSeries:
    """(d/dt)^j F / F modulo p^n to degree T, with F = F_a or F = [F_a]_{<p^n}."""
    a = _params(a)
    M = n
    L = T + j if not truncated else min(T + j, p**n)
    f = TruncSeries.padic(hg_coefficients_mod(a, p, M, L), p, M).extend(T + j)
    g = f
    for _ in range(j):
        g = g.derivative()
    g = g.truncate_below(T)
    return g / f.truncate_below(T)
