"""The unit-root vector of the hypergeometric Gauss-Manin system.

With basis omega, D omega, ..., D^d omega and
D^{d+1} omega = -(q_d D^d + ... + q_0) omega, the horizontal section
y_0 omega + ... + y_d D^d omega is obtained from y_d = (1-t) F_{a-check}(t)
by the descending recursion y_i = q_{i+1} y_d - D(y_{i+1}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BadFiber, BadHasse, OrbitMismatch
from .hypergeom import HGParams, elementary_symmetric, hasse_value, hg_coefficients_mod, hg_operator, hg_series
from .operators import DifferentialOperator, RationalFunction, operator_mul
from .padic import PadicNumber, as_fraction, ord_p, reduce, teichmuller
from .series import TruncSeries


def q_coeffs(a) -> tuple[RationalFunction, ...]:
    """(q_0, ..., q_d) with q_{d-m} = -s_{m+1} t / (1 - t)."""
    a = HGParams.coerce(a)
    s = elementary_symmetric(a.a)
    d = a.d
    base = RationalFunction((Fraction(1),), 1, -1)
    q = [None] * (d + 1)
    for m in range(d + 1):
        q[d - m] = -s[m] * base
    return tuple(q)


@dataclass(frozen=True)
class GaussManinModel:
    """The connection matrix data for the eigenspace with parameters a."""

    a: HGParams
    q: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "a", HGParams.coerce(self.a))
        if not self.q:
            object.__setattr__(self, "q", q_coeffs(self.a))

    @property
    def d(self) -> int:
        return self.a.d

    @property
    def basis_labels(self) -> list[str]:
        return ["omega"] + [f"D^{k} omega" if k > 1 else "D omega" for k in range(1, self.d + 1)]

    def monic_operator(self) -> DifferentialOperator:
        """D^{d+1} + q_d D^d + ... + q_0."""
        return DifferentialOperator(tuple(self.q) + (RationalFunction.const(1),))

    def adjoint_operator(self) -> DifferentialOperator:
        """P = D^{d+1} - D^d * q_d + ... + (-1)^{d+1} q_0, the equation for y_d."""
        d = self.d
        D = DifferentialOperator.D()
        P = D ** (d + 1)
        for k in range(d + 1):
            term = operator_mul(D**k, DifferentialOperator.multiplication(self.q[k]))
            P = P + (-1) ** (d + 1 - k) * term
        return P


def adjoint_operator(a) -> DifferentialOperator:
    return GaussManinModel(a).adjoint_operator()


@dataclass(frozen=True)
class UnitRootVector:
    """Coordinates y_0, ..., y_d as exact-rational series.

    ``normalization`` is "y" for the raw vector or "eta" after division
    by F_{a-check}.
    """

    y: tuple
    normalization: str = "y"

    @property
    def d(self) -> int:
        return len(self.y) - 1


def unit_root_vector(a, T: int) -> UnitRootVector:
    """Solve the recursion from y_d = (1 - t) F_{a-check} modulo t^T."""
    if T < 2:
        raise ValueError("T must be at least 2")
    a = HGParams.coerce(a)
    return _vector_from_top(a, hg_series(a.dual, T))


def _vector_from_top(a: HGParams, F: TruncSeries) -> UnitRootVector:
    T = F.T
    q = [r.series(T) for r in q_coeffs(a)]
    if F.is_padic:
        q = [s.to_padic(F.prime, F.max_prec) for s in q]
        omt = TruncSeries.padic([1, F.prime**F.max_prec - 1] + [0] * (T - 2), F.prime, F.max_prec)
    else:
        omt = TruncSeries.rational([1, -1] + [0] * (T - 2))
    d = a.d
    y = [None] * (d + 1)
    y[d] = omt * F
    for i in range(d - 1, -1, -1):
        y[i] = q[i + 1] * y[d] - y[i + 1].theta()
    return UnitRootVector(tuple(y))


def normalized_vector(a, T: int) -> UnitRootVector:
    """eta = y / F_{a-check}; its top coordinate is exactly 1 - t."""
    a = HGParams.coerce(a)
    v = unit_root_vector(a, T)
    inv = hg_series(a.dual, T).invert()
    return UnitRootVector(tuple(yi * inv for yi in v.y), "eta")


@dataclass
class KernelReport:
    ok: bool
    coordinate: int | None = None
    degree: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_kernel(model, v: UnitRootVector, T: int | None = None) -> KernelReport:
    """Check that D(sum z_k D^k omega) = 0 coordinatewise modulo t^(T-1).

    The conditions are z_{i-1} + D(z_i) - q_i z_d = 0 for 1 <= i <= d and
    D(z_0) - q_0 z_d = 0 (coordinate 0).
    """
    model = model if isinstance(model, GaussManinModel) else GaussManinModel(model)
    z = v.y
    T = z[0].T if T is None else T
    if T < 3:
        raise ValueError("T must be at least 3")
    L = T - 1
    q = [r.series(z[0].T) for r in model.q]
    d = model.d
    exprs = []
    exprs.append(z[0].theta() - q[0] * z[d])
    for i in range(1, d + 1):
        exprs.append(z[i - 1] + z[i].theta() - q[i] * z[d])
    for k, e in enumerate(exprs):
        for deg in range(min(L, e.T)):
            if e.coeffs[deg] != 0:
                return KernelReport(False, k, deg)
    return KernelReport(True)


# ---------------------------------------------------------------------------
# integrality


@dataclass
class IntegralityReport:
    a: HGParams
    p: int
    n: int
    T: int
    bad: list = field(default_factory=list)  # (coordinate, degree, valuation)
    congruence_ok: bool = True
    first_mismatch: tuple | None = None

    @property
    def ok(self) -> bool:
        return not self.bad and self.congruence_ok

    def to_dict(self) -> dict:
        return {
            "a": self.a.to_list(),
            "p": self.p,
            "n": self.n,
            "T": self.T,
            "bad": [list(b) for b in self.bad],
            "congruence_ok": self.congruence_ok,
            "ok": self.ok,
        }


def integrality_check(a, p: int, n: int, T: int) -> IntegralityReport:
    """Certify that every y_i / F_{a-check} is p-integral to degree T.

    Two checks: exact p-integrality of the rational coefficients, and the
    congruence between y_i / F_{a-check} and the same quotient built from
    the truncation [F_{a-check}]_{<p^n}, modulo p^n, on all degrees < T.
    """
    a = HGParams.coerce(a)
    if T > p**n:
        raise ValueError(f"T = {T} exceeds p^n = {p ** n}")
    rep = IntegralityReport(a, p, n, T)
    eta = normalized_vector(a, T)
    for i, yi in enumerate(eta.y):
        for k, c in enumerate(yi.coeffs):
            if c.denominator % p == 0:
                rep.bad.append((i, k, -ord_p(c.denominator, p)))
    if rep.bad:
        rep.congruence_ok = False
        return rep
    Fd = a.dual
    trunc = TruncSeries.padic(hg_coefficients_mod(Fd, p, n, T), p, n)
    approx = _vector_from_top(a, trunc)
    inv = trunc.invert()
    for i, yi in enumerate(eta.y):
        lhs = yi.to_padic(p, n)
        rhs = approx.y[i] * inv
        k = lhs.first_disagreement(rhs, n)
        if k is not None:
            rep.congruence_ok = False
            rep.first_mismatch = (i, k)
            break
    return rep


# ---------------------------------------------------------------------------
# Frobenius eigenvalue at Teichmüller points


def frobenius_unit_eigenvalue(a, a_hat: int, p: int, m: int, N: int) -> PadicNumber:
    """Unit eigenvalue of the p^m-th Frobenius at t = omega(a_hat).

    Computed as the product over the Dwork orbit of
    [F_b]_{<p^N}(w) / [F_{b'}]_{<p^(N-1)}(w) with w the Teichmüller lift,
    which is F_a(t)/F_a(t^(p^m)) at a point fixed by t -> t^p.
    """
    a = HGParams.coerce(a)
    orbit = a.orbit(p)
    if m % len(orbit):
        raise OrbitMismatch(f"m = {m} is not a multiple of the orbit length {len(orbit)}")
    r = a_hat % p
    if r in (0, 1):
        raise BadFiber(f"a_hat ≡ {r} mod {p}")
    for b in orbit:
        if hasse_value(b, p, r) == 0:
            raise BadHasse(f"h_{b}({r}) ≡ 0 mod {p}")
    w = teichmuller(r, p, N)
    reps = m // len(orbit)
    total = PadicNumber(p, N, 1)
    for b in orbit:
        bp = b.dwork_prime(p)
        num = TruncSeries.padic(hg_coefficients_mod(b, p, N, p**N), p, N).evaluate(w)
        den = TruncSeries.padic(hg_coefficients_mod(bp, p, N, p ** (N - 1)), p, N).evaluate(w)
        total = total * (num / den)
    return total**reps
