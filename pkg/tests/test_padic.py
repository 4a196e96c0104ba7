from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from dworkhg.errors import NonIntegral, NotOrdinary, UnitRequired
from dworkhg.padic import (
    PadicNumber,
    dwork_orbit,
    dwork_prime,
    format_rational,
    hensel_quadratic,
    iwasawa_log,
    parse_rational,
    psi_tilde,
    rational_reconstruct,
    reduce,
    teichmuller,
)

PRIMES = [3, 5, 7, 11, 13]


def p_integral_rationals(p, nonunit_ok=True):
    dens = st.integers(1, 60).filter(lambda d: d % p)
    nums = st.integers(-200, 200)
    q = st.builds(Fraction, nums, dens)
    return q if nonunit_ok else q.filter(lambda x: x.numerator % p)


# ---------------------------------------------------------------------------
# examples


def test_reduce_examples():
    assert reduce(Fraction(1, 3), 5, 2).residue == 17
    assert reduce(0, 7, 3).residue == 0
    with pytest.raises(NonIntegral):
        reduce(Fraction(1, 5), 5, 3)


def test_dwork_prime_examples():
    assert dwork_prime(Fraction(1, 2), 5) == Fraction(1, 2)
    assert dwork_prime(Fraction(1, 3), 5) == Fraction(2, 3)
    assert dwork_prime(Fraction(1, 3), 7) == Fraction(1, 3)
    with pytest.raises(NonIntegral):
        dwork_prime(Fraction(1, 5), 5)


def test_dwork_orbit_examples():
    h = Fraction(1, 2)
    assert dwork_orbit((h, h), 5) == ([(h, h)], 1)
    orb, m = dwork_orbit((Fraction(1, 3), Fraction(2, 3)), 5)
    assert m == 2 and orb == [(Fraction(1, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1, 3))]
    assert dwork_orbit((Fraction(1, 6), Fraction(5, 6)), 7)[1] == 1


def test_teichmuller_examples():
    assert teichmuller(1, 7, 4).residue == 1
    assert teichmuller(2, 5, 2).residue == 7
    assert teichmuller(4, 5, 2).residue == 24
    with pytest.raises(UnitRequired):
        teichmuller(10, 5, 2)


def test_iwasawa_log_examples():
    assert iwasawa_log(PadicNumber(5, 4, 1)).is_zero()
    assert iwasawa_log(teichmuller(2, 5, 4)).is_zero()
    # 6 = 1 + 5: log = 5 - 25/2 + 125/3 - ... ≡ 5 - 75 mod 125
    assert iwasawa_log(PadicNumber(5, 3, 6)).residue == 55
    with pytest.raises(UnitRequired):
        iwasawa_log(PadicNumber(5, 3, 10))


def test_psi_tilde_examples():
    assert psi_tilde(1, 5, 3).residue == 0
    assert psi_tilde(2, 5, 3).residue == 1
    # oracle: partial sums of 1/k over k < n, p ∤ k, for the least n ≡ 1/2 mod 5^M
    m = 125
    vals = []
    for M in (5, 6):
        n = reduce(Fraction(1, 2), 5, M).residue
        vals.append(sum(pow(k, -1, m) for k in range(1, n) if k % 5) % m)
    assert vals[0] == vals[1] == psi_tilde(Fraction(1, 2), 5, 3).residue == 89


def test_psi_tilde_rejects():
    with pytest.raises(NonIntegral):
        psi_tilde(Fraction(1, 5), 5, 2)
    with pytest.raises(ValueError):
        psi_tilde(Fraction(1, 3), 2, 2)


def test_hensel_examples():
    assert hensel_quadratic(-6, 25, 5, 2).residue == 19
    assert hensel_quadratic(1, 5, 5, 2).residue == 21
    with pytest.raises(NotOrdinary):
        hensel_quadratic(5, 25, 5, 3)


def test_reconstruct_examples():
    assert rational_reconstruct(reduce(Fraction(1, 3), 5, 6), 100) == Fraction(1, 3)
    assert rational_reconstruct(reduce(-6, 5, 6), 100) == -6


def test_reconstruct_none_for_large_height():
    # 2 perturbed by a unit of large height: no n/d with |n|, d <= 10 matches
    m = 5**6
    x = PadicNumber(5, 6, (2 + 5 * 2417) % m)
    hits = [
        Fraction(n, d)
        for n in range(-10, 11)
        for d in range(1, 11)
        if d % 5 and (n - d * x.residue) % m == 0
    ]
    assert hits == []
    assert rational_reconstruct(x, 10) is None


def test_serialization_round_trip():
    x = PadicNumber(7, 4, 1234)
    d = x.to_dict()
    assert d == {"p": 7, "precision": 4, "digits": [2, 1, 4, 3]}
    assert PadicNumber.from_dict(d) == x
    assert format_rational(Fraction(-3, 4)) == "-3/4"
    assert parse_rational("-3/4") == Fraction(-3, 4)


def test_valuation_caps_at_precision():
    assert PadicNumber(5, 3, 0).valuation() == 3
    assert PadicNumber(5, 3, 50).valuation() == 2


def test_division_by_p_lowers_precision():
    x = PadicNumber(5, 4, 5 * 17)
    y = x.divide_by_p(1)
    assert y.precision == 3 and y.residue == 17
    with pytest.raises(ValueError):
        PadicNumber(5, 4, 7).divide_by_p(1)


def test_mixed_precision_takes_minimum():
    x = PadicNumber(5, 4, 7)
    y = PadicNumber(5, 2, 3)
    assert (x + y).precision == 2
    assert (x * y).precision == 2


# ---------------------------------------------------------------------------
# properties


@st.composite
def padic_pairs(draw):
    p = draw(st.sampled_from(PRIMES))
    N = draw(st.integers(1, 5))
    x = draw(st.integers(0, p ** (N + 2) - 1))
    y = draw(st.integers(0, p ** (N + 2) - 1))
    return p, N, x, y


@given(padic_pairs())
def test_precision_soundness_arithmetic(case):
    p, N, x, y = case
    lo = [PadicNumber(p, N, x), PadicNumber(p, N, y)]
    hi = [PadicNumber(p, N + 2, x), PadicNumber(p, N + 2, y)]
    assert (hi[0] + hi[1]).reduce_to(N) == lo[0] + lo[1]
    assert (hi[0] - hi[1]).reduce_to(N) == lo[0] - lo[1]
    assert (hi[0] * hi[1]).reduce_to(N) == lo[0] * lo[1]
    if x % p:
        assert hi[0].inverse().reduce_to(N) == lo[0].inverse()
        assert iwasawa_log(hi[0]).reduce_to(N) == iwasawa_log(lo[0])
        assert teichmuller(x, p, N + 2).reduce_to(N) == teichmuller(x, p, N)


@given(st.sampled_from(PRIMES), st.integers(1, 6))
def test_teichmuller_is_root_of_unity(p, N):
    for u in range(1, p):
        w = teichmuller(u, p, N)
        assert w.residue % p == u
        assert (w ** (p - 1)).residue == 1 % p**N


@given(padic_pairs())
def test_log_homomorphism(case):
    p, N, x, y = case
    assume(x % p and y % p)
    a, b = PadicNumber(p, N, x), PadicNumber(p, N, y)
    assert iwasawa_log(a * b) == iwasawa_log(a) + iwasawa_log(b)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_dwork_prime_bijection(p):
    for n in range(2, 25):
        if n % p == 0:
            continue
        dom = {Fraction(j, n) for j in range(1, n)}
        img = {dwork_prime(x, p) for x in dom}
        assert img == dom
        for x in dom:
            k = p * dwork_prime(x, p) - x
            assert k.denominator == 1 and 0 <= k < p


@given(st.data())
def test_psi_tilde_difference_identity(data):
    p = data.draw(st.sampled_from([3, 5, 7, 11, 13]))
    a = data.draw(p_integral_rationals(p, nonunit_ok=False))
    N = data.draw(st.integers(1, 3))
    lhs = psi_tilde(a + 1, p, N) - psi_tilde(a, p, N)
    assert lhs == reduce(1 / a, p, N)


@given(st.data())
def test_psi_tilde_precision_soundness(data):
    p = data.draw(st.sampled_from([3, 5, 7]))
    a = data.draw(p_integral_rationals(p))
    N = data.draw(st.integers(1, 3))
    assert psi_tilde(a, p, N + 2).reduce_to(N) == psi_tilde(a, p, N)


@given(st.data())
def test_hensel_contract(data):
    p = data.draw(st.sampled_from(PRIMES))
    N = data.draw(st.integers(1, 6))
    trace = data.draw(st.integers(-1000, 1000).filter(lambda t: t % p))
    norm = p ** data.draw(st.integers(1, 2)) * data.draw(st.integers(1, 30))
    u = hensel_quadratic(trace, norm, p, N)
    m = p**N
    assert (u.residue**2 - trace * u.residue + norm) % m == 0
    assert (u.residue - trace) % p == 0
    other = (trace - u.residue) % m
    assert (u.residue + other - trace) % m == 0
    assert (u.residue * other - norm) % m == 0
    assert other % p == 0


@given(st.data())
def test_reconstruction_round_trip(data):
    p = data.draw(st.sampled_from(PRIMES))
    N = data.draw(st.integers(4, 10))
    H = int((p**N // 2) ** 0.5)
    d = data.draw(st.integers(1, max(1, H)).filter(lambda v: v % p))
    n = data.draw(st.integers(-H, H))
    q = Fraction(n, d)
    assume(abs(q.numerator) <= H and q.denominator <= H)
    assert rational_reconstruct(reduce(q, p, N), H) == q
