from fractions import Fraction

import numpy as np
import pytest

from dworkhg.errors import BadFiber, BadFrobeniusConstant, BadHasse, PrecisionWindowExceeded, SmallPrime
from dworkhg.hypergeom import (
    FrobeniusSpec,
    HGParams,
    derivative_ratio_mod,
    dwork_ratio,
    dwork_ratio_expansion,
    eval_log_hg,
    exact_dwork_quotient,
    exact_log_integral,
    g_sigma,
    h_polynomial,
    hg_coefficients_mod,
    hg_operator,
    hg_series,
    log_constant,
    log_hg,
    log_hg_expansion,
    pochhammer,
)
from dworkhg.operators import DifferentialOperator, RationalFunction, apply_operator
from dworkhg.padic import PadicNumber, psi_tilde, reduce
from dworkhg.series import TruncSeries

h = Fraction(1, 2)
GRID_A = [(h, h), (Fraction(1, 3), Fraction(2, 3)), (h, h, h), (Fraction(1, 6), Fraction(5, 6), h)]


def test_pochhammer():
    assert pochhammer(1, 5) == 120
    assert pochhammer(h, 3) == Fraction(15, 8)
    assert pochhammer(-2, 4) == 0
    assert pochhammer(Fraction(1, 3), 0) == 1


def test_hg_series_examples():
    assert hg_series((1,), 6).coeffs == tuple(Fraction(1) for _ in range(6))
    F = hg_series((h, h), 3)
    assert F.coeffs == (1, Fraction(1, 4), Fraction(9, 64))
    assert hg_series((h, h, h), 2).coeffs[1] == Fraction(1, 8)


def test_hg_coefficients_mod_matches_exact():
    for a in GRID_A:
        F = hg_series(a, 60)
        for p in (5, 7, 13):
            for M in (1, 3):
                assert list(hg_coefficients_mod(a, p, M, 60)) == F.to_padic(p, M).residues()


def test_hg_operator_examples():
    D = DifferentialOperator.D()
    t = DifferentialOperator.multiplication(RationalFunction.t())
    one = DifferentialOperator.multiplication(RationalFunction.const(1))
    assert hg_operator((1,)) == D - t * (D + one)
    half = DifferentialOperator.multiplication(RationalFunction.const(h))
    assert hg_operator((h, h)) == D * D - t * (D + half) * (D + half)


@pytest.mark.parametrize("a", [(Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 4), Fraction(3, 4), h)])
def test_hg_operator_annihilates_series(a):
    out = apply_operator(hg_operator(a), hg_series(a, 200))
    assert out.truncate_below(199).is_zero()


def test_params():
    a = HGParams.from_scheme([1, 1], [2, 3])
    assert a.a == (h, Fraction(2, 3))
    assert a.dual.a == (h, Fraction(1, 3))
    assert HGParams.coerce([h, h]).d == 1
    assert HGParams.coerce((Fraction(1, 3), Fraction(2, 3))).orbit_length(5) == 2


def test_frobenius_spec():
    assert FrobeniusSpec.standard(5).c == 1
    fs = FrobeniusSpec.for_fiber(-1, 5)
    assert fs.c == 1 and fs.tag == "c = alpha^(1-p)"
    with pytest.raises(BadFrobeniusConstant):
        FrobeniusSpec(5, Fraction(2))
    with pytest.raises(SmallPrime):
        FrobeniusSpec(2, Fraction(1))


def test_h_polynomial_examples():
    assert list(h_polynomial((h, h), 5)) == [1, 4, 1]
    assert list(h_polynomial((1,), 7)) == [1] * 7
    # orbit of length two: product of the two degree < 5 truncations
    a = (Fraction(1, 3), Fraction(2, 3))
    f = np.array(hg_coefficients_mod(a, 5, 1, 5), dtype=np.int64)
    assert list(h_polynomial(a, 5)) == list(np.trim_zeros(np.convolve(f, f) % 5, "b"))


def test_dwork_ratio_examples():
    r = dwork_ratio((1,), FrobeniusSpec.standard(7), 2)
    assert r.residues() == [1] * 7 + [0] * 42
    r = dwork_ratio((h, h), FrobeniusSpec.standard(5), 1, 5)
    assert r.residues() == [1, 4, 1, 0, 0]
    with pytest.raises(PrecisionWindowExceeded):
        dwork_ratio((h, h), FrobeniusSpec.standard(5), 1, 6)


def test_dwork_ratio_level_consistency():
    fs = FrobeniusSpec.standard(7)
    lo = dwork_ratio((h, h, h), fs, 2)
    hi = dwork_ratio_expansion((h, h, h), fs, 3, 49)
    assert lo.agrees_with(hi, 2)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("a", GRID_A)
def test_dwork_ratio_matches_exact_quotient(a, p):
    for c in (1, 1 + p):
        exact = exact_dwork_quotient(a, c, p, 40).to_padic(p, 2)
        assert dwork_ratio_expansion(a, FrobeniusSpec(p, Fraction(c)), 2, 40).agrees_with(exact, 2)


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("a", GRID_A)
def test_log_hg_matches_exact_quotient(a, p):
    n = 2
    for c in (1, 1 + p):
        fs = FrobeniusSpec(p, Fraction(c))
        integral = exact_log_integral(a, c, p, 40).to_padic(p, n)
        const = log_constant(a, fs, n)
        G = TruncSeries.padic([(int(integral.coeffs[0]) + const.residue)] + integral.residues()[1:], p, n)
        exact = G / hg_series(a, 40).to_padic(p, n)
        assert log_hg_expansion(a, fs, n, 40).agrees_with(exact, n)


def test_g_sigma_examples():
    p = 5
    G = g_sigma((1,), FrobeniusSpec.standard(p), 3, 30)
    ref = [0] + [0 if k % p == 0 else reduce(Fraction(1, k), p, 3).residue for k in range(1, 30)]
    assert G.residues() == ref
    fs = FrobeniusSpec.standard(7)
    G = g_sigma((h, h, h), fs, 3, 10)
    assert G[0] == psi_tilde(h, 7, 3) * PadicNumber.from_int(3, 7, 3)


def test_g_sigma_integral_at_full_precision():
    a = (Fraction(1, 3), Fraction(2, 3))
    p, N = 7, 3
    exact = exact_log_integral(a, 1, p, 50)
    assert all(c.denominator % p for c in exact.coeffs)
    G = g_sigma(a, FrobeniusSpec.standard(p), N, 50)
    assert G.min_prec == N
    assert G.residues()[1:] == exact.to_padic(p, N).residues()[1:]


def test_log_hg_trivial_parameter():
    # G/F_(1) at n = 1: (t + t^2/2 + t^3/3 + t^4/4)(1 - t) mod 5
    r = log_hg((1,), FrobeniusSpec.standard(5), 1)
    G = [0, 1, 3, 2, 4]
    ref = [(G[k] - (G[k - 1] if k else 0)) % 5 for k in range(5)]
    assert r.residues() == ref == [0, 1, 2, 4, 2]


def test_log_hg_constant_term():
    for p in (5, 7):
        fs = FrobeniusSpec(p, Fraction(1 + p))
        r = log_hg((h, h, h), fs, 2)
        assert r[0] == log_constant((h, h, h), fs, 2)


def test_log_hg_level_consistency():
    fs = FrobeniusSpec.standard(5)
    lo = log_hg((h, h, h), fs, 2)
    hi = log_hg_expansion((h, h, h), fs, 3, 25)
    assert lo.agrees_with(hi, 2)


def test_eval_log_hg_two_levels():
    # alpha = -1 is a Hasse zero at p = 5, 7, 13; p = 11 is a good prime
    for p in (5, 7, 13):
        with pytest.raises(BadHasse):
            eval_log_hg((h, h, h), -1, p, 2)
    v2 = eval_log_hg((h, h, h), -1, 11, 2)
    v3 = eval_log_hg((h, h, h), -1, 11, 3)
    assert v3.reduce_to(2) == v2


def test_eval_log_hg_trivial_parameter():
    # G/F for a = (1) at n = 1 is a polynomial; evaluate directly
    p, alpha = 7, 3
    fs = FrobeniusSpec.for_fiber(alpha, p)
    v = eval_log_hg((1,), alpha, p, 1)
    G = g_sigma((1,), fs, 1, p).residues()
    num = sum(c * alpha**k for k, c in enumerate(G)) % p
    den = sum(alpha**k for k in range(p)) % p
    assert v.residue == num * pow(den, -1, p) % p


def test_eval_log_hg_errors():
    with pytest.raises(BadHasse):
        eval_log_hg((h, h, h), 4, 5, 2)
    with pytest.raises(BadFiber):
        eval_log_hg((h, h, h), 6, 5, 2)
    with pytest.raises(BadFiber):
        eval_log_hg((h, h, h), 10, 5, 2)
    with pytest.raises(SmallPrime):
        eval_log_hg((h, h, h), 2, 3, 2)


@pytest.mark.parametrize("p", [5, 7, 13])
@pytest.mark.parametrize("a", GRID_A)
def test_derivative_congruence(a, p):
    for n in (1, 2):
        T = min(2 * p**n, 200)
        for j in (1, 2):
            full = derivative_ratio_mod(a, p, n, j, T, truncated=False)
            trunc = derivative_ratio_mod(a, p, n, j, T, truncated=True)
            assert full.agrees_with(trunc, n), (a, p, n, j)
