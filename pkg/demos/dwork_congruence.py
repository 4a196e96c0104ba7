"""Dwork's congruence in action.

The quotient [F_a]_{<p^n} / [F_a'(c t^p)]_{<p^n} is computed at two levels
and compared past the naive window, then checked against the exact
rational quotient F_a(t) / F_a'(c t^p) reduced mod p^n.
"""

from fractions import Fraction

from dworkhg.hypergeom import FrobeniusSpec, dwork_ratio_expansion, exact_dwork_quotient, log_hg_expansion

a = (Fraction(1, 3), Fraction(2, 3))
p, n = 7, 2
fs = FrobeniusSpec(p, Fraction(1 + p))

lo = dwork_ratio_expansion(a, fs, n, p ** (n + 1))
hi = dwork_ratio_expansion(a, fs, n + 1, p ** (n + 1)).reduce_prec(n)
print(f"a = {a}, p = {p}, c = {fs.c}")
print("level", n, "first terms:", lo.residues()[:10])
print("agrees with level", n + 1, "on degrees <", p ** (n + 1), ":", lo.agrees_with(hi, n))

exact = exact_dwork_quotient(a, fs.c, p, 40).to_padic(p, n)
print("matches the exact quotient to degree 40:", lo.truncate_below(40).agrees_with(exact, n))

g = log_hg_expansion(a, fs, n, 10)
print("log-type function, constant term and first terms:", g.residues())
