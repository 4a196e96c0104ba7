"""Unit roots of Legendre-type curves from point counts and from Dwork's function.

For y^2 = x(1-x)(1-(1-t)x) at t = a_hat the unit root of T^2 - a_p T + p
is compared with the product of truncated hypergeometric quotients at the
Teichmüller lift of a_hat.
"""

from fractions import Fraction

from dworkhg.arith_geom import elliptic_curve, elliptic_trace, unit_root_from_counts
from dworkhg.hypergeom import hasse_value
from dworkhg.unitroot import frobenius_unit_eigenvalue

half = (Fraction(1, 2), Fraction(1, 2))
N = 3
for p in (5, 7, 11, 13):
    for ah in range(2, p - 1):
        if hasse_value(half, p, ah) == 0:
            print(f"p={p:2d} a_hat={ah:2d}  supersingular (Hasse value 0)")
            continue
        rep = elliptic_trace(elliptic_curve("gauss", ah), p)
        u = unit_root_from_counts(rep, p, N)
        e = frobenius_unit_eigenvalue(half, ah, p, 1, N)
        print(f"p={p:2d} a_hat={ah:2d}  a_p={rep.a_p:3d}  counts {u.residue:5d}  dwork {e.residue:5d}")
