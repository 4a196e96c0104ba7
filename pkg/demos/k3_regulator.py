"""Regulator values for the singular K3 fibers, with their Hecke eigenforms.

For each parameter a with a weight-3 CM form attached, the value
8 F^(sigma)_{1/2,1/2,1/2}(a) is printed with the unit root alpha_p of the
form and the Euler factor 1 - p^2/alpha_p.
"""

from dworkhg.cli import cmd_k3_regulator
from dworkhg.errors import DworkHGError

for a, p in [("4", 13), ("-8", 5), ("1/4", 13), ("64", 5), ("1", 13), ("-1", 5)]:
    try:
        rep = cmd_k3_regulator(a, p, 3)
    except DworkHGError as e:
        print(f"a={a:>4} p={p:2d}  {type(e).__name__}: {e}")
        continue
    form = rep["eigenform"]
    line = f"a={a:>4} p={p:2d}  regulator {rep['regulator']['residue']:6d} mod {p}^3"
    line += f"  form {form.get('label')} a_p={form.get('a_p')}"
    if form.get("ordinary"):
        line += f"  alpha_p {form['alpha_p']['residue']}  product {form['product']['residue']}"
    print(line + ("  [levels agree]" if rep["stamp"]["agree"] else "  [LEVELS DISAGREE]"))
