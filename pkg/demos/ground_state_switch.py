#!/usr/bin/env python3
"""Energy comparison in the fold regime (d=5, m=0.3) around kappa_c.

Four families coexist on parts of this kappa range: the uniform state,
the fully supported branch on (kappa2, kappa1), and the two atom+density
states born at the fold kappa3.  The ground state is the uniform density
until kappa_c, where the upper atom branch undercuts it, strictly before
the uniform state even loses local stability at kappa1.
"""

import numpy as np

from fastsphere import classify_minimizer, critical_set

D, M = 5, 0.3
crit = critical_set(D, M)
print(f"d={D}, m={M}")
print(f"  kappa3  = {crit.kappa3:.6f}   fold: atom+density pair born")
print(f"  kappa_c = {crit.kappa_c:.6f}   ground state switches")
print(f"  kappa2  = {crit.kappa2:.6f}   lower atom branch becomes the supported branch")
print(f"  kappa1  = {crit.kappa1:.6f}   uniform state loses stability")
print()
header = f"{'kappa':>9} {'E_uniform':>12} {'E_supported':>12} {'E_upper':>12} {'E_lower':>12}  minimizer"
print(header)
for kappa in np.linspace(15.5, 20.5, 21):
    rep = classify_minimizer(float(kappa), D, M)

    def fmt(value):
        return f"{value:12.6f}" if value is not None else " " * 12

    print(
        f"{kappa:9.3f} {rep.e_uniform:12.6f} {fmt(rep.e_fully_supported)} "
        f"{fmt(rep.e_singular_upper)} {fmt(rep.e_singular_lower)}  {rep.minimizer}"
    )
