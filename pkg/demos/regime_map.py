#!/usr/bin/env python3
"""Map of the three diffusion regimes over (d, m) with critical strengths.

For each dimension the interval 0 < m < 1 is cut at 1 - 2/d and
1 - 2/(d-1): above both, only the supported branch exists (case i);
between them the supported branch hands off to an atom+density state at
kappa2 (case ii); below both a fold of two atom branches appears first
(case iii).  Dimensions 1 and 2 are all case i, and d = 3 has no
case iii.
"""

from fastsphere import critical_set
from fastsphere.model import classify_regime

SAMPLES = [
    (1, 0.5), (2, 0.2), (2, 0.8),
    (3, 0.5), (3, 0.25), (3, 0.05),
    (4, 0.7), (4, 0.4), (4, 0.2),
    (5, 0.7), (5, 0.55), (5, 0.3),
    (6, 0.5), (6, 0.35), (8, 0.2),
]

print(f"{'d':>3} {'m':>6} {'regime':>9} {'kappa1':>10} {'kappa2':>10} "
      f"{'kappa3':>10} {'kappa_c':>10}")
for d, m in SAMPLES:
    regime = classify_regime(d, m)
    crit = critical_set(d, m)

    def fmt(value):
        return f"{value:10.4f}" if value is not None else " " * 10

    print(
        f"{d:>3} {m:>6.2f} {regime.tag.value:>9} {crit.kappa1:10.4f} "
        f"{fmt(crit.kappa2)} {fmt(crit.kappa3)} {fmt(crit.kappa_c)}"
    )
