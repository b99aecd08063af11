"""Worst-case depth of both algorithms across sizes, without simulating.

The normalized columns divide depth by sqrt(n) log^4 n (substring) and by
sqrt(n) log^3 n (palindrome). Pass a largest n to shorten the sweep:

    python3 demos/resource_sweep.py 512
"""

import math
import sys

from qlcs.resources import SWEEP, estimate

top = int(sys.argv[1]) if len(sys.argv) > 1 else 1024
print(f"{'n':>6} {'LCS depth':>12} {'/sqrt(n)log^4':>14} {'/sqrt(n)log^3':>14} {'LPS depth':>12} {'/sqrt(n)log^3':>14}")
for n in [s for s in SWEEP if s <= top]:
    a, b = estimate(n, "lcs"), estimate(n, "lps")
    l3 = a.depth / (math.sqrt(n) * math.log2(n) ** 3)
    print(f"{n:>6} {a.depth:>12} {a.ratio:>14.1f} {l3:>14.1f} {b.depth:>12} {b.ratio:>14.1f}")
print("\nAgainst log^4 the substring column keeps falling; against log^3 it varies")
print("far less. The rotation circuit dominates, and with the window length known")
print("classically the window checks stay polylogarithmic.")
