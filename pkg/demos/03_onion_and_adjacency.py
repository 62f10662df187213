"""Where states sit in the dual variety, and how a D4 point breaks up.

Run: python demos/03_onion_and_adjacency.py   (about 10 seconds)
"""

from collections import Counter

from qutrit_sing import build_state, classify_state, directed_scan, onion_for
from qutrit_sing.arith import mpq
from qutrit_sing.catalog import sample_generic

for row in ("F1,1", "F2,1", "F2,3", "F4,2", "N2"):
    params = sample_generic(row, 0) if row.startswith("F") else {}
    res = classify_state(build_state(row, params))
    print(f"{row:5} {res.summary:8} -> {res.stratum_label}")

print()
print(onion_for(classify_state(build_state("F4,2", {"b": 1}))).to_text())

# nudge N2 by 1/100 along directions that prescribe the jet at its D4 point
print("\nDirected deformations of the D4 point of N2:")
outcomes = directed_scan(build_state("N2"), mpq(1, 100))
for o in outcomes:
    if not o.name.startswith("axis:"):
        print(f"  {o.name:38} at the point {o.predicted or '-':6} whole section {o.summary}")
axis = Counter(o.summary for o in outcomes if o.name.startswith("axis:"))
print("  single-coefficient nudges:", dict(sorted(axis.items())))
