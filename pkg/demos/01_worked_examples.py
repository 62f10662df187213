"""Two hand-sized sections: a Morse point on the diagonal tensor and a D4 point on N2.

Run: python demos/01_worked_examples.py
"""

from qutrit_sing import (Chart, build_state, classify_point, classify_state, milnor_oracle,
                         section_polynomial, tangent_membership)
from qutrit_sing.arith import mpq
from qutrit_sing.classify import hessian_at
from qutrit_sing.matrix import rank
from qutrit_sing.segre import ProjectivePoint

diag = build_state("F3,9", {"a": 1})          # |000> + |111> + |222>
n2 = build_state("N2")

print("Section of the diagonal tensor:", section_polynomial(diag).full)
chart = Chart((0, 2, 1))
f = section_polynomial(diag).chart(chart)
print(f"In chart {chart} (x0 = y2 = z1 = 1):", f)

origin = [mpq(0)] * 6
H = hessian_at(f, origin)
lt, _, _ = classify_point(f, origin)
print(f"  origin is critical, Hessian rank {rank(H)}, type {lt.label}")
print("  tangent at |021>:", tangent_membership(diag, ProjectivePoint([1, 0, 0], [0, 0, 1], [0, 1, 0])))

# the same point seen globally: it is one of six nodes
res = classify_state(diag)
print("  all charts together:", res.summary, "at",
      ", ".join(f"|{p.location.basis_label()}>" for p in res.points))

print()
g = section_polynomial(n2).chart(Chart((2, 2, 2)))
print("N2 in chart [2,2,2]:", g)
lt, rk, _ = classify_point(g, origin)
print(f"  Hessian rank {rk}, type {lt.label}, Milnor number {milnor_oracle(g, origin)}")
res = classify_state(n2)
print("  global:", res.summary, "stratum", res.stratum_label)
