"""A small function where two subterms are the same shape on different variables.

f = (A and B) or (B and C) or (C and D) over the balanced vtree ((A, B), (C, D)).
An ordinary SDD needs separate nodes for A and B and for C and D; the VS-SDD
stores one structure and reaches it at two offsets.
"""
from vssdd import SddManager, VsManager, build_balanced, count, to_dot
from vssdd.convert import to_baseline_sdd

A, B, C, D = 1, 2, 3, 4
vt = build_balanced([A, B, C, D])

mgr = VsManager(vt)
a, b, c, d = (mgr.literal(v) for v in (A, B, C, D))
f = mgr.disjoin_all([mgr.conjoin(a, b), mgr.conjoin(b, c), mgr.conjoin(c, d)])
print("handle:", f)
print("models over A..D:", count(mgr, f))

# where does each structure sit?
by_struct = {}
for s, k in sorted(mgr.placements(f)):
    if s >= 4:
        by_struct.setdefault(s, []).append(k)
for s, ks in by_struct.items():
    print(f"structure {s}: offsets {ks}, elements {mgr.elements(s)}")

sdd = SddManager(vt)
sa, sb, sc, sd = (sdd.literal(v) for v in (A, B, C, D))
n = sdd.disjoin(sdd.disjoin(sdd.conjoin(sa, sb), sdd.conjoin(sb, sc)), sdd.conjoin(sc, sd))
print("SDD size:", sdd.size(n), " VS-SDD size:", mgr.size(f))
print("materialized VS-SDD equals the SDD node:", to_baseline_sdd(mgr, f, sdd)[1] == n)

print()
print(to_dot(mgr, f))
