"""Matchings of a complete binary tree: linear SDDs, constant-step VS-SDDs.

f_j says "the chosen edges of a depth-j complete binary tree form a
matching". On the recursive vtree v_j the two subtrees below each level are
isomorphic, so a VS-SDD reuses the same structures at shifted offsets and
grows by a fixed number of elements per level, while the SDD grows with the
number of variables.
"""
from vssdd import SddManager, VsManager
from vssdd.frontend import gen_matching_tree
from vssdd.queries import count

print(f"{'j':>2} {'vars':>5} {'SDD':>6} {'VS-SDD':>7} {'step':>5} {'misses':>7} {'models':>12}")
prev = None
for j in range(1, 11):
    inst = gen_matching_tree(j)
    sdd = SddManager(inst.vtree)
    n = inst.build(sdd)
    mgr = VsManager(inst.vtree)
    f = inst.build(mgr)
    size = mgr.size(f)
    step = "" if prev is None else size - prev
    prev = size
    print(f"{j:>2} {inst.vtree.M:>5} {sdd.size(n):>6} {size:>7} {step!s:>5} "
          f"{mgr.stats['cache_misses']:>7} {count(mgr, f):>12}")
