"""Size comparison on the generated benchmarks, in the report layout of the CLI.

The vtree is the generator's suggested one; no vtree search is done, so the
absolute sizes differ from those obtained with dynamic minimization.
"""
import time

from vssdd import VsManager
from vssdd.frontend import gen_grid_matching, gen_matching_tree, gen_nqueens
from vssdd.queries import count

instances = [gen_nqueens(n) for n in (4, 5, 6, 7)]
instances += [gen_grid_matching(p, q) for p, q in ((3, 3), (3, 4), (4, 4))]
instances += [gen_matching_tree(j) for j in (4, 6, 8)]

print(f"{'name':<10} {'vars':>5} {'S':>7} {'V':>7} {'ratio':>7} {'count':>10} {'secs':>6}")
for inst in instances:
    mgr = VsManager(inst.vtree)
    t0 = time.perf_counter()
    f = inst.build(mgr)
    secs = time.perf_counter() - t0
    S, V = mgr.sdd_size(f), mgr.size(f)
    ratio = 100.0 * V / S if S else 100.0
    print(f"{inst.name:<10} {inst.vtree.M:>5} {S:>7} {V:>7} {ratio:>6.1f}% {count(mgr, f):>10} {secs:>6.2f}")
