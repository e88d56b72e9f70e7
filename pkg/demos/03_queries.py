"""Queries on a compiled CNF: counting, enumeration, entailment, forgetting."""
from vssdd import VsManager, build_balanced
from vssdd.frontend import compile_cnf, parse_dimacs
from vssdd.queries import (
    clausal_entails,
    count,
    entails,
    enumerate_models,
    forget_singleton,
    format_model,
    is_implicant,
    valid,
)

text = """c (A or C) and (B or C) and (B or D)
p cnf 4 3
1 3 0
2 3 0
2 4 0
"""
cnf = parse_dimacs(text)
mgr = VsManager(build_balanced(4))
f = compile_cnf(cnf, mgr.vtree, manager=mgr).handle

print("count:", count(mgr, f))
for m in enumerate_models(mgr, f, limit=4):
    print("  ", format_model(m))

ab = mgr.conjoin(mgr.literal(1), mgr.literal(2))
print("A and B entails f:", entails(mgr, ab, f))
print("f entails A and B:", entails(mgr, f, ab))
print("f entails the clause (A or C):", clausal_entails(mgr, f, [1, 3]))
print("B and C is an implicant of f:", is_implicant(mgr, f, [2, 3]))

g = forget_singleton(mgr, f, 2)
print("forget B: count over A, C, D =", count(mgr, g, universe=[1, 3, 4]))
print("f or not f is valid:", valid(mgr, mgr.disjoin(f, mgr.negate(f))))
