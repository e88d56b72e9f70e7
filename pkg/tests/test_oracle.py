import numpy as np
import pytest

from vssdd.frontend import Cnf, gen_grid_matching, gen_matching_tree, gen_nqueens, running_example_cnf
from vssdd.manager import VsManager
from vssdd.oracle import (
    OracleLimitError,
    TruthTable,
    brute_solution_count,
    count_matchings,
    count_queens,
    essential_vtree_node,
    eval_cnf,
    table_of,
)
from vssdd.vtree import build_balanced

A, B, C, D = 1, 2, 3, 4


def test_eval_cnf():
    cnf = Cnf(2, [[A, B]])
    assert not eval_cnf(cnf, {A: False, B: False})
    assert eval_cnf(cnf, [False, True])


def test_table_of_running_example():
    t = table_of(running_example_cnf())
    assert t.count == 8
    mgr = VsManager(build_balanced(4))
    a, b, c, d = (mgr.literal(v) for v in (A, B, C, D))
    f = mgr.disjoin_all([mgr.conjoin(a, b), mgr.conjoin(b, c), mgr.conjoin(c, d)])
    assert table_of(f, mgr) == t
    with pytest.raises(TypeError):
        table_of(f)


def test_limits():
    with pytest.raises(OracleLimitError):
        table_of(Cnf(25, []))
    with pytest.raises(OracleLimitError):
        TruthTable(30, np.zeros(1, dtype=bool))
    with pytest.raises(ValueError):
        TruthTable(2, np.zeros(3, dtype=bool))


def _lit_table(m, v):
    return TruthTable(m, table_of(Cnf(m, [[v]])).bits)


def test_essential_node():
    vt = build_balanced(4)
    a, d = _lit_table(4, A), _lit_table(4, D)
    b = _lit_table(4, B)
    assert essential_vtree_node(a & b, vt) == 2
    assert essential_vtree_node(a, vt) == 3
    assert essential_vtree_node(a & d, vt) == 1
    assert essential_vtree_node(a | ~a, vt) is None


def test_table_ops():
    t = table_of(running_example_cnf())
    assert t.condition([B]).count == 12  # A or C, over 4 vars
    assert t.forget(B) == t.condition([B])
    assert t.depends_on(A) and (~t).count == 8
    assert len(t.models()) == 8


def test_combinatorial_counts():
    assert [count_queens(n) for n in (1, 4, 5, 6)] == [1, 2, 10, 4]
    assert count_matchings([(0, 1), (1, 3), (0, 2), (2, 3)]) == 7
    assert brute_solution_count(gen_nqueens(4)) == 2
    assert brute_solution_count(gen_grid_matching(2, 2)) == 7
    assert brute_solution_count(gen_matching_tree(2)) == 15
    with pytest.raises(OracleLimitError):
        count_queens(11)
    with pytest.raises(OracleLimitError):
        count_matchings([(i, i + 1) for i in range(31)])


def test_oracles_self_consistent():
    for inst in (gen_nqueens(4), gen_grid_matching(2, 3), gen_matching_tree(3)):
        assert table_of(inst.cnf).count == brute_solution_count(inst)
