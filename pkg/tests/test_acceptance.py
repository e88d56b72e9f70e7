"""Acceptance criteria 1-10.

Each test carries a ``criterion`` marker; conftest prints one PASS/FAIL
line per criterion at the end of the run. Every compilation made here goes
through :func:`compiled`, which also enforces the size inequality of
criterion 4.
"""
import random
import time

import pytest

from vssdd.cli import main as cli_main
from vssdd.frontend import compile_cnf, gen_grid_matching, gen_matching_tree, gen_nqueens, running_example_cnf, to_dimacs
from vssdd.manager import VsManager, VsSdd
from vssdd.oracle import brute_solution_count, essential_vtree_node, table_of, table_of_vs
from vssdd.queries import count, entails, equivalent, forget_singleton
from vssdd.sdd import SddManager
from vssdd.vtree import build_balanced, serialize_vtree

from _util import CONFIGS, build_shannon, random_cnf, random_table, random_vtree, table_cnf

SEED = 20240611

# compiled diagrams of at most 12 variables, for criterion 10
SMALL: list[tuple[VsManager, VsSdd]] = []


def compiled(mgr: VsManager, f: VsSdd) -> VsSdd:
    assert mgr.size(f) <= mgr.sdd_size(f), "VS-SDD larger than its SDD"
    if mgr.vtree.M <= 12:
        SMALL.append((mgr, f))
    return f


class timed:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        if exc[0] is None:
            elapsed = time.perf_counter() - self.t0
            assert elapsed < self.limit, f"took {elapsed:.1f}s, budget {self.limit}s"


@pytest.mark.criterion(1, "oracle equivalence, 500 random CNFs x 4 configurations")
def test_c1_oracle_equivalence():
    rng = random.Random(SEED + 1)
    with timed(60):
        for _ in range(500):
            cnf = random_cnf(rng, nvars=(3, 10), nclauses=(2, 15))
            vt = random_vtree(rng, cnf.num_vars)
            truth = table_of(cnf)
            for mode, comp in CONFIGS:
                r = compile_cnf(cnf, vt, mode=mode, compress=comp)
                f = compiled(r.manager, r.handle)
                assert table_of_vs(r.manager, f) == truth
                assert count(r.manager, f) == truth.count


@pytest.mark.criterion(2, "apply semantics, 300 random pairs x and/or/xor")
def test_c2_apply_semantics():
    rng = random.Random(SEED + 2)
    with timed(30):
        for i in range(300):
            m = rng.randint(1, 8)
            mode, comp = CONFIGS[i % 4]
            mgr = VsManager(random_vtree(rng, m), mode=mode, compress=comp)
            t1, t2 = random_table(rng, m), random_table(rng, m)
            f, g = build_shannon(mgr, t1), build_shannon(mgr, t2)
            for op, expect in (("and", t1 & t2), ("or", t1 | t2), ("xor", t1 ^ t2)):
                r = compiled(mgr, mgr.apply(f, g, op))
                assert table_of_vs(mgr, r) == expect


@pytest.mark.criterion(3, "canonicity across constructions; identity EQ agrees with two-way SE")
def test_c3_canonicity():
    rng = random.Random(SEED + 3)
    with timed(30):
        for _ in range(100):
            m = rng.randint(1, 6)
            vt = random_vtree(rng, m)
            mgr = VsManager(vt)
            t = random_table(rng, m)
            cnf = table_cnf(t)
            rng.shuffle(cnf.clauses)
            one = compiled(mgr, compile_cnf(cnf, vt, manager=mgr).handle)
            rng.shuffle(cnf.clauses)
            two = compiled(mgr, compile_cnf(cnf, vt, manager=mgr).handle)
            three = compiled(mgr, build_shannon(mgr, t))
            assert tuple(one) == tuple(two) == tuple(three)
            other = build_shannon(mgr, random_table(rng, m))
            for g in (two, three, other):
                two_way = entails(mgr, one, g) and entails(mgr, g, one)
                assert equivalent(mgr, one, g) == two_way == (table_of_vs(mgr, g) == t)


# uncompressed diagrams of the larger generators grow too big for a desk run
UNCOMPRESSED_MAX_VARS = 14


def _generator_instances():
    yield from (gen_nqueens(n) for n in (1, 4, 5, 6))
    yield from (gen_grid_matching(p, q) for p, q in ((1, 2), (2, 2), (2, 3), (3, 3), (3, 4)))
    yield from (gen_matching_tree(j) for j in range(1, 7))


@pytest.mark.criterion(4, "VS-SDD size <= SDD size on every compiled instance; CLI ratio <= 100.0%")
def test_c4_size_inequality(tmp_path, capsys):
    rng = random.Random(SEED + 4)
    for i in range(200):
        cnf = random_cnf(rng, nvars=(3, 14), nclauses=(2, 20))
        vt = random_vtree(rng, cnf.num_vars)
        mode, comp = CONFIGS[i % 4]
        r = compile_cnf(cnf, vt, mode=mode, compress=comp)
        compiled(r.manager, r.handle)
        if mode == "trimmed" and comp:
            base = compile_cnf(cnf, vt, kind="sdd")
            assert r.stats["size"] <= base.stats["size"] == r.stats["sdd_size"]
    for inst in _generator_instances():
        for mode, comp in CONFIGS:
            if not comp and inst.vtree.M > UNCOMPRESSED_MAX_VARS:
                continue
            mgr = VsManager(inst.vtree, mode=mode, compress=comp)
            compiled(mgr, inst.build(mgr))
        mgr, base = VsManager(inst.vtree), SddManager(inst.vtree)
        f, n = inst.build(mgr), inst.build(base)
        assert mgr.size(f) <= base.size(n) == mgr.sdd_size(f)
        # CLI report on the same instance
        cnf_path, vt_path = tmp_path / f"{inst.name}.cnf", tmp_path / f"{inst.name}.vtree"
        cnf_path.write_text(to_dimacs(inst.cnf))
        vt_path.write_text(serialize_vtree(inst.vtree))
        runs = [[], ["--mode", "normalized"]]
        if inst.vtree.M <= UNCOMPRESSED_MAX_VARS:
            runs.append(["--no-compress"])
        for extra in runs:
            assert cli_main(["compile", "--cnf", str(cnf_path), "--vtree", str(vt_path),
                             "--compare-sdd", "--porcelain", *extra]) == 0
            rep = dict(l.split("=", 1) for l in capsys.readouterr().out.split())
            assert int(rep["V"]) <= int(rep["S"])
            assert float(rep["ratio"].rstrip("%")) <= 100.0


@pytest.mark.criterion(5, "shifted copies share one structure; offsets differ by the shift")
def test_c5_shift_sharing():
    rng = random.Random(SEED + 5)
    done = 0
    while done < 50:
        k = rng.randint(2, 4)
        vt = build_balanced(2 * k)
        lo, hi = vt.left[1], vt.right[1]
        delta = vt.shift_delta(lo, hi)
        assert delta is not None
        t = random_table(rng, k)
        if t.count in (0, 1 << k):
            continue  # constant h has no offset
        mgr = VsManager(vt)
        h = compiled(mgr, build_shannon(mgr, t, list(range(1, k + 1))))
        h2 = compiled(mgr, build_shannon(mgr, t, list(range(k + 1, 2 * k + 1))))
        assert h.structure == h2.structure
        assert h2.offset - h.offset == delta
        done += 1


FROZEN_SIZE_STEP = 20  # size(j) - size(j-1), measured at j = 4


@pytest.mark.criterion(6, "f_j on v_j: SDD size >= 2^j - 1, constant VS-SDD size and miss steps")
def test_c6_separation():
    sizes, misses = {}, {}
    with timed(60):
        for j in range(2, 9):
            inst = gen_matching_tree(j)
            base = SddManager(inst.vtree)
            n = inst.build(base)
            assert base.size(n) >= (1 << j) - 1
            mgr = VsManager(inst.vtree)
            f = compiled(mgr, inst.build(mgr))
            sizes[j] = mgr.size(f)
            misses[j] = mgr.stats["cache_misses"]
            assert mgr.sdd_size(f) == base.size(n)
    steps = {j: sizes[j] - sizes[j - 1] for j in range(3, 9)}
    assert steps[4] == FROZEN_SIZE_STEP
    assert all(steps[j] == steps[4] for j in range(4, 9)), steps
    miss_steps = [misses[j] - misses[j - 1] for j in range(5, 9)]
    assert len(set(miss_steps)) == 1, miss_steps


@pytest.mark.criterion(7, "running example: SDD size 9, count 8, shared structure at offsets 2 and 5")
def test_c7_running_example():
    with timed(1):
        vt = build_balanced(4)
        base = SddManager(vt)
        a, b, c, d = (base.literal(v) for v in (1, 2, 3, 4))
        n = base.disjoin(base.disjoin(base.conjoin(a, b), base.conjoin(b, c)), base.conjoin(c, d))
        assert base.size(n) == 9
        r = compile_cnf(running_example_cnf(), vt)
        mgr, f = r.manager, compiled(r.manager, r.handle)
        assert count(mgr, f) == 8 == table_of(running_example_cnf()).count
        offsets = {}
        for s, k in mgr.placements(f):
            if s >= 4:
                offsets.setdefault(s, set()).add(k)
        assert [ks for ks in offsets.values() if len(ks) > 1] == [{2, 5}]


@pytest.mark.criterion(8, "generator counts match combinatorial oracles")
def test_c8_generators():
    with timed(30):
        for n, expected in ((1, 1), (4, 2), (5, 10), (6, 4)):
            inst = gen_nqueens(n)
            mgr = VsManager(inst.vtree)
            f = compiled(mgr, compile_cnf(inst.cnf, inst.vtree, manager=mgr).handle)
            assert count(mgr, f) == expected == brute_solution_count(inst)
        grid = gen_grid_matching(2, 2)
        mgr = VsManager(grid.vtree)
        assert count(mgr, compiled(mgr, grid.build(mgr))) == 7 == brute_solution_count(grid)
        tree = gen_matching_tree(2)
        mgr = VsManager(tree.vtree)
        assert count(mgr, compiled(mgr, tree.build(mgr))) == 15 == brute_solution_count(tree)
        mgr = VsManager(tree.vtree)
        assert count(mgr, compiled(mgr, compile_cnf(tree.cnf, tree.vtree, manager=mgr).handle)) == 15


@pytest.mark.criterion(9, "Shannon count identity, negation, forgetting and conditioning vs oracle")
def test_c9_transformations():
    rng = random.Random(SEED + 9)
    with timed(30):
        for i in range(100):
            m = rng.randint(2, 8)
            mode, comp = CONFIGS[i % 4]
            mgr = VsManager(random_vtree(rng, m), mode=mode, compress=comp)
            t = random_table(rng, m)
            f = compiled(mgr, build_shannon(mgr, t))
            x = rng.randint(1, m)
            rest = [v for v in range(1, m + 1) if v != x]
            pos, neg = mgr.condition(f, [x]), mgr.condition(f, [-x])
            assert count(mgr, f) == count(mgr, pos, rest) + count(mgr, neg, rest)
            nf = compiled(mgr, mgr.negate(f))
            assert count(mgr, nf) == (1 << m) - count(mgr, f)
            back = mgr.negate(nf)
            if comp:
                assert back == f
            assert table_of_vs(mgr, back) == t
            assert table_of_vs(mgr, compiled(mgr, forget_singleton(mgr, f, x))) == t.forget(x)
            term = [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, m + 1), rng.randint(1, m))]
            assert table_of_vs(mgr, compiled(mgr, mgr.condition(f, term))) == t.condition(term)


@pytest.mark.criterion(10, "root offset is the essential-dependence node; no identical-vtree-rule violation")
def test_c10_lemma3_audit():
    rng = random.Random(SEED + 10)
    for _ in range(150):
        cnf = random_cnf(rng, nvars=(3, 12), nclauses=(2, 15))
        vt = random_vtree(rng, cnf.num_vars)
        r = compile_cnf(cnf, vt)
        compiled(r.manager, r.handle)
    for inst in _generator_instances():
        if inst.vtree.M <= 12:
            mgr = VsManager(inst.vtree)
            compiled(mgr, inst.build(mgr))
    checked = 0
    for mgr, f in SMALL:
        assert not mgr.audit(f)
        if f.is_constant():
            continue
        if mgr.mode == "trimmed" and mgr.compress:
            node = essential_vtree_node(table_of_vs(mgr, f), mgr.vtree)
            assert f.offset == node
            checked += 1
    assert checked >= 100
