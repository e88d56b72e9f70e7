import random

import pytest
from hypothesis import given, settings, strategies as st

from vssdd.manager import VsError, VsManager
from vssdd.oracle import table_of_vs
from vssdd.queries import (
    CountContext,
    InvalidUniverseError,
    clausal_entails,
    count,
    entails,
    enumerate_models,
    equivalent,
    forget_singleton,
    format_model,
    is_implicant,
    satisfiable,
    valid,
)
from vssdd.vtree import build_balanced

from _util import CONFIGS, build_shannon, random_table, random_vtree

A, B, C, D = 1, 2, 3, 4


def running_example(mgr):
    a, b, c, d = (mgr.literal(v) for v in (A, B, C, D))
    return mgr.disjoin_all([mgr.conjoin(a, b), mgr.conjoin(b, c), mgr.conjoin(c, d)])


@pytest.fixture(params=CONFIGS, ids=lambda c: f"{c[0]}-{'c' if c[1] else 'u'}")
def mgr(request):
    mode, comp = request.param
    return VsManager(build_balanced(4), mode=mode, compress=comp)


def test_count(mgr):
    f = running_example(mgr)
    assert count(mgr, f) == 8
    assert count(mgr, mgr.true()) == 16
    assert count(mgr, mgr.false()) == 0
    assert count(mgr, mgr.literal(A)) == 8
    assert count(mgr, mgr.literal(A), universe=[A]) == 1
    with pytest.raises(InvalidUniverseError):
        count(mgr, f, universe=[A, B])
    with pytest.raises(InvalidUniverseError):
        CountContext(mgr, universe=[7])


def test_count_cache_is_shared_across_shifts():
    mgr = VsManager(build_balanced(4))
    ab = mgr.conjoin(mgr.literal(A), mgr.literal(B))
    cd = mgr.conjoin(mgr.literal(C), mgr.literal(D))
    assert ab.structure == cd.structure
    ctx = CountContext(mgr)
    assert ctx.count(ab) == 4
    before = ctx.visits
    assert ctx.count(cd) == 4
    assert ctx.visits == before


def test_enumerate(mgr):
    f = running_example(mgr)
    models = list(enumerate_models(mgr, f))
    truth = table_of_vs(mgr, f)
    assert len(models) == 8
    assert sorted(map(format_model, models)) == sorted(map(format_model, truth.models()))
    assert list(enumerate_models(mgr, mgr.false())) == []
    assert len(list(enumerate_models(mgr, f, limit=3))) == 3
    a_only = list(enumerate_models(mgr, mgr.literal(A), universe=[A, B]))
    assert a_only == [{A: True, B: False}, {A: True, B: True}]
    assert list(enumerate_models(mgr, f)) == models  # deterministic
    with pytest.raises(VsError):
        list(enumerate_models(mgr, f, limit=-1))


def test_entailment_family(mgr):
    f = running_example(mgr)
    a, b = mgr.literal(A), mgr.literal(B)
    ab = mgr.conjoin(a, b)
    assert entails(mgr, f, f)
    assert entails(mgr, ab, a)
    assert not entails(mgr, f, ab)
    assert equivalent(mgr, f, running_example(mgr))
    assert not satisfiable(mgr, mgr.false())
    assert valid(mgr, mgr.disjoin(a, mgr.literal(A, False)))
    assert not valid(mgr, f)
    assert clausal_entails(mgr, ab, [A])
    assert clausal_entails(mgr, f, [A, C])
    assert not clausal_entails(mgr, f, [A, D])
    assert clausal_entails(mgr, f, [A, -A])
    assert is_implicant(mgr, f, [B, C])
    assert not is_implicant(mgr, f, [B])
    with pytest.raises(VsError):
        is_implicant(mgr, f, [B, -B])


def test_forget(mgr):
    f = running_example(mgr)
    a, b, c = mgr.literal(A), mgr.literal(B), mgr.literal(C)
    g = forget_singleton(mgr, f, B)
    assert table_of_vs(mgr, g) == table_of_vs(mgr, mgr.disjoin(a, c))
    assert count(mgr, g, universe=[A, C, D]) == 6
    assert equivalent(mgr, forget_singleton(mgr, g, B), g)
    assert table_of_vs(mgr, forget_singleton(mgr, mgr.conjoin(a, b), A)) == table_of_vs(mgr, b)
    with pytest.raises(VsError):
        forget_singleton(mgr, f, 0)
    loose = forget_singleton(mgr, f, B, uncompressed=True)
    assert table_of_vs(mgr, loose) == table_of_vs(mgr, g)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(0, 3), st.randoms(use_true_random=False))
def test_queries_match_oracle(m, cfg, rnd):
    mode, comp = CONFIGS[cfg]
    mgr = VsManager(random_vtree(rnd, m), mode=mode, compress=comp)
    t1, t2 = random_table(rnd, m), random_table(rnd, m)
    f, g = build_shannon(mgr, t1), build_shannon(mgr, t2)
    assert count(mgr, f) == t1.count
    models = list(enumerate_models(mgr, f))
    assert len(models) == t1.count
    assert len({format_model(x) for x in models}) == len(models)
    assert entails(mgr, f, g) == bool((~t1.bits | t2.bits).all())
    assert equivalent(mgr, f, g) == (t1 == t2)
    assert satisfiable(mgr, f) == (t1.count > 0)
    assert valid(mgr, f) == (t1.count == 1 << m)
    clause = [v if rnd.random() < 0.5 else -v for v in rnd.sample(range(1, m + 1), rnd.randint(1, m))]
    covered = t1.bits.copy()
    for lit in clause:
        col = t1.column(abs(lit))
        covered &= ~(col if lit > 0 else ~col)
    assert clausal_entails(mgr, f, clause) == (not covered.any())
    assert is_implicant(mgr, f, clause) == bool(t1.condition(clause).bits.all())
    x = rnd.randint(1, m)
    assert table_of_vs(mgr, forget_singleton(mgr, f, x)) == t1.forget(x)


def test_entails_is_a_preorder():
    rng = random.Random(31)
    mgr = VsManager(build_balanced(5))
    fs = [build_shannon(mgr, random_table(rng, 5)) for _ in range(12)]
    for f in fs:
        assert entails(mgr, f, f)
        for g in fs:
            both = entails(mgr, f, g) and entails(mgr, g, f)
            assert both == equivalent(mgr, f, g)
            for h in fs[:4]:
                if entails(mgr, f, g) and entails(mgr, g, h):
                    assert entails(mgr, f, h)
