"""Shared generators for the test suite."""
from __future__ import annotations

import random

import numpy as np

from vssdd.frontend import Cnf
from vssdd.oracle import TruthTable
from vssdd.vtree import build_balanced, build_right_linear

CONFIGS = [("trimmed", True), ("trimmed", False), ("normalized", True), ("normalized", False)]


def random_cnf(rng: random.Random, nvars=(3, 10), nclauses=(2, 15), width=(1, 4)) -> Cnf:
    m = rng.randint(*nvars)
    clauses = []
    for _ in range(rng.randint(*nclauses)):
        vs = rng.sample(range(1, m + 1), min(m, rng.randint(*width)))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Cnf(m, clauses)


def random_vtree(rng: random.Random, m: int):
    order = list(range(1, m + 1))
    rng.shuffle(order)
    return build_balanced(order) if rng.random() < 0.5 else build_right_linear(order)


def random_table(rng: random.Random, m: int, density: float | None = None) -> TruthTable:
    p = rng.random() if density is None else density
    gen = np.random.default_rng(rng.randrange(1 << 30))
    return TruthTable(m, gen.random(1 << m) < p)


def build_shannon(mgr, table: TruthTable, variables=None):
    """Construct the function of ``table`` by Shannon expansion on x1, x2, ..."""
    m = table.num_vars
    if variables is None:
        variables = list(range(1, m + 1))
    bits = table.bits

    def rec(rows: np.ndarray, i: int):
        if not rows.any():
            return mgr.false()
        if rows.all():
            return mgr.true()
        # row index bit i selects variable i+1; split on the lowest bit
        lo, hi = rows[0::2], rows[1::2]
        x = variables[i]
        return mgr.disjoin(mgr.conjoin(mgr.literal(x, True), rec(hi, i + 1)),
                           mgr.conjoin(mgr.literal(x, False), rec(lo, i + 1)))

    return rec(bits, 0)


def table_cnf(table: TruthTable) -> Cnf:
    """One clause per falsifying row."""
    m = table.num_vars
    clauses = []
    for row in np.flatnonzero(~table.bits):
        row = int(row)
        clauses.append([-(v) if (row >> (v - 1)) & 1 else v for v in range(1, m + 1)])
    return Cnf(m, clauses)
