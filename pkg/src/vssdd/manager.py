"""VS-SDD manager.

A VS-SDD is a pair ``(structure, offset)``. Structures are interned ints:

* ``FALSE = 0`` and ``TRUE = 1`` (offset 0),
* ``LIT = 2`` / ``NLIT = 3``, the positive and negative literal shapes whose
  variable is read from the leaf at the offset,
* decompositions ``>= 4``, each a tuple of elements ``(p, d, s, e)`` whose
  children live at ``offset + d`` and ``offset + e`` (deltas are 0 for
  constant children).

Decompositions are interned per isomorphism class of the vtree node they
are instantiated at, so one structure serves every shifted copy of a
function (the identical vtree rule). Operation caches are keyed by
structures and relative positions, never by absolute offsets.
"""
from __future__ import annotations

import sys
from bisect import bisect_left
from collections import Counter
from typing import Iterable, Iterator, NamedTuple

from .vtree import Vtree

__all__ = [
    "VsManager",
    "VsSdd",
    "VsError",
    "InvariantError",
    "FALSE",
    "TRUE",
    "LIT",
    "NLIT",
    "AND",
    "OR",
    "XOR",
    "TRIMMED",
    "NORMALIZED",
]

FALSE, TRUE, LIT, NLIT = 0, 1, 2, 3
AND, OR, XOR = "and", "or", "xor"
TRIMMED, NORMALIZED = "trimmed", "normalized"

_OPS = {
    AND: lambda a, b: a & b,
    OR: lambda a, b: a | b,
    XOR: lambda a, b: a ^ b,
}
# terminal as (value when the leaf variable is 0, value when it is 1)
_TERM_TABLE = {FALSE: (0, 0), TRUE: (1, 1), LIT: (0, 1), NLIT: (1, 0)}
_TABLE_TERM = {v: k for k, v in _TERM_TABLE.items()}

if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


class VsError(ValueError):
    """Contract violation by the caller (bad variable, offset, term, mode)."""


class InvariantError(AssertionError):
    """Internal invariant broken: a decomposition that is not an X-partition."""


class VsSdd(NamedTuple):
    structure: int
    offset: int

    def is_constant(self) -> bool:
        return self.structure <= TRUE

    def __repr__(self) -> str:
        name = {FALSE: "F", TRUE: "T", LIT: "v", NLIT: "-v"}.get(self.structure, str(self.structure))
        return f"VsSdd({name}, {self.offset})"


class VsManager:
    """Unique table and operation caches for VS-SDDs over one vtree.

    ``mode`` is ``"trimmed"`` (the default; canonical with compression) or
    ``"normalized"`` (every prime at the left child, every sub at the right
    child, light trimming only). Handles in normalized mode always sit at
    the vtree root, or at offset 0 for constants.
    """

    def __init__(self, vtree: Vtree, mode: str = TRIMMED, compress: bool = True):
        if mode not in (TRIMMED, NORMALIZED):
            raise VsError(f"unknown mode {mode!r}")
        self.vtree = vtree
        self.mode = mode
        self.compress = compress
        first_leaf = next(vtree.leaves())
        self._leaf_class = vtree.e[first_leaf]
        self._kind_elems: list = [None, None, None, None]
        self._cls: list[int] = [0, 0, self._leaf_class, self._leaf_class]
        self._unique: dict = {}
        self._conv: dict = {}
        self._norm_cache: dict = {}
        self._consistent: dict[int, bool] = {}
        self.stats: Counter = Counter()

    # ------------------------------------------------------------------
    # structure access
    def __len__(self) -> int:
        return len(self._cls)

    def elements(self, structure: int) -> tuple:
        if structure < 4:
            raise VsError(f"structure {structure} is not a decomposition")
        return self._kind_elems[structure]

    def structure_class(self, structure: int) -> int:
        """Isomorphism class a structure was interned under (0 for constants)."""
        return self._cls[structure]

    def is_decomposition(self, structure: int) -> bool:
        return structure >= 4

    def decompositions(self) -> Iterator[tuple[int, int, tuple]]:
        """All interned decompositions as ``(id, class, elements)``."""
        for sid in range(4, len(self._cls)):
            yield sid, self._cls[sid], self._kind_elems[sid]

    # ------------------------------------------------------------------
    # terminals
    def true(self) -> VsSdd:
        return VsSdd(TRUE, 0)

    def false(self) -> VsSdd:
        return VsSdd(FALSE, 0)

    def constant(self, value: bool) -> VsSdd:
        return VsSdd(TRUE if value else FALSE, 0)

    def literal(self, var: int, positive: bool = True) -> VsSdd:
        """Literal handle; lifted to the root in normalized mode."""
        vt = self.vtree
        if isinstance(var, bool) or not isinstance(var, int) or not 1 <= var <= vt.M:
            raise VsError(f"unknown variable {var!r}")
        leaf = vt.leaf_of[var]
        if self.mode == TRIMMED:
            return VsSdd(LIT if positive else NLIT, leaf)
        pos, neg = VsSdd(LIT, leaf), VsSdd(NLIT, leaf)
        child = leaf
        while child != 1:
            par = vt.parent[child]
            cls = vt.e[par]
            if vt.left[par] == child:
                d = child - par
                pos_s = self._node([(pos.structure, d, TRUE, 0), (neg.structure, d, FALSE, 0)], cls)
                neg_s = self._node([(neg.structure, d, TRUE, 0), (pos.structure, d, FALSE, 0)], cls)
            else:
                e = child - par
                pos_s = self._node([(TRUE, 0, pos.structure, e)], cls)
                neg_s = self._node([(TRUE, 0, neg.structure, e)], cls)
            pos, neg = VsSdd(pos_s[0], par), VsSdd(neg_s[0], par)
            child = par
        return pos if positive else neg

    # ------------------------------------------------------------------
    # validation
    def check(self, f: VsSdd) -> None:
        """Reject handles that cannot belong to this manager."""
        s, k = f
        if not isinstance(s, int) or not 0 <= s < len(self._cls):
            raise VsError(f"structure {s!r} does not belong to this manager")
        if s <= TRUE:
            if k != 0:
                raise VsError(f"constant with non-zero offset {k}")
            return
        if not isinstance(k, int) or not 1 <= k <= self.vtree.size:
            raise VsError(f"invalid offset {k!r}")
        if self.vtree.e[k] != self._cls[s]:
            raise VsError(f"structure {s} cannot live at offset {k} (identical vtree rule)")
        if self.mode == NORMALIZED and k != 1:
            raise VsError("normalized handles must sit at the vtree root")

    # ------------------------------------------------------------------
    # unique table
    def get_node(self, elements: Iterable[tuple[int, int, int, int]], cls: int) -> tuple[int, int]:
        """Compress, trim and intern ``elements`` under class ``cls``.

        Returns ``(structure, delta)``: ``delta`` is the offset of the result
        relative to the class node (0 for fresh decompositions and constants).
        """
        return self._node(list(elements), cls)

    def _node(self, elems: list, cls: int) -> tuple[int, int]:
        self.stats["get_node"] += 1
        if not elems:
            raise InvariantError("decomposition without elements")
        vt = self.vtree
        if self.compress and len(elems) > 1:
            merged: dict[tuple[int, int], tuple[int, int]] = {}
            for p, d, s, e in elems:
                key = (s, e)
                prev = merged.get(key)
                if prev is None:
                    merged[key] = (p, d)
                    continue
                q, dq = prev
                if self.mode == TRIMMED:
                    r, kr = self._apply_t(q, cls + dq if q > TRUE else 0, False,
                                          p, cls + d if p > TRUE else 0, False, OR)
                    merged[key] = (r, kr - cls if r > TRUE else 0)
                else:
                    lc = vt.left[cls]
                    r, _ = self._apply_n(q, p, lc, OR)
                    merged[key] = (r, lc - cls if r > TRUE else 0)
            if len(merged) < len(elems):
                elems = [(p, d, s, e) for (s, e), (p, d) in merged.items()]
        for p, d, s, e in elems:
            if p == FALSE:
                raise InvariantError("false prime in decomposition")
        if self.mode == TRIMMED:
            if len(elems) == 1:
                # a lone prime is valid; without compression it may not be TRUE itself
                p, d, s, e = elems[0]
                if p != TRUE and self.compress:
                    raise InvariantError("single prime is not true")
                return (s, e if s > TRUE else 0)
            if len(elems) == 2 and {elems[0][2], elems[1][2]} == {TRUE, FALSE}:
                p, d, s, e = elems[0] if elems[0][2] == TRUE else elems[1]
                return (p, d if p > TRUE else 0)
        elif len(elems) == 1 and elems[0][2] <= TRUE:
            if elems[0][0] != TRUE and self.compress:
                raise InvariantError("single prime is not true")
            return (elems[0][2], 0)
        return (self.intern(elems, cls), 0)

    def intern(self, elems: Iterable[tuple[int, int, int, int]], cls: int) -> int:
        """Intern a decomposition exactly as given (no compression or trimming)."""
        key = (cls, tuple(sorted(elems)))
        sid = self._unique.get(key)
        if sid is None:
            sid = len(self._cls)
            self._kind_elems.append(key[1])
            self._cls.append(cls)
            self._unique[key] = sid
        return sid

    # ------------------------------------------------------------------
    # consistency
    def consistent(self, structure: int) -> bool:
        """False iff the structure denotes the constant false function."""
        if structure == FALSE:
            return False
        if structure < 4:
            return True
        hit = self._consistent.get(structure)
        if hit is not None:
            return hit
        res = False
        for p, _, s, _ in self._kind_elems[structure]:
            if self.consistent(p) and self.consistent(s):
                res = True
                break
        self._consistent[structure] = res
        return res

    # ------------------------------------------------------------------
    # apply
    def apply(self, f: VsSdd, g: VsSdd, op: str) -> VsSdd:
        if op not in _OPS:
            raise VsError(f"unknown operator {op!r}")
        self.check(f)
        self.check(g)
        if self.mode == TRIMMED:
            return VsSdd(*self._apply_t(f[0], f[1], False, g[0], g[1], False, op))
        return VsSdd(*self._apply_n(f[0], g[0], 1, op))

    def conjoin(self, f: VsSdd, g: VsSdd) -> VsSdd:
        return self.apply(f, g, AND)

    def disjoin(self, f: VsSdd, g: VsSdd) -> VsSdd:
        return self.apply(f, g, OR)

    def xor(self, f: VsSdd, g: VsSdd) -> VsSdd:
        return self.apply(f, g, XOR)

    def negate(self, f: VsSdd) -> VsSdd:
        """Exclusive-or with true."""
        return self.apply(f, self.true(), XOR)

    def conjoin_all(self, fs: Iterable[VsSdd]) -> VsSdd:
        res = self.true()
        for f in fs:
            res = self.conjoin(res, f)
        return res

    def disjoin_all(self, fs: Iterable[VsSdd]) -> VsSdd:
        res = self.false()
        for f in fs:
            res = self.disjoin(res, f)
        return res

    def apply_trimmed(self, a: int, b: int, ka: int, kb: int, fa: bool, fb: bool, op: str) -> VsSdd:
        """Trimmed apply on raw structures with offsets and negation flags."""
        if self.mode != TRIMMED:
            raise VsError("apply_trimmed needs a trimmed-mode manager")
        if op not in _OPS:
            raise VsError(f"unknown operator {op!r}")
        for s, k in ((a, ka), (b, kb)):
            if s <= TRUE:
                continue
            self.check(VsSdd(s, k))
        return VsSdd(*self._apply_t(a, ka, fa, b, kb, fb, op))

    def apply_normalized(self, a: int, b: int, k: int, op: str) -> VsSdd:
        """Normalized apply of two structures sharing offset ``k``."""
        if self.mode != NORMALIZED:
            raise VsError("apply_normalized needs a normalized-mode manager")
        if op not in _OPS:
            raise VsError(f"unknown operator {op!r}")
        self.vtree.check_id(k, allow_sentinel=False)
        for s in (a, b):
            if s > TRUE and self._cls[s] != self.vtree.e[k]:
                raise VsError(f"structure {s} cannot live at offset {k}")
        return VsSdd(*self._apply_n(a, b, k, op))

    @staticmethod
    def _terminal(a: int, b: int, op: str) -> int:
        fa, fb = _TERM_TABLE[a], _TERM_TABLE[b]
        fn = _OPS[op]
        return _TABLE_TERM[(fn(fa[0], fb[0]), fn(fa[1], fb[1]))]

    def expand(self, a: int, f: bool, k: int, w: int) -> list[tuple]:
        """Elements of ``(a, k)`` as a partition at vtree node ``w``.

        Each element is ``(p, dp, s, ds, flag_p, flag_s)`` with deltas
        relative to ``k``.
        """
        vt = self.vtree
        if k != 0 and not vt.contains(w, k):
            raise VsError(f"offset {k} is not inside vtree node {w}")
        if k == w:
            return [(p, d, s, e, False, f) for p, d, s, e in self._kind_elems[a]]
        if k != 0 and k < vt.right[w]:
            return [(a, 0, TRUE, 0, f, False), (a, 0, FALSE, 0, not f, False)]
        return [(TRUE, 0, a, 0, False, f)]

    def _apply_t(self, a: int, ka: int, fa: bool, b: int, kb: int, fb: bool, op: str) -> tuple[int, int]:
        stats = self.stats
        stats["apply_calls"] += 1
        if fa and a < 4:
            a ^= 1
            fa = False
        if fb and b < 4:
            b ^= 1
            fb = False
        if a <= TRUE:
            ka = 0
        if b <= TRUE:
            kb = 0
        # shortcuts that need no negation
        if a <= TRUE or b <= TRUE:
            if a > TRUE or b > TRUE:
                if a <= TRUE:
                    c, x, kx, fx = a, b, kb, fb
                else:
                    c, x, kx, fx = b, a, ka, fa
                if op == AND and c == FALSE:
                    return (FALSE, 0)
                if op == OR and c == TRUE:
                    return (TRUE, 0)
                if not fx and ((op == AND and c == TRUE) or (op != AND and c == FALSE)):
                    return (x, kx)
        elif a == b and ka == kb:
            if fa != fb:
                return (FALSE, 0) if op == AND else (TRUE, 0)
            if not fa:
                return (FALSE, 0) if op == XOR else (a, ka)
        vt = self.vtree
        w = vt.lca(ka, kb)
        if a < 4 and b < 4 and (ka == 0 or kb == 0 or ka == kb):
            stats["terminal"] += 1
            g = self._terminal(a, b, op)
            return (g, 0) if g <= TRUE else (g, max(ka, kb))
        ea = ka - w if ka > w else 0
        eb = kb - w if kb > w else 0
        cls = vt.e[w]
        key = (a, b, fa, fb, ea, eb, cls, op, self.compress)
        hit = self._conv.get(key)
        if hit is not None:
            stats["cache_hits"] += 1
            s, d = hit
            return (s, 0) if s <= TRUE else (s, w + d)
        stats["cache_misses"] += 1
        elems = []
        for p, dp, s, ds, fp, fs in self.expand(a, fa, ka, w):
            for q, dq, r, dr, fq, fr in self.expand(b, fb, kb, w):
                P, kP = self._apply_t(p, ka + dp, fp, q, kb + dq, fq, AND)
                if not self.consistent(P):
                    continue
                S, kS = self._apply_t(s, ka + ds, fs, r, kb + dr, fr, op)
                elems.append((P, kP - w if P > TRUE else 0, S, kS - w if S > TRUE else 0))
        res = self._node(elems, cls)
        self._conv[key] = res
        s, d = res
        return (s, 0) if s <= TRUE else (s, w + d)

    def _apply_n(self, a: int, b: int, k: int, op: str) -> tuple[int, int]:
        stats = self.stats
        stats["apply_calls"] += 1
        if a < 4 and b < 4:
            stats["terminal"] += 1
            g = self._terminal(a, b, op)
            return (g, 0) if g <= TRUE else (g, k)
        if a <= TRUE or b <= TRUE:
            c, x = (a, b) if a <= TRUE else (b, a)
            if op == AND:
                return (x, k) if c == TRUE else (FALSE, 0)
            if op == OR:
                return (TRUE, 0) if c == TRUE else (x, k)
            if c == FALSE:
                return (x, k)
        elif a == b:
            return (FALSE, 0) if op == XOR else (a, k)
        key = (a, b, op, self.compress)
        hit = self._norm_cache.get(key)
        if hit is not None:
            stats["cache_hits"] += 1
            return (hit, 0) if hit <= TRUE else (hit, k)
        stats["cache_misses"] += 1
        vt = self.vtree
        lc, rc = vt.left[k], vt.right[k]
        dl, dr = lc - k, rc - k
        elems = []
        for p, _, s, _ in self._norm_elements(a):
            for q, _, r, _ in self._norm_elements(b):
                P, _ = self._apply_n(p, q, lc, AND)
                if not self.consistent(P):
                    continue
                S, _ = self._apply_n(s, r, rc, op)
                elems.append((P, dl if P > TRUE else 0, S, dr if S > TRUE else 0))
        s, _ = self._node(elems, vt.e[k])
        self._norm_cache[key] = s
        return (s, 0) if s <= TRUE else (s, k)

    def _norm_elements(self, a: int):
        if a == TRUE:
            return ((TRUE, 0, TRUE, 0),)
        if a == FALSE:
            return ((TRUE, 0, FALSE, 0),)
        return self._kind_elems[a]

    # ------------------------------------------------------------------
    # conditioning
    def condition(self, f: VsSdd, term: Iterable[int]) -> VsSdd:
        """Restrict ``f`` by a consistent set of signed literals."""
        self.check(f)
        vt = self.vtree
        assign: dict[int, bool] = {}
        for lit in term:
            v = abs(lit)
            if lit == 0 or v > vt.M:
                raise VsError(f"unknown variable in term: {lit!r}")
            if v in assign and assign[v] != (lit > 0):
                raise VsError(f"inconsistent term {sorted(term)!r}")
            assign[v] = lit > 0
        if not assign:
            return f
        marked = sorted(vt.leaf_of[v] for v in assign)
        cache: dict[tuple[int, int], tuple[int, int]] = {}

        def touches(k: int) -> bool:
            i = bisect_left(marked, k)
            return i < len(marked) and marked[i] <= vt.end(k)

        def go(a: int, k: int) -> tuple[int, int]:
            if a <= TRUE:
                return (a, 0)
            if not touches(k):
                return (a, k)
            hit = cache.get((a, k))
            if hit is not None:
                return hit
            if a < 4:
                value = assign.get(vt.var[k])
                if value is None:
                    res = (a, k)
                else:
                    res = (TRUE, 0) if value == (a == LIT) else (FALSE, 0)
            else:
                elems = []
                for p, d, s, e in self._kind_elems[a]:
                    P, kP = go(p, k + d)
                    if not self.consistent(P):
                        continue
                    S, kS = go(s, k + e)
                    elems.append((P, kP - k if P > TRUE else 0, S, kS - k if S > TRUE else 0))
                x, dx = self._node(elems, vt.e[k])
                res = (x, 0) if x <= TRUE else (x, k + dx)
            cache[(a, k)] = res
            return res

        return VsSdd(*go(f.structure, f.offset))

    # ------------------------------------------------------------------
    # traversal and sizes
    def reachable(self, structure: int) -> set[int]:
        seen = {structure}
        stack = [structure]
        elems = self._kind_elems
        while stack:
            x = stack.pop()
            if x >= 4:
                for p, _, s, _ in elems[x]:
                    if p not in seen:
                        seen.add(p)
                        stack.append(p)
                    if s not in seen:
                        seen.add(s)
                        stack.append(s)
        return seen

    def placements(self, f: VsSdd) -> set[tuple[int, int]]:
        """Distinct ``(structure, absolute offset)`` pairs reachable from ``f``."""
        seen = {tuple(f)}
        stack = [tuple(f)]
        elems = self._kind_elems
        while stack:
            x, k = stack.pop()
            if x >= 4:
                for p, d, s, e in elems[x]:
                    for c in ((p, k + d if p > TRUE else 0), (s, k + e if s > TRUE else 0)):
                        if c not in seen:
                            seen.add(c)
                            stack.append(c)
        return seen

    def size(self, f: VsSdd | int) -> int:
        """Element count summed over distinct reachable decomposition structures."""
        s = f if isinstance(f, int) else f.structure
        return sum(len(self._kind_elems[x]) for x in self.reachable(s) if x >= 4)

    def node_count(self, f: VsSdd | int) -> int:
        """Distinct reachable structures, terminals included."""
        s = f if isinstance(f, int) else f.structure
        return len(self.reachable(s))

    def sdd_size(self, f: VsSdd) -> int:
        """Size of the same diagram with every placement materialized as its own node."""
        return sum(len(self._kind_elems[x]) for x, _ in self.placements(f) if x >= 4)

    def sdd_node_count(self, f: VsSdd) -> int:
        """Decomposition nodes an SDD would need (one per distinct placement)."""
        return sum(1 for x, _ in self.placements(f) if x >= 4)

    def audit(self, f: VsSdd) -> list[str]:
        """Identical-vtree-rule and placement violations reachable from ``f``."""
        vt = self.vtree
        problems = []
        for x, k in self.placements(f):
            if x <= TRUE:
                continue
            if not 1 <= k <= vt.size:
                problems.append(f"structure {x} at invalid offset {k}")
            elif x < 4 and not vt.is_leaf(k):
                problems.append(f"literal shape at internal node {k}")
            elif vt.e[k] != self._cls[x]:
                problems.append(f"structure {x} (class {self._cls[x]}) at offset {k} (class {vt.e[k]})")
            elif x >= 4:
                for p, d, s, e in self._kind_elems[x]:
                    if p > TRUE and vt.descendant_side(k, k + d) != "left":
                        problems.append(f"prime of {x}@{k} not in the left subtree")
                    if s > TRUE and vt.descendant_side(k, k + e) != "right":
                        problems.append(f"sub of {x}@{k} not in the right subtree")
        return problems

    def clear_caches(self) -> None:
        self._conv.clear()
        self._norm_cache.clear()
