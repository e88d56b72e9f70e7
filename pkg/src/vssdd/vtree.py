"""Vtrees: ordered full binary trees over variables ``1..M``.

Nodes carry 1-based preorder ids; id 0 is reserved for constants and acts as
a right descendant of every node. Besides the shape, a :class:`Vtree` keeps

* subtree leaf counts ``L``,
* an isomorphism-class table ``e`` (minimum preorder id among subtrees with
  the same shape),
* an Euler-tour/sparse-table index for O(1) lowest-common-ancestor queries.

Because ids are assigned in preorder, the subtree of ``v`` occupies the
contiguous id range ``[v, v + 2 L(v) - 2]`` and corresponding nodes of two
isomorphic subtrees differ by the same constant shift.
"""
from __future__ import annotations

import random
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "Vtree",
    "VtreeError",
    "VtreeParseError",
    "build_balanced",
    "build_right_linear",
    "random_vtree",
    "parse_vtree",
    "serialize_vtree",
]

# A nested description: a variable (int) for a leaf, a pair for an internal node.
Nested = Union[int, tuple]

LEFT = "left"
RIGHT = "right"
EQUAL = "equal"
UNRELATED = "unrelated"


class VtreeError(ValueError):
    """Invalid vtree construction or invalid node id."""


class VtreeParseError(VtreeError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class Vtree:
    """Immutable vtree indexed by preorder ids ``1 .. 2M-1``.

    Per-node tables are plain lists of length ``2M`` whose slot 0 belongs to
    the constant sentinel.
    """

    def __init__(self, nested: Nested):
        self._build(nested)

    # ------------------------------------------------------------------
    # construction
    def _build(self, nested: Nested) -> None:
        left = [0]
        right = [0]
        parent = [0]
        var = [0]
        # iterative preorder walk; children are filled in after they get ids
        stack = [(nested, 0, None)]
        while stack:
            item, par, side = stack.pop()
            nid = len(var)
            left.append(0)
            right.append(0)
            parent.append(par)
            if isinstance(item, tuple):
                if len(item) != 2:
                    raise VtreeError(f"internal node must have two children, got {item!r}")
                var.append(0)
                # right pushed first so the left subtree is numbered first
                stack.append((item[1], nid, RIGHT))
                stack.append((item[0], nid, LEFT))
            else:
                if isinstance(item, bool) or not isinstance(item, int) or item < 1:
                    raise VtreeError(f"leaf variable must be a positive int, got {item!r}")
                var.append(item)
            if side == LEFT:
                left[par] = nid
            elif side == RIGHT:
                right[par] = nid

        size = len(var) - 1
        leaf_vars = [v for v in var[1:] if v]
        m = len(leaf_vars)
        if sorted(leaf_vars) != list(range(1, m + 1)):
            raise VtreeError("leaf variables must be a bijection with 1..M")
        self.M = m
        self.size = size
        self.left = left
        self.right = right
        self.parent = parent
        self.var = var
        self.leaf_of = [0] * (m + 1)
        for nid in range(1, size + 1):
            if var[nid]:
                self.leaf_of[var[nid]] = nid

        leaves = [0] * (size + 1)
        depth = [0] * (size + 1)
        for nid in range(1, size + 1):
            if nid > 1:
                depth[nid] = depth[parent[nid]] + 1
        for nid in range(size, 0, -1):
            leaves[nid] = 1 if var[nid] else leaves[left[nid]] + leaves[right[nid]]
        self.L = leaves
        self.depth = depth

        # shape classes: leaves share code 0, internal codes are interned pairs
        codes = [0] * (size + 1)
        interned: dict[tuple[int, int], int] = {}
        for nid in range(size, 0, -1):
            if not var[nid]:
                key = (codes[left[nid]], codes[right[nid]])
                codes[nid] = interned.setdefault(key, len(interned) + 1)
        first: dict[int, int] = {}
        self.e = [0] * (size + 1)
        for nid in range(1, size + 1):
            self.e[nid] = first.setdefault(codes[nid], nid)
        self._shape_code = codes

        self._build_lca()

    def _build_lca(self) -> None:
        euler: list[int] = []
        first = [0] * (self.size + 1)
        stack = [(1, False)]
        while stack:
            nid, done = stack.pop()
            if done:
                euler.append(self.parent[nid])
                continue
            first[nid] = len(euler)
            euler.append(nid)
            if not self.var[nid]:
                # after each child returns, the tour revisits this node
                stack.append((self.right[nid], True))
                stack.append((self.right[nid], False))
                stack.append((self.left[nid], True))
                stack.append((self.left[nid], False))
        n = len(euler)
        log = [0] * (n + 1)
        for i in range(2, n + 1):
            log[i] = log[i >> 1] + 1
        depth = self.depth
        table = [euler]
        j = 1
        while (1 << j) <= n:
            prev = table[-1]
            half = 1 << (j - 1)
            row = []
            for i in range(n - (1 << j) + 1):
                a, b = prev[i], prev[i + half]
                row.append(a if depth[a] <= depth[b] else b)
            table.append(row)
            j += 1
        self._euler_first = first
        self._log = log
        self._sparse = table

    # ------------------------------------------------------------------
    # basic accessors
    @property
    def root(self) -> int:
        return 1

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"Vtree(M={self.M}, nodes={self.size})"

    def is_leaf(self, v: int) -> bool:
        return self.var[v] != 0

    def check_id(self, v: int, allow_sentinel: bool = True) -> None:
        lo = 0 if allow_sentinel else 1
        if not isinstance(v, int) or not lo <= v <= self.size:
            raise VtreeError(f"invalid vtree node id {v!r}")

    def end(self, v: int) -> int:
        """Largest preorder id inside the subtree of ``v``."""
        return v + 2 * self.L[v] - 2

    def contains(self, anc: int, desc: int) -> bool:
        """True iff ``desc`` lies in the subtree of ``anc`` (not for sentinel)."""
        return anc <= desc <= anc + 2 * self.L[anc] - 2

    def variables(self, v: int | None = None) -> list[int]:
        """Variables under ``v`` (default: whole tree) in leaf preorder."""
        v = 1 if v is None else v
        var = self.var
        return [var[i] for i in range(v, self.end(v) + 1) if var[i]]

    def nodes(self) -> range:
        return range(1, self.size + 1)

    def leaves(self) -> Iterator[int]:
        return (i for i in self.nodes() if self.var[i])

    def to_nested(self, v: int = 1) -> Nested:
        if self.var[v]:
            return self.var[v]
        return (self.to_nested(self.left[v]), self.to_nested(self.right[v]))

    def shape_equal(self, other: "Vtree") -> bool:
        """Same shape and same leaf labels."""
        return self.var == other.var and self.left == other.left and self.right == other.right

    # ------------------------------------------------------------------
    # queries
    def lca(self, u: int, w: int) -> int:
        """Lowest common ancestor; the sentinel 0 is absorbed by the other id."""
        if u == 0:
            if w != 0:
                self.check_id(w)
            return w
        if w == 0:
            self.check_id(u)
            return u
        if u == w:
            self.check_id(u)
            return u
        try:
            a, b = self._euler_first[u], self._euler_first[w]
        except (IndexError, TypeError):
            raise VtreeError(f"invalid vtree node id in lca({u!r}, {w!r})") from None
        if u < 0 or w < 0:
            raise VtreeError(f"invalid vtree node id in lca({u!r}, {w!r})")
        if a > b:
            a, b = b, a
        k = self._log[b - a + 1]
        row = self._sparse[k]
        x, y = row[a], row[b - (1 << k) + 1]
        return x if self.depth[x] <= self.depth[y] else y

    def iso_class(self, w: int) -> int:
        self.check_id(w, allow_sentinel=False)
        return self.e[w]

    def shift_delta(self, u: int, w: int) -> int | None:
        """Preorder shift from subtree ``u`` to an isomorphic subtree ``w``."""
        self.check_id(u, allow_sentinel=False)
        self.check_id(w, allow_sentinel=False)
        if self.e[u] != self.e[w]:
            return None
        return w - u

    def descendant_side(self, anc: int, desc: int) -> str:
        """Classify ``desc`` relative to ``anc``: left, right, equal or unrelated."""
        self.check_id(anc)
        self.check_id(desc)
        if anc == desc:
            return EQUAL
        if desc == 0:
            return RIGHT
        if anc == 0 or self.var[anc]:
            return UNRELATED
        r = self.right[anc]
        if anc < desc < r:
            return LEFT
        if r <= desc <= self.end(anc):
            return RIGHT
        return UNRELATED


# ----------------------------------------------------------------------
# builders
def _check_variables(variables: Sequence[int]) -> list[int]:
    variables = list(variables)
    if not variables:
        raise VtreeError("a vtree needs at least one variable")
    return variables


def _balanced(variables: list[int]) -> Nested:
    if len(variables) == 1:
        return variables[0]
    half = (len(variables) + 1) // 2
    return (_balanced(variables[:half]), _balanced(variables[half:]))


def build_balanced(variables: Sequence[int] | int) -> Vtree:
    """Balanced vtree; the left half receives ``ceil(M/2)`` leaves.

    ``variables`` is a variable order or just ``M`` for ``1..M``.
    """
    if isinstance(variables, int):
        variables = range(1, variables + 1)
    return Vtree(_balanced(_check_variables(variables)))


def build_right_linear(variables: Sequence[int] | int) -> Vtree:
    """Right-linear vtree: every internal node has a leaf as its left child."""
    if isinstance(variables, int):
        variables = range(1, variables + 1)
    variables = _check_variables(variables)
    nested: Nested = variables[-1]
    for v in reversed(variables[:-1]):
        nested = (v, nested)
    return Vtree(nested)


def random_vtree(m: int, rng: random.Random | None = None, shuffle: bool = True) -> Vtree:
    """Uniformly random split points over a (shuffled) variable order."""
    rng = rng or random.Random()
    order = list(range(1, m + 1))
    if shuffle:
        rng.shuffle(order)

    def grow(vs: list[int]) -> Nested:
        if len(vs) == 1:
            return vs[0]
        cut = rng.randint(1, len(vs) - 1)
        return (grow(vs[:cut]), grow(vs[cut:]))

    return Vtree(grow(_check_variables(order)))


# ----------------------------------------------------------------------
# text format
def parse_vtree(text: str) -> Vtree:
    """Read ``vtree N`` / ``L id var`` / ``I id left right`` text.

    External ids are arbitrary; preorder ids are reassigned.
    """
    header = None
    leaves: dict[int, int] = {}
    internals: dict[int, tuple[int, int]] = {}
    lines_of: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        try:
            nums = [int(t) for t in tokens[1:]]
        except ValueError:
            raise VtreeParseError(f"non-integer field in {raw.strip()!r}", lineno) from None
        if tag == "vtree":
            if header is not None or len(nums) != 1 or nums[0] < 1:
                raise VtreeParseError("malformed header", lineno)
            header = nums[0]
            continue
        if header is None:
            raise VtreeParseError("node line before 'vtree' header", lineno)
        if tag == "L" and len(nums) == 2:
            nid, v = nums
        elif tag == "I" and len(nums) == 3:
            nid = nums[0]
        else:
            raise VtreeParseError(f"unrecognised line {raw.strip()!r}", lineno)
        if nid in leaves or nid in internals:
            raise VtreeParseError(f"duplicate node id {nid}", lineno)
        lines_of[nid] = lineno
        if tag == "L":
            leaves[nid] = v
        else:
            internals[nid] = (nums[1], nums[2])
    if header is None:
        raise VtreeParseError("missing 'vtree' header")
    count = len(leaves) + len(internals)
    if count != header:
        raise VtreeParseError(f"header announces {header} nodes, found {count}")
    children: set[int] = set()
    for nid, (a, b) in internals.items():
        for c in (a, b):
            if c not in leaves and c not in internals:
                raise VtreeParseError(f"dangling child id {c}", lines_of[nid])
            if c in children:
                raise VtreeParseError(f"node {c} has two parents", lines_of[nid])
            children.add(c)
    roots = [n for n in list(leaves) + list(internals) if n not in children]
    if len(roots) != 1:
        raise VtreeParseError(f"expected exactly one root, found {len(roots)}")

    def nested(nid: int, depth: int = 0) -> Nested:
        if nid in leaves:
            return leaves[nid]
        a, b = internals[nid]
        return (nested(a), nested(b))

    try:
        return Vtree(nested(roots[0]))
    except RecursionError:
        raise VtreeParseError("vtree contains a cycle or is too deep") from None
    except VtreeError as exc:
        if isinstance(exc, VtreeParseError):
            raise
        raise VtreeParseError(str(exc)) from None


def serialize_vtree(vtree: Vtree) -> str:
    """Emit preorder ids, children before parents."""
    out = [f"vtree {vtree.size}"]
    order: list[int] = []
    stack = [(1, False)]
    while stack:
        nid, expanded = stack.pop()
        if expanded or vtree.var[nid]:
            order.append(nid)
            continue
        stack.append((nid, True))
        stack.append((vtree.right[nid], False))
        stack.append((vtree.left[nid], False))
    for nid in order:
        if vtree.var[nid]:
            out.append(f"L {nid} {vtree.var[nid]}")
        else:
            out.append(f"I {nid} {vtree.left[nid]} {vtree.right[nid]}")
    return "\n".join(out) + "\n"


def iter_pairs(vtree: Vtree) -> Iterable[tuple[int, int]]:
    """All ordered pairs of distinct isomorphic nodes."""
    for u in vtree.nodes():
        for w in vtree.nodes():
            if u != w and vtree.e[u] == vtree.e[w]:
                yield u, w
