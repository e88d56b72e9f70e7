"""Text serialization and DOT export of VS-SDDs.

File layout (one diagram per file, vtree inline)::

    c mode <trimmed|normalized> compress <0|1>
    vtree <node-count>
    ...                       vtree lines, see vtree.serialize_vtree
    vssdd <structure-count>
    T 0 0
    T 1 1
    V 2
    NV 3
    D <id> <class> <n> <p d s e> * n
    root <structure-id> <offset>

Decomposition ids are local to the file and assigned canonically (by
height, then by a content hash), so the same diagram always serializes to
the same bytes whatever manager produced it.
"""
from __future__ import annotations

import hashlib

from .manager import FALSE, LIT, NLIT, TRUE, VsError, VsManager, VsSdd
from .vtree import parse_vtree, serialize_vtree

__all__ = ["DiagramParseError", "write_diagram", "read_diagram", "to_dot"]


class DiagramParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


_TERMINAL_SIG = {FALSE: "F", TRUE: "T", LIT: "V", NLIT: "NV"}


def _canonical_order(mgr: VsManager, root: int) -> list[int]:
    """Reachable decompositions, children before parents, in canonical order."""
    sig: dict[int, str] = dict(_TERMINAL_SIG)
    height: dict[int, int] = {FALSE: 0, TRUE: 0, LIT: 0, NLIT: 0}

    def visit(s: int) -> None:
        if s in sig:
            return
        elems = mgr.elements(s)
        for p, _, q, _ in elems:
            visit(p)
            visit(q)
        height[s] = 1 + max(max(height[p], height[q]) for p, _, q, _ in elems)
        body = sorted(f"{sig[p]},{d},{sig[q]},{e}" for p, d, q, e in elems)
        text = f"{mgr.structure_class(s)}|" + ";".join(body)
        sig[s] = hashlib.sha256(text.encode()).hexdigest()

    visit(root)
    decs = [s for s in sig if s >= 4]
    return sorted(decs, key=lambda s: (height[s], sig[s]))


def write_diagram(mgr: VsManager, f: VsSdd) -> str:
    mgr.check(f)
    order = _canonical_order(mgr, f.structure)
    local = {FALSE: 0, TRUE: 1, LIT: 2, NLIT: 3}
    for i, s in enumerate(order, 4):
        local[s] = i
    out = [f"c mode {mgr.mode} compress {int(mgr.compress)}", serialize_vtree(mgr.vtree).rstrip("\n")]
    out.append(f"vssdd {4 + len(order)}")
    out += ["T 0 0", "T 1 1", "V 2", "NV 3"]
    for s in order:
        elems = sorted((local[p], d, local[q], e) for p, d, q, e in mgr.elements(s))
        body = " ".join(f"{p} {d} {q} {e}" for p, d, q, e in elems)
        out.append(f"D {local[s]} {mgr.structure_class(s)} {len(elems)} {body}")
    out.append(f"root {local[f.structure]} {f.offset}")
    return "\n".join(out) + "\n"


def read_diagram(text: str, manager: VsManager | None = None) -> tuple[VsManager, VsSdd]:
    """Load a diagram, into ``manager`` when given (its vtree must match)."""
    lines = text.splitlines()
    mode, compress = "trimmed", True
    i = 0
    while i < len(lines) and (not lines[i].strip() or lines[i].startswith("c")):
        parts = lines[i].split()
        if len(parts) == 5 and parts[1] == "mode" and parts[3] == "compress":
            mode, compress = parts[2], parts[4] == "1"
        i += 1
    start = i
    while i < len(lines) and not lines[i].startswith("vssdd"):
        i += 1
    if i == len(lines):
        raise DiagramParseError("missing 'vssdd' section")
    try:
        vtree = parse_vtree("\n".join(lines[start:i]))
    except ValueError as exc:
        raise DiagramParseError(f"bad inline vtree: {exc}") from None
    if manager is None:
        try:
            manager = VsManager(vtree, mode=mode, compress=compress)
        except VsError as exc:
            raise DiagramParseError(str(exc)) from None
    elif manager.vtree.to_nested() != vtree.to_nested():
        raise DiagramParseError("diagram vtree differs from the manager's vtree")
    vt = manager.vtree
    ids = {0: FALSE, 1: TRUE, 2: LIT, 3: NLIT}
    root = None
    for lineno in range(i + 2, len(lines) + 1):
        line = lines[lineno - 1].strip()
        if not line or line.startswith("c"):
            continue
        tok = line.split()
        try:
            if tok[0] in ("T", "V", "NV"):
                continue  # terminal ids are fixed
            if tok[0] == "D":
                sid, cls, n = int(tok[1]), int(tok[2]), int(tok[3])
                nums = list(map(int, tok[4:]))
                if len(nums) != 4 * n or n < 1:
                    raise DiagramParseError("element count mismatch", lineno)
                if not 1 <= cls <= vt.size or vt.e[cls] != cls:
                    raise DiagramParseError(f"{cls} is not a class representative", lineno)
                elems = []
                for j in range(n):
                    p, d, q, e = nums[4 * j: 4 * j + 4]
                    if p not in ids or q not in ids:
                        raise DiagramParseError("reference to an undefined structure", lineno)
                    if (ids[p] > TRUE and vt.descendant_side(cls, cls + d) != "left") or \
                       (ids[q] > TRUE and vt.descendant_side(cls, cls + e) != "right"):
                        raise DiagramParseError("element delta outside the class subtree", lineno)
                    elems.append((ids[p], d, ids[q], e))
                ids[sid] = manager.intern(elems, cls)
            elif tok[0] == "root":
                sid, k = int(tok[1]), int(tok[2])
                if sid not in ids:
                    raise DiagramParseError("root references an undefined structure", lineno)
                root = VsSdd(ids[sid], k)
            else:
                raise DiagramParseError(f"unknown record {tok[0]!r}", lineno)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, DiagramParseError):
                raise
            raise DiagramParseError(f"malformed line {line!r}", lineno) from None
    if root is None:
        raise DiagramParseError("missing root line")
    try:
        manager.check(root)
    except VsError as exc:
        raise DiagramParseError(str(exc)) from None
    return manager, root


# ----------------------------------------------------------------------
def _const_label(s: int) -> str:
    return "&#8868;" if s == TRUE else "&#8869;"


def to_dot(mgr: VsManager, f: VsSdd) -> str:
    """Graphviz drawing: records of (prime | sub) pairs, edges labelled by delta."""
    mgr.check(f)
    out = ["digraph vssdd {", '  node [shape=record, fontname="Helvetica"];']
    s0, k0 = f
    if s0 <= TRUE:
        out.append(f'  n{s0} [shape=plaintext, label="{_const_label(s0)}"];')
        out.append("}")
        return "\n".join(out) + "\n"
    out.append(f'  root [shape=plaintext, label="k={k0}"];')
    out.append(f"  root -> n{s0};")
    for s in sorted(mgr.reachable(s0)):
        if s <= TRUE:
            continue
        if s < 4:
            label = "v" if s == LIT else "&#172;v"
            out.append(f'  n{s} [shape=plaintext, label="{label}"];')
            continue
        fields, edges = [], []
        for i, (p, d, q, e) in enumerate(mgr.elements(s)):
            fields.append("{" + "|".join(
                f"<{tag}{i}> {_const_label(c) if c <= TRUE else ''}"
                for tag, c in (("p", p), ("s", q))) + "}")
            for tag, c, dl in (("p", p, d), ("s", q, e)):
                if c > TRUE:
                    edges.append(f'  n{s}:{tag}{i} -> n{c} [label="{dl}"];')
        out.append(f'  n{s} [label="{"|".join(fields)}", xlabel="{s}"];')
        out += edges
    out.append("}")
    return "\n".join(out) + "\n"
