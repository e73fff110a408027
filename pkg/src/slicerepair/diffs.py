"""Single-node tree differencing and edit application.

Diffing works on the semantic projection of the trees: keyword and
punctuation leaves are bookkeeping (the statement kinds already encode those
distinctions), so ``sum(a, b)`` vs ``sum(a, b, c)`` is one added identifier,
not an identifier plus a comma. Spans and trivia are ignored throughout:
formatting-only changes compare as NoDifference.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import grammar as g
from .syntax.tree import SyntaxNode, SyntaxTree, reindex_preorder, validate

ADD_NODE = "ADD_NODE"
DEL_NODE = "DEL_NODE"
REP_TYPE = "REP_TYPE"
REP_VAL = "REP_VAL"
OPS = (ADD_NODE, DEL_NODE, REP_TYPE, REP_VAL)

# canonical order used for tie-breaking
OP_ORDER = {op: i for i, op in enumerate(OPS)}


@dataclass(frozen=True)
class GraphEdit:
    op: str
    location: int  # node index in the buggy tree; for ADD_NODE the parent
    position: int | None = None  # ADD_NODE: slot among the parent's semantic children
    kind_label: str | None = None
    value_token: str | None = None


@dataclass(frozen=True)
class DiffResult:
    edit: GraphEdit
    buggy_line: int
    fixed_line: int


class NoDifference:
    def __repr__(self):
        return "NoDifference"


class NotOneNode:
    def __repr__(self):
        return "NotOneNode"


NO_DIFFERENCE = NoDifference()
NOT_ONE_NODE = NotOneNode()


class EditError(ValueError):
    pass


def validate_edit(tree: SyntaxTree, edit: GraphEdit) -> None:
    if edit.op not in OPS:
        raise EditError(f"unknown op {edit.op!r}")
    if not 0 <= edit.location < len(tree.nodes):
        raise EditError(f"location {edit.location} outside tree")
    node = tree.nodes[edit.location]
    if node.kind in g.STRUCTURAL_LEAF_KINDS:
        raise EditError("edits target semantic nodes only")
    if edit.op == ADD_NODE:
        if edit.kind_label is None or edit.position is None:
            raise EditError("ADD_NODE needs kind_label and position")
        if not 0 <= edit.position <= len(tree.semantic_children(edit.location)):
            raise EditError(f"ADD_NODE position {edit.position} out of range")
        if (edit.value_token is not None) != (edit.kind_label in g.VALUE_KINDS):
            raise EditError("ADD_NODE value_token must match the kind's value-bearing role")
    elif edit.op == DEL_NODE:
        if edit.kind_label or edit.value_token or edit.position is not None:
            raise EditError("DEL_NODE carries no payload")
        if edit.location == tree.root:
            raise EditError("cannot delete the root")
        if tree.semantic_children(edit.location):
            raise EditError("DEL_NODE applies to semantic leaves only")
    elif edit.op == REP_TYPE:
        if edit.kind_label is None or edit.value_token is not None or edit.position is not None:
            raise EditError("REP_TYPE carries exactly kind_label")
    elif edit.op == REP_VAL:
        if edit.value_token is None or edit.kind_label is not None or edit.position is not None:
            raise EditError("REP_VAL carries exactly value_token")
        if node.value is None:
            raise EditError("REP_VAL target carries no value")


class _Differ:
    def __init__(self, buggy: SyntaxTree, fixed: SyntaxTree):
        self.a = buggy
        self.b = fixed
        self._iso_cache: dict[tuple[int, int, int, int], bool] = {}

    def _sem(self, tree, idx):
        return tree.semantic_children(idx)

    def iso(self, ta, ia, tb, ib) -> bool:
        key = (id(ta), ia, id(tb), ib)
        cached = self._iso_cache.get(key)
        if cached is not None:
            return cached
        na, nb = ta.nodes[ia], tb.nodes[ib]
        result = na.kind == nb.kind and na.value == nb.value
        if result:
            ca, cb = self._sem(ta, ia), self._sem(tb, ib)
            result = len(ca) == len(cb) and all(
                self.iso(ta, x, tb, y) for x, y in zip(ca, cb)
            )
        self._iso_cache[key] = result
        return result

    def diff(self, ia, ib):
        """Returns (edit, fixed_anchor_node) or None."""
        na, nb = self.a.nodes[ia], self.b.nodes[ib]
        ca, cb = self._sem(self.a, ia), self._sem(self.b, ib)
        if na.kind == nb.kind and na.value == nb.value:
            m, n = len(ca), len(cb)
            if abs(m - n) >= 2:
                return None
            p = 0
            while p < m and p < n and self.iso(self.a, ca[p], self.b, cb[p]):
                p += 1
            s = 0
            while s < m - p and s < n - p and self.iso(
                self.a, ca[m - 1 - s], self.b, cb[n - 1 - s]
            ):
                s += 1
            if m == n:
                if m - p - s != 1:
                    return None
                return self.diff(ca[p], cb[p])
            if n == m + 1:
                if p + s < m:
                    return None
                while p > 0 and self.iso(self.b, cb[p - 1], self.b, cb[p]):
                    p -= 1
                inserted = cb[p]
                if self._sem(self.b, inserted):
                    return None
                node = self.b.nodes[inserted]
                edit = GraphEdit(ADD_NODE, ia, p, node.kind, node.value)
                return edit, inserted
            # m == n + 1: deletion
            if p + s < n:
                return None
            while p > 0 and self.iso(self.a, ca[p - 1], self.a, ca[p]):
                p -= 1
            deleted = ca[p]
            if self._sem(self.a, deleted):
                return None
            anchor = cb[p - 1] if p > 0 else ib
            return GraphEdit(DEL_NODE, deleted), anchor
        # node label mismatch: children must be pairwise isomorphic
        if len(ca) != len(cb) or not all(
            self.iso(self.a, x, self.b, y) for x, y in zip(ca, cb)
        ):
            return None
        if na.kind == nb.kind:
            return GraphEdit(REP_VAL, ia, value_token=nb.value), ib
        if na.value == nb.value:
            return GraphEdit(REP_TYPE, ia, kind_label=nb.kind), ib
        return None


def ast_diff(buggy: SyntaxTree, fixed: SyntaxTree):
    """DiffResult when the trees differ by exactly one semantic node."""
    differ = _Differ(buggy, fixed)
    if differ.iso(buggy, buggy.root, fixed, fixed.root):
        return NO_DIFFERENCE
    found = differ.diff(buggy.root, fixed.root)
    if found is None:
        return NOT_ONE_NODE
    edit, fixed_anchor = found
    if edit.op == ADD_NODE:
        sem = buggy.semantic_children(edit.location)
        if edit.position and sem:
            anchor = sem[min(edit.position, len(sem)) - 1]
            buggy_line = buggy.nodes[anchor].span[2]
        else:
            buggy_line = buggy.nodes[edit.location].span[0]
        fixed_line = fixed.nodes[fixed_anchor].span[0]
    elif edit.op == DEL_NODE:
        buggy_line = buggy.nodes[edit.location].span[0]
        fixed_line = fixed.nodes[fixed_anchor].span[2]
    else:
        buggy_line = buggy.nodes[edit.location].span[0]
        fixed_line = fixed.nodes[fixed_anchor].span[0]
    return DiffResult(edit, buggy_line, fixed_line)


def is_one_node(buggy: SyntaxTree, fixed: SyntaxTree) -> bool:
    return isinstance(ast_diff(buggy, fixed), DiffResult)


def _full_insert_index(tree: SyntaxTree, parent: int, position: int) -> int:
    """Map a semantic child position to an index in the full children list."""
    children = tree.nodes[parent].children
    sem_positions = [
        i
        for i, c in enumerate(children)
        if tree.nodes[c].kind not in g.STRUCTURAL_LEAF_KINDS
    ]
    if position < len(sem_positions):
        return sem_positions[position]
    if sem_positions:
        return sem_positions[-1] + 1
    # no semantic children: slot before the trailing structural tokens
    return len(children) - 1 if children else 0


def apply_edit(tree: SyntaxTree, edit: GraphEdit) -> SyntaxTree:
    """Apply one graph edit; spans/trivia of untouched nodes are preserved."""
    validate_edit(tree, edit)
    out = tree.copy()
    out.source = None
    if edit.op == REP_VAL:
        out.nodes[edit.location].value = edit.value_token
    elif edit.op == REP_TYPE:
        out.nodes[edit.location].kind = edit.kind_label
    elif edit.op == DEL_NODE:
        parents = out.parents()
        parent = parents[edit.location]
        out.nodes[parent].children.remove(edit.location)
        out.nodes, out.root = reindex_preorder(out.nodes, out.root)
    else:  # ADD_NODE
        parent = edit.location
        fi = _full_insert_index(out, parent, edit.position)
        children = out.nodes[parent].children
        if fi > 0:
            prev_span = out.nodes[children[fi - 1]].span
            point = (prev_span[2], prev_span[3])
        else:
            point = (out.nodes[parent].span[0], out.nodes[parent].span[1])
        leaf = SyntaxNode(
            edit.kind_label,
            edit.value_token,
            [],
            (point[0], point[1], point[0], point[1]),
        )
        out.nodes.append(leaf)
        children.insert(fi, len(out.nodes) - 1)
        out.nodes, out.root = reindex_preorder(out.nodes, out.root)
    validate(out)
    return out


def trees_isomorphic(a: SyntaxTree, b: SyntaxTree) -> bool:
    return _Differ(a, b).iso(a, a.root, b, b.root)
