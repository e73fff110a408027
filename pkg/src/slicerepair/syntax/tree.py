"""Span-annotated syntax trees stored as flat preorder arenas."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import grammar

# (start_line, start_col, end_line, end_col); lines 1-based, cols 0-based,
# end position exclusive.
Span = tuple[int, int, int, int]


class ParseError(Exception):
    def __init__(self, line, col, message):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass
class SourceFile:
    path: str
    content: str

    @property
    def lines(self):
        """1-indexed access happens through line(); this is the raw list."""
        return self.content.split("\n")

    def line(self, number: int) -> str:
        return self.lines[number - 1]

    @property
    def line_count(self) -> int:
        return len(self.lines)


@dataclass
class SyntaxNode:
    kind: str
    value: str | None = None
    children: list[int] = field(default_factory=list)
    span: Span = (1, 0, 1, 0)
    trivia: str | None = None  # whitespace/comments preceding a leaf token

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def lexeme(self) -> str | None:
        if self.value is not None:
            return self.value
        return grammar.FIXED_LEXEMES.get(self.kind)


@dataclass
class SyntaxTree:
    nodes: list[SyntaxNode]
    root: int = 0
    source: str | None = None
    trailing_trivia: str = ""

    def node(self, index: int) -> SyntaxNode:
        return self.nodes[index]

    def __len__(self) -> int:
        return len(self.nodes)

    def children(self, index: int) -> list[int]:
        return self.nodes[index].children

    def preorder(self, start: int | None = None):
        stack = [self.root if start is None else start]
        while stack:
            idx = stack.pop()
            yield idx
            stack.extend(reversed(self.nodes[idx].children))

    def parents(self) -> list[int]:
        out = [-1] * len(self.nodes)
        for idx, node in enumerate(self.nodes):
            for child in node.children:
                out[child] = idx
        return out

    def ancestors(self, index: int):
        parents = self.parents()
        idx = parents[index]
        while idx != -1:
            yield idx
            idx = parents[idx]

    def semantic_children(self, index: int) -> list[int]:
        return [
            c
            for c in self.nodes[index].children
            if self.nodes[c].kind not in grammar.STRUCTURAL_LEAF_KINDS
        ]

    def copy(self) -> "SyntaxTree":
        nodes = [replace(n, children=list(n.children)) for n in self.nodes]
        return SyntaxTree(nodes, self.root, self.source, self.trailing_trivia)


def leaves(tree: SyntaxTree) -> list[int]:
    """All leaf node indices in source order (the full token stream)."""
    out = []

    def walk(idx):
        node = tree.nodes[idx]
        if node.is_leaf:
            out.append(idx)
        else:
            for child in node.children:
                walk(child)

    walk(tree.root)
    return out


def _span_contains(outer: Span, inner: Span) -> bool:
    return (outer[0], outer[1]) <= (inner[0], inner[1]) and (inner[2], inner[3]) <= (
        outer[2],
        outer[3],
    )


def validate(tree: SyntaxTree) -> None:
    """Check the structural invariants; raises ValueError on violation."""
    n = len(tree.nodes)
    if not 0 <= tree.root < n:
        raise ValueError("root index out of range")
    seen = [0] * n
    for idx, node in enumerate(tree.nodes):
        for child in node.children:
            if not 0 <= child < n:
                raise ValueError(f"node {idx}: child index {child} out of range")
            seen[child] += 1
            if not _span_contains(node.span, tree.nodes[child].span):
                raise ValueError(
                    f"node {idx}: child {child} span {tree.nodes[child].span} "
                    f"escapes parent span {node.span}"
                )
    if seen[tree.root] != 0:
        raise ValueError("root has a parent")
    for idx, count in enumerate(seen):
        if idx != tree.root and count != 1:
            raise ValueError(f"node {idx} has {count} parents")

    prev = None
    for idx in leaves(tree):
        span = tree.nodes[idx].span
        if prev is not None and (span[0], span[1]) < (prev[2], prev[3]):
            raise ValueError(f"leaf {idx} out of source order")
        prev = span


def render_tokens(tree: SyntaxTree) -> str:
    """Reassemble the source from leaf trivia + lexemes (parse round-trip)."""
    parts = []
    for idx in leaves(tree):
        node = tree.nodes[idx]
        parts.append(node.trivia or "")
        lexeme = node.lexeme()
        if lexeme is None:
            raise ValueError(f"leaf {idx} ({node.kind}) has no lexeme")
        parts.append(lexeme)
    parts.append(tree.trailing_trivia)
    return "".join(parts)


def reindex_preorder(nodes: list[SyntaxNode], root: int) -> tuple[list[SyntaxNode], int]:
    """Rebuild an arena so indices follow preorder; returns (nodes, root)."""
    order = []
    stack = [root]
    while stack:
        idx = stack.pop()
        order.append(idx)
        stack.extend(reversed(nodes[idx].children))
    remap = {old: new for new, old in enumerate(order)}
    out = []
    for old in order:
        node = nodes[old]
        out.append(replace(node, children=[remap[c] for c in node.children]))
    return out, 0
