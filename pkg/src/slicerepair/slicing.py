"""Backward-slice context extraction.

From a criterion line, every entity referenced there is traced backward:
its declaration lines come in (a called in-file function contributes its
whole declaration), mutations before the point of use come in, and the
entities of every added line are sliced recursively. Header/terminator lines
of enclosing constructs are added so the context stays parseable, and their
entities are sliced too (the enclosing-construct header typically names
further dependencies). A visited (entity, line) set bounds the recursion.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import scopes
from .syntax import grammar as g
from .syntax.reconstruct import closure_lines, reconstruct_statements
from .syntax.tree import ParseError, SyntaxTree
from .syntax.parser import parse


@dataclass(frozen=True)
class SliceCriterion:
    line: int
    entities: frozenset[scopes.Entity]


@dataclass
class ContextSlice:
    criterion: SliceCriterion
    context_lines: set[int]
    used_control_flow: bool = False
    used_fallback: bool = False


@dataclass
class SlicedPair:
    buggy_text: str
    fixed_text: str
    buggy_lines: list[int]
    fixed_lines: list[int]
    buggy_used_control_flow: bool = False
    fixed_used_control_flow: bool = False
    used_fallback: bool = False

    def to_json(self) -> dict:
        return {
            "buggy_text": self.buggy_text,
            "fixed_text": self.fixed_text,
            "buggy_lines": self.buggy_lines,
            "fixed_lines": self.fixed_lines,
            "buggy_used_control_flow": self.buggy_used_control_flow,
            "fixed_used_control_flow": self.fixed_used_control_flow,
            "used_fallback": self.used_fallback,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SlicedPair":
        return cls(
            data["buggy_text"],
            data["fixed_text"],
            list(data["buggy_lines"]),
            list(data["fixed_lines"]),
            data.get("buggy_used_control_flow", False),
            data.get("fixed_used_control_flow", False),
            data.get("used_fallback", False),
        )


def line_count(text: str) -> int:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return max(len(lines), 1)


def make_criterion(
    tree: SyntaxTree, line: int, index: scopes.ReferenceIndex | None = None
) -> SliceCriterion:
    return SliceCriterion(line, frozenset(scopes.get_entities(tree, line, index)))


def _control_spans(tree: SyntaxTree) -> list[tuple[int, int]]:
    return [
        (node.span[0], node.span[2])
        for node in tree.nodes
        if node.kind in g.CONTROL_KINDS and node.span[0] < node.span[2]
    ]


def _uses_control_flow(tree: SyntaxTree, lines: set[int]) -> bool:
    """A slice needed control-flow closure when some line sits strictly
    inside a multi-line control construct."""
    for start, end in _control_spans(tree):
        if any(start < line <= end for line in lines):
            return True
    return False


def backward_slice(
    tree: SyntaxTree,
    criterion: SliceCriterion,
    index: scopes.ReferenceIndex | None = None,
) -> ContextSlice:
    index = index or scopes.resolve_references(tree)
    construct_spans = [
        (node.span[0], node.span[2])
        for node in tree.nodes
        if node.kind != g.PROGRAM and node.span[0] < node.span[2]
    ]

    context: set[int] = set()
    pending: list[int] = []
    sliced: set[tuple[object, int]] = set()

    def add_line(line: int) -> None:
        if line not in context:
            context.add(line)
            pending.append(line)

    def add_range(span: tuple[int, int]) -> None:
        for line in range(span[0], span[1] + 1):
            add_line(line)

    def slice_entity(key, point: int) -> None:
        if (key, point) in sliced:
            return
        sliced.add((key, point))
        info = index.entities[key]
        if info.decl_lines is not None:
            add_range(info.decl_lines)
        for ref in info.refs:
            if ref.line < point and ref.kind in (scopes.DEFINITION, scopes.MUTATION):
                add_range(ref.stmt_lines)

    add_line(criterion.line)
    while pending:
        line = pending.pop()
        for start, end in construct_spans:
            if start <= line <= end:
                add_line(start)
                add_line(end)
        for key in scopes.entity_keys_on_line(index, line):
            slice_entity(key, line)

    return ContextSlice(
        criterion, context, used_control_flow=_uses_control_flow(tree, context)
    )


def slice_with_fallback(
    tree: SyntaxTree,
    criterion: SliceCriterion,
    index: scopes.ReferenceIndex | None = None,
) -> ContextSlice:
    """Backward slice, or the whole file when the line yields no context.

    Lines whose entity set is empty (pure literals, ad-hoc strings) cannot be
    sliced; if nothing beyond the criterion's own closure completion came
    back, the entire file becomes the context scope.
    """
    index = index or scopes.resolve_references(tree)
    result = backward_slice(tree, criterion, index)
    if not criterion.entities:
        trivial = closure_lines(tree, {criterion.line})
        if result.context_lines <= trivial:
            total = line_count(tree.source or "")
            return ContextSlice(
                criterion,
                set(range(1, total + 1)),
                used_control_flow=result.used_control_flow,
                used_fallback=True,
            )
    return result


def _verify_parses(text: str, side: str) -> None:
    try:
        parse(text)
    except ParseError as exc:
        raise ParseError(exc.line, exc.col, f"{side} sliced output does not parse: {exc.message}")


def single_slice(pair, diff) -> SlicedPair:
    """Slice the buggy file only; the fixed side reuses the same context with
    the criterion line replaced by the fixed file's line."""
    buggy_tree = parse(pair.buggy.content)
    index = scopes.resolve_references(buggy_tree)
    criterion = make_criterion(buggy_tree, diff.buggy_line, index)
    cslice = slice_with_fallback(buggy_tree, criterion, index)
    buggy_lines = sorted(cslice.context_lines)
    buggy_text = reconstruct_statements(buggy_tree, cslice.context_lines)

    fixed_source_lines = pair.fixed.content.split("\n")
    buggy_source_lines = pair.buggy.content.split("\n")
    out = []
    for line in buggy_lines:
        if line == diff.buggy_line:
            out.append(fixed_source_lines[diff.fixed_line - 1])
        else:
            out.append(buggy_source_lines[line - 1])
    fixed_text = "\n".join(out)
    _verify_parses(fixed_text, "fixed")
    return SlicedPair(
        buggy_text,
        fixed_text,
        buggy_lines,
        buggy_lines,
        buggy_used_control_flow=cslice.used_control_flow,
        fixed_used_control_flow=cslice.used_control_flow,
        used_fallback=cslice.used_fallback,
    )


def dual_slice(pair, diff) -> SlicedPair:
    """Slice buggy and fixed files independently from their own criteria."""
    single = single_slice(pair, diff)
    fixed_tree = parse(pair.fixed.content)
    index = scopes.resolve_references(fixed_tree)
    criterion = make_criterion(fixed_tree, diff.fixed_line, index)
    cslice = slice_with_fallback(fixed_tree, criterion, index)
    fixed_lines = sorted(cslice.context_lines)
    fixed_text = reconstruct_statements(fixed_tree, cslice.context_lines)
    return SlicedPair(
        single.buggy_text,
        fixed_text,
        single.buggy_lines,
        fixed_lines,
        buggy_used_control_flow=single.buggy_used_control_flow,
        fixed_used_control_flow=cslice.used_control_flow,
        used_fallback=single.used_fallback or cslice.used_fallback,
    )
