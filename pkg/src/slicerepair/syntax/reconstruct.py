"""Rebuild well-formed source text from a set of context line numbers.

A context line buried inside a multi-line construct needs the header and
terminator lines of every enclosing construct, otherwise the extracted text
does not parse (unbalanced braces, dangling object members, ...). Closure
completion adds exactly those first/last lines, nothing else.
"""

from __future__ import annotations

from . import grammar as g
from .tree import ParseError, SyntaxTree


class ReconstructionError(Exception):
    """The closure-completed line set still fails to parse."""


def closure_lines(tree: SyntaxTree, lines: set[int]) -> set[int]:
    """Context lines plus header/terminator lines of enclosing constructs."""
    out = set(lines)
    spans = [
        (node.span[0], node.span[2])
        for node in tree.nodes
        if node.kind != g.PROGRAM and node.span[0] < node.span[2]
    ]
    changed = True
    while changed:
        changed = False
        for start, end in spans:
            if any(start <= line <= end for line in out):
                if start not in out or end not in out:
                    out.add(start)
                    out.add(end)
                    changed = True
    return out


def reconstruct_statements(tree: SyntaxTree, context_lines: set[int]) -> str:
    """Emit the context lines (closure-completed) as parseable source text."""
    if tree.source is None:
        raise ValueError("tree has no source text to reconstruct from")
    source_lines = tree.source.split("\n")
    for line in context_lines:
        if not 1 <= line <= len(source_lines):
            raise ValueError(f"context line {line} outside file (1..{len(source_lines)})")
    keep = closure_lines(tree, set(context_lines))
    text = "\n".join(source_lines[line - 1] for line in sorted(keep))
    from .parser import parse

    try:
        parse(text)
    except ParseError as exc:
        raise ReconstructionError(
            f"reconstructed slice does not parse at {exc.line}:{exc.col}: {exc.message}"
        )
    return text
