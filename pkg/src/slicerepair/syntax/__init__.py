from .estree import ingest_estree
from .parser import parse
from .reconstruct import ReconstructionError, closure_lines, reconstruct_statements
from .tree import (
    ParseError,
    SourceFile,
    SyntaxNode,
    SyntaxTree,
    leaves,
    render_tokens,
    validate,
)

__all__ = [
    "ParseError",
    "ReconstructionError",
    "SourceFile",
    "SyntaxNode",
    "SyntaxTree",
    "closure_lines",
    "ingest_estree",
    "leaves",
    "parse",
    "reconstruct_statements",
    "render_tokens",
    "validate",
]
