"""Typed code graphs and vocabularies.

A graph is the syntax tree in preorder (AstChild edges), a SuccToken path
chaining the leaf tokens in source order, and one extra value node per
lexeme-bearing node attached through a ValueLink edge. Out-of-vocabulary
lexemes map to the UNKNOWN id.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from . import diffs
from .syntax import grammar as g
from .syntax import leaves, parse
from .syntax.tree import SyntaxTree

AST_CHILD = "AstChild"
SUCC_TOKEN = "SuccToken"
VALUE_LINK = "ValueLink"
EDGE_TYPES = (AST_CHILD, SUCC_TOKEN, VALUE_LINK)

UNKNOWN_VALUE = "<UNKNOWN>"
VALUE_NODE_KIND = "<VALUE>"
UNKNOWN_KIND = "<UNK-KIND>"
DEFAULT_VOCAB_SIZE = 5000


@dataclass
class Vocabulary:
    kinds: dict[str, int]
    values: dict[str, int]
    K: int

    @property
    def unknown_value_id(self) -> int:
        return self.values[UNKNOWN_VALUE]

    @property
    def value_node_kind_id(self) -> int:
        return self.kinds[VALUE_NODE_KIND]

    def kind_id(self, label: str) -> int:
        return self.kinds.get(label, self.kinds[UNKNOWN_KIND])

    def value_id(self, lexeme: str | None) -> int | None:
        if lexeme is None:
            return None
        return self.values.get(lexeme, self.values[UNKNOWN_VALUE])

    def to_json(self) -> dict:
        return {"kinds": self.kinds, "values": self.values, "K": self.K}

    @classmethod
    def from_json(cls, data: dict) -> "Vocabulary":
        return cls(dict(data["kinds"]), dict(data["values"]), int(data["K"]))

    def sha256(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()


def _training_texts(datapoint, use_dual: bool) -> list[str]:
    texts = []
    if datapoint.sliced_single is not None:
        texts.append(datapoint.sliced_single.buggy_text)
    elif datapoint.sliced_dual is not None:
        texts.append(datapoint.sliced_dual.buggy_text)
    else:
        texts.append(datapoint.buggy_source)
    if use_dual:
        if datapoint.sliced_dual is not None:
            texts.append(datapoint.sliced_dual.fixed_text)
        else:
            texts.append(datapoint.fixed_source)
    return texts


def build_vocab(train, K: int = DEFAULT_VOCAB_SIZE, use_dual: bool = False) -> Vocabulary:
    """Count value lexemes over sliced buggy sources (plus sliced fixed
    sources for the dual variant); keep the K most frequent."""
    if not train:
        raise ValueError("vocabulary needs a nonempty training set")
    counts: dict[str, int] = {}
    kinds_seen: set[str] = set()
    for datapoint in train:
        for text in _training_texts(datapoint, use_dual):
            tree = parse(text)
            for node in tree.nodes:
                kinds_seen.add(node.kind)
                if node.value is not None:
                    counts[node.value] = counts.get(node.value, 0) + 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))[:K]
    values = {UNKNOWN_VALUE: 0}
    for lexeme, _count in ranked:
        values[lexeme] = len(values)
    kinds = {VALUE_NODE_KIND: 0, UNKNOWN_KIND: 1}
    for label in sorted(kinds_seen):
        kinds[label] = len(kinds)
    return Vocabulary(kinds, values, K)


@dataclass
class CodeGraph:
    kind_ids: np.ndarray  # (n,) int64
    value_ids: np.ndarray  # (n,) int64, -1 when the node carries no value
    edges: dict[str, np.ndarray]  # edge type -> (m, 2) [src, dst]
    n_syntactic: int
    # per-node validity masks used by inference
    is_value_node: np.ndarray
    value_bearing: np.ndarray
    semantic_leaf: np.ndarray
    root: int = 0

    @property
    def n_nodes(self) -> int:
        return len(self.kind_ids)

    def nodes(self) -> list[tuple[int, int | None]]:
        return [
            (int(k), int(v) if v >= 0 else None)
            for k, v in zip(self.kind_ids, self.value_ids)
        ]

    def edge_list(self) -> list[tuple[int, int, str]]:
        out = []
        for etype in EDGE_TYPES:
            for src, dst in self.edges[etype]:
                out.append((int(src), int(dst), etype))
        return out

    def to_json(self) -> dict:
        return {
            "nodes": [
                {"kind_id": int(k), "value_id": (int(v) if v >= 0 else None)}
                for k, v in zip(self.kind_ids, self.value_ids)
            ],
            "edges": [
                {"src": s, "dst": d, "type": t} for s, d, t in self.edge_list()
            ],
        }


def _edge_array(pairs: list[tuple[int, int]]) -> np.ndarray:
    if not pairs:
        return np.zeros((0, 2), dtype=np.int64)
    return np.asarray(pairs, dtype=np.int64)


def build_graph(tree: SyntaxTree, vocab: Vocabulary) -> CodeGraph:
    n = len(tree.nodes)
    kind_ids = [vocab.kind_id(node.kind) for node in tree.nodes]
    value_ids = [-1] * n

    ast_edges = []
    for idx, node in enumerate(tree.nodes):
        for child in node.children:
            ast_edges.append((idx, child))

    leaf_ids = leaves(tree)
    succ_edges = [(a, b) for a, b in zip(leaf_ids, leaf_ids[1:])]

    value_edges = []
    value_bearing = [False] * n
    for idx in range(n):
        value = tree.nodes[idx].value
        if value is not None:
            value_bearing.append(False)
            value_bearing[idx] = True
            kind_ids.append(vocab.value_node_kind_id)
            value_ids.append(vocab.value_id(value))
            value_edges.append((idx, len(kind_ids) - 1))

    total = len(kind_ids)
    is_value_node = np.zeros(total, dtype=bool)
    is_value_node[n:] = True
    semantic_leaf = np.zeros(total, dtype=bool)
    for idx in range(n):
        semantic_leaf[idx] = (
            tree.nodes[idx].kind not in g.STRUCTURAL_LEAF_KINDS
            and not tree.semantic_children(idx)
        )

    return CodeGraph(
        kind_ids=np.asarray(kind_ids, dtype=np.int64),
        value_ids=np.asarray(value_ids, dtype=np.int64),
        edges={
            AST_CHILD: _edge_array(ast_edges),
            SUCC_TOKEN: _edge_array(succ_edges),
            VALUE_LINK: _edge_array(value_edges),
        },
        n_syntactic=n,
        is_value_node=is_value_node,
        value_bearing=np.asarray(value_bearing[:total], dtype=bool),
        semantic_leaf=semantic_leaf,
        root=tree.root,
    )


@dataclass(frozen=True)
class IndexedEdit:
    op: str
    location: int  # graph node index (preorder)
    position: int | None = None
    kind_label: str | None = None
    value_token: str | None = None
    kind_id: int | None = None
    value_id: int | None = None


def index_edit(edit: diffs.GraphEdit, graph: CodeGraph, vocab: Vocabulary) -> IndexedEdit:
    """Re-express a tree edit against graph numbering and vocabulary ids."""
    if not 0 <= edit.location < graph.n_syntactic:
        raise ValueError(f"edit location {edit.location} outside graph")
    return IndexedEdit(
        op=edit.op,
        location=edit.location,
        position=edit.position,
        kind_label=edit.kind_label,
        value_token=edit.value_token,
        kind_id=vocab.kind_id(edit.kind_label) if edit.kind_label is not None else None,
        value_id=vocab.value_id(edit.value_token),
    )
