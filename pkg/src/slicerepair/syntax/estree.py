"""Ingestion of externally produced ESTree-style JSON documents.

Full-language files that the subset parser rejects can still enter the
pipeline as trees emitted by an external parser. Known ESTree node types map
onto the internal kind enumeration; anything unrecognized becomes a Foreign
node that keeps its children and spans. Keyword and punctuation tokens do not
exist in ESTree, so ingested trees are sparser than parsed ones; the two
agree under the semantic projection used for diffing.
"""

from __future__ import annotations

import json

from . import grammar as g
from .tree import ParseError, SyntaxNode, SyntaxTree, validate

_BINARY_LIKE = {
    "BinaryExpression": g.BINARY_EXPRESSION,
    "LogicalExpression": g.LOGICAL_EXPRESSION,
}


def _loc(node: dict) -> tuple[int, int, int, int]:
    loc = node.get("loc")
    if not isinstance(loc, dict):
        raise ParseError(1, 0, f"node {node.get('type', '?')!r} is missing loc")
    try:
        return (
            int(loc["start"]["line"]),
            int(loc["start"]["column"]),
            int(loc["end"]["line"]),
            int(loc["end"]["column"]),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(1, 0, f"malformed loc on {node.get('type', '?')!r}: {exc}")


class _Builder:
    def __init__(self):
        self.nodes: list[SyntaxNode] = []

    def add(self, kind, span, value=None) -> int:
        self.nodes.append(SyntaxNode(kind, value, [], span))
        return len(self.nodes) - 1

    def leaf_at(self, kind, point, value=None) -> int:
        # synthesized token with a zero-width span (ESTree keeps no token locs)
        span = (point[0], point[1], point[0], point[1])
        return self.add(kind, span, value)

    def build(self, node) -> int:
        if not isinstance(node, dict) or "type" not in node:
            raise ParseError(1, 0, "expected an ESTree node object")
        ntype = node["type"]
        span = _loc(node)
        handler = getattr(self, "_on_" + ntype, None)
        if handler is not None:
            return handler(node, span)
        return self._foreign(node, span)

    def _children(self, idx, *vals):
        kids = []
        for val in vals:
            if val is None:
                continue
            if isinstance(val, list):
                kids.extend(self.build(v) for v in val if v is not None)
            else:
                kids.append(self.build(val))
        self.nodes[idx].children = kids
        return idx

    def _foreign(self, node, span) -> int:
        idx = self.add(g.FOREIGN, span, node["type"])
        kids = []
        for key, val in node.items():
            if key in ("type", "loc", "range", "start", "end"):
                continue
            if isinstance(val, dict) and "type" in val:
                kids.append(self.build(val))
            elif isinstance(val, list):
                kids.extend(
                    self.build(v) for v in val if isinstance(v, dict) and "type" in v
                )
        self.nodes[idx].children = kids
        return idx

    # node handlers -----------------------------------------------------

    def _on_Program(self, node, span):
        return self._children(self.add(g.PROGRAM, span), node.get("body", []))

    def _on_VariableDeclaration(self, node, span):
        kind = g.DECLARATION_KIND_BY_KEYWORD.get(node.get("kind"), g.VAR_DECLARATION)
        return self._children(self.add(kind, span), node.get("declarations", []))

    def _on_VariableDeclarator(self, node, span):
        return self._children(self.add(g.DECLARATOR, span), node.get("id"), node.get("init"))

    def _on_FunctionDeclaration(self, node, span):
        idx = self.add(g.FUNCTION_DECLARATION, span)
        kids = []
        if node.get("id"):
            kids.append(self.build(node["id"]))
        params = self.build_param_list(node.get("params", []), span)
        kids.append(params)
        kids.append(self.build(node["body"]))
        self.nodes[idx].children = kids
        return idx

    def build_param_list(self, params, parent_span) -> int:
        if params:
            first = _loc(params[0])
            last = _loc(params[-1])
            span = (first[0], first[1], last[2], last[3])
        else:
            span = (parent_span[0], parent_span[1], parent_span[0], parent_span[1])
        return self._children(self.add(g.PARAM_LIST, span), params)

    def _on_BlockStatement(self, node, span):
        return self._children(self.add(g.BLOCK, span), node.get("body", []))

    def _on_ExpressionStatement(self, node, span):
        return self._children(self.add(g.EXPRESSION_STATEMENT, span), node.get("expression"))

    def _on_ReturnStatement(self, node, span):
        return self._children(self.add(g.RETURN_STATEMENT, span), node.get("argument"))

    def _on_IfStatement(self, node, span):
        return self._children(
            self.add(g.IF_STATEMENT, span),
            node.get("test"),
            node.get("consequent"),
            node.get("alternate"),
        )

    def _on_ForStatement(self, node, span):
        return self._children(
            self.add(g.FOR_STATEMENT, span),
            node.get("init"),
            node.get("test"),
            node.get("update"),
            node.get("body"),
        )

    def _on_ForInStatement(self, node, span):
        return self._children(
            self.add(g.FOR_IN_STATEMENT, span),
            node.get("left"),
            node.get("right"),
            node.get("body"),
        )

    def _on_ForOfStatement(self, node, span):
        return self._children(
            self.add(g.FOR_OF_STATEMENT, span),
            node.get("left"),
            node.get("right"),
            node.get("body"),
        )

    def _on_WhileStatement(self, node, span):
        return self._children(
            self.add(g.WHILE_STATEMENT, span), node.get("test"), node.get("body")
        )

    def _on_EmptyStatement(self, node, span):
        return self.add(g.EMPTY_STATEMENT, span)

    def _on_ImportDeclaration(self, node, span):
        idx = self.add(g.IMPORT_DECLARATION, span)
        kids = []
        named = []
        for spec in node.get("specifiers", []):
            if spec.get("type") == "ImportDefaultSpecifier":
                kids.append(self.build(spec["local"]))
            else:
                named.append(spec)
        if named:
            first = _loc(named[0])
            last = _loc(named[-1])
            nspan = (first[0], first[1], last[2], last[3])
            nidx = self.add(g.NAMED_IMPORTS, nspan)
            self.nodes[nidx].children = [self.build(s["local"]) for s in named]
            kids.append(nidx)
        if node.get("source"):
            kids.append(self.build(node["source"]))
        self.nodes[idx].children = kids
        return idx

    def _on_ExportDefaultDeclaration(self, node, span):
        return self._children(self.add(g.EXPORT_DEFAULT, span), node.get("declaration"))

    def _on_AssignmentExpression(self, node, span):
        idx = self.add(g.ASSIGNMENT_EXPRESSION, span)
        left = self.build(node["left"])
        op = self.leaf_at(
            g.OPERATOR, self.nodes[left].span[2:4], node.get("operator", "=")
        )
        right = self.build(node["right"])
        self.nodes[idx].children = [left, op, right]
        return idx

    def _binary(self, node, span, kind):
        idx = self.add(kind, span)
        left = self.build(node["left"])
        op = self.leaf_at(g.OPERATOR, self.nodes[left].span[2:4], node.get("operator"))
        right = self.build(node["right"])
        self.nodes[idx].children = [left, op, right]
        return idx

    def _on_BinaryExpression(self, node, span):
        return self._binary(node, span, g.BINARY_EXPRESSION)

    def _on_LogicalExpression(self, node, span):
        return self._binary(node, span, g.LOGICAL_EXPRESSION)

    def _on_UnaryExpression(self, node, span):
        idx = self.add(g.UNARY_EXPRESSION, span)
        op = self.leaf_at(g.OPERATOR, span[:2], node.get("operator"))
        arg = self.build(node["argument"])
        self.nodes[idx].children = [op, arg]
        return idx

    def _on_UpdateExpression(self, node, span):
        idx = self.add(g.UPDATE_EXPRESSION, span)
        arg = self.build(node["argument"])
        if node.get("prefix"):
            op = self.leaf_at(g.OPERATOR, span[:2], node.get("operator"))
            self.nodes[idx].children = [op, arg]
        else:
            op = self.leaf_at(g.OPERATOR, self.nodes[arg].span[2:4], node.get("operator"))
            self.nodes[idx].children = [arg, op]
        return idx

    def _on_CallExpression(self, node, span):
        return self._children(
            self.add(g.CALL_EXPRESSION, span), node.get("callee"), node.get("arguments", [])
        )

    def _on_NewExpression(self, node, span):
        return self._children(
            self.add(g.NEW_EXPRESSION, span), node.get("callee"), node.get("arguments", [])
        )

    def _on_MemberExpression(self, node, span):
        if node.get("computed"):
            return self._children(
                self.add(g.COMPUTED_MEMBER_EXPRESSION, span),
                node.get("object"),
                node.get("property"),
            )
        idx = self.add(g.MEMBER_EXPRESSION, span)
        obj = self.build(node["object"])
        prop = node["property"]
        pspan = _loc(prop)
        pidx = self.add(g.PROPERTY_NAME, pspan, prop.get("name"))
        self.nodes[idx].children = [obj, pidx]
        return idx

    def _on_ObjectExpression(self, node, span):
        return self._children(self.add(g.OBJECT_LITERAL, span), node.get("properties", []))

    def _on_Property(self, node, span):
        key = node["key"]
        kspan = _loc(key)
        if node.get("shorthand"):
            idx = self.add(g.SHORTHAND_PROPERTY, span)
            self.nodes[idx].children = [self.build(node["value"])]
            return idx
        if key.get("type") == "Identifier":
            kidx = self.add(g.PROPERTY_NAME, kspan, key.get("name"))
        else:
            kidx = self.build(key)
        value = node["value"]
        if value.get("type") == "FunctionExpression" and node.get("method"):
            midx = self.add(g.METHOD_PROPERTY, span)
            params = self.build_param_list(value.get("params", []), span)
            body = self.build(value["body"])
            self.nodes[midx].children = [kidx, params, body]
            return midx
        idx = self.add(g.PROPERTY, span)
        self.nodes[idx].children = [kidx, self.build(value)]
        return idx

    def _on_SpreadElement(self, node, span):
        return self._children(self.add(g.SPREAD_ELEMENT, span), node.get("argument"))

    def _on_ArrayExpression(self, node, span):
        return self._children(
            self.add(g.ARRAY_LITERAL, span),
            [e for e in node.get("elements", []) if e is not None],
        )

    def _on_ArrowFunctionExpression(self, node, span):
        idx = self.add(g.ARROW_FUNCTION, span)
        params = self.build_param_list(node.get("params", []), span)
        body = self.build(node["body"])
        self.nodes[idx].children = [params, body]
        return idx

    def _on_ThisExpression(self, node, span):
        return self.add(g.THIS_EXPRESSION, span)

    def _on_Identifier(self, node, span):
        return self.add(g.IDENTIFIER, span, node.get("name"))

    def _on_Literal(self, node, span):
        value = node.get("value")
        raw = node.get("raw")
        if value is None and raw in (None, "null"):
            return self.add(g.NULL_LITERAL, span)
        if isinstance(value, bool):
            return self.add(g.BOOLEAN_LITERAL, span, "true" if value else "false")
        if isinstance(value, (int, float)):
            return self.add(g.NUMBER_LITERAL, span, raw if raw is not None else repr(value))
        if isinstance(value, str):
            return self.add(g.STRING_LITERAL, span, raw if raw is not None else json.dumps(value))
        return self._foreign(node, span)


def ingest_estree(document: str | dict, source: str | None = None) -> SyntaxTree:
    """Build a SyntaxTree from an ESTree JSON document (text or parsed)."""
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.colno, f"invalid JSON: {exc.msg}")
    builder = _Builder()
    root = builder.build(document)
    tree = SyntaxTree(builder.nodes, root, source)
    tree.nodes, tree.root = _reorder(builder.nodes, root)
    try:
        validate(tree)
    except ValueError as exc:
        raise ParseError(1, 0, f"ingested tree is malformed: {exc}")
    return tree


def _reorder(nodes, root):
    from .tree import reindex_preorder

    return reindex_preorder(nodes, root)
