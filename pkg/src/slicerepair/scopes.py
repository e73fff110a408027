"""Name resolution and reference indexing for the JavaScript subset.

Scoping rules: function declarations and ``var`` hoist to the enclosing
function/module scope, ``let``/``const`` are block-scoped (no temporal dead
zone), parameters live in their function scope, import bindings in the module
scope. Object-literal property keys form their own lookup chain used only for
``this.<name>`` references. Unresolved names are recorded as free entities,
never an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import grammar as g
from .syntax.tree import SyntaxTree

VARIABLE = "variable"
FUNCTION = "function"
OBJECT_PROPERTY = "object_property"
PARAMETER = "parameter"
IMPORT_BINDING = "import_binding"

DEFINITION = "definition"
USE = "use"
MUTATION = "mutation"
CALL = "call"

# declaration kinds whose left-hand-side names are skipped by get_entities
_LHS_DECL_KINDS = {VARIABLE, FUNCTION, PARAMETER, IMPORT_BINDING}


@dataclass(frozen=True)
class Entity:
    name: str
    kind: str
    declaration_site: tuple[int, int] | None = None  # (line, node index)


@dataclass
class Reference:
    line: int
    node: int
    kind: str
    stmt_lines: tuple[int, int] = (0, 0)  # line range of the owning statement


@dataclass
class EntityInfo:
    key: object
    entity: Entity
    refs: list[Reference] = field(default_factory=list)
    decl_lines: tuple[int, int] | None = None  # line range pulled for the declaration
    whole_declaration: bool = False  # function-like: pull the full body


@dataclass
class ReferenceIndex:
    entities: dict[object, EntityInfo]
    by_line: dict[int, list[tuple[object, Reference]]]

    def info(self, key) -> EntityInfo:
        return self.entities[key]


class _Scope:
    __slots__ = ("kind", "parent", "names")

    def __init__(self, kind, parent):
        self.kind = kind  # module | function | block | object
        self.parent = parent
        self.names: dict[str, object] = {}


class _Analyzer:
    def __init__(self, tree: SyntaxTree):
        self.tree = tree
        self.parents = tree.parents()
        self.scopes: list[_Scope] = []
        self.entities: dict[object, EntityInfo] = {}
        self.by_line: dict[int, list[tuple[object, Reference]]] = {}
        # scope in effect for each node: (variable scope, object scope)
        self.var_scope_of: dict[int, int] = {}
        self.obj_scope_of: dict[int, int | None] = {}

    # -- shared helpers --------------------------------------------------

    def _node(self, idx):
        return self.tree.nodes[idx]

    def _sem(self, idx):
        return self.tree.semantic_children(idx)

    def _line(self, idx):
        return self._node(idx).span[0]

    def _new_scope(self, kind, parent):
        self.scopes.append(_Scope(kind, parent))
        return len(self.scopes) - 1

    def _hoist_target(self, scope_id):
        while self.scopes[scope_id].kind not in ("function", "module"):
            scope_id = self.scopes[scope_id].parent
        return scope_id

    def _statement_span(self, idx) -> tuple[int, int]:
        """Line range of the statement owning idx.

        Refs sitting in a control-statement header (loop variable, condition)
        pull only their own line; the header/terminator lines arrive through
        closure completion.
        """
        cur = self.parents[idx]
        while cur != -1:
            kind = self._node(cur).kind
            if kind in g.CONTROL_KINDS or kind == g.PROGRAM:
                return (self._line(idx), self._line(idx))
            if kind in g.STATEMENT_KINDS and kind != g.BLOCK:
                span = self._node(cur).span
                return (span[0], span[2])
            cur = self.parents[cur]
        return (self._line(idx), self._line(idx))

    # -- pass A: declarations --------------------------------------------

    def declare(self, scope_id, name_idx, kind, decl_lines, whole=False):
        scope = self.scopes[scope_id]
        name = self._node(name_idx).value
        if name in scope.names:
            # redeclaration: keep the first entity, record a definition ref
            key = scope.names[name]
            self._ref(key, name_idx, DEFINITION)
            return key
        key = ("decl", name_idx)
        scope.names[name] = key
        entity = Entity(name, kind, (self._line(name_idx), name_idx))
        self.entities[key] = EntityInfo(key, entity, [], decl_lines, whole)
        self._ref(key, name_idx, DEFINITION)
        return key

    def collect(self, idx, var_scope, obj_scope):
        self.var_scope_of[idx] = var_scope
        self.obj_scope_of[idx] = obj_scope
        node = self._node(idx)
        kind = node.kind
        sem = self._sem(idx)

        if kind == g.FUNCTION_DECLARATION:
            name, params, body = sem[0], sem[1], sem[2]
            span = node.span
            self.declare(
                self._hoist_target(var_scope), name, FUNCTION, (span[0], span[2]), whole=True
            )
            fn_scope = self._new_scope("function", var_scope)
            for p in self._sem(params):
                self.declare(fn_scope, p, PARAMETER, (self._line(p), self._line(p)))
            self.var_scope_of[name] = var_scope
            self.collect(params, fn_scope, obj_scope)
            self.collect(body, fn_scope, obj_scope)
            return

        if kind == g.ARROW_FUNCTION:
            params, body = sem[0], sem[1]
            fn_scope = self._new_scope("function", var_scope)
            for p in self._sem(params):
                self.declare(fn_scope, p, PARAMETER, (self._line(p), self._line(p)))
            self.collect(params, fn_scope, obj_scope)
            self.collect(body, fn_scope, obj_scope)
            return

        if kind == g.METHOD_PROPERTY:
            key_leaf, params, body = sem[0], sem[1], sem[2]
            span = node.span
            assert obj_scope is not None
            self.declare(obj_scope, key_leaf, OBJECT_PROPERTY, (span[0], span[2]), whole=True)
            fn_scope = self._new_scope("function", var_scope)
            for p in self._sem(params):
                self.declare(fn_scope, p, PARAMETER, (self._line(p), self._line(p)))
            self.collect(params, fn_scope, obj_scope)
            self.collect(body, fn_scope, obj_scope)
            return

        if kind == g.OBJECT_LITERAL:
            inner = self._new_scope("object", obj_scope if obj_scope is not None else -1)
            for child in node.children:
                self.collect(child, var_scope, inner)
            return

        if kind == g.PROPERTY:
            key_leaf = sem[0]
            if self._node(key_leaf).kind == g.PROPERTY_NAME and obj_scope is not None:
                span = node.span
                self.declare(obj_scope, key_leaf, OBJECT_PROPERTY, (span[0], span[2]))
            for child in sem[1:]:
                self.collect(child, var_scope, obj_scope)
            self.var_scope_of[key_leaf] = var_scope
            return

        if kind == g.SHORTHAND_PROPERTY:
            ident = sem[0]
            if obj_scope is not None:
                self.declare(
                    obj_scope, ident, OBJECT_PROPERTY, (self._line(ident), self._line(ident))
                )
            self.collect(ident, var_scope, obj_scope)
            return

        if kind in (g.VAR_DECLARATION, g.LET_DECLARATION, g.CONST_DECLARATION):
            target = (
                self._hoist_target(var_scope) if kind == g.VAR_DECLARATION else var_scope
            )
            for decl in sem:
                name = self._sem(decl)[0]
                self.declare(target, name, VARIABLE, self._statement_span(name))
                for child in self._sem(decl)[1:]:
                    self.collect(child, var_scope, obj_scope)
                self.var_scope_of[name] = var_scope
            return

        if kind == g.IMPORT_DECLARATION:
            span = node.span
            for child in sem:
                cnode = self._node(child)
                if cnode.kind == g.IDENTIFIER:
                    self.declare(var_scope, child, IMPORT_BINDING, (span[0], span[2]))
                elif cnode.kind == g.NAMED_IMPORTS:
                    for name in self._sem(child):
                        self.declare(var_scope, name, IMPORT_BINDING, (span[0], span[2]))
            return

        if kind == g.BLOCK:
            inner = self._new_scope("block", var_scope)
            for child in node.children:
                self.collect(child, inner, obj_scope)
            return

        if kind in (g.FOR_STATEMENT, g.FOR_IN_STATEMENT, g.FOR_OF_STATEMENT):
            inner = self._new_scope("block", var_scope)
            for child in node.children:
                self.collect(child, inner, obj_scope)
            return

        for child in node.children:
            self.collect(child, var_scope, obj_scope)

    # -- pass B: references ----------------------------------------------

    def _ref(self, key, node_idx, kind):
        ref = Reference(self._line(node_idx), node_idx, kind, self._statement_span(node_idx))
        self.entities[key].refs.append(ref)
        self.by_line.setdefault(ref.line, []).append((key, ref))

    def _lookup(self, scope_id, name):
        while scope_id != -1:
            scope = self.scopes[scope_id]
            if scope.kind != "object" and name in scope.names:
                return scope.names[name]
            scope_id = scope.parent
        return None

    def _lookup_property(self, obj_scope, name):
        while obj_scope is not None and obj_scope != -1:
            scope = self.scopes[obj_scope]
            if name in scope.names:
                return scope.names[name]
            obj_scope = scope.parent
        return None

    def _free(self, name, kind_hint):
        key = ("free", name)
        if key not in self.entities:
            self.entities[key] = EntityInfo(key, Entity(name, kind_hint, None))
        return key

    def _free_property(self, name):
        key = ("freeprop", name)
        if key not in self.entities:
            self.entities[key] = EntityInfo(key, Entity(name, OBJECT_PROPERTY, None))
        return key

    def ref_ident(self, idx, kind):
        name = self._node(idx).value
        key = self._lookup(self.var_scope_of[idx], name)
        if key is None:
            hint = FUNCTION if kind == CALL else VARIABLE
            key = self._free(name, hint)
        self._ref(key, idx, kind)

    def ref_this_property(self, prop_idx, kind):
        name = self._node(prop_idx).value
        key = self._lookup_property(self.obj_scope_of[prop_idx], name)
        if key is None:
            key = self._free_property(name)
        self._ref(key, prop_idx, kind)

    def visit_target(self, idx, kind=MUTATION):
        """Assignment/update targets: the base object entity is mutated."""
        node = self._node(idx)
        if node.kind == g.IDENTIFIER:
            self._ref_or_free(idx, kind)
        elif node.kind == g.MEMBER_EXPRESSION:
            obj, prop = self._sem(idx)[0], self._sem(idx)[1]
            if self._node(obj).kind == g.THIS_EXPRESSION:
                self.ref_this_property(prop, kind)
            else:
                self.visit_target(obj, kind)
        elif node.kind == g.COMPUTED_MEMBER_EXPRESSION:
            obj, index_expr = self._sem(idx)[0], self._sem(idx)[1]
            self.visit_target(obj, kind)
            self.visit_expr(index_expr)
        elif node.kind == g.PAREN_EXPRESSION:
            self.visit_target(self._sem(idx)[0], kind)
        else:
            self.visit_expr(idx)

    def _ref_or_free(self, idx, kind):
        self.ref_ident(idx, kind)

    def visit_callee(self, idx):
        node = self._node(idx)
        if node.kind == g.IDENTIFIER:
            self.ref_ident(idx, CALL)
        elif node.kind == g.MEMBER_EXPRESSION:
            obj, prop = self._sem(idx)[0], self._sem(idx)[1]
            method = self._node(prop).value
            if self._node(obj).kind == g.THIS_EXPRESSION:
                self.ref_this_property(prop, CALL)
            elif self._node(obj).kind == g.IDENTIFIER:
                ref_kind = MUTATION if method in g.MUTATOR_METHODS else USE
                self.ref_ident(obj, ref_kind)
            else:
                self.visit_expr(obj)
        else:
            self.visit_expr(idx)

    def visit_expr(self, idx):
        node = self._node(idx)
        kind = node.kind
        sem = self._sem(idx)

        if kind == g.IDENTIFIER:
            self.ref_ident(idx, USE)
        elif kind == g.MEMBER_EXPRESSION:
            obj, prop = sem[0], sem[1]
            if self._node(obj).kind == g.THIS_EXPRESSION:
                self.ref_this_property(prop, USE)
            else:
                self.visit_expr(obj)
        elif kind == g.COMPUTED_MEMBER_EXPRESSION:
            self.visit_expr(sem[0])
            self.visit_expr(sem[1])
        elif kind == g.CALL_EXPRESSION or kind == g.NEW_EXPRESSION:
            self.visit_callee(sem[0])
            for arg in sem[1:]:
                self.visit_expr(arg)
        elif kind == g.ASSIGNMENT_EXPRESSION:
            target, _op, value = sem[0], sem[1], sem[2]
            self.visit_target(target)
            self.visit_expr(value)
        elif kind == g.UPDATE_EXPRESSION:
            for child in sem:
                if self._node(child).kind != g.OPERATOR:
                    self.visit_target(child)
        elif kind == g.PROPERTY:
            for child in sem[1:]:  # key definitions were recorded in pass A
                self.visit_expr(child)
        elif kind == g.METHOD_PROPERTY:
            self.visit_expr(sem[2])
        elif kind == g.SHORTHAND_PROPERTY:
            self.ref_ident(sem[0], USE)
        elif kind == g.FUNCTION_DECLARATION:
            self.visit_expr(sem[2])
        elif kind == g.ARROW_FUNCTION:
            self.visit_expr(sem[1])
        elif kind == g.DECLARATOR:
            for child in sem[1:]:
                self.visit_expr(child)
        elif kind in (g.FOR_IN_STATEMENT, g.FOR_OF_STATEMENT):
            left = sem[0]
            if self._node(left).kind in (
                g.VAR_DECLARATION,
                g.LET_DECLARATION,
                g.CONST_DECLARATION,
            ):
                self.visit_expr(left)
            else:
                self.visit_target(left)
            for child in sem[1:]:
                self.visit_expr(child)
        elif kind in (g.OPERATOR, g.PROPERTY_NAME, g.IMPORT_DECLARATION, g.PARAM_LIST):
            pass
        else:
            for child in sem:
                self.visit_expr(child)

    def analyze(self):
        module = self._new_scope("module", -1)
        self.collect(self.tree.root, module, None)
        self.visit_expr(self.tree.root)
        for line_refs in self.by_line.values():
            line_refs.sort(key=lambda item: item[1].node)
        for info in self.entities.values():
            info.refs.sort(key=lambda r: (r.line, r.node))
        return ReferenceIndex(self.entities, self.by_line)


def resolve_references(tree: SyntaxTree) -> ReferenceIndex:
    return _Analyzer(tree).analyze()


def get_entities(
    tree: SyntaxTree, line: int, index: ReferenceIndex | None = None
) -> set[Entity]:
    """Entities referenced on a line, minus left-hand-side declarations.

    A declaration created on the line itself has nothing before it to slice,
    so its name is skipped; object-property keys stay because earlier lines
    may reference the same property.
    """
    index = index or resolve_references(tree)
    out = set()
    for key, ref in index.by_line.get(line, []):
        info = index.entities[key]
        if ref.kind == DEFINITION and info.entity.kind in _LHS_DECL_KINDS:
            continue
        out.add(info.entity)
    return out


def entity_keys_on_line(index: ReferenceIndex, line: int) -> list[object]:
    """Same filter as get_entities but returning index keys (for slicing)."""
    out = []
    seen = set()
    for key, ref in index.by_line.get(line, []):
        info = index.entities[key]
        if ref.kind == DEFINITION and info.entity.kind in _LHS_DECL_KINDS:
            continue
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out
