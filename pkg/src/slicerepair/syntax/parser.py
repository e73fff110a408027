"""Recursive-descent parser for the JavaScript subset.

Supported statements: var/let/const declarations, function declarations,
return, if/else, for, for-in, for-of, while, expression statements, import
and export-default (simplified). Expressions: calls, new, member access,
assignment, binary/unary/logical/update with the operator stored as a
value-bearing leaf, arrow functions, object/array literals, spread,
string/number/boolean/null literals, identifiers, this.

Statements may omit the semicolon: a newline (or ``}``/EOF) terminates a
statement once the expression is complete.
"""

from __future__ import annotations

from . import grammar as g
from .lexer import Token, tokenize
from .tree import ParseError, SourceFile, SyntaxNode, SyntaxTree, validate

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%="}
EQUALITY_OPS = {"==", "!=", "===", "!=="}
RELATIONAL_OPS = {"<", ">", "<=", ">="}
ADDITIVE_OPS = {"+", "-"}
MULTIPLICATIVE_OPS = {"*", "/", "%"}
UNARY_OPS = {"!", "-", "+"}
UPDATE_OPS = {"++", "--"}


class _N:
    """Mutable node used while parsing; flattened into the arena afterwards."""

    __slots__ = ("kind", "value", "children", "span", "trivia")

    def __init__(self, kind, children=None, value=None, span=None, trivia=None):
        self.kind = kind
        self.value = value
        self.children = children or []
        self.trivia = trivia
        if span is None:
            if not self.children:
                raise ValueError("internal node requires children or a span")
            first, last = self.children[0].span, self.children[-1].span
            span = (first[0], first[1], last[2], last[3])
        self.span = span


def _leaf(tok: Token, kind: str, value: str | None = None) -> _N:
    return _N(
        kind,
        value=value,
        span=(tok.line, tok.col, tok.end_line, tok.end_col),
        trivia=tok.trivia,
    )


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    # token helpers ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.i + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, lexeme: str) -> bool:
        tok = self.peek()
        return tok.kind in ("punct", "keyword") and tok.lexeme == lexeme

    def at_kind(self, kind: str) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(tok.line, tok.col, message)

    def expect(self, lexeme: str) -> Token:
        if not self.at(lexeme):
            self.error(f"expected {lexeme!r}, found {self.peek().lexeme!r}")
        return self.advance()

    def punct(self, lexeme: str) -> _N:
        return _leaf(self.expect(lexeme), g.PUNCT_BY_LEXEME[lexeme])

    def keyword(self, lexeme: str) -> _N:
        tok = self.peek()
        if tok.kind != "keyword" or tok.lexeme != lexeme:
            self.error(f"expected keyword {lexeme!r}")
        self.advance()
        return _leaf(tok, "Kw" + lexeme.capitalize())

    def ident(self, kind: str = g.IDENTIFIER) -> _N:
        tok = self.peek()
        if tok.kind != "ident":
            self.error("expected identifier")
        self.advance()
        return _leaf(tok, kind, tok.lexeme)

    def property_name(self) -> _N:
        # member/object keys may be keyword lexemes (obj.default, {default: 1})
        tok = self.peek()
        if tok.kind not in ("ident", "keyword"):
            self.error("expected property name")
        self.advance()
        return _leaf(tok, g.PROPERTY_NAME, tok.lexeme)

    # statement level ---------------------------------------------------

    def parse_program(self) -> _N:
        stmts = []
        while not self.at_kind("eof"):
            stmts.append(self.parse_statement())
        if not stmts:
            tok = self.peek()
            return _N(g.PROGRAM, span=(tok.line, tok.col, tok.line, tok.col))
        return _N(g.PROGRAM, stmts)

    def parse_statement(self) -> _N:
        tok = self.peek()
        if tok.kind == "punct" and tok.lexeme == "{":
            return self.parse_block()
        if tok.kind == "punct" and tok.lexeme == ";":
            return _N(g.EMPTY_STATEMENT, [self.punct(";")])
        if tok.kind == "keyword":
            word = tok.lexeme
            if word in g.DECLARATION_KEYWORDS:
                return self.parse_var_declaration()
            if word == "function":
                return self.parse_function_declaration()
            if word == "return":
                return self.parse_return()
            if word == "if":
                return self.parse_if()
            if word == "for":
                return self.parse_for()
            if word == "while":
                return self.parse_while()
            if word == "import":
                return self.parse_import()
            if word == "export":
                return self.parse_export_default()
        expr = self.parse_expression()
        children = [expr]
        self.finish_statement(children)
        return _N(g.EXPRESSION_STATEMENT, children)

    def finish_statement(self, children: list[_N]) -> None:
        """Consume ';' or apply the simplified automatic-semicolon rule."""
        if self.at(";"):
            children.append(self.punct(";"))
            return
        tok = self.peek()
        if tok.kind == "eof" or self.at("}") or tok.nl_before:
            return
        self.error(f"expected ';' or newline before {tok.lexeme!r}")

    def parse_var_declaration(self, for_header: bool = False) -> _N:
        tok = self.peek()
        kw = self.keyword(tok.lexeme)
        kind = g.DECLARATION_KIND_BY_KEYWORD[tok.lexeme]
        children = [kw, self.parse_declarator()]
        while self.at(","):
            children.append(self.punct(","))
            children.append(self.parse_declarator())
        if not for_header:
            self.finish_statement(children)
        return _N(kind, children)

    def parse_declarator(self) -> _N:
        children = [self.ident()]
        if self.at("="):
            children.append(_leaf(self.advance(), g.OPERATOR, "="))
            children.append(self.parse_assignment())
        return _N(g.DECLARATOR, children)

    def parse_function_declaration(self) -> _N:
        kw = self.keyword("function")
        name = self.ident()
        params = self.parse_param_list()
        body = self.parse_block()
        return _N(g.FUNCTION_DECLARATION, [kw, name, params, body])

    def parse_param_list(self) -> _N:
        children = [self.punct("(")]
        while not self.at(")"):
            children.append(self.ident())
            if self.at(","):
                children.append(self.punct(","))
            elif not self.at(")"):
                self.error("expected ',' or ')' in parameter list")
        children.append(self.punct(")"))
        return _N(g.PARAM_LIST, children)

    def parse_block(self) -> _N:
        children = [self.punct("{")]
        while not self.at("}"):
            if self.at_kind("eof"):
                self.error("unexpected end of input in block")
            children.append(self.parse_statement())
        children.append(self.punct("}"))
        return _N(g.BLOCK, children)

    def parse_return(self) -> _N:
        children = [self.keyword("return")]
        tok = self.peek()
        has_arg = not (
            tok.kind == "eof" or self.at(";") or self.at("}") or tok.nl_before
        )
        if has_arg:
            children.append(self.parse_expression())
        self.finish_statement(children)
        return _N(g.RETURN_STATEMENT, children)

    def parse_if(self) -> _N:
        children = [self.keyword("if"), self.punct("(")]
        children.append(self.parse_expression())
        children.append(self.punct(")"))
        children.append(self.parse_statement())
        if self.at("else"):
            children.append(self.keyword("else"))
            children.append(self.parse_statement())
        return _N(g.IF_STATEMENT, children)

    def parse_while(self) -> _N:
        children = [self.keyword("while"), self.punct("(")]
        children.append(self.parse_expression())
        children.append(self.punct(")"))
        children.append(self.parse_statement())
        return _N(g.WHILE_STATEMENT, children)

    def parse_for(self) -> _N:
        kw = self.keyword("for")
        lparen = self.punct("(")
        init = None
        if self.peek().kind == "keyword" and self.peek().lexeme in g.DECLARATION_KEYWORDS:
            decl_tok = self.peek()
            decl_kw = self.keyword(decl_tok.lexeme)
            decl_kind = g.DECLARATION_KIND_BY_KEYWORD[decl_tok.lexeme]
            first = self.parse_declarator()
            if self.at("in") or self.at("of"):
                left = _N(decl_kind, [decl_kw, first])
                return self._finish_for_in_of(kw, lparen, left)
            children = [decl_kw, first]
            while self.at(","):
                children.append(self.punct(","))
                children.append(self.parse_declarator())
            init = _N(decl_kind, children)
        elif not self.at(";"):
            init = self.parse_expression()
            if self.at("in") or self.at("of"):
                return self._finish_for_in_of(kw, lparen, init)
        children = [kw, lparen]
        if init is not None:
            children.append(init)
        children.append(self.punct(";"))
        if not self.at(";"):
            children.append(self.parse_expression())
        children.append(self.punct(";"))
        if not self.at(")"):
            children.append(self.parse_expression())
        children.append(self.punct(")"))
        children.append(self.parse_statement())
        return _N(g.FOR_STATEMENT, children)

    def _finish_for_in_of(self, kw: _N, lparen: _N, left: _N) -> _N:
        word = self.peek().lexeme
        kind = g.FOR_IN_STATEMENT if word == "in" else g.FOR_OF_STATEMENT
        children = [kw, lparen, left, self.keyword(word)]
        children.append(self.parse_expression())
        children.append(self.punct(")"))
        children.append(self.parse_statement())
        return _N(kind, children)

    def parse_import(self) -> _N:
        children = [self.keyword("import")]
        if self.at("{"):
            named = [self.punct("{")]
            while not self.at("}"):
                named.append(self.ident())
                if self.at(","):
                    named.append(self.punct(","))
                elif not self.at("}"):
                    self.error("expected ',' or '}' in import list")
            named.append(self.punct("}"))
            children.append(_N(g.NAMED_IMPORTS, named))
        else:
            children.append(self.ident())
        children.append(self.keyword("from"))
        tok = self.peek()
        if tok.kind != "string":
            self.error("expected module string")
        self.advance()
        children.append(_leaf(tok, g.STRING_LITERAL, tok.lexeme))
        self.finish_statement(children)
        return _N(g.IMPORT_DECLARATION, children)

    def parse_export_default(self) -> _N:
        children = [self.keyword("export"), self.keyword("default")]
        if self.at("function"):
            children.append(self.parse_function_declaration())
        else:
            children.append(self.parse_expression())
            self.finish_statement(children)
        return _N(g.EXPORT_DEFAULT, children)

    # expression level --------------------------------------------------

    def parse_expression(self) -> _N:
        return self.parse_assignment()

    def _arrow_ahead(self) -> bool:
        tok = self.peek()
        if tok.kind == "ident" and self.peek(1).lexeme == "=>":
            return True
        if not (tok.kind == "punct" and tok.lexeme == "("):
            return False
        depth = 0
        j = self.i
        while j < len(self.tokens):
            lex = self.tokens[j].lexeme
            if self.tokens[j].kind == "punct":
                if lex == "(":
                    depth += 1
                elif lex == ")":
                    depth -= 1
                    if depth == 0:
                        nxt = self.tokens[j + 1] if j + 1 < len(self.tokens) else None
                        return nxt is not None and nxt.lexeme == "=>"
            j += 1
        return False

    def parse_assignment(self) -> _N:
        if self._arrow_ahead():
            return self.parse_arrow()
        left = self.parse_logical_or()
        tok = self.peek()
        if tok.kind == "punct" and tok.lexeme in ASSIGN_OPS:
            if left.kind not in (
                g.IDENTIFIER,
                g.MEMBER_EXPRESSION,
                g.COMPUTED_MEMBER_EXPRESSION,
            ):
                self.error("invalid assignment target", tok)
            op = _leaf(self.advance(), g.OPERATOR, tok.lexeme)
            right = self.parse_assignment()
            return _N(g.ASSIGNMENT_EXPRESSION, [left, op, right])
        return left

    def parse_arrow(self) -> _N:
        if self.peek().kind == "ident":
            params = _N(g.PARAM_LIST, [self.ident()])
        else:
            params = self.parse_param_list()
        arrow = self.punct("=>")
        body = self.parse_block() if self.at("{") else self.parse_assignment()
        return _N(g.ARROW_FUNCTION, [params, arrow, body])

    def _binary_level(self, ops: set[str], next_level, kind: str) -> _N:
        left = next_level()
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.lexeme in ops:
                op = _leaf(self.advance(), g.OPERATOR, tok.lexeme)
                right = next_level()
                left = _N(kind, [left, op, right])
            else:
                return left

    def parse_logical_or(self) -> _N:
        return self._binary_level({"||"}, self.parse_logical_and, g.LOGICAL_EXPRESSION)

    def parse_logical_and(self) -> _N:
        return self._binary_level({"&&"}, self.parse_equality, g.LOGICAL_EXPRESSION)

    def parse_equality(self) -> _N:
        return self._binary_level(EQUALITY_OPS, self.parse_relational, g.BINARY_EXPRESSION)

    def parse_relational(self) -> _N:
        return self._binary_level(RELATIONAL_OPS, self.parse_additive, g.BINARY_EXPRESSION)

    def parse_additive(self) -> _N:
        return self._binary_level(ADDITIVE_OPS, self.parse_multiplicative, g.BINARY_EXPRESSION)

    def parse_multiplicative(self) -> _N:
        return self._binary_level(MULTIPLICATIVE_OPS, self.parse_unary, g.BINARY_EXPRESSION)

    def parse_unary(self) -> _N:
        tok = self.peek()
        if tok.kind == "punct" and tok.lexeme in UNARY_OPS:
            op = _leaf(self.advance(), g.OPERATOR, tok.lexeme)
            return _N(g.UNARY_EXPRESSION, [op, self.parse_unary()])
        if tok.kind == "punct" and tok.lexeme in UPDATE_OPS:
            op = _leaf(self.advance(), g.OPERATOR, tok.lexeme)
            return _N(g.UPDATE_EXPRESSION, [op, self.parse_unary()])
        return self.parse_postfix()

    def parse_postfix(self) -> _N:
        expr = self.parse_call_member()
        tok = self.peek()
        if tok.kind == "punct" and tok.lexeme in UPDATE_OPS and not tok.nl_before:
            op = _leaf(self.advance(), g.OPERATOR, tok.lexeme)
            return _N(g.UPDATE_EXPRESSION, [expr, op])
        return expr

    def parse_call_member(self) -> _N:
        if self.at("new"):
            return self.parse_new()
        return self._member_call_chain(self.parse_primary(), allow_call=True)

    def parse_new(self) -> _N:
        kw = self.keyword("new")
        callee = self._member_call_chain(self.parse_primary(), allow_call=False)
        children = [kw, callee]
        if self.at("("):
            children.extend(self._arguments())
        return _N(g.NEW_EXPRESSION, children)

    def _member_call_chain(self, expr: _N, allow_call: bool) -> _N:
        while True:
            if self.at("."):
                dot = self.punct(".")
                prop = self.property_name()
                expr = _N(g.MEMBER_EXPRESSION, [expr, dot, prop])
            elif self.at("["):
                lb = self.punct("[")
                inner = self.parse_expression()
                rb = self.punct("]")
                expr = _N(g.COMPUTED_MEMBER_EXPRESSION, [expr, lb, inner, rb])
            elif allow_call and self.at("("):
                expr = _N(g.CALL_EXPRESSION, [expr] + self._arguments())
            else:
                return expr

    def _arguments(self) -> list[_N]:
        out = [self.punct("(")]
        while not self.at(")"):
            if self.at("..."):
                ell = self.punct("...")
                out.append(_N(g.SPREAD_ELEMENT, [ell, self.parse_assignment()]))
            else:
                out.append(self.parse_assignment())
            if self.at(","):
                out.append(self.punct(","))
            elif not self.at(")"):
                self.error("expected ',' or ')' in arguments")
        out.append(self.punct(")"))
        return out

    def parse_primary(self) -> _N:
        tok = self.peek()
        if tok.kind == "punct":
            if tok.lexeme == "(":
                lp = self.punct("(")
                inner = self.parse_expression()
                rp = self.punct(")")
                return _N(g.PAREN_EXPRESSION, [lp, inner, rp])
            if tok.lexeme == "{":
                return self.parse_object_literal()
            if tok.lexeme == "[":
                return self.parse_array_literal()
        if tok.kind == "ident":
            return self.ident()
        if tok.kind == "number":
            self.advance()
            return _leaf(tok, g.NUMBER_LITERAL, tok.lexeme)
        if tok.kind == "string":
            self.advance()
            return _leaf(tok, g.STRING_LITERAL, tok.lexeme)
        if tok.kind == "keyword":
            if tok.lexeme == "this":
                self.advance()
                return _leaf(tok, g.THIS_EXPRESSION)
            if tok.lexeme in ("true", "false"):
                self.advance()
                return _leaf(tok, g.BOOLEAN_LITERAL, tok.lexeme)
            if tok.lexeme == "null":
                self.advance()
                return _leaf(tok, g.NULL_LITERAL)
        self.error(f"unexpected token {tok.lexeme!r}" if tok.lexeme else "unexpected end of input")

    def parse_array_literal(self) -> _N:
        children = [self.punct("[")]
        while not self.at("]"):
            if self.at("..."):
                ell = self.punct("...")
                children.append(_N(g.SPREAD_ELEMENT, [ell, self.parse_assignment()]))
            else:
                children.append(self.parse_assignment())
            if self.at(","):
                children.append(self.punct(","))
            elif not self.at("]"):
                self.error("expected ',' or ']' in array literal")
        children.append(self.punct("]"))
        return _N(g.ARRAY_LITERAL, children)

    def parse_object_literal(self) -> _N:
        children = [self.punct("{")]
        while not self.at("}"):
            children.append(self.parse_object_member())
            if self.at(","):
                children.append(self.punct(","))
            elif not self.at("}"):
                self.error("expected ',' or '}' in object literal")
        children.append(self.punct("}"))
        return _N(g.OBJECT_LITERAL, children)

    def parse_object_member(self) -> _N:
        if self.at("..."):
            ell = self.punct("...")
            return _N(g.SPREAD_ELEMENT, [ell, self.parse_assignment()])
        tok = self.peek()
        if tok.kind == "string":
            self.advance()
            key = _leaf(tok, g.STRING_LITERAL, tok.lexeme)
        elif tok.kind in ("ident", "keyword"):
            key = self.property_name()
        else:
            self.error("expected object member")
        if self.at(":"):
            colon = self.punct(":")
            return _N(g.PROPERTY, [key, colon, self.parse_assignment()])
        if self.at("("):
            params = self.parse_param_list()
            body = self.parse_block()
            return _N(g.METHOD_PROPERTY, [key, params, body])
        if tok.kind == "ident" and (self.at(",") or self.at("}")):
            shorthand = _N(g.IDENTIFIER, value=key.value, span=key.span, trivia=key.trivia)
            return _N(g.SHORTHAND_PROPERTY, [shorthand])
        self.error("expected ':', '(' or ',' after object key")


def _flatten(root: _N, source: str, trailing: str) -> SyntaxTree:
    nodes: list[SyntaxNode] = []

    def walk(n: _N) -> int:
        idx = len(nodes)
        nodes.append(SyntaxNode(n.kind, n.value, [], n.span, n.trivia))
        nodes[idx].children = [walk(c) for c in n.children]
        return idx

    walk(root)
    return SyntaxTree(nodes, 0, source, trailing)


def parse(source: SourceFile | str) -> SyntaxTree:
    """Parse subset-grammar source into a validated syntax tree."""
    text = source.content if isinstance(source, SourceFile) else source
    parser = Parser(text)
    root = parser.parse_program()
    trailing = parser.peek().trivia if parser.at_kind("eof") else ""
    tree = _flatten(root, text, trailing)
    validate(tree)
    return tree
