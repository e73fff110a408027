"""Tokenizer for the JavaScript subset.

Whitespace and comments are not tokens: they accumulate as trivia on the
following token so the token stream concatenates back to the source
byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tree import ParseError

PUNCT_3 = ("===", "!==", "...")
PUNCT_2 = ("==", "!=", "<=", ">=", "&&", "||", "=>", "++", "--", "+=", "-=", "*=", "/=", "%=")
PUNCT_1 = "+-*/%<>=!.,;:(){}[]"

KEYWORDS = {
    "var", "let", "const", "function", "return", "if", "else", "for",
    "while", "in", "of", "new", "import", "export", "default", "from",
    "this", "true", "false", "null",
}


@dataclass
class Token:
    kind: str  # ident | keyword | number | string | punct | eof
    lexeme: str
    line: int
    col: int
    end_line: int
    end_col: int
    trivia: str = ""
    nl_before: bool = False


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


class Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 0

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def _advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 0
        else:
            self.col += 1
        return ch

    def _error(self, message: str):
        raise ParseError(self.line, self.col, message)

    def _skip_trivia(self) -> tuple[str, bool]:
        start = self.pos
        saw_newline = False
        while self.pos < len(self.text):
            ch = self._peek()
            if ch in " \t\r":
                self._advance()
            elif ch == "\n":
                saw_newline = True
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            elif ch == "/" and self._peek(1) == "*":
                self._advance()
                self._advance()
                while self.pos < len(self.text):
                    if self._peek() == "*" and self._peek(1) == "/":
                        self._advance()
                        self._advance()
                        break
                    if self._peek() == "\n":
                        saw_newline = True
                    self._advance()
                else:
                    self._error("unterminated block comment")
            else:
                break
        return self.text[start : self.pos], saw_newline

    def _string(self) -> str:
        quote = self._advance()
        out = [quote]
        while True:
            if self.pos >= len(self.text):
                self._error("unterminated string literal")
            ch = self._peek()
            if ch == "\n":
                self._error("newline in string literal")
            out.append(self._advance())
            if ch == "\\":
                if self.pos >= len(self.text):
                    self._error("unterminated string literal")
                out.append(self._advance())
            elif ch == quote:
                break
        return "".join(out)

    def _number(self) -> str:
        start = self.pos
        while self._peek().isdigit():
            self._advance()
        if self._peek() == "." and self._peek(1).isdigit():
            self._advance()
            while self._peek().isdigit():
                self._advance()
        if self._peek() in "eE" and (
            self._peek(1).isdigit() or (self._peek(1) in "+-" and self._peek(2).isdigit())
        ):
            self._advance()
            if self._peek() in "+-":
                self._advance()
            while self._peek().isdigit():
                self._advance()
        return self.text[start : self.pos]

    def tokens(self) -> list[Token]:
        out = []
        while True:
            trivia, nl = self._skip_trivia()
            line, col = self.line, self.col
            if self.pos >= len(self.text):
                out.append(Token("eof", "", line, col, line, col, trivia, nl))
                return out
            ch = self._peek()
            if _is_ident_start(ch):
                start = self.pos
                while self.pos < len(self.text) and _is_ident_char(self._peek()):
                    self._advance()
                lexeme = self.text[start : self.pos]
                kind = "keyword" if lexeme in KEYWORDS else "ident"
            elif ch.isdigit():
                lexeme = self._number()
                kind = "number"
            elif ch in "'\"":
                lexeme = self._string()
                kind = "string"
            elif ch == "`":
                self._error("template literals are outside the supported subset")
            else:
                lexeme = None
                for group in (PUNCT_3, PUNCT_2):
                    for cand in group:
                        if self.text.startswith(cand, self.pos):
                            lexeme = cand
                            break
                    if lexeme:
                        break
                if lexeme is None and ch in PUNCT_1:
                    lexeme = ch
                if lexeme is None:
                    self._error(f"unexpected character {ch!r}")
                for _ in lexeme:
                    self._advance()
                kind = "punct"
            out.append(Token(kind, lexeme, line, col, self.line, self.col, trivia, nl))


def tokenize(text: str) -> list[Token]:
    return Lexer(text).tokens()
