"""Tokenizer for the query language.

Whitespace (including newlines) only separates tokens. Keywords are
case-sensitive: the clause keywords are uppercase, expression keywords
lowercase, True/False capitalized.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import QuerySyntaxError

KEYWORDS = frozenset({"QUERY", "FROM", "TO", "LET", "BE", "IN",
                      "if", "then", "else", "cons", "nil", "True", "False"})

SYMBOLS = ("->", ">=", "<=", "==", "/=", "&&", "||",
           "(", ")", ",", "\\", "+", "-", "*", "/", ">", "<")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "double" | "string" | a keyword | a symbol | "eof"
    text: str
    line: int
    column: int

    @property
    def loc(self) -> tuple[int, int]:
        return (self.line, self.column)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(text)

    def error(msg: str):
        raise QuerySyntaxError(msg, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if c.isspace():
            col, i = col + 1, i + 1
            continue
        start_line, start_col = line, col
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, start_line, start_col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                tokens.append(Token("double", text[i:j], start_line, start_col))
            else:
                tokens.append(Token("int", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if c == '"':
            j = i + 1
            chars = []
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    error("unterminated string literal")
                if text[j] == "\\":
                    if j + 1 >= n or text[j + 1] not in ('"', "\\"):
                        error("bad escape in string literal")
                    chars.append(text[j + 1])
                    j += 2
                else:
                    chars.append(text[j])
                    j += 1
            if j >= n:
                error("unterminated string literal")
            tokens.append(Token("string", "".join(chars), start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, start_line, start_col))
                col += len(sym)
                i += len(sym)
                break
        else:
            error(f"unexpected character {c!r}")

    tokens.append(Token("eof", "", line, col))
    return tokens
