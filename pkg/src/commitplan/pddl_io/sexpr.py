from __future__ import annotations

from dataclasses import dataclass


class PDDLSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


class SList(list):
    """A parenthesized list remembering where it opened."""

    line: int = 0
    column: int = 0


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c.isspace():
            col += 1
            i += 1
        elif c == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif c in "()":
            tokens.append(Token(c, line, col))
            i += 1
            col += 1
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "();":
                j += 1
            tokens.append(Token(text[i:j].lower(), line, col))
            col += j - i
            i = j
    return tokens


def parse_sexpr(text: str) -> SList:
    """Parse exactly one top-level s-expression; atoms are lowercased strings."""
    tokens = tokenize(text)
    if not tokens:
        raise PDDLSyntaxError("empty input", 1, 1)
    stack: list[SList] = []
    result = None
    for k, tok in enumerate(tokens):
        if result is not None:
            raise PDDLSyntaxError(f"unexpected {tok.text!r} after top-level expression", tok.line, tok.column)
        if tok.text == "(":
            lst = SList()
            lst.line, lst.column = tok.line, tok.column
            stack.append(lst)
        elif tok.text == ")":
            if not stack:
                raise PDDLSyntaxError("unbalanced ')'", tok.line, tok.column)
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                result = done
        else:
            if not stack:
                raise PDDLSyntaxError(f"atom {tok.text!r} outside of a list", tok.line, tok.column)
            stack[-1].append(tok.text)
    if stack:
        raise PDDLSyntaxError("unclosed '('", stack[-1].line, stack[-1].column)
    return result


def where(node) -> tuple[int, int]:
    return (getattr(node, "line", 0), getattr(node, "column", 0))
