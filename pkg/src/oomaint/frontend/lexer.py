"""Tokenizer for the supported Java subset."""

from __future__ import annotations

import re
from dataclasses import dataclass

KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue default do
    double else enum extends final finally float for goto if implements import instanceof
    int interface long native new package private protected public return short static
    strictfp super switch synchronized this throw throws transient try void volatile while""".split()
)
LITERAL_WORDS = frozenset(["true", "false", "null"])

# longest first so the regex alternation is greedy
_OPERATORS = sorted(
    """>>>= <<= >>= >>> ... -> :: ++ -- && || == != <= >= += -= *= /= %= &= |= ^= << >>
    + - * / % = < > ! ~ ? : & | ^ ( ) { } [ ] ; , . @""".split(),
    key=len,
    reverse=True,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\f\r\n]+)
  | (?P<doc>/\*\*(?!/).*?\*/)
  | (?P<block>/\*.*?\*/)
  | (?P<unterminated>/\*)
  | (?P<line>//[^\n]*)
  | (?P<text>\"\"\".*?(?<!\\)\"\"\")
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<char>'(?:[^'\\\n]|\\.)+')
  | (?P<number>(?:0[xX][0-9a-fA-F_]+|0[bB][01_]+|(?:\d[\d_]*\.?[\d_]*|\.\d[\d_]*)(?:[eE][+-]?\d+)?)[lLfFdD]?)
  | (?P<ident>[A-Za-z_$À-￿][A-Za-z0-9_$À-￿]*)
  | (?P<op>"""
    + "|".join(re.escape(op) for op in _OPERATORS)
    + r""")
    """,
    re.VERBOSE | re.DOTALL,
)


class LexError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Token:
    kind: str  # ident, keyword, literal, string, op, eof
    text: str
    line: int
    doc: bool = False  # a doc comment is the immediately preceding lexeme


@dataclass(frozen=True)
class Comment:
    kind: str  # line, block, doc
    text: str
    line: int
    end_line: int


def tokenize(source: str) -> tuple[list[Token], list[Comment]]:
    tokens: list[Token] = []
    comments: list[Comment] = []
    pos = 0
    line = 1
    pending_doc = False
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(line, f"unexpected character {source[pos]!r}")
        kind = m.lastgroup
        text = m.group()
        start_line = line
        line += text.count("\n")
        pos = m.end()
        if kind == "ws":
            continue
        if kind == "unterminated":
            raise LexError(start_line, "unterminated block comment")
        if kind in ("doc", "block", "line"):
            comments.append(Comment(kind, text, start_line, line))
            pending_doc = kind == "doc"
            continue
        if kind == "ident":
            if text in KEYWORDS:
                kind = "keyword"
            elif text in LITERAL_WORDS:
                kind = "literal"
        elif kind in ("number", "char"):
            kind = "literal"
        elif kind == "text":
            kind = "string"
        tokens.append(Token(kind, text, start_line, pending_doc))
        pending_doc = False
    tokens.append(Token("eof", "", line))
    return tokens, comments
