"""Tolerant recursive-descent parser for the supported Java subset.

Statements are parsed structurally; expressions are scanned as balanced
token runs, which is all the metrics need (operators, operands, calls,
field references, decision points). Nested, local and anonymous classes
are flattened into their own ``ClassNode`` with ``$``-joined names.

Token classification for Halstead counts, per method body:

* operands: identifiers, literals, ``this``/``super``;
* operators: language operators (``.``, ``,``, ``;``, ``:``, brackets and
  braces are separators and do not count), the control-flow keywords
  listed in ``OPERATOR_KEYWORDS``, ``new``/``instanceof``, ``()`` for
  every call, and ``[]`` for every index access.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from ..model import UNKNOWN, ClassNode, ExpressionFact, FieldDecl, MethodNode
from .lexer import Comment, Token

PRIMITIVE_KEYWORDS = frozenset(["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"])
MODIFIERS = frozenset(
    ["public", "protected", "private", "static", "final", "abstract", "native", "synchronized",
     "transient", "volatile", "strictfp", "default"]
)
OPERATOR_KEYWORDS = frozenset(
    ["if", "else", "for", "while", "do", "switch", "case", "default", "try", "catch", "finally",
     "return", "throw", "break", "continue", "assert", "synchronized", "new", "instanceof"]
)
SEPARATORS = frozenset(["(", ")", "{", "}", "[", "]", ";", ",", ".", "@", ":", "..."])
BINARY_OPERATORS = frozenset(
    ["&&", "||", "+", "-", "*", "/", "%", "&", "|", "^", "<<", ">>", ">>>", "<", ">", "<=", ">=",
     "==", "!="]
)
# a binary + or - must follow something that ends an operand
_OPERAND_END_KINDS = frozenset(["ident", "literal", "string"])
_OPERAND_END_TEXT = frozenset([")", "]", "this", "super", "++", "--", "class"])

_CODE_COMMENT_RE = re.compile(r"(;|\{|\})\s*$|^(if|for|while|switch|return)\b.*[({;]")


class ParseError(Exception):
    def __init__(self, token: Token, message: str):
        super().__init__(message)
        self.line = token.line


class UnsupportedConstruct(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(message)
        self.line = line


@dataclass
class NameRef:
    qual: tuple  # ("bare",) ("this",) ("super",) ("var", q) ("chain",) ("ctor", kw) ("type", t)
    name: str
    is_call: bool
    is_local: bool = False
    qual_local_type: Optional[str] = None


@dataclass
class MethodCtx:
    name: str = ""
    param_types: tuple = ()
    return_type: Optional[str] = None
    line: int = 0
    end_line: int = 0
    has_body: bool = True
    doc: bool = False
    statements: int = 0
    decision_points: int = 0
    nest: int = 0
    max_nest: int = 0
    operators: Counter = field(default_factory=Counter)
    operands: Counter = field(default_factory=Counter)
    refs: list = field(default_factory=list)
    locals: dict = field(default_factory=dict)
    expressions: list = field(default_factory=list)
    empty_catch_lines: list = field(default_factory=list)

    def count(self, tok: Token, prev: Optional[Token], in_type: bool):
        kind, text = tok.kind, tok.text
        if kind in ("ident", "literal", "string") or text in ("this", "super"):
            self.operands[text] += 1
        elif kind == "keyword":
            if text in OPERATOR_KEYWORDS:
                self.operators[text] += 1
        elif kind == "op" and not in_type:
            if text == "(":
                if prev is not None and (prev.kind == "ident" or prev.text in ("this", "super")):
                    self.operators["()"] += 1
            elif text == "[":
                if prev is not None and (prev.kind in ("ident", "string") or prev.text in (")", "]")):
                    self.operators["[]"] += 1
            elif text not in SEPARATORS:
                self.operators[text] += 1


@dataclass
class ClassCtx:
    qualified_name: str
    kind: str
    line: int
    declared_name: str = ""
    doc: bool = False
    superclass: Optional[str] = None
    interfaces: list = field(default_factory=list)
    outer: Optional["ClassCtx"] = None
    fields: list = field(default_factory=list)
    methods: list = field(default_factory=list)
    strings: list = field(default_factory=list)
    end_line: int = 0
    anon_count: int = 0
    local_counts: Counter = field(default_factory=Counter)


class FileParser:
    """Parses one compilation unit into flattened ``ClassNode`` objects."""

    def __init__(self, tokens: list[Token], comments: list[Comment], path: str):
        # padding so fixed lookahead never runs off the end
        self.tokens = tokens + [tokens[-1]] * 4
        self.path = path
        self.pos = 0
        self.package = ""
        self.classes: list[ClassNode] = []
        self.warnings: list[tuple[int, str]] = []
        self.errors: list[tuple[int, str]] = []
        self.sink: Optional[MethodCtx] = None
        self.class_stack: list[ClassCtx] = []
        self.expr_stack: list[list] = []
        self._code_comment_lines = _code_comment_lines(comments)
        self._claimed_lines: set[int] = set()

    # -- token plumbing -------------------------------------------------

    def peek(self, k: int = 0) -> Token:
        i = min(self.pos + k, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind != "string" and tok.text in texts

    def advance(self, in_type: bool = False, count: bool = True) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind == "eof":
            raise ParseError(tok, "unexpected end of file")
        prev = self.tokens[self.pos - 1] if self.pos else None
        self.pos += 1
        if count and self.sink is not None:
            self.sink.count(tok, prev, in_type)
        return tok

    def expect(self, text: str, count: bool = True) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "string":
            raise ParseError(tok, f"expected {text!r} but found {tok.text or 'end of file'!r}")
        return self.advance(count=count)

    def expect_ident(self, count: bool = True) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(tok, f"expected identifier but found {tok.text or 'end of file'!r}")
        return self.advance(count=count)

    # -- compilation unit ------------------------------------------------

    def parse(self) -> None:
        self.skip_annotations()
        if self.at("package"):
            self.advance()
            self.package = self.qualified_ident()
            self.expect(";")
        while self.at("import"):
            while not self.at(";"):
                self.advance()
            self.advance()
        while self.peek().kind != "eof":
            if self.at(";"):
                self.advance()
                continue
            start = self.pos
            try:
                self.type_declaration(outer=None)
            except UnsupportedConstruct as exc:
                self.warnings.append((exc.line, str(exc)))
                self.pos = start
                self.skip_member()

    def qualified_ident(self) -> str:
        parts = [self.expect_ident().text]
        while self.at(".") and self.peek(1).kind == "ident":
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def skip_annotations(self) -> None:
        while self.at("@") and self.peek(1).text != "interface":
            self.advance(count=False)
            self.advance(count=False)
            while self.at(".") and self.peek(1).kind == "ident":
                self.advance(count=False)
                self.advance(count=False)
            if self.at("("):
                self.skip_balanced("(", ")")

    def skip_modifiers(self) -> list[str]:
        mods = []
        while True:
            self.skip_annotations()
            tok = self.peek()
            if tok.kind == "keyword" and tok.text in MODIFIERS and not (
                tok.text == "default" and self.peek(1).text in (":", "->")
            ):
                mods.append(self.advance(count=False).text)
            elif tok.kind == "ident" and tok.text == "sealed" and self.peek(1).kind in ("keyword", "ident"):
                self.advance(count=False)
            elif tok.text == "non" and self.peek(1).text == "-" and self.peek(2).text == "sealed":
                for _ in range(3):
                    self.advance(count=False)
            else:
                return mods

    def skip_balanced(self, open_: str, close: str) -> None:
        depth = 0
        while True:
            tok = self.advance(count=False)
            if tok.kind == "string":
                continue
            if tok.text == open_:
                depth += 1
            elif tok.text == close:
                depth -= 1
                if depth == 0:
                    return

    def skip_member(self) -> None:
        """Skip to the end of the current member: a top-level ';' or balanced braces."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                raise ParseError(tok, "unexpected end of file while skipping malformed construct")
            if tok.kind != "string":
                if tok.text in ("(", "[", "{"):
                    depth += 1
                elif tok.text in (")", "]"):
                    depth = max(depth - 1, 0)
                elif tok.text == "}":
                    if depth == 0:
                        return
                    depth -= 1
                    if depth == 0:
                        self.advance(count=False)
                        if self.at(";"):
                            self.advance(count=False)
                        return
                elif tok.text == ";" and depth == 0:
                    self.advance(count=False)
                    return
            self.advance(count=False)

    # -- types -----------------------------------------------------------

    def type_end(self, i: int) -> Optional[int]:
        """Index just past a type starting at token ``i``, or None; never consumes."""
        toks = self.tokens
        while toks[i].text == "@" and toks[i + 1].kind == "ident":
            i += 2
        tok = toks[i]
        if not (tok.kind == "ident" or tok.text in PRIMITIVE_KEYWORDS):
            return None
        i += 1
        while True:
            if toks[i].text == "<":
                i = self._angles_end(i)
                if i is None:
                    return None
            if toks[i].text == "." and toks[i + 1].kind == "ident":
                i += 2
                continue
            break
        while toks[i].text == "[" and toks[i + 1].text == "]":
            i += 2
        if toks[i].text == "...":
            i += 1
        return i

    def _angles_end(self, i: int) -> Optional[int]:
        depth = 0
        toks = self.tokens
        while True:
            tok = toks[i]
            if tok.text == "<":
                depth += 1
            elif tok.text in (">", ">>", ">>>"):
                depth -= len(tok.text)
                if depth <= 0:
                    return i + 1
            elif not (
                tok.kind == "ident"
                or tok.text in PRIMITIVE_KEYWORDS
                or tok.text in (".", ",", "?", "extends", "super", "&", "[", "]", "@")
            ):
                return None
            i += 1

    def parse_type(self) -> str:
        end = self.type_end(self.pos)
        if end is None:
            raise ParseError(self.peek(), f"expected a type but found {self.peek().text!r}")
        parts = []
        while self.pos < end:
            tok = self.peek()
            if tok.text == "@":
                self.advance(count=False)
                self.advance(count=False)
                continue
            parts.append(self.advance(in_type=True).text)
        return _join_type(parts)

    def type_list(self) -> list[str]:
        types = [self.parse_type()]
        while self.at(","):
            self.advance(count=False)
            types.append(self.parse_type())
        return types

    # -- declarations ----------------------------------------------------

    def type_declaration(self, outer: Optional[ClassCtx], local: bool = False) -> None:
        start_tok = self.peek()
        self.skip_modifiers()
        tok = self.peek()
        if tok.text == "@" and self.peek(1).text == "interface":
            raise UnsupportedConstruct(tok.line, "annotation type declaration is not supported; skipped")
        if tok.kind == "ident" and tok.text == "record" and self.peek(1).kind == "ident":
            raise UnsupportedConstruct(tok.line, "record declaration is not supported; skipped")
        if tok.text not in ("class", "interface", "enum") or tok.kind != "keyword":
            raise ParseError(tok, f"expected a type declaration but found {tok.text or 'end of file'!r}")
        kind = self.advance(count=False).text
        name = self.expect_ident(count=False).text
        if outer is None:
            qname = f"{self.package}.{name}" if self.package else name
        elif local:
            outer.local_counts[name] += 1
            qname = f"{outer.qualified_name}${outer.local_counts[name]}{name}"
        else:
            qname = f"{outer.qualified_name}${name}"
        ctx = ClassCtx(qname, kind, tok.line, declared_name=name, doc=start_tok.doc, outer=outer)
        if self.at("<"):
            self.skip_balanced_angles()
        saved_sink, self.sink = self.sink, None
        try:
            while self.peek().text in ("extends", "implements") or self.peek().text == "permits":
                kw = self.advance(count=False).text
                types = self.type_list()
                if kw == "extends" and kind == "class":
                    ctx.superclass = types[0]
                elif kw != "permits":
                    ctx.interfaces.extend(types)
            self.class_body(ctx)
        finally:
            self.sink = saved_sink

    def skip_balanced_angles(self) -> None:
        end = self._angles_end(self.pos)
        if end is None:
            raise ParseError(self.peek(), "malformed type parameters")
        self.pos = end

    def class_body(self, ctx: ClassCtx) -> None:
        self.class_stack.append(ctx)
        try:
            self.expect("{", count=False)
            if ctx.kind == "enum":
                self.enum_constants(ctx)
            while not self.at("}"):
                if self.peek().kind == "eof":
                    raise ParseError(self.peek(), f"unterminated body of {ctx.qualified_name}")
                self.member(ctx)
            ctx.end_line = self.advance(count=False).line
        finally:
            self.class_stack.pop()
        self.classes.append(self.finish_class(ctx))

    def enum_constants(self, ctx: ClassCtx) -> None:
        while True:
            self.skip_annotations()
            if self.at(";"):
                self.advance(count=False)
                return
            if self.at("}"):
                return
            self.expect_ident(count=False)
            if self.at("("):
                self.with_scratch_sink(lambda: self.arguments())
            if self.at("{"):
                self.anonymous_class(ctx.qualified_name, self.peek().line)
            if self.at(","):
                self.advance(count=False)
                continue
            if self.at(";"):
                self.advance(count=False)
            return

    def with_scratch_sink(self, fn) -> None:
        saved, self.sink = self.sink, MethodCtx()
        self.expr_stack.append([])
        try:
            fn()
        finally:
            self.expr_stack.pop()
            self.sink = saved

    def member(self, ctx: ClassCtx) -> None:
        start = self.pos
        n_classes = len(self.classes)
        n_strings = len(ctx.strings)
        try:
            self._member(ctx)
        except UnsupportedConstruct as exc:
            del self.classes[n_classes:]
            del ctx.strings[n_strings:]
            self.warnings.append((exc.line, str(exc)))
            self.pos = start
            self.skip_member()
        except ParseError as exc:
            del self.classes[n_classes:]
            del ctx.strings[n_strings:]
            self.errors.append((exc.line, f"skipped malformed member of {ctx.qualified_name}: {exc}"))
            self.pos = start
            self.skip_member()

    def _member(self, ctx: ClassCtx) -> None:
        start = self.pos
        start_tok = self.peek()
        if self.at(";"):
            self.advance(count=False)
            return
        mods = self.skip_modifiers()
        tok = self.peek()
        if tok.text == "{":
            # initializer block: analysed for nested classes and literals only
            self.with_scratch_sink(self.block)
            return
        if tok.kind == "keyword" and tok.text in ("class", "interface", "enum") or tok.text == "@" or (
            tok.kind == "ident" and tok.text == "record" and self.peek(1).kind == "ident"
        ):
            self.pos = start
            self.type_declaration(outer=ctx)
            return
        if self.at("<"):
            self.skip_balanced_angles()
        tok = self.peek()
        if tok.kind == "ident" and tok.text == ctx.declared_name and self.peek(1).text == "(":
            self.advance(count=False)
            self.method(ctx, tok.text, None, tok.line, start_tok.doc, abstract="abstract" in mods)
            return
        type_name = self.parse_type()
        name_tok = self.expect_ident(count=False)
        if self.at("("):
            self.method(ctx, name_tok.text, type_name, name_tok.line, start_tok.doc, abstract="abstract" in mods)
            return
        self.field_declarators(ctx, type_name, name_tok, start_tok.doc)

    def field_declarators(self, ctx: ClassCtx, type_name: str, name_tok: Token, doc: bool) -> None:
        while True:
            dims = ""
            while self.at("["):
                self.advance(count=False)
                self.expect("]", count=False)
                dims += "[]"
            ctx.fields.append(FieldDecl(name_tok.text, type_name + dims, doc, name_tok.line))
            if self.at("="):
                self.advance(count=False)
                self.with_scratch_sink(lambda: self.scan_expr({",", ";"}))
            if self.at(","):
                self.advance(count=False)
                name_tok = self.expect_ident(count=False)
                continue
            self.expect(";", count=False)
            return

    def method(self, ctx, name, return_type, line, doc, abstract=False) -> None:
        m = MethodCtx(name=name, return_type=return_type, line=line, doc=doc)
        self.expect("(", count=False)
        params = []
        while not self.at(")"):
            self.skip_modifiers()
            ptype = self.parse_type()
            if self.at("this"):  # receiver parameter
                self.advance(count=False)
            else:
                pname = self.expect_ident(count=False).text
                while self.at("["):
                    self.advance(count=False)
                    self.expect("]", count=False)
                    ptype += "[]"
                params.append(ptype)
                m.locals[pname] = ptype
            if self.at(","):
                self.advance(count=False)
        self.expect(")", count=False)
        m.param_types = tuple(params)
        while self.at("["):
            self.advance(count=False)
            self.expect("]", count=False)
            if m.return_type:
                m.return_type += "[]"
        if self.at("throws"):
            self.advance(count=False)
            self.type_list()
        if self.at("default"):  # annotation member default
            self.advance(count=False)
            self.with_scratch_sink(lambda: self.scan_expr({";"}))
        if self.at(";"):
            end = self.advance(count=False)
            m.has_body = False
            m.end_line = end.line
        else:
            saved, self.sink = self.sink, m
            self.expr_stack.append([])
            try:
                m.end_line = self.block()
            finally:
                self.expr_stack.pop()
                self.sink = saved
        ctx.methods.append(m)

    def anonymous_class(self, base_type: str, line: int) -> None:
        outer = self.class_stack[-1]
        outer.anon_count += 1
        ctx = ClassCtx(f"{outer.qualified_name}${outer.anon_count}", "class", line, outer=outer)
        ctx.superclass = base_type
        saved, self.sink = self.sink, None
        saved_exprs, self.expr_stack = self.expr_stack, []
        try:
            self.class_body(ctx)
        finally:
            self.sink = saved
            self.expr_stack = saved_exprs

    # -- statements -------------------------------------------------------

    def block(self) -> int:
        """Parse ``{ statements }``; returns the line of the closing brace."""
        self.expect("{")
        while not self.at("}"):
            if self.peek().kind == "eof":
                raise ParseError(self.peek(), "unterminated block")
            self.statement()
        return self.advance().line

    def nested(self, fn) -> None:
        m = self.sink
        m.nest += 1
        m.max_nest = max(m.max_nest, m.nest)
        try:
            fn()
        finally:
            m.nest -= 1

    def statement(self) -> None:
        m = self.sink
        tok = self.peek()
        text = tok.text if tok.kind != "string" else None
        if text == "{":
            self.block()
        elif text == ";":
            self.advance()
        elif tok.kind == "ident" and self.peek(1).text == ":" and self.peek(1).kind == "op":
            self.advance(count=False)
            self.advance(count=False)
            self.statement()
        elif text == "if":
            self.nested(self.if_statement)
        elif text == "for":
            self.nested(self.for_statement)
        elif text == "while":
            def body():
                self.advance()
                m.decision_points += 1
                self.paren_expr()
                self.statement()
            self.nested(body)
        elif text == "do":
            def body():
                self.advance()
                m.decision_points += 1
                self.statement()
                self.expect("while")
                self.paren_expr()
                self.expect(";")
            self.nested(body)
        elif text == "switch":
            self.nested(self.switch)
        elif text == "try":
            self.nested(self.try_statement)
        elif text in ("return", "throw"):
            m.statements += 1
            self.advance()
            if not self.at(";"):
                self.full_expr({";"})
            self.expect(";")
        elif text in ("break", "continue"):
            m.statements += 1
            self.advance()
            if self.peek().kind == "ident":
                self.advance(count=False)
            self.expect(";")
        elif tok.kind == "ident" and text == "yield" and (
            self.peek(1).kind in ("ident", "literal", "string") or self.peek(1).text in ("new", "this", "-", "!")
        ):
            m.statements += 1
            self.advance(count=False)
            self.full_expr({";"})
            self.expect(";")
        elif text == "assert":
            m.statements += 1
            self.advance()
            self.full_expr({";", ":"})
            if self.at(":"):
                self.advance()
                self.full_expr({";"})
            self.expect(";")
        elif text == "synchronized":
            self.advance()
            self.paren_expr()
            self.block()
        elif text in ("else", "case", "catch", "finally") or text == "}":
            raise ParseError(tok, f"unexpected {text!r}")
        elif self.local_type_ahead():
            self.type_declaration(outer=self.class_stack[-1], local=True)
        elif self.local_decl_ahead():
            self.local_declaration()
            self.expect(";")
        else:
            m.statements += 1
            self.full_expr({";"})
            self.expect(";")

    def if_statement(self) -> None:
        m = self.sink
        self.advance()
        m.decision_points += 1
        self.paren_expr()
        self.statement()
        if self.at("else"):
            self.advance()
            if self.at("if"):
                self.if_statement()
            else:
                self.statement()

    def for_statement(self) -> None:
        m = self.sink
        self.advance()
        m.decision_points += 1
        self.expect("(")
        if self.is_foreach():
            self.skip_modifiers()
            vtype = self.parse_type()
            m.locals[self.advance().text] = vtype
            self.expect(":")
            self.full_expr({")"})
        else:
            if not self.at(";"):
                if self.local_decl_ahead():
                    self.local_declaration(count_statement=False)
                else:
                    self.full_expr({";"})
            self.expect(";")
            if not self.at(";"):
                self.full_expr({";"})
            self.expect(";")
            if not self.at(")"):
                self.full_expr({")"})
        self.expect(")")
        self.statement()

    def is_foreach(self) -> bool:
        depth = 0
        i = self.pos
        while True:
            tok = self.tokens[i]
            if tok.kind == "eof":
                return False
            if tok.kind == "op":
                if tok.text in ("(", "[", "{"):
                    depth += 1
                elif tok.text in (")", "]", "}"):
                    if depth == 0:
                        return False
                    depth -= 1
                elif depth == 0 and tok.text == ";":
                    return False
                elif depth == 0 and tok.text == ":":
                    return True
            i += 1

    def switch(self) -> None:
        m = self.sink
        self.advance()
        self.paren_expr()
        self.expect("{")
        while not self.at("}"):
            tok = self.peek()
            if tok.text == "case" and tok.kind == "keyword":
                self.advance()
                m.decision_points += 1
                self.case_labels()
                self.case_body()
            elif tok.text == "default" and tok.kind == "keyword":
                self.advance()
                self.case_body()
            elif tok.kind == "eof":
                raise ParseError(tok, "unterminated switch")
            else:
                raise ParseError(tok, f"expected case label but found {tok.text!r}")
        self.advance()

    def case_labels(self) -> None:
        m = self.sink
        while True:
            self.full_expr({":", "->", ","})
            if self.at(","):
                self.advance(count=False)
                m.decision_points += 1
                continue
            return

    def case_body(self) -> None:
        if self.at("->"):
            self.advance()
            if self.at("{"):
                self.block()
            elif self.at("throw"):
                self.statement()
            else:
                self.sink.statements += 1
                self.full_expr({";"})
                self.expect(";")
            return
        self.expect(":")
        while not self._at_case_end():
            if self.peek().kind == "eof":
                raise ParseError(self.peek(), "unterminated switch")
            self.statement()

    def _at_case_end(self) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.text in ("case", "default") or self.at("}")

    def try_statement(self) -> None:
        m = self.sink
        self.advance()
        if self.at("("):
            self.advance()
            while not self.at(")"):
                if self.local_decl_ahead():
                    self.local_declaration(count_statement=False)
                else:
                    self.full_expr({";", ")"})
                if self.at(";"):
                    self.advance()
            self.advance()
        self.block()
        while self.at("catch"):
            catch_tok = self.advance()
            m.decision_points += 1
            self.expect("(")
            self.skip_modifiers()
            ctype = self.parse_type()
            while self.at("|"):
                self.advance(count=False)
                self.parse_type()
            m.locals[self.expect_ident().text] = ctype
            self.expect(")")
            if self.at("{") and self.peek(1).text == "}":
                m.empty_catch_lines.append(catch_tok.line)
            self.block()
        if self.at("finally"):
            self.advance()
            self.block()

    def local_type_ahead(self) -> bool:
        i = self.pos
        toks = self.tokens
        while True:
            tok = toks[i]
            if tok.text == "@" and toks[i + 1].kind == "ident":
                i += 2
                if toks[i].text == "(":
                    return False
                continue
            if tok.kind == "keyword" and tok.text in ("final", "abstract", "static", "strictfp"):
                i += 1
                continue
            break
        return toks[i].kind == "keyword" and toks[i].text in ("class", "interface", "enum")

    def local_decl_ahead(self) -> bool:
        i = self.pos
        toks = self.tokens
        while True:
            if toks[i].text == "final" and toks[i].kind == "keyword":
                i += 1
            elif toks[i].text == "@" and toks[i + 1].kind == "ident":
                i += 2
                while toks[i].text == "." and toks[i + 1].kind == "ident":
                    i += 2
                if toks[i].text == "(":
                    depth = 0
                    while True:
                        if toks[i].kind == "eof":
                            return False
                        if toks[i].text == "(":
                            depth += 1
                        elif toks[i].text == ")":
                            depth -= 1
                            if depth == 0:
                                break
                        i += 1
                    i += 1
            else:
                break
        end = self.type_end(i)
        if end is None:
            return False
        return toks[end].kind == "ident" and toks[end + 1].text in ("=", ";", ",", "[", ":", ")")

    def local_declaration(self, count_statement: bool = True) -> None:
        m = self.sink
        self.skip_modifiers()
        vtype = self.parse_type()
        has_init = False
        while True:
            name = self.expect_ident().text
            dims = ""
            while self.at("["):
                self.advance(in_type=True)
                self.expect("]")
                dims += "[]"
            m.locals[name] = vtype + dims
            if self.at("="):
                has_init = True
                self.advance()
                self.full_expr({",", ";", ")"})
            if self.at(","):
                self.advance()
                continue
            break
        if has_init and count_statement:
            m.statements += 1

    # -- expressions ------------------------------------------------------

    def paren_expr(self) -> None:
        self.expect("(")
        self.full_expr({")"})
        self.expect(")")

    def full_expr(self, stops: set) -> None:
        line = self.peek().line
        ops: list = []
        self.expr_stack.append(ops)
        try:
            self.scan_expr(stops)
        finally:
            self.expr_stack.pop()
        if ops and self.sink is not None:
            self.sink.expressions.append(ExpressionFact(line, tuple(ops)))

    def arguments(self) -> None:
        self.expect("(")
        if not self.at(")"):
            self.scan_expr({")"})
        self.expect(")")

    def scan_expr(self, stops: set) -> None:
        m = self.sink
        depth = 0
        ternary = 0
        start = self.pos
        while True:
            tok = self.peek()
            kind, text = tok.kind, tok.text
            if kind == "eof":
                raise ParseError(tok, "unexpected end of file in expression")
            if kind == "op":
                if depth == 0 and text in stops:
                    if text == ":" and ternary:
                        ternary -= 1
                        self.advance()
                        continue
                    if self.pos == start and text not in (")",):
                        raise ParseError(tok, f"expected an expression but found {text!r}")
                    return
                if text in ("(", "[", "{"):
                    depth += 1
                elif text in (")", "]", "}"):
                    if depth == 0:
                        raise ParseError(tok, f"unbalanced {text!r} in expression")
                    depth -= 1
                elif text == ";" and depth == 0:
                    raise ParseError(tok, "unexpected ';' in expression")
                elif text == "->":
                    self.lambda_params()
                    self.advance()
                    if self.at("{"):
                        self.expr_stack.append([])
                        try:
                            self.block()
                        finally:
                            self.expr_stack.pop()
                    continue
                elif text == "?":
                    m.decision_points += 1
                    if depth == 0:
                        ternary += 1
                    self._note_op("?")
                elif text in ("&&", "||"):
                    m.decision_points += 1
                    self._note_op(text)
                elif text in BINARY_OPERATORS:
                    prev = self.tokens[self.pos - 1]
                    if prev.kind in _OPERAND_END_KINDS or prev.text in _OPERAND_END_TEXT:
                        self._note_op(text)
                self.advance()
            elif kind == "keyword":
                if text == "new":
                    self.creator()
                elif text == "switch":
                    self.switch()
                elif text in ("this", "super") and self.peek(1).text == "(" and self.tokens[self.pos - 1].text != ".":
                    m.refs.append(NameRef(("ctor", text), "<init>", True))
                    self.advance()
                elif text == "instanceof":
                    self._note_op(text)
                    self.advance()
                    self.skip_modifiers()
                    self.parse_type()
                    if self.peek().kind == "ident":  # pattern binding
                        m.locals[self.peek().text] = None
                        self.advance()
                elif text in PRIMITIVE_KEYWORDS or text == "class":
                    self.advance(in_type=True)
                else:
                    self.advance()
            elif kind == "ident":
                self.name_ref()
            elif kind == "string":
                self.class_stack[-1].strings.append((_string_value(text), tok.line))
                self.advance()
            else:
                if text == "@":
                    self.skip_annotations()
                else:
                    self.advance()

    def _note_op(self, text: str) -> None:
        if self.expr_stack:
            self.expr_stack[-1].append(text)

    def lambda_params(self) -> None:
        m = self.sink
        prev = self.tokens[self.pos - 1]
        if prev.kind == "ident":
            m.locals[prev.text] = None
        elif prev.text == ")":
            i = self.pos - 2
            depth = 0
            while i > 0:
                t = self.tokens[i]
                if t.text == ")":
                    depth += 1
                elif t.text == "(":
                    if depth == 0:
                        break
                    depth -= 1
                elif t.kind == "ident" and self.tokens[i + 1].text in (",", ")"):
                    m.locals[t.text] = None
                i -= 1

    def name_ref(self) -> None:
        m = self.sink
        i = self.pos
        tok = self.advance()
        name = tok.text
        prev = self.tokens[i - 1] if i else None
        is_call = self.at("(")
        if self.at("->"):
            return
        if prev is not None and prev.text == "::":
            return
        if prev is not None and prev.text == "." and prev.kind == "op":
            q = self.tokens[i - 2]
            if q.text in ("this", "super"):
                qual: tuple = (q.text,)
            elif q.kind == "ident" and self.tokens[i - 3].text != ".":
                qual = ("var", q.text)
            else:
                qual = ("chain",)
        else:
            qual = ("bare",)
        ref = NameRef(qual, name, is_call, is_local=name in m.locals)
        if qual[0] == "var" and qual[1] in m.locals:
            ref.is_local = False
            ref.qual_local_type = m.locals[qual[1]] or UNKNOWN
        m.refs.append(ref)

    def creator(self) -> None:
        m = self.sink
        new_tok = self.advance()
        self.skip_annotations()
        if self.at("<"):
            self.skip_balanced_angles()
        end = self.type_end(self.pos)
        if end is None:
            raise ParseError(self.peek(), "malformed instance creation")
        # array dimensions are handled below, not as part of the type
        parts = []
        while self.pos < end and not self.at("["):
            parts.append(self.advance(in_type=True).text)
        type_name = _join_type(parts)
        if self.at("["):
            while self.at("["):
                self.advance()
                if not self.at("]"):
                    self.scan_expr({"]"})
                self.expect("]")
            if self.at("{"):
                self.advance()
                if not self.at("}"):
                    self.scan_expr({"}"})
                self.expect("}")
            return
        if not self.at("("):
            raise ParseError(self.peek(), "expected '(' after instance creation type")
        m.refs.append(NameRef(("type", type_name), "<init>", True))
        self.arguments()
        if self.at("{"):
            self.anonymous_class(type_name, new_tok.line)

    # -- assembly ---------------------------------------------------------

    def finish_class(self, ctx: ClassCtx) -> ClassNode:
        field_types = {f.name: f.declared_type_name for f in ctx.fields}
        methods = tuple(self.finish_method(ctx, m, field_types) for m in ctx.methods)
        lines = sorted(
            ln for ln in self._code_comment_lines
            if ctx.line <= ln <= ctx.end_line and ln not in self._claimed_lines
        )
        self._claimed_lines.update(lines)
        return ClassNode(
            qualified_name=ctx.qualified_name,
            kind=ctx.kind,
            superclass_name=ctx.superclass,
            implemented_interfaces=tuple(ctx.interfaces),
            fields=tuple(ctx.fields),
            methods=methods,
            doc_comment_present=ctx.doc,
            line_count=max(ctx.end_line - ctx.line + 1, 1),
            file=self.path,
            line=ctx.line,
            outer_name=ctx.outer.qualified_name if ctx.outer else None,
            string_literals=tuple(ctx.strings),
            commented_code_lines=tuple(lines),
        )

    def finish_method(self, ctx: ClassCtx, m: MethodCtx, field_types: dict) -> MethodNode:
        own, foreign, calls = set(), set(), []

        def qualifier_type(ref: NameRef) -> Optional[str]:
            if ref.qual_local_type is not None:
                return None if ref.qual_local_type in (UNKNOWN, "var") else ref.qual_local_type
            q = ref.qual[1]
            if q in field_types:
                return field_types[q]
            if q[:1].isupper():
                return q
            return None

        for ref in m.refs:
            kind = ref.qual[0]
            if ref.is_call:
                if kind in ("bare", "this"):
                    calls.append((ctx.qualified_name, ref.name))
                elif kind == "super":
                    calls.append((ctx.superclass or UNKNOWN, ref.name))
                elif kind == "ctor":
                    target = ctx.qualified_name if ref.qual[1] == "this" else (ctx.superclass or UNKNOWN)
                    calls.append((target, "<init>"))
                elif kind == "type":
                    calls.append((ref.qual[1], "<init>"))
                elif kind == "var":
                    calls.append((qualifier_type(ref) or UNKNOWN, ref.name))
                else:
                    calls.append((UNKNOWN, ref.name))
            elif kind == "bare":
                if not ref.is_local and ref.name in field_types:
                    own.add(ref.name)
            elif kind == "this":
                if ref.name in field_types:
                    own.add(ref.name)
            elif kind == "var":
                qtype = qualifier_type(ref)
                if qtype and not qtype.endswith("]") and qtype not in PRIMITIVE_KEYWORDS:
                    foreign.add((qtype, ref.name))
        return MethodNode(
            name=m.name,
            parameter_type_names=m.param_types,
            return_type_name=m.return_type,
            line=m.line,
            line_count=max(m.end_line - m.line + 1, 1),
            has_body=m.has_body,
            statements=m.statements,
            decision_points=m.decision_points,
            operator_occurrences=sum(m.operators.values()),
            distinct_operators=len(m.operators),
            operand_occurrences=sum(m.operands.values()),
            distinct_operands=len(m.operands),
            accessed_own_fields=frozenset(own),
            accessed_foreign_fields=frozenset(foreign),
            calls=tuple(calls),
            doc_comment_present=m.doc,
            max_nesting_depth=m.max_nest,
            expressions=tuple(m.expressions),
            empty_catch_lines=tuple(m.empty_catch_lines),
        )


def _join_type(parts: list[str]) -> str:
    out = []
    for p in parts:
        if p in ("extends", "super", "&") and out:
            out.append(f" {p} ")
        else:
            out.append(p)
    return "".join(out)


def _string_value(literal: str) -> str:
    if literal.startswith('"""'):
        return literal[3:-3]
    return literal[1:-1]


def _code_comment_lines(comments: list[Comment]) -> set[int]:
    lines = set()
    for c in comments:
        if c.kind == "doc":
            continue
        body = c.text[2:] if c.kind == "line" else c.text[2:-2]
        for offset, raw in enumerate(body.split("\n")):
            text = raw.strip().lstrip("*").strip()
            if text and _CODE_COMMENT_RE.search(text):
                lines.add(c.line + offset)
    return lines
