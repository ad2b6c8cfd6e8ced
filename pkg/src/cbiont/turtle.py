"""Turtle-subset and N-Triples parsing and canonical serialization.

Supported Turtle: ``@prefix`` directives, ``<IRI>`` references, prefixed
names, the ``a`` keyword, ``;`` and ``,`` abbreviations, string literals
(short and long forms) with ``@lang`` or ``^^datatype``, and integer/boolean
shorthand.  Blank nodes (``_:x`` and ``[]``) are skolemized into
``urn:skolem:`` IRIs.  Collections and blank-node property lists are
rejected, as are decimal and double shorthand.

Serialization is canonical: the same triple set and prefix map always give
the same bytes.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from .rdf import IRI, Graph, Literal, Term, Triple, XSD_STRING, RDF_LANGSTRING

PrefixMap = Dict[str, str]

RDF_TYPE = IRI("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
XSD_INTEGER = IRI("http://www.w3.org/2001/XMLSchema#integer")
XSD_BOOLEAN = IRI("http://www.w3.org/2001/XMLSchema#boolean")
SKOLEM_BASE = "urn:skolem:"

LEXICAL, SYNTACTIC, SEMANTIC = "lexical", "syntactic", "semantic"


class ParseError(ValueError):
    """A parse failure at a 1-based (line, column) position."""

    def __init__(self, message: str, line: int, column: int, kind: str = SYNTACTIC):
        super().__init__(f"{line}:{column}: {kind} error: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.kind = kind


@dataclass
class Token:
    kind: str
    value: object
    line: int
    column: int
    text: str = ""


_ESCAPES = {'"': '"', "'": "'", "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}
_PUNCT = set(".;,()[]{}=")
_PN_PREFIX = re.compile(r"(?:[^\W\d_][\w\-.]*)?")
_LANGTAG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")


def _is_name_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_" or ch == ":"


def _is_name_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_-.:"


class Lexer:
    """Tokenizer shared by the Turtle, N-Triples and query parsers."""

    def __init__(self, text: str):
        self.text = text
        self._newlines = [i for i, ch in enumerate(text) if ch == "\n"]

    def position(self, index: int) -> Tuple[int, int]:
        line = bisect.bisect_left(self._newlines, index)
        start = self._newlines[line - 1] + 1 if line else 0
        return line + 1, index - start + 1

    def error(self, message: str, index: int, kind: str = LEXICAL) -> ParseError:
        line, col = self.position(index)
        return ParseError(message, line, col, kind)

    def tokens(self) -> Iterator[Token]:
        text = self.text
        n = len(text)
        i = 0
        if text.startswith("\ufeff"):
            raise self.error("byte order mark is not allowed", 0)
        while True:
            while i < n and text[i] in " \t\r\n":
                i += 1
            if i >= n:
                line, col = self.position(i)
                yield Token("EOF", None, line, col)
                return
            ch = text[i]
            if ch == "#":
                while i < n and text[i] != "\n":
                    i += 1
                continue
            start = i
            line, col = self.position(i)
            if ch == "<":
                i += 1
                while i < n and text[i] != ">":
                    c = text[i]
                    if c in ' \t\r\n<"{}|^`\\' or ord(c) < 0x20:
                        raise self.error(f"illegal character {c!r} in IRI", i)
                    i += 1
                if i >= n:
                    raise self.error("unterminated IRI", start)
                i += 1
                yield Token("IRI", text[start + 1:i - 1], line, col, text[start:i])
            elif ch in "\"'":
                value, i, long_form = self._string(i)
                yield Token("STRING", value, line, col, "long" if long_form else ch)
            elif ch == "@":
                m = _LANGTAG.match(text, i + 1)
                if not m:
                    raise self.error("expected a directive or language tag after '@'", i)
                i = m.end()
                yield Token("AT", m.group(), line, col, text[start:i])
            elif ch == "^":
                if text.startswith("^^", i):
                    i += 2
                    yield Token("DTYPE", "^^", line, col, "^^")
                else:
                    raise self.error("expected '^^'", i)
            elif ch in "?$" and i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_"):
                i += 1
                while i < n and (text[i].isalnum() or text[i] == "_"):
                    i += 1
                yield Token("VAR", text[start + 1:i], line, col, text[start:i])
            elif ch == "_" and text.startswith("_:", i):
                i += 2
                while i < n and _is_name_char(text[i]):
                    i += 1
                while i > start + 2 and text[i - 1] == ".":
                    i -= 1
                label = text[start + 2:i]
                if not label:
                    raise self.error("empty blank node label", start)
                yield Token("BNODE", label, line, col, text[start:i])
            elif ch == "[":
                j = i + 1
                while j < n and text[j] in " \t\r\n":
                    j += 1
                if j < n and text[j] == "]":
                    i = j + 1
                    yield Token("ANON", None, line, col, "[]")
                else:
                    i += 1
                    yield Token("PUNCT", "[", line, col, "[")
            elif ch.isdigit() or (ch in "+-" and i + 1 < n and text[i + 1].isdigit()):
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
                if i < n and (text[i] in "eE" or (text[i] == "." and i + 1 < n and text[i + 1].isdigit())):
                    raise self.error("decimal and double literals are not supported", start, SYNTACTIC)
                yield Token("INTEGER", text[start:i], line, col, text[start:i])
            elif _is_name_start(ch):
                while i < n and _is_name_char(text[i]):
                    i += 1
                while text[i - 1] == "." and i - 1 > start:
                    i -= 1
                word = text[start:i]
                if ":" in word:
                    prefix, local = word.split(":", 1)
                    if not _PN_PREFIX.fullmatch(prefix) or prefix.endswith("."):
                        raise self.error(f"malformed prefix label {prefix!r}", start)
                    if local and not (local[0].isalnum() or local[0] in "_:"):
                        raise self.error(f"malformed local name {local!r}", start + len(prefix) + 1)
                    yield Token("PNAME", (prefix, local), line, col, word)
                else:
                    yield Token("NAME", word, line, col, word)
            elif ch in _PUNCT:
                i += 1
                yield Token("PUNCT", ch, line, col, ch)
            else:
                raise self.error(f"unexpected character {ch!r}", i)

    def _string(self, i: int) -> Tuple[str, int, bool]:
        text = self.text
        n = len(text)
        quote = text[i]
        start = i
        long_form = text.startswith(quote * 3, i)
        i += 3 if long_form else 1
        out = []
        while True:
            if i >= n:
                raise self.error("unterminated string literal", start)
            ch = text[i]
            if long_form and text.startswith(quote * 3, i):
                # """a"""" : extra quotes before the closing run belong to the value
                while text.startswith(quote * 4, i):
                    out.append(quote)
                    i += 1
                return "".join(out), i + 3, True
            if not long_form and ch == quote:
                return "".join(out), i + 1, False
            if not long_form and ch in "\r\n":
                raise self.error("line break in short string literal", i)
            if ch == "\\":
                nxt = text[i + 1] if i + 1 < n else ""
                if nxt in _ESCAPES:
                    out.append(_ESCAPES[nxt])
                    i += 2
                    continue
                if nxt == "u":
                    digits = text[i + 2:i + 6]
                    if len(digits) == 4 and all(c in "0123456789abcdefABCDEF" for c in digits):
                        code = int(digits, 16)
                        if 0xD800 <= code <= 0xDFFF:
                            raise self.error("surrogate code point in \\u escape", i)
                        out.append(chr(code))
                        i += 6
                        continue
                    raise self.error("malformed \\u escape", i)
                raise self.error(f"unsupported escape sequence \\{nxt}", i)
            out.append(ch)
            i += 1


class TokenStream:
    """Cursor over lexer output with term-building helpers."""

    def __init__(self, text: str, prefixes: Optional[PrefixMap] = None):
        self.lexer = Lexer(text)
        self._tokens = self.lexer.tokens()
        self._buffer: List[Token] = []
        self.prefixes: PrefixMap = dict(prefixes or {})
        self._bnodes: Dict[str, IRI] = {}
        self._bnode_count = 0

    def peek(self, ahead: int = 0) -> Token:
        while len(self._buffer) <= ahead:
            self._buffer.append(next(self._tokens))
        return self._buffer[ahead]

    def next(self) -> Token:
        tok = self.peek()
        self._buffer.pop(0)
        return tok

    def at_punct(self, value: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.value == value

    def expect_punct(self, value: str, context: str = "") -> Token:
        tok = self.next()
        if tok.kind != "PUNCT" or tok.value != value:
            where = f" {context}" if context else ""
            raise self.unexpected(tok, f"expected '{value}'{where}")
        return tok

    @staticmethod
    def fail(tok: Token, message: str, kind: str = SYNTACTIC) -> ParseError:
        return ParseError(message, tok.line, tok.column, kind)

    def unexpected(self, tok: Token, message: str) -> ParseError:
        if tok.kind == "EOF":
            return self.fail(tok, f"{message}, found end of input")
        if tok.kind == "PUNCT" and tok.value == "(":
            return self.fail(tok, "collections are not supported")
        if tok.kind == "PUNCT" and tok.value == "[":
            return self.fail(tok, "blank node property lists are not supported")
        return self.fail(tok, f"{message}, found {tok.text or tok.kind!r}")

    def iri(self, tok: Token) -> IRI:
        if ":" not in tok.value:
            raise self.fail(tok, f"relative IRI <{tok.value}> cannot be resolved (no base)", SEMANTIC)
        try:
            return IRI(tok.value)
        except ValueError as exc:
            raise self.fail(tok, str(exc), LEXICAL) from None

    def expand(self, tok: Token) -> IRI:
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise self.fail(tok, f"undeclared prefix {prefix!r}", SEMANTIC)
        try:
            return IRI(self.prefixes[prefix] + local)
        except ValueError as exc:
            raise self.fail(tok, str(exc), SEMANTIC) from None

    def skolem(self, label: Optional[str]) -> IRI:
        if label is not None and label in self._bnodes:
            return self._bnodes[label]
        node = IRI(f"{SKOLEM_BASE}b{self._bnode_count}")
        self._bnode_count += 1
        if label is not None:
            self._bnodes[label] = node
        return node

    def literal(self, tok: Token, allow_pname_datatype: bool = True) -> Literal:
        lexical = tok.value
        nxt = self.peek()
        if nxt.kind == "AT":
            self.next()
            return Literal(lexical, lang=nxt.value)
        if nxt.kind == "DTYPE":
            self.next()
            dt_tok = self.next()
            if dt_tok.kind == "IRI":
                datatype = self.iri(dt_tok)
            elif dt_tok.kind == "PNAME" and allow_pname_datatype:
                datatype = self.expand(dt_tok)
            else:
                raise self.unexpected(dt_tok, "expected a datatype IRI")
            if datatype.value == RDF_LANGSTRING:
                raise self.fail(dt_tok, "rdf:langString requires a language tag", SEMANTIC)
            return Literal(lexical, datatype)
        return Literal(lexical)

    def subject_term(self) -> IRI:
        tok = self.next()
        if tok.kind == "IRI":
            return self.iri(tok)
        if tok.kind == "PNAME":
            return self.expand(tok)
        if tok.kind == "BNODE":
            return self.skolem(tok.value)
        if tok.kind == "ANON":
            return self.skolem(None)
        if tok.kind in ("STRING", "INTEGER") or (tok.kind == "NAME" and tok.value in ("true", "false")):
            raise self.fail(tok, "a literal cannot be a subject")
        raise self.unexpected(tok, "expected a subject")

    def predicate_term(self) -> IRI:
        tok = self.next()
        if tok.kind == "IRI":
            return self.iri(tok)
        if tok.kind == "PNAME":
            return self.expand(tok)
        if tok.kind == "NAME" and tok.value == "a":
            return RDF_TYPE
        if tok.kind in ("STRING", "INTEGER"):
            raise self.fail(tok, "a literal cannot be a predicate")
        raise self.unexpected(tok, "expected a predicate")

    def object_term(self) -> Term:
        tok = self.next()
        if tok.kind == "IRI":
            return self.iri(tok)
        if tok.kind == "PNAME":
            return self.expand(tok)
        if tok.kind == "BNODE":
            return self.skolem(tok.value)
        if tok.kind == "ANON":
            return self.skolem(None)
        if tok.kind == "STRING":
            return self.literal(tok)
        if tok.kind == "INTEGER":
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "NAME" and tok.value in ("true", "false"):
            return Literal(tok.value, XSD_BOOLEAN)
        raise self.unexpected(tok, "expected an object")


def _parse_prefix_directive(ts: TokenStream, at: Token) -> None:
    ns_tok = ts.next()
    if ns_tok.kind != "PNAME" or ns_tok.value[1]:
        raise ts.unexpected(ns_tok, "expected a prefix label ending in ':'")
    iri_tok = ts.next()
    if iri_tok.kind != "IRI":
        raise ts.unexpected(iri_tok, "expected a namespace IRI")
    ts.prefixes[ns_tok.value[0]] = ts.iri(iri_tok).value
    ts.expect_punct(".", "after @prefix directive")


def parse_turtle(text: str) -> Tuple[Graph, PrefixMap]:
    """Parse a Turtle document, returning the graph and final prefix map."""
    ts = TokenStream(text)
    graph = Graph()
    while True:
        tok = ts.peek()
        if tok.kind == "EOF":
            break
        if tok.kind == "AT":
            ts.next()
            if tok.value != "prefix":
                raise ts.fail(tok, f"unsupported directive @{tok.value}")
            _parse_prefix_directive(ts, tok)
            continue
        if tok.kind == "NAME" and tok.value.upper() in ("PREFIX", "BASE"):
            raise ts.fail(tok, f"unsupported directive {tok.value}")
        subject = ts.subject_term()
        while True:
            predicate = ts.predicate_term()
            graph.insert(Triple(subject, predicate, ts.object_term()))
            while ts.at_punct(","):
                ts.next()
                graph.insert(Triple(subject, predicate, ts.object_term()))
            if ts.at_punct(";"):
                while ts.at_punct(";"):
                    ts.next()
                if ts.at_punct("."):
                    break
                continue
            break
        ts.expect_punct(".", "to end the statement")
    return graph, ts.prefixes


def parse_ntriples(text: str) -> Graph:
    """Parse N-Triples; one triple per line, absolute IRIs only."""
    ts = TokenStream(text)
    graph = Graph()
    last_line = 0

    def node(tok: Token, allow_literal: bool) -> Term:
        if tok.kind == "IRI":
            return ts.iri(tok)
        if tok.kind == "BNODE":
            return ts.skolem(tok.value)
        if allow_literal and tok.kind == "STRING":
            if tok.text == "long":
                raise ts.fail(tok, "long string literals are not allowed in N-Triples")
            return ts.literal(tok, allow_pname_datatype=False)
        if tok.kind == "PNAME":
            raise ts.fail(tok, "prefixed names are not allowed in N-Triples")
        raise ts.unexpected(tok, "expected an IRI" + (" or literal" if allow_literal else ""))

    lines = text.split("\n")

    def same_line(line: int) -> Token:
        # a triple broken across lines is reported where its line ends
        tok = ts.peek()
        if tok.line != line:
            raise ParseError("incomplete triple at end of line", line,
                             len(lines[line - 1].rstrip("\r")) + 1)
        return ts.next()

    while True:
        first = ts.peek()
        if first.kind == "EOF":
            break
        if first.line == last_line:
            raise ts.fail(first, "only one triple per line is allowed")
        s = node(ts.next(), False)
        p_tok = same_line(first.line)
        if p_tok.kind != "IRI":
            raise ts.unexpected(p_tok, "expected a predicate IRI")
        p = ts.iri(p_tok)
        o = node(same_line(first.line), True)
        dot = same_line(first.line)
        if dot.kind != "PUNCT" or dot.value != ".":
            raise ts.unexpected(dot, "expected '.' to end the triple")
        last_line = first.line
        graph.insert(Triple(s, p, o))
    return graph


def serialize_ntriples(graph: Graph) -> str:
    lines = sorted(t.nt() for t in graph.triples())
    return "".join(line + "\n" for line in lines)


_SAFE_LOCAL = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_\-]*")
_SAFE_LABEL = re.compile(r"(?:[A-Za-z][A-Za-z0-9_\-]*)?")
_INTEGER = re.compile(r"[+-]?[0-9]+")


class _Abbreviator:
    def __init__(self, prefixes: PrefixMap):
        for label in prefixes:
            if not _SAFE_LABEL.fullmatch(label):
                raise ValueError(f"prefix label {label!r} cannot be serialized")
        # longest namespace first, then label order
        self._ns = sorted(prefixes.items(), key=lambda kv: (-len(kv[1]), kv[0]))
        self._cache: Dict[IRI, str] = {}

    def iri(self, iri: IRI) -> str:
        hit = self._cache.get(iri)
        if hit is None:
            hit = iri.nt()
            for label, ns in self._ns:
                if iri.value.startswith(ns) and _SAFE_LOCAL.fullmatch(iri.value[len(ns):]):
                    hit = f"{label}:{iri.value[len(ns):]}"
                    break
            self._cache[iri] = hit
        return hit

    def term(self, term: Term) -> str:
        if isinstance(term, IRI):
            return self.iri(term)
        if term.lang is None:
            dt = term.datatype
            if dt == XSD_INTEGER and _INTEGER.fullmatch(term.lexical):
                return term.lexical
            if dt == XSD_BOOLEAN and term.lexical in ("true", "false"):
                return term.lexical
            if dt.value != XSD_STRING:
                return term.nt().rsplit("^^", 1)[0] + "^^" + self.iri(dt)
        return term.nt()


def serialize_turtle(graph: Graph, prefixes: Optional[PrefixMap] = None) -> str:
    """Canonical Turtle: sorted prefixes, subjects, predicates and objects."""
    prefixes = prefixes or {}
    abbrev = _Abbreviator(prefixes)
    parts = [f"@prefix {label}: <{ns}> .\n" for label, ns in sorted(prefixes.items())]
    blocks = []
    current = None
    for t in graph:
        if current is None or t.subject != current[0]:
            current = (t.subject, [])
            blocks.append(current)
        preds = current[1]
        if preds and preds[-1][0] == t.predicate:
            preds[-1][1].append(t.object)
        else:
            preds.append((t.predicate, [t.object]))
    body = []
    for subject, preds in blocks:
        lines = []
        for predicate, objects in preds:
            verb = "a" if predicate == RDF_TYPE else abbrev.iri(predicate)
            lines.append(f"{verb} {', '.join(abbrev.term(o) for o in objects)}")
        body.append(abbrev.iri(subject) + " " + " ;\n    ".join(lines) + " .\n")
    if parts and body:
        parts.append("\n")
    parts.append("\n".join(body))
    return "".join(parts)
