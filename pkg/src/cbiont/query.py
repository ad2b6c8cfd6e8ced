"""Basic graph pattern queries and the competency-question catalog.

Query text follows a small SELECT subset::

    PREFIX ex: <http://example.org/>
    SELECT ?s ?o WHERE {
        ?s a cbiont:CBI_Session ; cbiont:owned_by ?o .
        FILTER(?o IN (ex:a, ex:b))
    }

Results always have DISTINCT semantics and are sorted by the N-Triples
rendering of the projected terms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .namespaces import STANDARD_PREFIXES
from .rdf import IRI, Graph, Literal, Term, Triple, XSD_STRING
from .turtle import SEMANTIC, SYNTACTIC, PrefixMap, Token, TokenStream


@dataclass(frozen=True)
class Variable:
    name: str

    def nt(self) -> str:
        return "?" + self.name


Slot = Union[Term, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: Slot
    predicate: Slot
    object: Slot

    def __post_init__(self):
        if isinstance(self.predicate, Literal):
            raise ValueError("a literal cannot be a predicate")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def variables(self) -> List[Variable]:
        return [x for x in self if isinstance(x, Variable)]


@dataclass(frozen=True)
class Equality:
    var: Variable
    term: Term

    def accepts(self, value: Term) -> bool:
        return value == self.term


@dataclass(frozen=True)
class InSet:
    var: Variable
    terms: Tuple[Term, ...]

    def accepts(self, value: Term) -> bool:
        return value in self.terms


Filter = Union[Equality, InSet]
BindingSet = Dict[str, Term]


@dataclass(frozen=True)
class SelectQuery:
    projection: Tuple[Variable, ...]
    patterns: Tuple[TriplePattern, ...]
    filters: Tuple[Filter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "projection", tuple(self.projection))
        object.__setattr__(self, "patterns", tuple(self.patterns))
        object.__setattr__(self, "filters", tuple(self.filters))
        if not self.patterns:
            raise ValueError("a query needs at least one triple pattern")
        used = {v for p in self.patterns for v in p.variables()}
        for v in self.projection:
            if v not in used:
                raise ValueError(f"projected variable {v.nt()} does not occur in any pattern")
        for f in self.filters:
            if f.var not in used:
                raise ValueError(f"filtered variable {f.var.nt()} does not occur in any pattern")


def _bound_positions(pattern: TriplePattern, bound) -> int:
    return sum(1 for x in pattern if not isinstance(x, Variable) or x in bound)


def _resolve(slot: Slot, solution: BindingSet) -> Optional[Term]:
    if isinstance(slot, Variable):
        return solution.get(slot.name)
    return slot


def _extend(solution: BindingSet, pattern: TriplePattern, t: Triple) -> Optional[BindingSet]:
    out = solution
    for slot, value in zip(pattern, t):
        if not isinstance(slot, Variable):
            continue
        current = out.get(slot.name)
        if current is None:
            if out is solution:
                out = dict(solution)
            out[slot.name] = value
        elif current != value:
            return None
    return out


def evaluate(q: SelectQuery, g: Graph) -> List[BindingSet]:
    """All distinct solutions of ``q`` over ``g``, projected and sorted."""
    remaining = list(q.patterns)
    pending = list(q.filters)
    bound = set()
    solutions: List[BindingSet] = [{}]
    while remaining:
        # most bound positions first; ties keep query order
        idx = max(range(len(remaining)), key=lambda i: (_bound_positions(remaining[i], bound), -i))
        pattern = remaining.pop(idx)
        step: List[BindingSet] = []
        for sol in solutions:
            s, p, o = (_resolve(x, sol) for x in pattern)
            for t in g.find(s, p, o):
                ext = _extend(sol, pattern, t)
                if ext is not None:
                    step.append(ext)
        bound.update(pattern.variables())
        ready = [f for f in pending if f.var in bound]
        pending = [f for f in pending if f.var not in bound]
        for f in ready:
            step = [sol for sol in step if f.accepts(sol[f.var.name])]
        solutions = step
        if not solutions:
            return []

    names = [v.name for v in q.projection]
    rows = {tuple(sol[n] for n in names) for sol in solutions}
    ordered = sorted(rows, key=lambda row: tuple(term.nt() for term in row))
    return [dict(zip(names, row)) for row in ordered]


# --- text syntax -------------------------------------------------------------------

def _keyword(tok: Token, word: str) -> bool:
    return tok.kind == "NAME" and tok.value.upper() == word


def _expect_keyword(ts: TokenStream, word: str) -> Token:
    tok = ts.next()
    if not _keyword(tok, word):
        raise ts.unexpected(tok, f"expected {word}")
    return tok


def _slot(ts: TokenStream, position: str) -> Tuple[Slot, Token]:
    tok = ts.peek()
    if tok.kind == "VAR":
        ts.next()
        return Variable(tok.value), tok
    if tok.kind in ("BNODE", "ANON"):
        raise ts.fail(tok, "blank nodes are not supported in queries", SEMANTIC)
    if position == "subject":
        return ts.subject_term(), tok
    if position == "predicate":
        return ts.predicate_term(), tok
    return ts.object_term(), tok


def _filter(ts: TokenStream) -> Tuple[Filter, Token]:
    ts.expect_punct("(", "after FILTER")
    var_tok = ts.next()
    if var_tok.kind != "VAR":
        raise ts.unexpected(var_tok, "expected a variable")
    var = Variable(var_tok.value)
    if ts.at_punct("="):
        ts.next()
        flt: Filter = Equality(var, _constant(ts))
    elif _keyword(ts.peek(), "IN"):
        ts.next()
        ts.expect_punct("(", "after IN")
        terms = [_constant(ts)]
        while ts.at_punct(","):
            ts.next()
            terms.append(_constant(ts))
        ts.expect_punct(")", "to close the IN list")
        flt = InSet(var, tuple(terms))
    else:
        raise ts.unexpected(ts.peek(), "expected '=' or IN")
    ts.expect_punct(")", "to close FILTER")
    return flt, var_tok


def _constant(ts: TokenStream) -> Term:
    tok = ts.peek()
    if tok.kind == "VAR":
        raise ts.fail(tok, "filters compare a variable with a constant")
    return ts.object_term()


def parse_query(text: str, prefixes: Optional[PrefixMap] = None) -> SelectQuery:
    """Parse query text; standard prefixes are predeclared."""
    ts = TokenStream(text, {**STANDARD_PREFIXES, **(prefixes or {})})
    while _keyword(ts.peek(), "PREFIX"):
        ts.next()
        ns_tok = ts.next()
        if ns_tok.kind != "PNAME" or ns_tok.value[1]:
            raise ts.unexpected(ns_tok, "expected a prefix label ending in ':'")
        iri_tok = ts.next()
        if iri_tok.kind != "IRI":
            raise ts.unexpected(iri_tok, "expected a namespace IRI")
        ts.prefixes[ns_tok.value[0]] = ts.iri(iri_tok).value

    _expect_keyword(ts, "SELECT")
    projection: List[Tuple[Variable, Token]] = []
    while ts.peek().kind == "VAR":
        tok = ts.next()
        var = Variable(tok.value)
        if any(v == var for v, _ in projection):
            raise ts.fail(tok, f"variable {var.nt()} projected twice", SEMANTIC)
        projection.append((var, tok))
    if not projection:
        raise ts.unexpected(ts.peek(), "expected at least one projected variable")
    _expect_keyword(ts, "WHERE")
    ts.expect_punct("{", "to open the pattern block")

    patterns: List[TriplePattern] = []
    filters: List[Tuple[Filter, Token]] = []
    while not ts.at_punct("}"):
        if _keyword(ts.peek(), "FILTER"):
            ts.next()
            filters.append(_filter(ts))
            continue
        subject, _ = _slot(ts, "subject")
        while True:
            predicate, _ = _slot(ts, "predicate")
            obj, _ = _slot(ts, "object")
            patterns.append(TriplePattern(subject, predicate, obj))
            while ts.at_punct(","):
                ts.next()
                obj, _ = _slot(ts, "object")
                patterns.append(TriplePattern(subject, predicate, obj))
            if ts.at_punct(";"):
                while ts.at_punct(";"):
                    ts.next()
                if ts.at_punct(".") or ts.at_punct("}"):
                    break
                continue
            break
        if ts.at_punct("."):
            ts.next()
        elif not ts.at_punct("}") and not _keyword(ts.peek(), "FILTER"):
            raise ts.unexpected(ts.peek(), "expected '.' or '}'")
    close = ts.expect_punct("}")
    if not patterns:
        raise ts.fail(close, "the pattern block is empty", SYNTACTIC)
    end = ts.next()
    if end.kind != "EOF":
        raise ts.unexpected(end, "expected end of query")

    used = {v for p in patterns for v in p.variables()}
    for var, tok in projection:
        if var not in used:
            raise ts.fail(tok, f"projected variable {var.nt()} does not occur in the patterns", SEMANTIC)
    for flt, tok in filters:
        if flt.var not in used:
            raise ts.fail(tok, f"filtered variable {flt.var.nt()} does not occur in the patterns", SEMANTIC)
    return SelectQuery(tuple(v for v, _ in projection), tuple(patterns), tuple(f for f, _ in filters))


# --- competency questions -------------------------------------------------------------

@dataclass(frozen=True)
class CompetencyQuestion:
    id: str
    topic: str
    projection: str
    body: str


CATALOG: Dict[str, CompetencyQuestion] = {q.id: q for q in (
    CompetencyQuestion("CQ1", "where the session took place",
                       "?location", "{S} cbiont:has_location ?location ."),
    CompetencyQuestion("CQ2", "when the session took place",
                       "?instant ?datetime",
                       "{S} cbiont:has_time ?instant . ?instant time:inXSDDateTime ?datetime ."),
    CompetencyQuestion("CQ3", "participants and their affiliations",
                       "?collaborator ?organization",
                       "{S} cbiont:owned_by ?collaborator . ?collaborator cbiont:affiliated_with ?organization ."),
    CompetencyQuestion("CQ4", "purpose and outputs, read from the session's answers",
                       "?remark ?text",
                       "{S} cbiont:contains_remark ?remark . ?remark cbiont:hasRemark ?kind ; "
                       "cbiont:hasDescription ?text . FILTER(?kind = \"Answer\")"),
    CompetencyQuestion("CQ5", "theme: the session's form and every class it falls under",
                       "?form ?concept", "{S} cbiont:has_type ?form . ?form a ?concept ."),
    CompetencyQuestion("CQ6", "content discussed: the text of every remark",
                       "?remark ?text",
                       "{S} cbiont:contains_remark ?remark . ?remark cbiont:hasDescription ?text ."),
    CompetencyQuestion("CQ7", "research aspect", "?aspect", "{S} cbiont:belongs_to ?aspect ."),
    CompetencyQuestion("CQ8", "project phase (also answers project status)",
                       "?phase", "{S} cbiont:associated_with ?phase ."),
)}


def _cq_id(cq) -> str:
    key = str(cq).strip().upper()
    if not key.startswith("CQ"):
        key = "CQ" + key
    if key not in CATALOG:
        raise ValueError(f"unknown competency question {cq!r}; expected one of {', '.join(CATALOG)}")
    return key


def competency_query_text(cq, session: Optional[IRI] = None) -> str:
    entry = CATALOG[_cq_id(cq)]
    if session is None:
        subject, projection = "?session", "?session " + entry.projection
    else:
        subject, projection = IRI(str(session)).nt(), entry.projection
    return f"SELECT {projection} WHERE {{ {entry.body.format(S=subject)} }}"


def competency_query(cq, session: Optional[IRI] = None) -> SelectQuery:
    """The catalog query ``cq`` (``"CQ1"``..``"CQ8"`` or 1..8).

    With ``session`` the query is pinned to that session; otherwise
    ``?session`` is projected first.
    """
    return parse_query(competency_query_text(cq, session))


# --- result formats -----------------------------------------------------------------

def format_tsv(projection: Sequence[Variable], rows: Iterable[Mapping[str, Term]]) -> str:
    """SPARQL TSV results: a header of variables, then N-Triples terms."""
    lines = ["\t".join(v.nt() for v in projection)]
    for row in rows:
        lines.append("\t".join(row[v.name].nt() for v in projection))
    return "\n".join(lines) + "\n"


def _json_term(term: Term) -> Dict[str, str]:
    if isinstance(term, IRI):
        return {"type": "uri", "value": term.value}
    out = {"type": "literal", "value": term.lexical}
    if term.lang is not None:
        out["xml:lang"] = term.lang
    elif term.datatype.value != XSD_STRING:
        out["datatype"] = term.datatype.value
    return out


def format_json(projection: Sequence[Variable], rows: Iterable[Mapping[str, Term]]) -> str:
    """SPARQL 1.1 JSON results."""
    doc = {
        "head": {"vars": [v.name for v in projection]},
        "results": {"bindings": [
            {v.name: _json_term(row[v.name]) for v in projection} for row in rows
        ]},
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
