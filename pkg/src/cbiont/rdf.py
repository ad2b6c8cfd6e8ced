"""Term model and an in-memory, triple-indexed graph.

Terms are immutable and hashable.  There is deliberately no blank node
type: parsers skolemize blank nodes into ``urn:skolem:`` IRIs, which keeps
graph equality a plain set comparison.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"
RDF_LANGSTRING = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString"

# characters N-Triples forbids inside <...>, on top of whitespace/controls
_IRI_FORBIDDEN = re.compile(r'[\x00-\x20<>"{}|^`\\\x7f-\x9f]')
_LANG = re.compile(r"[A-Za-z]+(-[A-Za-z0-9]+)*")


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ch == "\x7f":
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True, order=False)
class IRI:
    """An absolute IRI, compared codepoint by codepoint."""

    value: str
    _nt: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.value, str) or not self.value:
            raise ValueError("IRI must be a non-empty string")
        if ":" not in self.value:
            raise ValueError(f"IRI has no scheme separator: {self.value!r}")
        bad = _IRI_FORBIDDEN.search(self.value)
        if bad:
            raise ValueError(f"IRI contains forbidden character {bad.group()!r}: {self.value!r}")
        object.__setattr__(self, "_nt", f"<{self.value}>")

    def nt(self) -> str:
        return self._nt

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Literal:
    """A literal value.  Plain literals are ``xsd:string`` typed."""

    lexical: str
    datatype: IRI = IRI(XSD_STRING)
    lang: Optional[str] = None
    _nt: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.lexical, str):
            raise TypeError("literal lexical form must be a str")
        if not isinstance(self.datatype, IRI):
            raise TypeError("literal datatype must be an IRI")
        if self.lang is not None:
            if not _LANG.fullmatch(self.lang):
                raise ValueError(f"malformed language tag: {self.lang!r}")
            if self.datatype.value == XSD_STRING:
                object.__setattr__(self, "datatype", IRI(RDF_LANGSTRING))
            elif self.datatype.value != RDF_LANGSTRING:
                raise ValueError("a language-tagged literal must have datatype rdf:langString")
        elif self.datatype.value == RDF_LANGSTRING:
            raise ValueError("rdf:langString literal requires a language tag")
        quoted = f'"{_escape_literal(self.lexical)}"'
        if self.lang is not None:
            quoted += "@" + self.lang
        elif self.datatype.value != XSD_STRING:
            quoted += "^^" + self.datatype.nt()
        object.__setattr__(self, "_nt", quoted)

    @property
    def is_plain_string(self) -> bool:
        return self.lang is None and self.datatype.value == XSD_STRING

    def nt(self) -> str:
        return self._nt

    def __str__(self):
        return self.lexical


Term = Union[IRI, Literal]


@dataclass(frozen=True)
class Triple:
    subject: IRI
    predicate: IRI
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, IRI):
            raise TypeError(f"triple subject must be an IRI, got {self.subject!r}")
        if not isinstance(self.predicate, IRI):
            raise TypeError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (IRI, Literal)):
            raise TypeError(f"triple object must be an IRI or Literal, got {self.object!r}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def sort_key(self) -> Tuple[str, str, str]:
        return (self.subject.nt(), self.predicate.nt(), self.object.nt())

    def nt(self) -> str:
        return f"{self.subject.nt()} {self.predicate.nt()} {self.object.nt()} ."


def sort_triples(triples: Iterable[Triple]) -> List[Triple]:
    return sorted(triples, key=Triple.sort_key)


_Index = Dict[Term, Dict[Term, Set[Term]]]


def _index_add(index: _Index, a, b, c) -> None:
    index.setdefault(a, {}).setdefault(b, set()).add(c)


def _index_discard(index: _Index, a, b, c) -> None:
    inner = index[a]
    leaf = inner[b]
    leaf.discard(c)
    if not leaf:
        del inner[b]
        if not inner:
            del index[a]


class Graph:
    """A set of triples with SPO, POS and OSP indexes.

    Any number of threads may read a graph concurrently; mutation needs
    exclusive access.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: Set[Triple] = set()
        self._spo: _Index = {}
        self._pos: _Index = {}
        self._osp: _Index = {}
        for t in triples:
            self.insert(t)

    def insert(self, t: Triple) -> bool:
        """Add ``t``; return True iff it was not already present."""
        if t in self._triples:
            return False
        self._triples.add(t)
        s, p, o = t.subject, t.predicate, t.object
        _index_add(self._spo, s, p, o)
        _index_add(self._pos, p, o, s)
        _index_add(self._osp, o, s, p)
        return True

    add = insert

    def remove(self, t: Triple) -> bool:
        """Remove ``t``; return True iff it was present."""
        if t not in self._triples:
            return False
        self._triples.remove(t)
        s, p, o = t.subject, t.predicate, t.object
        _index_discard(self._spo, s, p, o)
        _index_discard(self._pos, p, o, s)
        _index_discard(self._osp, o, s, p)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        """Insert many triples, returning how many were new."""
        return sum(1 for t in triples if self.insert(t))

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def __len__(self):
        return len(self._triples)

    def __contains__(self, t):
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(sort_triples(self._triples))

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    __hash__ = None

    def __repr__(self):
        return f"<Graph with {len(self)} triples>"

    def triples(self) -> frozenset:
        return frozenset(self._triples)

    def _lookup(self, s, p, o) -> Iterator[Triple]:
        if s is not None:
            if p is not None:
                if o is not None:
                    t = Triple(s, p, o)
                    if t in self._triples:
                        yield t
                    return
                for obj in self._spo.get(s, {}).get(p, ()):
                    yield Triple(s, p, obj)
                return
            if o is not None:
                for pred in self._osp.get(o, {}).get(s, ()):
                    yield Triple(s, pred, o)
                return
            for pred, objs in self._spo.get(s, {}).items():
                for obj in objs:
                    yield Triple(s, pred, obj)
            return
        if p is not None:
            if o is not None:
                for subj in self._pos.get(p, {}).get(o, ()):
                    yield Triple(subj, p, o)
                return
            for obj, subjs in self._pos.get(p, {}).items():
                for subj in subjs:
                    yield Triple(subj, p, obj)
            return
        if o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
            return
        yield from self._triples

    def match(self, s: Optional[IRI] = None, p: Optional[IRI] = None,
              o: Optional[Term] = None) -> List[Triple]:
        """Triples agreeing with every bound position, in canonical order."""
        if isinstance(s, Literal) or isinstance(p, Literal):
            return []
        return sort_triples(self._lookup(s, p, o))

    def find(self, s=None, p=None, o=None) -> Iterator[Triple]:
        """Like :meth:`match` but unordered and lazy."""
        if isinstance(s, Literal) or isinstance(p, Literal):
            return iter(())
        return self._lookup(s, p, o)

    def count(self, s=None, p=None, o=None) -> int:
        if isinstance(s, Literal) or isinstance(p, Literal):
            return 0
        return sum(1 for _ in self._lookup(s, p, o))

    def objects(self, s=None, p=None) -> List[Term]:
        return sorted({t.object for t in self._lookup(s, p, None)}, key=lambda x: x.nt())

    def subjects(self, p=None, o=None) -> List[IRI]:
        return sorted({t.subject for t in self._lookup(None, p, o)}, key=lambda x: x.nt())

    def _index_triples(self, name: str) -> Set[Triple]:
        """Rebuild the triple set from one index (consistency checks)."""
        index = {"spo": self._spo, "pos": self._pos, "osp": self._osp}[name]
        out = set()
        for a, inner in index.items():
            for b, leaf in inner.items():
                for c in leaf:
                    if name == "spo":
                        out.add(Triple(a, b, c))
                    elif name == "pos":
                        out.add(Triple(c, a, b))
                    else:
                        out.add(Triple(b, c, a))
        return out


def graph_equal(a: Graph, b: Graph) -> bool:
    return a.triples() == b.triples()
