"""Namespace helpers and the fixed vocabulary namespaces."""
from __future__ import annotations

from typing import Dict

from .rdf import IRI


class Namespace:
    """An IRI prefix; attribute or item access mints terms.

    >>> FOAF.Person
    IRI(value='http://xmlns.com/foaf/0.1/Person')
    """

    __slots__ = ("base",)

    def __init__(self, base: str):
        self.base = base

    def term(self, name: str) -> IRI:
        return IRI(self.base + name)

    def __getattr__(self, name: str) -> IRI:
        if name.startswith("__"):
            raise AttributeError(name)
        return self.term(name)

    def __getitem__(self, name: str) -> IRI:
        return self.term(name)

    def __contains__(self, item) -> bool:
        return isinstance(item, IRI) and item.value.startswith(self.base)

    def __str__(self):
        return self.base

    def __repr__(self):
        return f"Namespace({self.base!r})"


CBIONT = Namespace("http://bi4people.org/ontology/cbiont#")
CBIDATA = Namespace("http://bi4people.org/data/cbiont/")

RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
TIME = Namespace("http://www.w3.org/2006/time#")
GEO = Namespace("http://www.w3.org/2003/01/geo/wgs84_pos#")
FOAF = Namespace("http://xmlns.com/foaf/0.1/")

STANDARD_PREFIXES: Dict[str, str] = {
    "cbiont": str(CBIONT),
    "cbidata": str(CBIDATA),
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "owl": str(OWL),
    "xsd": str(XSD),
    "time": str(TIME),
    "geo": str(GEO),
    "foaf": str(FOAF),
}
