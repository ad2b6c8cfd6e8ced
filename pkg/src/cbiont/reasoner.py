"""Forward-chaining materialization and ABox validation.

Four rules are applied to a fixpoint over ``abox + schema``:

* ``R1_subclass_transitivity``: A subClassOf B, B subClassOf C => A subClassOf C
* ``R2_type_propagation``: x type A, A subClassOf B => x type B
* ``R3_domain_typing``: x p y, p domain C => x type C
* ``R4_range_typing``: x p y, p range C, y an IRI => y type C

Reflexive ``A subClassOf A`` is never asserted, and subclass cycles are
rejected up front.
"""
from __future__ import annotations

import json
import random
import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set

from .namespaces import OWL, RDF, RDFS, XSD
from .rdf import IRI, Graph, Literal, Triple
from .schema import (
    CBI_SESSION, HAS_TYPE, ASSOCIATED_WITH, BELONGS_TO, HUB_CLASSES,
    enumerations, subclass_cycles,
)


@dataclass(frozen=True)
class InferenceRule:
    id: str
    description: str


RULES = (
    InferenceRule("R1_subclass_transitivity", "A subClassOf B and B subClassOf C give A subClassOf C"),
    InferenceRule("R2_type_propagation", "x type A and A subClassOf B give x type B"),
    InferenceRule("R3_domain_typing", "x p y and p domain C give x type C"),
    InferenceRule("R4_range_typing", "x p y and p range C give y type C when y is an IRI"),
)

TYPE = RDF.type
SUBCLASS = RDFS.subClassOf
DOMAIN = RDFS.domain
RANGE = RDFS.range


class CyclicSchemaError(ValueError):
    """The subclass relation contains a cycle."""

    def __init__(self, cycles):
        self.cycles = cycles
        names = "; ".join(", ".join(c.nt() for c in cyc) for cyc in cycles)
        super().__init__(f"subclass cycle(s): {names}")


def _consequences(g: Graph, t: Triple, rule_order) -> List[Triple]:
    s, p, o = t.subject, t.predicate, t.object
    out: List[Triple] = []
    for rule in rule_order:
        if rule == "R1":
            if p == SUBCLASS and isinstance(o, IRI):
                for up in g.find(o, SUBCLASS, None):
                    if up.object != s:
                        out.append(Triple(s, SUBCLASS, up.object))
                for down in g.find(None, SUBCLASS, s):
                    if down.subject != o:
                        out.append(Triple(down.subject, SUBCLASS, o))
        elif rule == "R2":
            if p == TYPE and isinstance(o, IRI):
                for up in g.find(o, SUBCLASS, None):
                    out.append(Triple(s, TYPE, up.object))
            if p == SUBCLASS:
                for member in g.find(None, TYPE, s):
                    out.append(Triple(member.subject, TYPE, o))
        elif rule == "R3":
            for dom in g.find(p, DOMAIN, None):
                out.append(Triple(s, TYPE, dom.object))
            if p == DOMAIN:
                for use in g.find(None, s, None):
                    out.append(Triple(use.subject, TYPE, o))
        elif rule == "R4":
            if isinstance(o, IRI):
                for rng in g.find(p, RANGE, None):
                    out.append(Triple(o, TYPE, rng.object))
            if p == RANGE:
                for use in g.find(None, s, None):
                    if isinstance(use.object, IRI):
                        out.append(Triple(use.object, TYPE, o))
    return out


def materialize(abox: Graph, schema: Graph, rng: Optional[random.Random] = None) -> Graph:
    """Return ``abox`` plus everything R1-R4 derive from ``abox + schema``.

    Schema triples are not copied into the result unless they were also in
    ``abox``.  Passing ``rng`` randomizes agenda and rule order, which must
    not change the result.
    """
    g = abox.copy()
    g.update(schema.triples())
    cycles = subclass_cycles(g)
    if cycles:
        raise CyclicSchemaError(cycles)

    rule_order = ["R1", "R2", "R3", "R4"]
    agenda = list(g)
    if rng is not None:
        rng.shuffle(agenda)
    queue = deque(agenda)
    while queue:
        if rng is not None:
            queue.rotate(-rng.randrange(len(queue)))
            rng.shuffle(rule_order)
        t = queue.popleft()
        for new in _consequences(g, t, rule_order):
            if g.insert(new):
                queue.append(new)

    result = Graph(g.triples() - (schema.triples() - abox.triples()))
    return result


def is_subclass_of(a: IRI, b: IRI, schema: Graph) -> bool:
    """Reflexive-transitive subclass test."""
    if a == b:
        return True
    seen = {a}
    frontier = [a]
    while frontier:
        node = frontier.pop()
        for sup in schema.objects(node, SUBCLASS):
            if sup == b:
                return True
            if sup not in seen:
                seen.add(sup)
                frontier.append(sup)
    return False


def instances_of(cls: IRI, materialized: Graph) -> List[IRI]:
    return materialized.subjects(TYPE, cls)


# --- validation -----------------------------------------------------------------

ERROR, WARNING = "error", "warning"


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: IRI
    property: Optional[IRI]
    detail: str

    @property
    def severity(self) -> str:
        return WARNING if self.kind in ("undeclared_term", "multi_leaf_typing") else ERROR

    def to_dict(self) -> Dict[str, Optional[str]]:
        return {
            "kind": self.kind,
            "subject": self.subject.value,
            "property": self.property.value if self.property else None,
            "detail": self.detail,
        }

    def format_line(self) -> str:
        prop = self.property.nt() if self.property else "-"
        return f"{self.kind}\t{self.subject.nt()}\t{prop}\t{self.detail}"


def format_violations(violations: Iterable[Violation]) -> str:
    return "".join(v.format_line() + "\n" for v in violations)


def violations_to_json(violations: Iterable[Violation]) -> str:
    return json.dumps([v.to_dict() for v in violations], indent=2, ensure_ascii=False) + "\n"


_LEXICAL_CHECKS = {
    XSD.integer: re.compile(r"[+-]?[0-9]+"),
    XSD.decimal: re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)"),
    XSD.boolean: re.compile(r"true|false|1|0"),
    XSD.dateTime: re.compile(
        r"-?[0-9]{4,}-(0[1-9]|1[0-2])-(0[1-9]|[12][0-9]|3[01])T"
        r"([01][0-9]|2[0-3]):[0-5][0-9]:[0-5][0-9](\.[0-9]+)?"
        r"(Z|[+-]((0[0-9]|1[0-3]):[0-5][0-9]|14:00))?"),
}

_BUILTIN_NAMESPACES = (RDF, RDFS, OWL)


def _declared_predicates(schema: Graph) -> Set[IRI]:
    out = set()
    for kind in (OWL.ObjectProperty, OWL.DatatypeProperty, OWL.AnnotationProperty):
        out.update(schema.subjects(TYPE, kind))
    return out


def validate(abox: Graph, schema: Graph, pedantic: bool = False) -> List[Violation]:
    """Constraint violations of ``abox`` against ``schema``, sorted."""
    found: List[Violation] = []
    enums = enumerations(schema)
    for p, allowed in enums.items():
        allowed_text = ", ".join(a.nt() for a in allowed)
        for t in abox.match(None, p, None):
            if t.object not in allowed:
                found.append(Violation(
                    "enumeration_violation", t.subject, p,
                    f"{t.object.nt()} is not one of {{{allowed_text}}}"))

    data_props = set(schema.subjects(TYPE, OWL.DatatypeProperty))
    for p in sorted(data_props - set(enums), key=IRI.nt):
        for rng in schema.objects(p, RANGE):
            if rng not in XSD:
                continue
            for t in abox.match(None, p, None):
                o = t.object
                if not isinstance(o, Literal) or o.datatype != rng or o.lang is not None:
                    found.append(Violation(
                        "datatype_violation", t.subject, p,
                        f"{o.nt()} is not a {rng.nt()} literal"))
                elif rng in _LEXICAL_CHECKS and not _LEXICAL_CHECKS[rng].fullmatch(o.lexical):
                    found.append(Violation(
                        "datatype_violation", t.subject, p,
                        f"{o.nt()} is not in the lexical space of {rng.nt()}"))

    declared = _declared_predicates(schema)
    used: Dict[IRI, int] = {}
    for t in abox.triples():
        used[t.predicate] = used.get(t.predicate, 0) + 1
    for p, n in used.items():
        if p in declared or any(p in ns for ns in _BUILTIN_NAMESPACES):
            continue
        found.append(Violation(
            "undeclared_term", p, None,
            f"predicate used in {n} triple(s) is not declared in the schema"))

    if pedantic:
        found.extend(_multi_leaf(abox))
    return sorted(set(found), key=lambda v: (v.subject.nt(), v.kind, v.property.nt() if v.property else "", v.detail))


def _multi_leaf(abox: Graph) -> List[Violation]:
    """Warn where a session reaches two leaves of the same hub class."""
    leaf_hub = {leaf: hub for hub, leaves in HUB_CLASSES.items() for leaf in leaves}
    out = []
    for session in abox.subjects(TYPE, CBI_SESSION):
        reached: Dict[IRI, Set[IRI]] = {}
        individuals = [session] + [o for p in (HAS_TYPE, ASSOCIATED_WITH, BELONGS_TO)
                                   for o in abox.objects(session, p) if isinstance(o, IRI)]
        for ind in individuals:
            for cls in abox.objects(ind, TYPE):
                if cls in leaf_hub:
                    reached.setdefault(leaf_hub[cls], set()).add(cls)
        for hub, leaves in sorted(reached.items(), key=lambda kv: kv[0].nt()):
            if len(leaves) > 1:
                names = ", ".join(sorted(x.nt() for x in leaves))
                out.append(Violation("multi_leaf_typing", session, None,
                                     f"typed under several {hub.nt()} leaves: {names}"))
    return out
