"""The CBIOnt TBox, built in code, and a typed view over schema graphs.

``build_schema()`` encodes the axiom list from ``cbiont_axioms()``.  The
hasRemark enumeration is written as a named ``rdfs:Datatype`` whose
``owl:oneOf`` list uses named cells (``cbiont:RemarkKind_1`` ...) because the
data model has no blank nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from .namespaces import CBIONT, FOAF, GEO, OWL, RDF, RDFS, TIME, XSD
from .rdf import IRI, Graph, Literal, Term, Triple


# --- typed axioms ----------------------------------------------------------

@dataclass(frozen=True)
class ClassDecl:
    cls: IRI


@dataclass(frozen=True)
class SubClassOf:
    sub: IRI
    sup: IRI


@dataclass(frozen=True)
class ObjectProperty:
    p: IRI


@dataclass(frozen=True)
class DataProperty:
    p: IRI


@dataclass(frozen=True)
class AnnotationProperty:
    p: IRI


@dataclass(frozen=True)
class Domain:
    p: IRI
    c: IRI


@dataclass(frozen=True)
class Range:
    p: IRI
    c: IRI


@dataclass(frozen=True)
class DatatypeEnumeration:
    """A data property whose values are restricted to ``allowed``, in order."""

    p: IRI
    allowed: Tuple[Literal, ...]
    datatype: IRI

    def __post_init__(self):
        object.__setattr__(self, "allowed", tuple(self.allowed))
        if not self.allowed:
            raise ValueError("an enumeration needs at least one literal")
        if len(set(self.allowed)) != len(self.allowed):
            raise ValueError("enumeration literals must be distinct")

    def cell(self, index: int) -> IRI:
        return IRI(f"{self.datatype.value}_{index + 1}")


@dataclass(frozen=True)
class Annotation:
    subject: IRI
    property: IRI
    value: Term


SchemaAxiom = Union[ClassDecl, SubClassOf, ObjectProperty, DataProperty,
                    AnnotationProperty, Domain, Range, DatatypeEnumeration, Annotation]


class SchemaError(ValueError):
    """Raised when a graph cannot be read as a schema."""

    def __init__(self, message: str, triples: Iterable[Triple] = ()):
        self.triples = list(triples)
        if self.triples:
            message += ": " + "; ".join(t.nt() for t in self.triples)
        super().__init__(message)


@dataclass(frozen=True)
class SchemaDefect:
    kind: str
    terms: Tuple[IRI, ...]
    detail: str


# --- vocabulary ------------------------------------------------------------

CBI_SESSION = CBIONT.CBI_Session
CBI_TEMPORAL_SPATIAL_SESSION = CBIONT.CBI_Temporal_Spatial_Session
COLLABORATOR = CBIONT.Collaborator
CBI_FORM = CBIONT.CBI_Form
CBI_RESEARCH_ASPECT = CBIONT.CBI_Research_Aspect
CBI_PHASE = CBIONT.CBI_Phase
REMARK = CBIONT.Remark
REMARK_KIND = CBIONT.RemarkKind

FORM_CLASSES = tuple(CBIONT[name] for name in (
    "General_Discussion", "Annotation", "Report_Centric_Discussion",
    "Visualizing_Behavior", "Trend_Analysis", "Task_Coordination",
    "Information_Sharing",
))
ASPECT_CLASSES = tuple(CBIONT[name] for name in (
    "Collaborative_Query_Formulation", "Collaborative_Source_Discovery",
    "Collaborative_Data_Acquisition", "Collaborative_Data_Integration",
    "Collaborative_Data_Presentation",
))
PHASE_CLASSES = tuple(CBIONT[name] for name in (
    "Pre_Decision_Phase", "Decision_Phase", "Post_Decision_Phase",
))
HUB_CLASSES = {CBI_FORM: FORM_CLASSES, CBI_RESEARCH_ASPECT: ASPECT_CLASSES, CBI_PHASE: PHASE_CLASSES}

EXTERNAL_CLASSES = (
    TIME.TemporalEntity, TIME.Interval, TIME.Instant, GEO.SpatialThing,
    FOAF.Agent, FOAF.Person, FOAF.Group, FOAF.Organization,
)

OWNED_BY = CBIONT.owned_by
ASSOCIATED_WITH = CBIONT.associated_with
BELONGS_TO = CBIONT.belongs_to
HAS_TYPE = CBIONT.has_type
CONTAINS_REMARK = CBIONT.contains_remark
HAS_LOCATION = CBIONT.has_location
HAS_TIME = CBIONT.has_time
AFFILIATED_WITH = CBIONT.affiliated_with
AUTHORED_BY = CBIONT.authored_by
HAS_REMARK = CBIONT.hasRemark
HAS_DESCRIPTION = CBIONT.hasDescription
POSTED_AT = CBIONT.posted_at
EXTENSION = CBIONT.extension

GEO_LAT = GEO.lat
GEO_LONG = GEO.long
TIME_IN_XSD_DATETIME = TIME.inXSDDateTime

REMARK_KINDS = ("Question", "Answer", "Comment")

# (property, domain, range) ; extensions marked True
OBJECT_PROPERTIES = (
    (OWNED_BY, CBI_SESSION, COLLABORATOR, False),
    (ASSOCIATED_WITH, CBI_SESSION, CBI_PHASE, False),
    (BELONGS_TO, CBI_SESSION, CBI_RESEARCH_ASPECT, False),
    (HAS_TYPE, CBI_SESSION, CBI_FORM, False),
    (CONTAINS_REMARK, CBI_SESSION, REMARK, True),
    (HAS_LOCATION, CBI_SESSION, GEO.SpatialThing, True),
    (HAS_TIME, CBI_SESSION, TIME.TemporalEntity, True),
    (AFFILIATED_WITH, FOAF.Person, FOAF.Organization, True),
    (AUTHORED_BY, REMARK, COLLABORATOR, True),
)
DATA_PROPERTIES = (
    (HAS_DESCRIPTION, REMARK, XSD.string, False),
    (POSTED_AT, REMARK, XSD.dateTime, True),
    (GEO_LAT, GEO.SpatialThing, XSD.decimal, False),
    (GEO_LONG, GEO.SpatialThing, XSD.decimal, False),
    (TIME_IN_XSD_DATETIME, TIME.Instant, XSD.dateTime, False),
)

_TRUE = Literal("true", XSD.boolean)


def cbiont_axioms() -> List[SchemaAxiom]:
    """Every axiom of the CBIOnt TBox, in a fixed order."""
    ax: List[SchemaAxiom] = [AnnotationProperty(EXTENSION)]
    core = (CBI_SESSION, CBI_TEMPORAL_SPATIAL_SESSION, COLLABORATOR,
            CBI_FORM, CBI_RESEARCH_ASPECT, CBI_PHASE, REMARK)
    for cls in core + EXTERNAL_CLASSES:
        ax.append(ClassDecl(cls))
    for hub, leaves in HUB_CLASSES.items():
        for leaf in leaves:
            ax += [ClassDecl(leaf), SubClassOf(leaf, hub)]

    # alignment with OWL-Time, WGS84 and FOAF, in the directions stated
    ax += [
        SubClassOf(TIME.TemporalEntity, CBI_TEMPORAL_SPATIAL_SESSION),
        SubClassOf(GEO.SpatialThing, CBI_TEMPORAL_SPATIAL_SESSION),
        SubClassOf(FOAF.Agent, COLLABORATOR),
        SubClassOf(FOAF.Person, FOAF.Agent),
        SubClassOf(FOAF.Group, FOAF.Agent),
        SubClassOf(FOAF.Organization, FOAF.Agent),
        SubClassOf(TIME.Interval, TIME.TemporalEntity),
        SubClassOf(TIME.Instant, TIME.TemporalEntity),
        SubClassOf(CBI_SESSION, CBI_TEMPORAL_SPATIAL_SESSION),
        Annotation(REMARK, EXTENSION, _TRUE),
    ]

    for p, dom, rng, ext in OBJECT_PROPERTIES:
        ax += [ObjectProperty(p), Domain(p, dom), Range(p, rng)]
        if ext:
            ax.append(Annotation(p, EXTENSION, _TRUE))

    ax += [
        DataProperty(HAS_REMARK),
        Domain(HAS_REMARK, REMARK),
        DatatypeEnumeration(HAS_REMARK, tuple(Literal(k) for k in REMARK_KINDS), REMARK_KIND),
    ]
    for p, dom, rng, ext in DATA_PROPERTIES:
        ax += [DataProperty(p), Domain(p, dom), Range(p, rng)]
        if ext:
            ax.append(Annotation(p, EXTENSION, _TRUE))
    return ax


def encode(axioms: Iterable[SchemaAxiom]) -> Graph:
    """Write typed axioms back out as triples."""
    g = Graph()
    for a in axioms:
        if isinstance(a, ClassDecl):
            g.insert(Triple(a.cls, RDF.type, OWL.Class))
        elif isinstance(a, SubClassOf):
            g.insert(Triple(a.sub, RDFS.subClassOf, a.sup))
        elif isinstance(a, ObjectProperty):
            g.insert(Triple(a.p, RDF.type, OWL.ObjectProperty))
        elif isinstance(a, DataProperty):
            g.insert(Triple(a.p, RDF.type, OWL.DatatypeProperty))
        elif isinstance(a, AnnotationProperty):
            g.insert(Triple(a.p, RDF.type, OWL.AnnotationProperty))
        elif isinstance(a, Domain):
            g.insert(Triple(a.p, RDFS.domain, a.c))
        elif isinstance(a, Range):
            g.insert(Triple(a.p, RDFS.range, a.c))
        elif isinstance(a, DatatypeEnumeration):
            g.insert(Triple(a.p, RDFS.range, a.datatype))
            g.insert(Triple(a.datatype, RDF.type, RDFS.Datatype))
            g.insert(Triple(a.datatype, OWL.oneOf, a.cell(0)))
            for i, lit in enumerate(a.allowed):
                g.insert(Triple(a.cell(i), RDF.first, lit))
                rest = a.cell(i + 1) if i + 1 < len(a.allowed) else RDF.nil
                g.insert(Triple(a.cell(i), RDF.rest, rest))
        elif isinstance(a, Annotation):
            g.insert(Triple(a.subject, a.property, a.value))
        else:
            raise TypeError(f"not a schema axiom: {a!r}")
    return g


def build_schema() -> Graph:
    """The CBIOnt TBox as a graph."""
    return encode(cbiont_axioms())


# --- reading schema graphs --------------------------------------------------

_KIND_OF_TYPE = {
    OWL.Class: ClassDecl,
    OWL.ObjectProperty: ObjectProperty,
    OWL.DatatypeProperty: DataProperty,
    OWL.AnnotationProperty: AnnotationProperty,
}


def _read_list(schema: Graph, head: Term, consumed: Set[Triple]) -> Optional[List[Term]]:
    items: List[Term] = []
    seen = set()
    node = head
    while node != RDF.nil:
        if not isinstance(node, IRI) or node in seen:
            return None
        seen.add(node)
        firsts = schema.match(node, RDF.first, None)
        rests = schema.match(node, RDF.rest, None)
        if len(firsts) != 1 or len(rests) != 1:
            return None
        consumed.update(firsts + rests)
        items.append(firsts[0].object)
        node = rests[0].object
    return items


def _enumerations(schema: Graph) -> Tuple[Dict[IRI, Tuple[Literal, ...]], Set[Triple]]:
    """Datatypes declared by ``owl:oneOf`` over literals, and the triples used."""
    found: Dict[IRI, Tuple[Literal, ...]] = {}
    consumed: Set[Triple] = set()
    for decl in schema.match(None, RDF.type, RDFS.Datatype):
        dt = decl.subject
        heads = schema.match(dt, OWL.oneOf, None)
        if len(heads) != 1:
            continue
        used: Set[Triple] = set()
        items = _read_list(schema, heads[0].object, used)
        if not items or not all(isinstance(x, Literal) for x in items):
            continue
        found[dt] = tuple(items)
        consumed |= used | {decl, heads[0]}
    return found, consumed


def _is_datatype(term: Term, enumerations) -> bool:
    return isinstance(term, IRI) and (term in XSD or term == RDFS.Literal or term in enumerations)


def axioms(schema: Graph) -> List[SchemaAxiom]:
    """Lossless typed view of a schema graph.

    Raises :class:`SchemaError` when a subclass, domain or range triple
    mentions an undeclared term, or when a triple fits no axiom form.
    """
    enums, consumed = _enumerations(schema)
    decls: Dict[IRI, type] = {}
    for t in schema.match(None, RDF.type, None):
        kind = _KIND_OF_TYPE.get(t.object)
        if kind is not None:
            decls[t.subject] = kind
            consumed.add(t)
    classes = {c for c, k in decls.items() if k is ClassDecl}
    properties = {p for p, k in decls.items() if k is not ClassDecl}

    out: List[SchemaAxiom] = []
    dangling: List[Triple] = []
    unknown: List[Triple] = []
    for t in schema:
        if t in consumed:
            continue
        s, p, o = t
        if p == RDFS.subClassOf:
            if s not in classes or o not in classes:
                dangling.append(t)
            out.append(SubClassOf(s, o))
        elif p in (RDFS.domain, RDFS.range):
            ok = s in properties and (o in classes or (p == RDFS.range and _is_datatype(o, enums)))
            if not ok:
                dangling.append(t)
            if p == RDFS.domain:
                out.append(Domain(s, o))
            elif o in enums:
                out.append(DatatypeEnumeration(s, enums[o], o))
            else:
                out.append(Range(s, o))
        elif decls.get(p) is AnnotationProperty:
            out.append(Annotation(s, p, o))
        else:
            unknown.append(t)
    if dangling:
        raise SchemaError("schema references undeclared terms", dangling)
    if unknown:
        raise SchemaError("triples that are not schema axioms", unknown)
    for term, kind in decls.items():
        out.append(kind(term))
    return sorted(out, key=_axiom_order)


_ORDER = [AnnotationProperty, ClassDecl, ObjectProperty, DataProperty,
          SubClassOf, Domain, Range, DatatypeEnumeration, Annotation]


def _axiom_order(a: SchemaAxiom):
    keys = [" ".join(x.nt() for x in v) if isinstance(v, tuple) else v.nt()
            for v in vars(a).values()]
    return (_ORDER.index(type(a)), keys)


# --- schema lint --------------------------------------------------------------

def _cycles(edges: Dict[IRI, Set[IRI]]) -> List[Tuple[IRI, ...]]:
    """Strongly connected components that contain a cycle (Tarjan)."""
    index: Dict[IRI, int] = {}
    low: Dict[IRI, int] = {}
    stack: List[IRI] = []
    on_stack: Set[IRI] = set()
    found: List[Tuple[IRI, ...]] = []
    counter = 0
    nodes = sorted(set(edges) | {v for vs in edges.values() for v in vs}, key=IRI.nt)

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(sorted(edges.get(root, ()), key=IRI.nt)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = low[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(sorted(edges.get(child, ()), key=IRI.nt))))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                if len(component) > 1 or node in edges.get(node, ()):
                    found.append(tuple(sorted(component, key=IRI.nt)))
    return sorted(found, key=lambda c: [x.nt() for x in c])


def subclass_cycles(graph: Graph, declared_only: bool = False) -> List[Tuple[IRI, ...]]:
    declared = {t.subject for t in graph.match(None, RDF.type, OWL.Class)}
    edges: Dict[IRI, Set[IRI]] = {}
    for t in graph.match(None, RDFS.subClassOf, None):
        if not isinstance(t.object, IRI):
            continue
        if declared_only and (t.subject not in declared or t.object not in declared):
            continue
        edges.setdefault(t.subject, set()).add(t.object)
    return _cycles(edges)


def validate_schema(schema: Graph) -> List[SchemaDefect]:
    """Structural defects of a schema graph; an empty list means clean."""
    defects: List[SchemaDefect] = []
    enums, _ = _enumerations(schema)
    classes = {t.subject for t in schema.match(None, RDF.type, OWL.Class)}
    object_props = {t.subject for t in schema.match(None, RDF.type, OWL.ObjectProperty)}
    data_props = {t.subject for t in schema.match(None, RDF.type, OWL.DatatypeProperty)}

    for t in schema.match(None, RDFS.subClassOf, None):
        missing = [x for x in (t.subject, t.object) if x not in classes]
        if missing:
            defects.append(SchemaDefect(
                "dangling_reference", tuple(missing),
                f"subclass axiom {t.nt()} references undeclared class(es)"))

    for p in sorted(object_props | data_props, key=IRI.nt):
        domains = schema.objects(p, RDFS.domain)
        ranges = schema.objects(p, RDFS.range)
        if not domains:
            defects.append(SchemaDefect("missing_domain", (p,), f"{p.nt()} has no domain"))
        elif len(domains) > 1:
            defects.append(SchemaDefect("multiple_domains", (p,), f"{p.nt()} has {len(domains)} domains"))
        if not ranges:
            defects.append(SchemaDefect("missing_range", (p,), f"{p.nt()} has no range"))
        elif len(ranges) > 1:
            defects.append(SchemaDefect("multiple_ranges", (p,), f"{p.nt()} has {len(ranges)} ranges"))

    for t in schema.match(None, RDFS.range, None):
        if t.object in enums and t.subject not in data_props:
            defects.append(SchemaDefect(
                "enumeration_on_non_data_property", (t.subject,),
                f"{t.subject.nt()} has an enumerated range but is not a data property"))

    for component in subclass_cycles(schema, declared_only=True):
        names = ", ".join(c.nt() for c in component)
        defects.append(SchemaDefect("subclass_cycle", component, f"subclass cycle among {names}"))
    return defects


def enumerations(schema: Graph) -> Dict[IRI, Tuple[Literal, ...]]:
    """Map each enumerated data property to its allowed literals."""
    enums, _ = _enumerations(schema)
    out = {}
    for t in schema.match(None, RDFS.range, None):
        if t.object in enums:
            out[t.subject] = enums[t.object]
    return out
