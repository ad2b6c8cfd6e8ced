"""Deliberately naive reference engines, written independently of the package."""
import itertools
from collections import deque

from cbiont.namespaces import RDF, RDFS
from cbiont.query import Variable
from cbiont.rdf import IRI, Graph, Triple


def closure_then_saturate(abox: Graph, schema: Graph) -> Graph:
    """Reasoner oracle: BFS subclass reachability, then naive R2-R4 rounds."""
    facts = set(abox.triples()) | set(schema.triples())
    edges = {}
    for s, p, o in facts:
        if p == RDFS.subClassOf:
            edges.setdefault(s, set()).add(o)
    for start in list(edges):
        seen, todo = set(), deque(edges[start])
        while todo:
            c = todo.popleft()
            if c in seen:
                continue
            seen.add(c)
            todo.extend(edges.get(c, ()))
        facts.update(Triple(start, RDFS.subClassOf, c) for c in seen if c != start)

    supers = {}
    for s, p, o in facts:
        if p == RDFS.subClassOf:
            supers.setdefault(s, set()).add(o)
    while True:
        domains = [(s, o) for s, p, o in facts if p == RDFS.domain]
        ranges = [(s, o) for s, p, o in facts if p == RDFS.range]
        new = set()
        for s, p, o in facts:
            if p == RDF.type:
                for sup in supers.get(o, ()):
                    new.add(Triple(s, RDF.type, sup))
            for prop, c in domains:
                if prop == p:
                    new.add(Triple(s, RDF.type, c))
            for prop, c in ranges:
                if prop == p and isinstance(o, IRI):
                    new.add(Triple(o, RDF.type, c))
        if new <= facts:
            break
        facts |= new
    return Graph(facts - (set(schema.triples()) - set(abox.triples())))


def brute_force_select(query, graph: Graph):
    """Query oracle: try every assignment of graph terms to the variables."""
    terms = sorted({x for t in graph.triples() for x in t}, key=lambda x: x.nt())
    names = sorted({x.name for pat in query.patterns for x in (pat.subject, pat.predicate, pat.object)
                    if isinstance(x, Variable)})
    triples = graph.triples()
    allowed = {}
    for f in query.filters:
        values = {f.term} if hasattr(f, "term") else set(f.terms)
        allowed[f.var.name] = allowed.get(f.var.name, values) & values
    rows = set()
    for combo in itertools.product(terms, repeat=len(names)):
        env = dict(zip(names, combo))
        if any(env[v] not in vals for v, vals in allowed.items()):
            continue

        def bind(x):
            return env[x.name] if isinstance(x, Variable) else x

        if all(isinstance(bind(pat.subject), IRI) and isinstance(bind(pat.predicate), IRI)
               and Triple(bind(pat.subject), bind(pat.predicate), bind(pat.object)) in triples
               for pat in query.patterns):
            rows.add(tuple(env[v.name] for v in query.projection))
    ordered = sorted(rows, key=lambda r: tuple(x.nt() for x in r))
    return [dict(zip((v.name for v in query.projection), r)) for r in ordered]
